#include "numfuzz/core/context.hpp"

namespace numfuzz {

TypingContext::TypingContext(std::initializer_list<Binding> bindings) {
  for (const auto& b : bindings) insert(b);
}

const Binding* TypingContext::find(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : &slots_[it->second].binding;
}

Binding* TypingContext::find_mut(const std::string& name) {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : &slots_[it->second].binding;
}

Grade TypingContext::grade_of(const std::string& name) const {
  const Binding* b = find(name);
  return b ? b->grade : Grade();
}

void TypingContext::insert(Binding b) {
  if (index_.count(b.name)) throw std::invalid_argument("duplicate variable " + b.name);
  index_.emplace(b.name, slots_.size());
  slots_.push_back({std::move(b), true});
}

void TypingContext::erase(const std::string& name) {
  auto it = index_.find(name);
  if (it == index_.end()) return;
  slots_[it->second].live = false;
  index_.erase(it);
  if (slots_.size() > 64 && index_.size() * 2 < slots_.size()) compact();
}

void TypingContext::compact() {
  std::vector<Slot> live;
  live.reserve(index_.size());
  for (auto& s : slots_)
    if (s.live) live.push_back(std::move(s));
  slots_ = std::move(live);
  for (std::size_t i = 0; i < slots_.size(); ++i) index_[slots_[i].binding.name] = i;
}

std::vector<Binding> TypingContext::bindings() const {
  std::vector<Binding> out;
  out.reserve(size());
  for_each([&](const Binding& b) { out.push_back(b); });
  return out;
}

bool operator==(const TypingContext& a, const TypingContext& b) {
  if (a.size() != b.size()) return false;
  bool equal = true;
  a.for_each([&](const Binding& x) {
    const Binding* y = b.find(x.name);
    if (!y || !(*y == x)) equal = false;
  });
  return equal;
}

NotSummable::NotSummable(std::string var, Ty a, Ty b)
    : std::runtime_error("variable " + var + " is used at two different types"),
      var_(std::move(var)),
      a_(std::move(a)),
      b_(std::move(b)) {}

template <typename Combine>
TypingContext TypingContext::merge(TypingContext g, const TypingContext& d, Combine combine) {
  d.for_each([&](const Binding& b) {
    Binding* mine = g.find_mut(b.name);
    if (!mine) {
      g.insert(b);
      return;
    }
    if (!(mine->ty == b.ty)) throw NotSummable(b.name, mine->ty, b.ty);
    mine->grade = combine(mine->grade, b.grade);
  });
  return g;
}

TypingContext ctx_sum(TypingContext g, const TypingContext& d) {
  if (g.empty()) return d;
  return TypingContext::merge(std::move(g), d, [](const Grade& x, const Grade& y) { return x + y; });
}

TypingContext ctx_scale(const Grade& s, TypingContext g) {
  if (s == Grade::one()) return g;
  for (auto& slot : g.slots_)
    if (slot.live) slot.binding.grade = s * slot.binding.grade;
  return g;
}

TypingContext ctx_max(TypingContext g1, const TypingContext& g2) {
  if (g1.empty()) return g2;
  return TypingContext::merge(std::move(g1), g2, [](const Grade& x, const Grade& y) { return max(x, y); });
}

}  // namespace numfuzz
