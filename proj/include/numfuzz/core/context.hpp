#pragma once

#include <initializer_list>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "numfuzz/core/type.hpp"

namespace numfuzz {

struct Binding {
  std::string name;
  Ty ty;
  Grade grade;

  friend bool operator==(const Binding&, const Binding&) = default;
};

/// Variables with their types and sensitivities, iterated in insertion
/// order. A variable that is absent has sensitivity 0.
class TypingContext {
 public:
  TypingContext() = default;
  TypingContext(std::initializer_list<Binding> bindings);

  /// Null when absent.
  const Binding* find(const std::string& name) const;
  /// Sensitivity of `name`, zero when absent.
  Grade grade_of(const std::string& name) const;

  /// Throws std::invalid_argument if `name` is already bound.
  void insert(Binding b);
  /// Removes `name` if present.
  void erase(const std::string& name);

  std::size_t size() const { return index_.size(); }
  bool empty() const { return index_.empty(); }

  /// Live bindings in insertion order.
  std::vector<Binding> bindings() const;

  template <typename F>
  void for_each(F&& f) const {
    for (const auto& slot : slots_)
      if (slot.live) f(slot.binding);
  }

  /// Same bindings, order ignored.
  friend bool operator==(const TypingContext& a, const TypingContext& b);

  friend TypingContext ctx_sum(TypingContext g, const TypingContext& d);
  friend TypingContext ctx_scale(const Grade& s, TypingContext g);
  friend TypingContext ctx_max(TypingContext g1, const TypingContext& g2);

 private:
  struct Slot {
    Binding binding;
    bool live = true;
  };
  Binding* find_mut(const std::string& name);
  template <typename Combine>
  static TypingContext merge(TypingContext g, const TypingContext& d, Combine combine);
  void compact();

  std::vector<Slot> slots_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// A shared variable is assigned different types in two contexts.
class NotSummable : public std::runtime_error {
 public:
  NotSummable(std::string var, Ty a, Ty b);
  const std::string& var() const { return var_; }
  const Ty& lhs() const { return a_; }
  const Ty& rhs() const { return b_; }

 private:
  std::string var_;
  Ty a_, b_;
};

/// Pointwise sum; variables of d not in g are appended in d's order.
TypingContext ctx_sum(TypingContext g, const TypingContext& d);
/// Every sensitivity multiplied by s (0 * inf = 0).
TypingContext ctx_scale(const Grade& s, TypingContext g);
/// Pointwise maximum over the union of the domains.
TypingContext ctx_max(TypingContext g1, const TypingContext& g2);

}  // namespace numfuzz
