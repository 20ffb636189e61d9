#include "numfuzz/core/type.hpp"

namespace numfuzz {

Ty::Ty() {
  static const Ty u(TyKind::Unit, Grade(), Ty(nullptr), Ty(nullptr));
  node_ = u.node_;
}

Ty::Ty(TyKind kind, Grade g, Ty a, Ty b)
    : node_(std::make_shared<const Node>(Node{kind, std::move(g), std::move(a), std::move(b)})) {}

Ty Ty::num() {
  static const Ty n(TyKind::Num, Grade(), Ty(nullptr), Ty(nullptr));
  return n;
}

Ty Ty::bang(Grade s, Ty a) { return Ty(TyKind::Bang, std::move(s), std::move(a), Ty(nullptr)); }
Ty Ty::monad(Grade r, Ty a) { return Ty(TyKind::Monad, std::move(r), std::move(a), Ty(nullptr)); }

TyKind Ty::kind() const { return node_->kind; }
const Ty& Ty::lhs() const { return node_->lhs; }
const Ty& Ty::rhs() const { return node_->rhs; }
const Grade& Ty::grade() const { return node_->grade; }

bool operator==(const Ty& a, const Ty& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case TyKind::Unit:
    case TyKind::Num: return true;
    case TyKind::Bang:
    case TyKind::Monad: return a.grade() == b.grade() && a.inner() == b.inner();
    default: return a.lhs() == b.lhs() && a.rhs() == b.rhs();
  }
}

bool subtype(const Ty& sub, const Ty& super) {
  if (sub.kind() != super.kind()) return false;
  switch (sub.kind()) {
    case TyKind::Unit:
    case TyKind::Num: return true;
    case TyKind::Tensor:
    case TyKind::With:
    case TyKind::Sum: return subtype(sub.lhs(), super.lhs()) && subtype(sub.rhs(), super.rhs());
    case TyKind::Lolli: return subtype(super.lhs(), sub.lhs()) && subtype(sub.rhs(), super.rhs());
    case TyKind::Bang:
      // !_{s'} a <= !_s b needs s <= s': a larger sensitivity is a stronger claim.
      return super.grade() <= sub.grade() && subtype(sub.inner(), super.inner());
    case TyKind::Monad: return sub.grade() <= super.grade() && subtype(sub.inner(), super.inner());
  }
  return false;
}

Incompatible::Incompatible(Ty a, Ty b)
    : std::runtime_error("incompatible types"),
      a_(std::move(a)),
      b_(std::move(b)) {}

Ty ty_lattice(LatticeDir dir, const Ty& a, const Ty& b) {
  if (a.kind() != b.kind()) throw Incompatible(a, b);
  LatticeDir flip = dir == LatticeDir::Max ? LatticeDir::Min : LatticeDir::Max;
  bool up = dir == LatticeDir::Max;
  switch (a.kind()) {
    case TyKind::Unit:
    case TyKind::Num: return a;
    case TyKind::Tensor: return Ty::tensor(ty_lattice(dir, a.lhs(), b.lhs()), ty_lattice(dir, a.rhs(), b.rhs()));
    case TyKind::With: return Ty::with(ty_lattice(dir, a.lhs(), b.lhs()), ty_lattice(dir, a.rhs(), b.rhs()));
    case TyKind::Sum: return Ty::sum(ty_lattice(dir, a.lhs(), b.lhs()), ty_lattice(dir, a.rhs(), b.rhs()));
    case TyKind::Lolli: return Ty::lolli(ty_lattice(flip, a.lhs(), b.lhs()), ty_lattice(dir, a.rhs(), b.rhs()));
    case TyKind::Bang:
      return Ty::bang(up ? min(a.grade(), b.grade()) : max(a.grade(), b.grade()),
                      ty_lattice(dir, a.inner(), b.inner()));
    case TyKind::Monad:
      return Ty::monad(up ? max(a.grade(), b.grade()) : min(a.grade(), b.grade()),
                       ty_lattice(dir, a.inner(), b.inner()));
  }
  throw Incompatible(a, b);
}

}  // namespace numfuzz
