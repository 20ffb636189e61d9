#pragma once

#include <memory>
#include <stdexcept>
#include <string>

#include "numfuzz/grade.hpp"

namespace numfuzz {

enum class TyKind { Unit, Num, Tensor, With, Sum, Lolli, Bang, Monad };

/// Immutable type tree. Copies share structure.
class Ty {
 public:
  /// The unit type.
  Ty();

  static Ty unit() { return Ty(); }
  static Ty num();
  static Ty tensor(Ty a, Ty b) { return Ty(TyKind::Tensor, Grade(), std::move(a), std::move(b)); }
  static Ty with(Ty a, Ty b) { return Ty(TyKind::With, Grade(), std::move(a), std::move(b)); }
  static Ty sum(Ty a, Ty b) { return Ty(TyKind::Sum, Grade(), std::move(a), std::move(b)); }
  static Ty lolli(Ty a, Ty b) { return Ty(TyKind::Lolli, Grade(), std::move(a), std::move(b)); }
  static Ty bang(Grade s, Ty a);
  static Ty monad(Grade r, Ty a);

  TyKind kind() const;
  bool is(TyKind k) const { return kind() == k; }
  /// Left component, domain, or the operand of ! and M.
  const Ty& lhs() const;
  /// Right component or codomain.
  const Ty& rhs() const;
  const Ty& inner() const { return lhs(); }
  /// Grade of ! or M.
  const Grade& grade() const;

  friend bool operator==(const Ty& a, const Ty& b);

 private:
  struct Node;
  Ty(TyKind kind, Grade g, Ty a, Ty b);
  explicit Ty(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

struct Ty::Node {
  TyKind kind;
  Grade grade;
  Ty lhs;
  Ty rhs;
};

/// Fig. 10 subtyping.
bool subtype(const Ty& sub, const Ty& super);

enum class LatticeDir { Max, Min };

/// Raised when the join or meet of two types does not exist.
class Incompatible : public std::runtime_error {
 public:
  Incompatible(Ty a, Ty b);
  const Ty& lhs() const { return a_; }
  const Ty& rhs() const { return b_; }

 private:
  Ty a_, b_;
};

/// Least common supertype (Max) or greatest common subtype (Min).
Ty ty_lattice(LatticeDir dir, const Ty& a, const Ty& b);

}  // namespace numfuzz
