#pragma once

#include <string>

#include "numfuzz/syntax/ast.hpp"

namespace numfuzz::gen {

/// FMA plus `name`: a degree-n polynomial by n FMA-based Horner steps,
/// grade n*eps. Default name "Horner<n>".
std::string horner_text(int n, std::string name = {});
/// `name`: left-to-right sum of n inputs with n-1 addfp, grade (n-1)*eps.
/// Default name "Sum<n>".
std::string sum_text(int n, std::string name = {});
/// dot<n> plus `name`: the n x n product as a row-major with-tuple of n^2
/// inner products, each n mulfp and n-1 addfp. Every entry has grade
/// (2n-1)*eps. Default name "MatrixMultiply<n>".
std::string matmul_text(int n, std::string name = {});
/// `name`: a0 + a1 x + ... + an x^n with every power recomputed from x by
/// repeated mulfp, n(n+1)/2 + n operations. Default name "Poly<n>".
std::string poly_text(int n, std::string name = {});

SourceProgram gen_horner(int n);
SourceProgram gen_sum(int n);
SourceProgram gen_matmul(int n);
SourceProgram gen_poly(int n);

}  // namespace numfuzz::gen
