#include "numfuzz/driver/generate.hpp"

#include <functional>
#include <stdexcept>

#include "numfuzz/syntax/parser.hpp"

namespace numfuzz::gen {

namespace {

using std::to_string;

void require_positive(int n) {
  if (n < 1) throw std::invalid_argument("generator size must be at least 1");
}

std::string monad(long r) { return "M[" + to_string(r) + "*eps]num"; }

constexpr const char* kFma =
    "function FMA (x: num) (y: num) (z: num) : M[eps]num {\n"
    "  a = mul (x,y);\n"
    "  b = add (|a,z|);\n"
    "  rnd b\n"
    "}\n\n";

// Balanced with-tuple over [lo, hi).
std::string balanced(int lo, int hi, const std::function<std::string(int)>& leaf) {
  if (hi - lo == 1) return leaf(lo);
  int mid = lo + (hi - lo) / 2;
  return "(|" + balanced(lo, mid, leaf) + ", " + balanced(mid, hi, leaf) + "|)";
}

}  // namespace

std::string horner_text(int n, std::string name) {
  require_positive(n);
  if (name.empty()) name = "Horner" + to_string(n);
  std::string s = kFma;
  s += "function " + name;
  for (int i = 0; i <= n; ++i) s += " (a" + to_string(i) + ": num)";
  s += " (x: ![" + to_string(n) + "]num) : " + monad(n) + " {\n  let [x1] = x;\n";
  std::string acc = "a" + to_string(n);
  for (int i = n - 1; i >= 1; --i) {
    std::string next = "s" + to_string(n - i);
    s += "  let " + next + " = FMA " + acc + " x1 a" + to_string(i) + ";\n";
    acc = next;
  }
  s += "  FMA " + acc + " x1 a0\n}\n";
  return s;
}

std::string sum_text(int n, std::string name) {
  require_positive(n);
  if (name.empty()) name = "Sum" + to_string(n);
  std::string s = "function " + name;
  for (int i = 1; i <= n; ++i) s += " (x" + to_string(i) + ": num)";
  s += " : " + monad(n - 1) + " {\n";
  if (n == 1) return s + "  ret x1\n}\n";
  std::string acc = "x1";
  for (int i = 2; i < n; ++i) {
    std::string next = "s" + to_string(i);
    s += "  let " + next + " = addfp (|" + acc + ", x" + to_string(i) + "|);\n";
    acc = next;
  }
  s += "  addfp (|" + acc + ", x" + to_string(n) + "|)\n}\n";
  return s;
}

std::string matmul_text(int n, std::string name) {
  require_positive(n);
  if (name.empty()) name = "MatrixMultiply" + to_string(n);
  const std::string dot = "dot" + to_string(n);
  const std::string entry = monad(2L * n - 1);

  std::string s = "function " + dot;
  for (int i = 1; i <= n; ++i) s += " (a" + to_string(i) + ": num)";
  for (int i = 1; i <= n; ++i) s += " (b" + to_string(i) + ": num)";
  s += " : " + entry + " {\n";
  if (n == 1) {
    s += "  mulfp (a1, b1)\n}\n\n";
  } else {
    s += "  let p1 = mulfp (a1, b1);\n";
    std::string acc = "p1";
    for (int i = 2; i <= n; ++i) {
      std::string k = to_string(i);
      s += "  let p" + k + " = mulfp (a" + k + ", b" + k + ");\n";
      if (i < n) {
        s += "  let s" + k + " = addfp (|" + acc + ", p" + k + "|);\n";
        acc = "s" + k;
      } else {
        s += "  addfp (|" + acc + ", p" + k + "|)\n}\n\n";
      }
    }
  }

  auto a = [](int i, int j) { return "a_" + to_string(i) + "_" + to_string(j); };
  auto b = [](int i, int j) { return "b_" + to_string(i) + "_" + to_string(j); };
  s += "function " + name;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) s += " (" + a(i, j) + ": num)";
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) s += " (" + b(i, j) + ": num)";
  s += "\n  : " + balanced(0, n * n, [&](int) { return entry; }) + " {\n  ";
  s += balanced(0, n * n, [&](int k) {
    int i = k / n + 1, j = k % n + 1;
    std::string call = dot;
    for (int m = 1; m <= n; ++m) call += " " + a(i, m);
    for (int m = 1; m <= n; ++m) call += " " + b(m, j);
    return call;
  });
  s += "\n}\n";
  return s;
}

std::string poly_text(int n, std::string name) {
  require_positive(n);
  if (name.empty()) name = "Poly" + to_string(n);
  long uses = long(n) * (n + 1) / 2;
  std::string s = "function " + name;
  for (int i = 0; i <= n; ++i) s += " (a" + to_string(i) + ": num)";
  s += " (x: ![" + to_string(uses) + "]num) : " + monad(uses + n) + " {\n  let [x1] = x;\n";
  std::string acc = "a0";
  for (int i = 1; i <= n; ++i) {
    std::string k = to_string(i);
    std::string power = "x1";
    for (int e = 2; e <= i; ++e) {
      std::string q = "q" + k + "_" + to_string(e);
      s += "  let " + q + " = mulfp (" + power + ", x1);\n";
      power = q;
    }
    s += "  let t" + k + " = mulfp (a" + k + ", " + power + ");\n";
    if (i < n) {
      s += "  let s" + k + " = addfp (|" + acc + ", t" + k + "|);\n";
      acc = "s" + k;
    } else {
      s += "  addfp (|" + acc + ", t" + k + "|)\n}\n";
    }
  }
  return s;
}

SourceProgram gen_horner(int n) { return parse_program(horner_text(n)); }
SourceProgram gen_sum(int n) { return parse_program(sum_text(n)); }
SourceProgram gen_matmul(int n) { return parse_program(matmul_text(n)); }
SourceProgram gen_poly(int n) { return parse_program(poly_text(n)); }

}  // namespace numfuzz::gen
