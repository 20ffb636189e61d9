#include "numfuzz/syntax/parser.hpp"

#include <cctype>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "numfuzz/numerics/rational.hpp"

namespace numfuzz {

namespace {

enum class Tok {
  End,
  Ident,
  Number,
  LParen,
  RParen,
  LWith,
  RWith,
  LBrace,
  RBrace,
  LBracket,
  RBracket,
  Comma,
  Semi,
  Colon,
  Equals,
  Dot,
  Plus,
  Star,
  Lolli,
  Bang,
  Bar,
  Less,
  Greater,
  Function,
  Fun,
  Let,
  Case,
  Of,
  Inl,
  Inr,
  Pi1,
  Pi2,
  Rnd,
  Ret,
  Err,
  Num,
  Unit,
  Eps,
  Inf,
  Add,
  Mul,
  Div,
  Sqrt,
  Lt,
};

const char* describe(Tok t) {
  switch (t) {
    case Tok::End: return "end of input";
    case Tok::Ident: return "identifier";
    case Tok::Number: return "number";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LWith: return "'(|'";
    case Tok::RWith: return "'|)'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Comma: return "','";
    case Tok::Semi: return "';'";
    case Tok::Colon: return "':'";
    case Tok::Equals: return "'='";
    case Tok::Dot: return "'.'";
    case Tok::Plus: return "'+'";
    case Tok::Star: return "'*'";
    case Tok::Lolli: return "'-o'";
    case Tok::Bang: return "'!'";
    case Tok::Bar: return "'|'";
    case Tok::Less: return "'<'";
    case Tok::Greater: return "'>'";
    case Tok::Function: return "'function'";
    case Tok::Fun: return "'fun'";
    case Tok::Let: return "'let'";
    case Tok::Case: return "'case'";
    case Tok::Of: return "'of'";
    case Tok::Inl: return "'inl'";
    case Tok::Inr: return "'inr'";
    case Tok::Pi1: return "'pi1'";
    case Tok::Pi2: return "'pi2'";
    case Tok::Rnd: return "'rnd'";
    case Tok::Ret: return "'ret'";
    case Tok::Err: return "'err'";
    case Tok::Num: return "'num'";
    case Tok::Unit: return "'unit'";
    case Tok::Eps: return "'eps'";
    case Tok::Inf: return "'inf'";
    case Tok::Add: return "'add'";
    case Tok::Mul: return "'mul'";
    case Tok::Div: return "'div'";
    case Tok::Sqrt: return "'sqrt'";
    case Tok::Lt: return "'lt'";
  }
  return "?";
}

const std::unordered_map<std::string_view, Tok>& keywords() {
  static const std::unordered_map<std::string_view, Tok> k = {
      {"function", Tok::Function}, {"fun", Tok::Fun}, {"let", Tok::Let},   {"case", Tok::Case},
      {"of", Tok::Of},             {"inl", Tok::Inl}, {"inr", Tok::Inr},   {"pi1", Tok::Pi1},
      {"pi2", Tok::Pi2},           {"rnd", Tok::Rnd}, {"ret", Tok::Ret},   {"err", Tok::Err},
      {"num", Tok::Num},           {"unit", Tok::Unit}, {"eps", Tok::Eps}, {"inf", Tok::Inf},
      {"add", Tok::Add},           {"mul", Tok::Mul}, {"div", Tok::Div},   {"sqrt", Tok::Sqrt},
      {"lt", Tok::Lt},
  };
  return k;
}

struct Token {
  Tok kind;
  std::string_view text;
  Span span;
};

Span span_at(int line, int col, std::size_t len) { return Span{line, col, static_cast<int>(len)}; }

[[noreturn]] void fail(const std::string& message, Span span) {
  throw ParseError({Diagnostic{Severity::Error, message, span}});
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1;
  std::size_t line_start = 0;
  std::size_t i = 0;
  auto col = [&](std::size_t pos) { return static_cast<int>(pos - line_start) + 1; };
  auto is_ident_start = [](unsigned char c) { return std::isalpha(c) || c == '_'; };
  auto is_ident = [](unsigned char c) { return std::isalnum(c) || c == '_' || c == '\''; };
  while (i < src.size()) {
    unsigned char c = src[i];
    if (c == '\n') {
      ++line;
      line_start = ++i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    std::size_t start = i;
    auto emit = [&](Tok k, std::size_t len) {
      out.push_back({k, src.substr(start, len), span_at(line, col(start), len)});
      i = start + len;
    };
    char next = i + 1 < src.size() ? src[i + 1] : '\0';
    if (is_ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && is_ident(static_cast<unsigned char>(src[j]))) ++j;
      std::string_view word = src.substr(i, j - i);
      auto kw = keywords().find(word);
      emit(kw == keywords().end() ? Tok::Ident : kw->second, j - i);
      continue;
    }
    if (std::isdigit(c) || (c == '.' && std::isdigit(static_cast<unsigned char>(next)))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j < src.size() && src[j] == '.' && j + 1 < src.size() &&
          std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
        ++j;
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      }
      if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < src.size() && (src[k] == '-' || src[k] == '+')) ++k;
        if (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
          while (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) ++k;
          j = k;
        }
      }
      emit(Tok::Number, j - i);
      continue;
    }
    switch (c) {
      case '(': emit(next == '|' ? Tok::LWith : Tok::LParen, next == '|' ? 2 : 1); continue;
      case '|': emit(next == ')' ? Tok::RWith : Tok::Bar, next == ')' ? 2 : 1); continue;
      case ')': emit(Tok::RParen, 1); continue;
      case '{': emit(Tok::LBrace, 1); continue;
      case '}': emit(Tok::RBrace, 1); continue;
      case '[': emit(Tok::LBracket, 1); continue;
      case ']': emit(Tok::RBracket, 1); continue;
      case ',': emit(Tok::Comma, 1); continue;
      case ';': emit(Tok::Semi, 1); continue;
      case ':': emit(Tok::Colon, 1); continue;
      case '=': emit(Tok::Equals, 1); continue;
      case '.': emit(Tok::Dot, 1); continue;
      case '+': emit(Tok::Plus, 1); continue;
      case '*': emit(Tok::Star, 1); continue;
      case '!': emit(Tok::Bang, 1); continue;
      case '<': emit(Tok::Less, 1); continue;
      case '>': emit(Tok::Greater, 1); continue;
      case '-':
        if (next == 'o') {
          emit(Tok::Lolli, 2);
          continue;
        }
        fail("negative numbers and '-' are not part of the language; did you mean '-o'?",
             span_at(line, col(i), 1));
      default: break;
    }
    std::string shown = std::isprint(c) ? std::string(1, static_cast<char>(c)) : "byte " + std::to_string(c);
    fail("unexpected character " + shown, span_at(line, col(i), 1));
  }
  out.push_back({Tok::End, {}, span_at(line, col(i), 0)});
  return out;
}

constexpr int kMaxDepth = 1500;

class Parser {
 public:
  Parser(std::string_view text, const numerics::FpFormat& fmt) : toks_(lex(text)), fmt_(fmt) {}

  SourceProgram program() {
    SourceProgram p;
    std::unordered_set<std::string> names;
    while (!at(Tok::End)) {
      Decl d = decl();
      if (!names.insert(d.name).second) fail("duplicate declaration " + d.name, d.span);
      p.decls.push_back(std::move(d));
    }
    return p;
  }

  TermPtr whole_term() {
    TermPtr t = block();
    expect(Tok::End);
    return t;
  }

  Ty whole_type() {
    Ty t = type();
    expect(Tok::End);
    return t;
  }

  GradeExpr whole_grade() {
    GradeExpr g = grade();
    expect(Tok::End);
    return g;
  }

 private:
  struct DepthGuard {
    Parser& p;
    explicit DepthGuard(Parser& parser) : p(parser) {
      if (++p.depth_ > kMaxDepth) fail("expression nested too deeply", p.peek().span);
    }
    ~DepthGuard() { --p.depth_; }
  };

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t k = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[k];
  }

  bool at(Tok k) {
    if (peek().kind == k) return true;
    expected_.insert(describe(k));
    return false;
  }

  bool accept(Tok k) {
    if (!at(k)) return false;
    advance();
    return true;
  }

  const Token& advance() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    expected_.clear();
    return t;
  }

  const Token& expect(Tok k) {
    if (!at(k)) error();
    return advance();
  }

  [[noreturn]] void error() {
    const Token& t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + std::string(t.text) + "'";
    std::string msg = "unexpected " + found;
    if (!expected_.empty()) {
      msg += "; expected ";
      bool first = true;
      for (const auto& e : expected_) {
        if (!first) msg += ", ";
        msg += e;
        first = false;
      }
    }
    fail(msg, t.span);
  }

  std::string ident() { return std::string(expect(Tok::Ident).text); }

  Decl decl() {
    Decl d;
    d.span = expect(Tok::Function).span;
    d.name = ident();
    while (accept(Tok::LParen)) {
      Param p;
      p.span = peek().span;
      p.name = ident();
      expect(Tok::Colon);
      p.ty = type();
      expect(Tok::RParen);
      d.params.push_back(std::move(p));
    }
    expect(Tok::Colon);
    d.result = type();
    expect(Tok::LBrace);
    d.body = block();
    expect(Tok::RBrace);
    return d;
  }

  // Types

  Ty type() {
    DepthGuard guard(*this);
    Ty t = sum_type();
    if (accept(Tok::Lolli)) return Ty::lolli(t, type());
    return t;
  }

  Ty sum_type() {
    Ty t = prim_type();
    while (accept(Tok::Plus)) t = Ty::sum(t, prim_type());
    return t;
  }

  Ty prim_type() {
    DepthGuard guard(*this);
    if (accept(Tok::Num)) return Ty::num();
    if (accept(Tok::Unit)) return Ty::unit();
    if (accept(Tok::Bang)) {
      Grade g = bracket_grade();
      return Ty::bang(g, prim_type());
    }
    if (at(Tok::Ident) && peek().text == "M") {
      advance();
      Grade g = bracket_grade();
      return Ty::monad(g, prim_type());
    }
    if (accept(Tok::Less)) {
      Ty a = type();
      expect(Tok::Comma);
      Ty b = type();
      expect(Tok::Greater);
      return Ty::with(a, b);
    }
    if (accept(Tok::LWith)) {
      Ty a = type();
      expect(Tok::Comma);
      Ty b = type();
      expect(Tok::RWith);
      return Ty::with(a, b);
    }
    if (accept(Tok::LParen)) {
      Ty a = type();
      if (accept(Tok::Comma)) {
        Ty b = type();
        expect(Tok::RParen);
        return Ty::tensor(a, b);
      }
      expect(Tok::RParen);
      return a;
    }
    expected_.insert("'M'");
    error();
  }

  Grade bracket_grade() {
    expect(Tok::LBracket);
    Grade g = eval_grade_expr(grade(), fmt_);
    expect(Tok::RBracket);
    return g;
  }

  // Grades

  GradeExpr grade() {
    DepthGuard guard(*this);
    GradeExpr first = grade_term();
    if (!at(Tok::Plus)) return first;
    GradeExpr sum{GradeExpr::Kind::Sum, Rational(0), {std::move(first)}};
    while (accept(Tok::Plus)) sum.operands.push_back(grade_term());
    return sum;
  }

  GradeExpr grade_term() {
    GradeExpr first = grade_atom();
    if (!at(Tok::Star)) return first;
    GradeExpr prod{GradeExpr::Kind::Product, Rational(0), {std::move(first)}};
    while (accept(Tok::Star)) prod.operands.push_back(grade_atom());
    return prod;
  }

  GradeExpr grade_atom() {
    if (at(Tok::Number)) {
      const Token& t = advance();
      auto value = numerics::parse_decimal(t.text);
      if (!value) fail("malformed number " + std::string(t.text), t.span);
      return GradeExpr{GradeExpr::Kind::Literal, *value, {}};
    }
    if (accept(Tok::Eps)) return GradeExpr{GradeExpr::Kind::Eps, Rational(0), {}};
    if (accept(Tok::Inf)) return GradeExpr{GradeExpr::Kind::Inf, Rational(0), {}};
    if (accept(Tok::LParen)) {
      GradeExpr g = grade();
      expect(Tok::RParen);
      return g;
    }
    error();
  }

  // Terms

  bool at_statement() {
    if (peek().kind == Tok::Let) return true;
    return peek().kind == Tok::Ident && peek(1).kind == Tok::Equals;
  }

  TermPtr block() {
    DepthGuard guard(*this);
    struct Stmt {
      TermKind kind;
      std::string x, y;
      TermPtr bound;
      Span span;
    };
    std::vector<Stmt> stmts;
    while (at_statement()) {
      Stmt s;
      s.span = peek().span;
      if (accept(Tok::Let)) {
        if (accept(Tok::LBracket)) {
          s.kind = TermKind::BoxLet;
          s.x = ident();
          expect(Tok::RBracket);
        } else if (accept(Tok::LParen)) {
          s.kind = TermKind::TensorLet;
          s.x = ident();
          expect(Tok::Comma);
          s.y = ident();
          expect(Tok::RParen);
        } else {
          s.kind = TermKind::Bind;
          s.x = ident();
        }
      } else {
        s.kind = TermKind::Let;
        s.x = ident();
      }
      expect(Tok::Equals);
      s.bound = expr();
      expect(Tok::Semi);
      stmts.push_back(std::move(s));
    }
    TermPtr t = expr();
    for (auto it = stmts.rbegin(); it != stmts.rend(); ++it) {
      switch (it->kind) {
        case TermKind::BoxLet: t = term::box_let(it->x, it->bound, t, it->span); break;
        case TermKind::TensorLet: t = term::tensor_let(it->x, it->y, it->bound, t, it->span); break;
        case TermKind::Bind: t = term::bind(it->x, it->bound, t, it->span); break;
        default: t = term::let(it->x, it->bound, t, it->span); break;
      }
    }
    return t;
  }

  static bool is_op(Tok k) {
    return k == Tok::Add || k == Tok::Mul || k == Tok::Div || k == Tok::Sqrt || k == Tok::Lt;
  }

  static PrimOp to_op(Tok k) {
    switch (k) {
      case Tok::Add: return PrimOp::Add;
      case Tok::Mul: return PrimOp::Mul;
      case Tok::Div: return PrimOp::Div;
      case Tok::Sqrt: return PrimOp::Sqrt;
      default: return PrimOp::Lt;
    }
  }

  TermPtr expr() {
    DepthGuard guard(*this);
    Span s = peek().span;
    Tok k = peek().kind;
    if (is_op(k)) {
      advance();
      return term::op(to_op(k), expr(), s);
    }
    if (accept(Tok::Rnd)) return term::rnd(expr(), s);
    if (accept(Tok::Ret)) return term::ret(expr(), s);
    if (accept(Tok::Pi1)) return term::proj(1, expr(), s);
    if (accept(Tok::Pi2)) return term::proj(2, expr(), s);
    if (at(Tok::Inl) || at(Tok::Inr)) {
      bool left = advance().kind == Tok::Inl;
      Ty other;
      bool annotated = false;
      if (accept(Tok::LBrace)) {
        other = type();
        expect(Tok::RBrace);
        annotated = true;
      }
      TermPtr a = expr();
      return left ? term::inl(a, other, annotated, s) : term::inr(a, other, annotated, s);
    }
    if (accept(Tok::Case)) {
      TermPtr scrutinee = expr();
      expect(Tok::Of);
      expect(Tok::LBrace);
      expect(Tok::Inl);
      std::string x = ident();
      expect(Tok::Dot);
      TermPtr left = block();
      expect(Tok::Bar);
      expect(Tok::Inr);
      std::string y = ident();
      expect(Tok::Dot);
      TermPtr right = block();
      expect(Tok::RBrace);
      return term::case_of(scrutinee, x, left, y, right, s);
    }
    if (accept(Tok::Fun)) {
      std::vector<Param> params;
      do {
        expect(Tok::LParen);
        Param p;
        p.span = peek().span;
        p.name = ident();
        expect(Tok::Colon);
        p.ty = type();
        expect(Tok::RParen);
        params.push_back(std::move(p));
      } while (at(Tok::LParen));
      expect(Tok::LBrace);
      TermPtr body = block();
      expect(Tok::RBrace);
      for (std::size_t i = params.size(); i-- > 0;)
        body = term::lam(params[i].name, params[i].ty, body, i == 0 ? s : params[i].span);
      return body;
    }
    TermPtr t = atom();
    while (starts_atom()) {
      Span as = peek().span;
      t = term::app(t, atom(), as);
    }
    return t;
  }

  bool starts_atom() {
    bool r = false;
    for (Tok k : {Tok::Ident, Tok::Number, Tok::Err, Tok::LParen, Tok::LWith, Tok::LBracket}) r = at(k) || r;
    return r;
  }

  TermPtr atom() {
    DepthGuard guard(*this);
    Span s = peek().span;
    if (at(Tok::Ident)) return term::var(std::string(advance().text), s);
    if (at(Tok::Number)) {
      const Token& t = advance();
      auto value = numerics::parse_decimal(t.text);
      if (!value) fail("malformed number " + std::string(t.text), t.span);
      if (sgn(*value) <= 0) fail("numeric literals must be strictly positive", t.span);
      return term::constant(numerics::Real(*value), s);
    }
    if (accept(Tok::Err)) return term::err(s);
    if (accept(Tok::LWith)) {
      TermPtr a = expr();
      expect(Tok::Comma);
      TermPtr b = expr();
      expect(Tok::RWith);
      return term::with_pair(a, b, s);
    }
    if (accept(Tok::LBracket)) {
      TermPtr a = expr();
      expect(Tok::LBrace);
      Grade g = eval_grade_expr(grade(), fmt_);
      expect(Tok::RBrace);
      expect(Tok::RBracket);
      return term::box(a, g, s);
    }
    if (accept(Tok::LParen)) {
      if (accept(Tok::RParen)) return term::unit(s);
      if (at_statement()) {
        TermPtr b = block();
        expect(Tok::RParen);
        return b;
      }
      TermPtr a = expr();
      if (accept(Tok::Comma)) {
        TermPtr b = expr();
        expect(Tok::RParen);
        return term::tensor_pair(a, b, s);
      }
      expect(Tok::RParen);
      return a;
    }
    error();
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::set<std::string> expected_;
  int depth_ = 0;
  numerics::FpFormat fmt_;
};

}  // namespace

SourceProgram parse_program(std::string_view text, const numerics::FpFormat& fmt) {
  Parser p(text, fmt);
  SourceProgram prog = p.program();
  prog.text = std::string(text);
  return prog;
}

TermPtr parse_term(std::string_view text, const numerics::FpFormat& fmt) {
  Parser p(text, fmt);
  return p.whole_term();
}

Ty parse_type(std::string_view text, const numerics::FpFormat& fmt) {
  Parser p(text, fmt);
  return p.whole_type();
}

GradeExpr parse_grade_expr(std::string_view text) {
  Parser p(text, numerics::FpFormat::binary64());
  return p.whole_grade();
}

}  // namespace numfuzz
