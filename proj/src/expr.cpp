#include "polstar/expr.hpp"

#include <cctype>
#include <map>
#include <sstream>
#include <utility>

namespace polstar {

ExprPtr Expr::var() {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Var;
  return e;
}

ExprPtr Expr::literal(Rational v) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Lit;
  e->lit = std::move(v);
  return e;
}

ExprPtr Expr::constant(NamedConst c) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Const;
  e->cname = c;
  return e;
}

ExprPtr Expr::unary(UnaryFn fn, ExprPtr arg) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Unary;
  e->fn = fn;
  e->a = std::move(arg);
  return e;
}

ExprPtr Expr::bin(BinOp op, ExprPtr lhs, ExprPtr rhs) {
  // Rational-literal folding keeps derivative trees small.
  if (lhs->kind == Expr::Kind::Lit && rhs->kind == Expr::Kind::Lit) {
    switch (op) {
      case BinOp::Add:
        return literal(lhs->lit + rhs->lit);
      case BinOp::Sub:
        return literal(lhs->lit - rhs->lit);
      case BinOp::Mul:
        return literal(lhs->lit * rhs->lit);
      case BinOp::Div:
        if (!rhs->lit.is_zero()) return literal(lhs->lit / rhs->lit);
        break;
    }
  }
  if (op == BinOp::Add) {
    if (lhs->kind == Kind::Lit && lhs->lit.is_zero()) return rhs;
    if (rhs->kind == Kind::Lit && rhs->lit.is_zero()) return lhs;
  }
  if (op == BinOp::Sub && rhs->kind == Kind::Lit && rhs->lit.is_zero()) return lhs;
  if (op == BinOp::Mul) {
    if (lhs->kind == Kind::Lit) {
      if (lhs->lit.is_zero()) return literal(Rational(0));
      if (lhs->lit == Rational(1)) return rhs;
    }
    if (rhs->kind == Kind::Lit) {
      if (rhs->lit.is_zero()) return literal(Rational(0));
      if (rhs->lit == Rational(1)) return lhs;
    }
  }
  if (op == BinOp::Div && rhs->kind == Kind::Lit && rhs->lit == Rational(1)) return lhs;
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Bin;
  e->op = op;
  e->a = std::move(lhs);
  e->b = std::move(rhs);
  return e;
}

ExprPtr Expr::pow(ExprPtr base, long exponent) {
  if (exponent == 0) return literal(Rational(1));
  if (exponent == 1) return base;
  if (base->kind == Kind::Lit) {
    if (exponent > 0) return literal(base->lit.pow(static_cast<unsigned long>(exponent)));
    if (!base->lit.is_zero())
      return literal(base->lit.pow(static_cast<unsigned long>(-exponent)).reciprocal());
  }
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Pow;
  e->a = std::move(base);
  e->exponent = exponent;
  return e;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

const std::map<std::string, UnaryFn>& function_table() {
  static const std::map<std::string, UnaryFn> table = {
      {"exp", UnaryFn::Exp},   {"ln", UnaryFn::Ln},     {"log", UnaryFn::Ln},
      {"sin", UnaryFn::Sin},   {"cos", UnaryFn::Cos},   {"tan", UnaryFn::Tan},
      {"atan", UnaryFn::Atan}, {"sqrt", UnaryFn::Sqrt}, {"sinh", UnaryFn::Sinh},
      {"cosh", UnaryFn::Cosh},
  };
  return table;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  ExprPtr run() {
    skip_ws();
    if (eof()) throw ParseError("empty expression", 0);
    ExprPtr e = parse_sum();
    skip_ws();
    if (!eof()) throw ParseError("unexpected trailing input", pos_);
    return e;
  }

 private:
  bool eof() const { return pos_ >= s_.size(); }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_ws();
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c, const char* what) {
    if (!accept(c)) throw ParseError(std::string("expected '") + c + "' " + what, pos_);
  }

  ExprPtr parse_sum() {
    ExprPtr e = parse_term();
    for (;;) {
      if (accept('+'))
        e = Expr::bin(BinOp::Add, e, parse_term());
      else if (accept('-'))
        e = Expr::bin(BinOp::Sub, e, parse_term());
      else
        return e;
    }
  }

  ExprPtr parse_term() {
    ExprPtr e = parse_factor();
    for (;;) {
      if (accept('*'))
        e = Expr::bin(BinOp::Mul, e, parse_factor());
      else if (accept('/'))
        e = Expr::bin(BinOp::Div, e, parse_factor());
      else
        return e;
    }
  }

  ExprPtr parse_factor() {
    if (accept('-')) return Expr::bin(BinOp::Sub, Expr::literal(Rational(0)), parse_factor());
    return parse_power();
  }

  ExprPtr parse_power() {
    ExprPtr base = parse_atom();
    skip_ws();
    if (peek() != '^') return base;
    ++pos_;
    skip_ws();
    std::size_t at = pos_;
    bool neg = accept('-');
    skip_ws();
    if (!std::isdigit(static_cast<unsigned char>(peek())))
      throw ParseError("non-integer exponent unsupported", at);
    std::string digits;
    while (std::isdigit(static_cast<unsigned char>(peek()))) digits.push_back(s_[pos_++]);
    if (peek() == '.') throw ParseError("non-integer exponent unsupported", at);
    long k = std::stol(digits);
    skip_ws();
    if (peek() == '^') throw ParseError("chained '^' requires parentheses", pos_);
    return Expr::pow(base, neg ? -k : k);
  }

  ExprPtr parse_atom() {
    skip_ws();
    std::size_t at = pos_;
    char c = peek();
    if (c == '(') {
      ++pos_;
      ExprPtr e = parse_sum();
      expect(')', "to close parenthesis");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string name;
      while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')
        name.push_back(s_[pos_++]);
      if (name == "x") return Expr::var();
      if (name == "pi" || name == "Pi" || name == "PI") return Expr::constant(NamedConst::Pi);
      if (name == "e" || name == "E") return Expr::constant(NamedConst::E);
      auto it = function_table().find(name);
      if (it != function_table().end()) {
        expect('(', "after function name");
        ExprPtr arg = parse_sum();
        expect(')', "to close function argument");
        return Expr::unary(it->second, arg);
      }
      throw ParseError("unknown identifier '" + name + "'", at);
    }
    throw ParseError("unexpected character", at);
  }

  ExprPtr parse_number() {
    std::size_t at = pos_;
    std::string text;
    while (std::isdigit(static_cast<unsigned char>(peek()))) text.push_back(s_[pos_++]);
    if (peek() == '.') {
      text.push_back(s_[pos_++]);
      if (!std::isdigit(static_cast<unsigned char>(peek())))
        throw ParseError("malformed number", at);
      while (std::isdigit(static_cast<unsigned char>(peek()))) text.push_back(s_[pos_++]);
    }
    if (text.empty()) throw ParseError("malformed number", at);
    return Expr::literal(Rational::from_string(text));
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

ExprPtr parse(const std::string& text) { return Parser(text).run(); }

// ---------------------------------------------------------------------------
// Differentiation
// ---------------------------------------------------------------------------

ExprPtr differentiate(const ExprPtr& e) {
  using K = Expr::Kind;
  switch (e->kind) {
    case K::Var:
      return Expr::literal(Rational(1));
    case K::Lit:
    case K::Const:
      return Expr::literal(Rational(0));
    case K::Unary: {
      ExprPtr u = e->a;
      ExprPtr du = differentiate(u);
      switch (e->fn) {
        case UnaryFn::Exp:
          return Expr::bin(BinOp::Mul, Expr::unary(UnaryFn::Exp, u), du);
        case UnaryFn::Ln:
          return Expr::bin(BinOp::Div, du, u);
        case UnaryFn::Sin:
          return Expr::bin(BinOp::Mul, Expr::unary(UnaryFn::Cos, u), du);
        case UnaryFn::Cos:
          return Expr::bin(BinOp::Sub, Expr::literal(Rational(0)),
                           Expr::bin(BinOp::Mul, Expr::unary(UnaryFn::Sin, u), du));
        case UnaryFn::Tan:
          return Expr::bin(BinOp::Div, du, Expr::pow(Expr::unary(UnaryFn::Cos, u), 2));
        case UnaryFn::Atan:
          return Expr::bin(
              BinOp::Div, du,
              Expr::bin(BinOp::Add, Expr::literal(Rational(1)), Expr::pow(u, 2)));
        case UnaryFn::Sqrt:
          return Expr::bin(BinOp::Div, du,
                           Expr::bin(BinOp::Mul, Expr::literal(Rational(2)),
                                     Expr::unary(UnaryFn::Sqrt, u)));
        case UnaryFn::Sinh:
          return Expr::bin(BinOp::Mul, Expr::unary(UnaryFn::Cosh, u), du);
        case UnaryFn::Cosh:
          return Expr::bin(BinOp::Mul, Expr::unary(UnaryFn::Sinh, u), du);
      }
      break;
    }
    case K::Bin: {
      ExprPtr da = differentiate(e->a);
      ExprPtr db = differentiate(e->b);
      switch (e->op) {
        case BinOp::Add:
          return Expr::bin(BinOp::Add, da, db);
        case BinOp::Sub:
          return Expr::bin(BinOp::Sub, da, db);
        case BinOp::Mul:
          return Expr::bin(BinOp::Add, Expr::bin(BinOp::Mul, da, e->b),
                           Expr::bin(BinOp::Mul, e->a, db));
        case BinOp::Div:
          return Expr::bin(
              BinOp::Div,
              Expr::bin(BinOp::Sub, Expr::bin(BinOp::Mul, da, e->b),
                        Expr::bin(BinOp::Mul, e->a, db)),
              Expr::pow(e->b, 2));
      }
      break;
    }
    case K::Pow: {
      ExprPtr du = differentiate(e->a);
      ExprPtr inner = Expr::bin(BinOp::Mul, Expr::literal(Rational(e->exponent)),
                                Expr::pow(e->a, e->exponent - 1));
      return Expr::bin(BinOp::Mul, inner, du);
    }
  }
  throw Error("differentiate: unhandled expression node");
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

namespace {

const char* fn_name(UnaryFn fn) {
  switch (fn) {
    case UnaryFn::Exp:
      return "exp";
    case UnaryFn::Ln:
      return "ln";
    case UnaryFn::Sin:
      return "sin";
    case UnaryFn::Cos:
      return "cos";
    case UnaryFn::Tan:
      return "tan";
    case UnaryFn::Atan:
      return "atan";
    case UnaryFn::Sqrt:
      return "sqrt";
    case UnaryFn::Sinh:
      return "sinh";
    case UnaryFn::Cosh:
      return "cosh";
  }
  return "?";
}

void render(const ExprPtr& e, std::ostringstream& os) {
  using K = Expr::Kind;
  switch (e->kind) {
    case K::Var:
      os << "x";
      return;
    case K::Lit:
      if (e->lit.sign() < 0 || !e->lit.is_integer())
        os << "(" << e->lit << ")";
      else
        os << e->lit;
      return;
    case K::Const:
      os << (e->cname == NamedConst::Pi ? "pi" : "e");
      return;
    case K::Unary:
      os << fn_name(e->fn) << "(";
      render(e->a, os);
      os << ")";
      return;
    case K::Bin: {
      const char* op = e->op == BinOp::Add   ? " + "
                       : e->op == BinOp::Sub ? " - "
                       : e->op == BinOp::Mul ? "*"
                                             : "/";
      os << "(";
      render(e->a, os);
      os << op;
      render(e->b, os);
      os << ")";
      return;
    }
    case K::Pow:
      os << "(";
      render(e->a, os);
      os << ")^" << e->exponent;
      return;
  }
}

}  // namespace

std::string to_string(const ExprPtr& e) {
  std::ostringstream os;
  render(e, os);
  return os.str();
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

Enclosure eval_interval(const ExprPtr& e, const Enclosure& x, mpfr_prec_t prec) {
  using K = Expr::Kind;
  switch (e->kind) {
    case K::Var:
      return Enclosure(x.lo().round_to(prec, MPFR_RNDD), x.hi().round_to(prec, MPFR_RNDU));
    case K::Lit:
      return Enclosure(e->lit, prec);
    case K::Const:
      return e->cname == NamedConst::Pi ? enc_pi(prec) : enc_e(prec);
    case K::Unary: {
      Enclosure u = eval_interval(e->a, x, prec);
      switch (e->fn) {
        case UnaryFn::Exp:
          return enc_exp(u);
        case UnaryFn::Ln:
          return enc_ln(u);
        case UnaryFn::Sin:
          return enc_sin(u);
        case UnaryFn::Cos:
          return enc_cos(u);
        case UnaryFn::Tan:
          return enc_tan(u);
        case UnaryFn::Atan:
          return enc_atan(u);
        case UnaryFn::Sqrt:
          return enc_sqrt(u);
        case UnaryFn::Sinh:
          return enc_sinh(u);
        case UnaryFn::Cosh:
          return enc_cosh(u);
      }
      break;
    }
    case K::Bin: {
      Enclosure l = eval_interval(e->a, x, prec);
      Enclosure r = eval_interval(e->b, x, prec);
      switch (e->op) {
        case BinOp::Add:
          return l + r;
        case BinOp::Sub:
          return l - r;
        case BinOp::Mul:
          return l * r;
        case BinOp::Div:
          return l / r;
      }
      break;
    }
    case K::Pow:
      return eval_interval(e->a, x, prec).pow_int(e->exponent);
  }
  throw Error("eval_interval: unhandled expression node");
}

Enclosure eval_enclosure(const ExprPtr& e, const Rational& x, mpfr_prec_t prec) {
  prec = Real::clamp(prec);
  mpfr_prec_t wp = prec + 16;
  for (int attempt = 0; attempt <= 4; ++attempt) {
    Enclosure r = eval_interval(e, Enclosure(x, wp), wp);
    // contract: width <= 2^(1-prec) * max(1, |value|)
    Real bound = Real::max(Real(1L, wp), r.mig()).mul_2exp(1 - static_cast<long>(prec));
    if (r.width() <= bound) return r;
    wp *= 2;
  }
  throw PrecisionError("eval_enclosure: width contract not met after precision escalation");
}

Real eval_real(const ExprPtr& e, const Real& x) {
  using K = Expr::Kind;
  mpfr_prec_t p = x.prec();
  switch (e->kind) {
    case K::Var:
      return x;
    case K::Lit:
      return Real(e->lit, p);
    case K::Const: {
      Real r(p);
      if (e->cname == NamedConst::Pi)
        mpfr_const_pi(r.raw(), MPFR_RNDN);
      else {
        Real one(1L, p);
        mpfr_exp(r.raw(), one.raw(), MPFR_RNDN);
      }
      return r;
    }
    case K::Unary: {
      Real u = eval_real(e->a, x);
      Real r(p);
      switch (e->fn) {
        case UnaryFn::Exp:
          mpfr_exp(r.raw(), u.raw(), MPFR_RNDN);
          break;
        case UnaryFn::Ln:
          if (u.sign() <= 0) throw DomainError("ln of nonpositive value");
          mpfr_log(r.raw(), u.raw(), MPFR_RNDN);
          break;
        case UnaryFn::Sin:
          mpfr_sin(r.raw(), u.raw(), MPFR_RNDN);
          break;
        case UnaryFn::Cos:
          mpfr_cos(r.raw(), u.raw(), MPFR_RNDN);
          break;
        case UnaryFn::Tan:
          mpfr_tan(r.raw(), u.raw(), MPFR_RNDN);
          break;
        case UnaryFn::Atan:
          mpfr_atan(r.raw(), u.raw(), MPFR_RNDN);
          break;
        case UnaryFn::Sqrt:
          if (u.sign() < 0) throw DomainError("sqrt of negative value");
          mpfr_sqrt(r.raw(), u.raw(), MPFR_RNDN);
          break;
        case UnaryFn::Sinh:
          mpfr_sinh(r.raw(), u.raw(), MPFR_RNDN);
          break;
        case UnaryFn::Cosh:
          mpfr_cosh(r.raw(), u.raw(), MPFR_RNDN);
          break;
      }
      return r;
    }
    case K::Bin: {
      Real l = eval_real(e->a, x);
      Real r = eval_real(e->b, x);
      switch (e->op) {
        case BinOp::Add:
          return l + r;
        case BinOp::Sub:
          return l - r;
        case BinOp::Mul:
          return l * r;
        case BinOp::Div:
          if (r.is_zero()) throw DomainError("division by zero");
          return l / r;
      }
      break;
    }
    case K::Pow: {
      Real u = eval_real(e->a, x);
      Real r(p);
      mpfr_pow_si(r.raw(), u.raw(), e->exponent, MPFR_RNDN);
      return r;
    }
  }
  throw Error("eval_real: unhandled expression node");
}

FunctionOracle FunctionOracle::from_expr(ExprPtr e, std::string name) {
  FunctionOracle o;
  o.derivative = differentiate(e);
  o.expr = std::move(e);
  o.name = std::move(name);
  return o;
}

std::optional<FunctionOracle> builtin_oracle(const std::string& name) {
  auto it = function_table().find(name);
  if (it == function_table().end()) return std::nullopt;
  return FunctionOracle::from_expr(Expr::unary(it->second, Expr::var()), name);
}

FunctionOracle make_oracle(const std::string& text) {
  if (auto b = builtin_oracle(text)) return *b;
  return FunctionOracle::from_expr(parse(text), text);
}

}  // namespace polstar
