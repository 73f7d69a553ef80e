#include "polstar/polynomial.hpp"

#include <ostream>
#include <stdexcept>

namespace polstar {

Polynomial::Polynomial(std::vector<Rational> coeffs) : c_(std::move(coeffs)) {
  if (c_.empty()) c_.assign(1, Rational(0));
}

std::size_t Polynomial::degree() const {
  for (std::size_t i = c_.size(); i-- > 0;)
    if (!c_[i].is_zero()) return i;
  return 0;
}

const Rational& Polynomial::coeff(std::size_t i) const {
  static const Rational zero(0);
  return i < c_.size() ? c_[i] : zero;
}

bool Polynomial::is_zero() const {
  for (const auto& c : c_)
    if (!c.is_zero()) return false;
  return true;
}

Rational Polynomial::eval(const Rational& x) const {
  Rational acc = c_.back();
  for (std::size_t i = c_.size() - 1; i-- > 0;) acc = acc * x + c_[i];
  return acc;
}

Real Polynomial::eval(const Real& x) const {
  Real acc(c_.back(), x.prec());
  for (std::size_t i = c_.size() - 1; i-- > 0;) acc = acc * x + Real(c_[i], x.prec());
  return acc;
}

Enclosure Polynomial::eval(const Enclosure& x, mpfr_prec_t prec) const {
  Enclosure acc(c_.back(), prec);
  Enclosure xs(x.lo().round_to(prec, MPFR_RNDD), x.hi().round_to(prec, MPFR_RNDU));
  for (std::size_t i = c_.size() - 1; i-- > 0;) acc = acc * xs + Enclosure(c_[i], prec);
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (c_.size() == 1) return Polynomial();
  std::vector<Rational> d(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = Rational(static_cast<long>(i)) * c_[i];
  return Polynomial(std::move(d));
}

Polynomial Polynomial::compose_linear(const Rational& s, const Rational& t) const {
  // Horner on the argument s*x + t.
  Polynomial acc({c_.back()});
  Polynomial lin({t, s});
  for (std::size_t i = c_.size() - 1; i-- > 0;) {
    acc = acc * lin;
    acc = acc + Polynomial({c_[i]});
  }
  return acc;
}

Polynomial Polynomial::stretch(const Rational& d) const {
  if (d.is_zero()) throw std::invalid_argument("Polynomial::stretch: zero denominator");
  std::vector<Rational> out(c_.size());
  Rational scale(1);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    out[i] = c_[i] * scale;
    scale = scale / d;
  }
  return Polynomial(std::move(out));
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<Rational> out(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.coeff(i) + b.coeff(i);
  return Polynomial(std::move(out));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  std::vector<Rational> out(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.coeff(i) - b.coeff(i);
  return Polynomial(std::move(out));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  std::vector<Rational> out(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
  return Polynomial(std::move(out));
}

Polynomial operator*(const Rational& s, const Polynomial& p) {
  std::vector<Rational> out(p.c_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = s * p.c_[i];
  return Polynomial(std::move(out));
}

bool operator==(const Polynomial& a, const Polynomial& b) {
  std::size_t n = std::max(a.c_.size(), b.c_.size());
  for (std::size_t i = 0; i < n; ++i)
    if (a.coeff(i) != b.coeff(i)) return false;
  return true;
}

std::ostream& operator<<(std::ostream& os, const Polynomial& p) {
  bool first = true;
  for (std::size_t i = 0; i <= p.stored_degree(); ++i) {
    if (p.coeff(i).is_zero() && !(first && i == p.stored_degree())) continue;
    if (!first) os << " + ";
    os << p.coeff(i);
    if (i >= 1) os << "*x";
    if (i >= 2) os << "^" << i;
    first = false;
  }
  if (first) os << "0";
  return os;
}

ExprPtr polynomial_to_expr(const Polynomial& p) {
  // Horner form keeps interval evaluation reasonably tight.
  ExprPtr acc = Expr::literal(p.coeff(p.stored_degree()));
  for (std::size_t i = p.stored_degree(); i-- > 0;) {
    acc = Expr::bin(BinOp::Add, Expr::bin(BinOp::Mul, acc, Expr::var()),
                    Expr::literal(p.coeff(i)));
  }
  return acc;
}

std::optional<Polynomial> as_polynomial(const ExprPtr& e) {
  using K = Expr::Kind;
  switch (e->kind) {
    case K::Var:
      return Polynomial({Rational(0), Rational(1)});
    case K::Lit:
      return Polynomial({e->lit});
    case K::Const:
      return std::nullopt;  // pi and e are not rational
    case K::Unary:
      return std::nullopt;
    case K::Bin: {
      auto l = as_polynomial(e->a);
      auto r = as_polynomial(e->b);
      if (!l || !r) return std::nullopt;
      switch (e->op) {
        case BinOp::Add:
          return *l + *r;
        case BinOp::Sub:
          return *l - *r;
        case BinOp::Mul:
          return *l * *r;
        case BinOp::Div:
          if (r->degree() == 0 && !r->coeff(0).is_zero())
            return r->coeff(0).reciprocal() * *l;
          return std::nullopt;
      }
      return std::nullopt;
    }
    case K::Pow: {
      auto base = as_polynomial(e->a);
      if (!base) return std::nullopt;
      if (e->exponent >= 0) {
        Polynomial acc({Rational(1)});
        for (long k = 0; k < e->exponent; ++k) acc = acc * *base;
        return acc;
      }
      if (base->degree() == 0 && !base->coeff(0).is_zero()) {
        Rational c = base->coeff(0).reciprocal().pow(static_cast<unsigned long>(-e->exponent));
        return Polynomial({c});
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

}  // namespace polstar
