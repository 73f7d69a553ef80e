#pragma once

#include <memory>
#include <optional>
#include <string>

#include "polstar/enclosure.hpp"
#include "polstar/rational.hpp"

namespace polstar {

enum class UnaryFn { Exp, Ln, Sin, Cos, Tan, Atan, Sqrt, Sinh, Cosh };
enum class BinOp { Add, Sub, Mul, Div };
enum class NamedConst { Pi, E };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable expression tree over the single variable x.
struct Expr {
  enum class Kind { Var, Lit, Const, Unary, Bin, Pow };

  Kind kind;
  Rational lit;        // Kind::Lit
  NamedConst cname{};  // Kind::Const
  UnaryFn fn{};        // Kind::Unary
  BinOp op{};          // Kind::Bin
  ExprPtr a, b;        // operands (Unary/Pow use a only)
  long exponent = 0;   // Kind::Pow

  static ExprPtr var();
  static ExprPtr literal(Rational v);
  static ExprPtr constant(NamedConst c);
  static ExprPtr unary(UnaryFn fn, ExprPtr arg);
  static ExprPtr bin(BinOp op, ExprPtr lhs, ExprPtr rhs);
  static ExprPtr pow(ExprPtr base, long exponent);
};

/// Parses an expression in x. Standard precedence (^ binds tightest, then
/// unary minus, then * and /, then + and -), left-associative binaries,
/// integer-literal exponents only, function application parenthesized.
/// Accepted names: exp ln (alias log) sin cos tan atan sqrt sinh cosh pi e x.
ExprPtr parse(const std::string& text);

/// Exact symbolic derivative with constant folding.
ExprPtr differentiate(const ExprPtr& e);

/// Renders the tree back to parsable text (for reports and diagnostics).
std::string to_string(const ExprPtr& e);

/// Interval extension of e over an enclosure of x; every operation rounds
/// outward, so the result contains the exact range image of the input.
Enclosure eval_interval(const ExprPtr& e, const Enclosure& x, mpfr_prec_t prec);

/// Certified evaluation at an exact rational point: the result contains the
/// exact value and satisfies hi - lo <= 2^(1-prec) * max(1, |value|).
/// The working precision is doubled (up to 4 retries) if the first pass is
/// too wide.
Enclosure eval_enclosure(const ExprPtr& e, const Rational& x, mpfr_prec_t prec);

/// Plain round-to-nearest evaluation (estimates only; used by the dense-scan
/// test oracle, a code path independent of the enclosure machinery).
Real eval_real(const ExprPtr& e, const Real& x);

/// A function together with its exact symbolic derivative.
struct FunctionOracle {
  ExprPtr expr;
  ExprPtr derivative;
  std::string name;  // optional display name

  static FunctionOracle from_expr(ExprPtr e, std::string name = "");
};

/// Built-in oracle registry: bare names ("cos", "exp", ...) resolve without
/// parsing. Returns nothing for unknown names.
std::optional<FunctionOracle> builtin_oracle(const std::string& name);

/// Parses text as either a registry name or an expression in x.
FunctionOracle make_oracle(const std::string& text);

}  // namespace polstar
