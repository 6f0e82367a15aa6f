#ifndef CONFCURV_EXPR_HPP
#define CONFCURV_EXPR_HPP

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

#include "confcurv/jet.hpp"

namespace confcurv {

enum class UnaryOp { Neg, Exp, Log, Sin, Cos, Sqrt };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };

/// Malformed expression text. `position` is the 0-based byte offset of the
/// offending token.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position, std::string token)
      : std::runtime_error(what), position_(position), token_(std::move(token)) {}
  std::size_t position() const { return position_; }
  const std::string& token() const { return token_; }

 private:
  std::size_t position_;
  std::string token_;
};

/// Evaluation left the real domain of a subexpression (log/sqrt of a
/// non-positive value, division by zero, non-integer power of a non-positive
/// base). `subexpression` is the printed offending node.
class DomainError : public std::runtime_error {
 public:
  DomainError(const std::string& what, std::string subexpression)
      : std::runtime_error(what + ": " + subexpression), sub_(std::move(subexpression)) {}
  const std::string& subexpression() const { return sub_; }

 private:
  std::string sub_;
};

/**
 * Immutable expression tree over the coordinates x1..xn of a chart.
 *
 * Expr is a cheap handle (shared, const nodes); copies share structure and
 * evaluation is thread-safe.
 */
class Expr {
 public:
  enum class Kind { Constant, Variable, Unary, Binary };

  static Expr constant(double value);
  /// Coordinate x_{index+1} (0-based index).
  static Expr variable(int index);
  static Expr unary(UnaryOp op, Expr child);
  static Expr binary(BinaryOp op, Expr lhs, Expr rhs);

  Kind kind() const;
  double constant_value() const;
  int variable_index() const;
  UnaryOp unary_op() const;
  BinaryOp binary_op() const;
  Expr child() const;
  Expr lhs() const;
  Expr rhs() const;

  /// Largest variable index used plus one (0 for constant expressions).
  int arity() const;

  /// Structural equality.
  friend bool operator==(const Expr& a, const Expr& b);

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

Expr operator+(Expr a, Expr b);
Expr operator-(Expr a, Expr b);
Expr operator*(Expr a, Expr b);
Expr operator/(Expr a, Expr b);
Expr operator-(Expr a);
Expr exp(Expr a);
Expr log(Expr a);
Expr sin(Expr a);
Expr cos(Expr a);
Expr sqrt(Expr a);
Expr pow(Expr base, Expr exponent);

/**
 * Parses `text` as an expression in the chart coordinates x1..xn.
 *
 * Grammar (see docs/expression-grammar.md):
 *   expr    := term  (('+' | '-') term)*
 *   term    := unary (('*' | '/') unary)*
 *   unary   := '-' unary | power
 *   power   := primary ('^' exponent)*
 *   exponent:= '-' exponent | primary
 *   primary := number | 'x'digit | func '(' expr ')' | '(' expr ')'
 *
 * Same-precedence operators associate to the left, including '^'.
 */
Expr parse(std::string_view text, int n);

/// Fully parenthesized text that parses back to an equivalent tree.
std::string print(const Expr& e);

/// Value, gradient and Hessian of `e` at `x` (x.size() is the chart dimension).
Jet2<double> eval_jet2(const Expr& e, const VectorXd& x);

/// Value only.
double eval(const Expr& e, const VectorXd& x);

}  // namespace confcurv

#endif  // CONFCURV_EXPR_HPP
