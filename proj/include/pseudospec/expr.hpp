#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pseudospec {

enum class Op {
  Constant,
  Variable,
  // unary
  Neg,
  Exp,
  Sin,
  Cos,
  Sinh,
  Cosh,
  Tanh,
  Sqrt,
  Ln,
  // base raised to a constant real exponent (stored in the node)
  Pow,
  // binary
  Add,
  Sub,
  Mul,
  Div,
};

// Immutable expression tree over the single variable x. Copies share nodes,
// so values are cheap to pass around and safe to evaluate concurrently.
class Expr {
 public:
  // The constant 0.
  Expr();

  static Expr constant(double value);
  static Expr variable();
  static Expr unary(Op op, Expr arg);
  static Expr binary(Op op, Expr lhs, Expr rhs);
  static Expr power(Expr base, double exponent);

  Op op() const noexcept;
  // Constant value, or the exponent for Op::Pow. Zero otherwise.
  double value() const noexcept;
  std::span<const Expr> children() const noexcept;

  bool is_constant() const noexcept { return op() == Op::Constant; }
  bool is_constant(double v) const noexcept {
    return is_constant() && value() == v;
  }
  bool depends_on_x() const noexcept;
  std::size_t node_count() const;

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr operator+(double a, const Expr& b);
Expr operator+(const Expr& a, double b);
Expr operator-(double a, const Expr& b);
Expr operator-(const Expr& a, double b);
Expr operator*(double a, const Expr& b);
Expr operator*(const Expr& a, double b);
Expr operator/(const Expr& a, double b);
Expr operator/(double a, const Expr& b);

Expr exp(const Expr& e);
Expr sin(const Expr& e);
Expr cos(const Expr& e);
Expr sinh(const Expr& e);
Expr cosh(const Expr& e);
Expr tanh(const Expr& e);
Expr sqrt(const Expr& e);
Expr ln(const Expr& e);
Expr pow(const Expr& base, double exponent);

// Grammar (whitespace-insensitive):
//   expr     := term (('+' | '-') term)*
//   term     := unary (('*' | '/') unary)*
//   unary    := ('-' | '+') unary | power
//   power    := primary ('^' exponent)?
//   exponent := ('-' | '+') exponent | power        -- must not depend on x
//   primary  := number | 'x' | name '(' expr ')' | '(' expr ')'
// '^' is right-associative and binds tighter than unary minus.
// Throws SyntaxError or UnknownFunction.
Expr parse(std::string_view source);

// Fully parenthesized text that parse() accepts; constants are printed with
// 17 significant digits so parse(to_string(e)) evaluates identically.
std::string to_string(const Expr& e);

Expr differentiate(const Expr& e);
Expr differentiate(const Expr& e, int times);

// Throws DomainError (ln of non-positive, division by zero, ...) or
// OverflowError when an intermediate value is not representable.
double evaluate(const Expr& e, double x);

// Taylor coefficients c_k = e^(k)(x0) / k! for k = 0..order, computed by
// truncated power-series arithmetic. Same error contract as evaluate().
std::vector<double> taylor_coefficients(const Expr& e, double x0,
                                        std::size_t order);

const char* op_name(Op op);

}  // namespace pseudospec
