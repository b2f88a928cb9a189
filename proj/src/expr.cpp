#include "pseudospec/expr.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <utility>

#include "pseudospec/errors.hpp"

namespace pseudospec {

struct Expr::Node {
  Op op;
  double value;
  std::vector<Expr> children;
  bool depends_on_x;
};

namespace {

bool is_unary(Op op) {
  switch (op) {
    case Op::Neg:
    case Op::Exp:
    case Op::Sin:
    case Op::Cos:
    case Op::Sinh:
    case Op::Cosh:
    case Op::Tanh:
    case Op::Sqrt:
    case Op::Ln:
      return true;
    default:
      return false;
  }
}

bool is_binary(Op op) {
  return op == Op::Add || op == Op::Sub || op == Op::Mul || op == Op::Div;
}

// Folding is only applied when the folded value is finite; domain errors in
// constant sub-expressions are left for evaluate() to report.
bool foldable(double v) { return std::isfinite(v); }

double apply_unary(Op op, double u) {
  switch (op) {
    case Op::Neg: return -u;
    case Op::Exp: return std::exp(u);
    case Op::Sin: return std::sin(u);
    case Op::Cos: return std::cos(u);
    case Op::Sinh: return std::sinh(u);
    case Op::Cosh: return std::cosh(u);
    case Op::Tanh: return std::tanh(u);
    case Op::Sqrt: return u < 0.0 ? std::nan("") : std::sqrt(u);
    case Op::Ln: return u <= 0.0 ? std::nan("") : std::log(u);
    default: throw std::logic_error("not a unary op");
  }
}

double apply_binary(Op op, double a, double b) {
  switch (op) {
    case Op::Add: return a + b;
    case Op::Sub: return a - b;
    case Op::Mul: return a * b;
    case Op::Div: return b == 0.0 ? std::nan("") : a / b;
    default: throw std::logic_error("not a binary op");
  }
}

bool is_integer(double v) { return std::floor(v) == v; }

double apply_pow(double base, double exponent) {
  if (base < 0.0 && !is_integer(exponent)) return std::nan("");
  if (base == 0.0 && exponent < 0.0) return std::nan("");
  return std::pow(base, exponent);
}

}  // namespace

Expr::Expr() : Expr(constant(0.0)) {}

Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr Expr::constant(double value) {
  if (!std::isfinite(value))
    throw std::invalid_argument("expression constants must be finite");
  return Expr(std::make_shared<const Node>(Node{Op::Constant, value, {}, false}));
}

Expr Expr::variable() {
  return Expr(std::make_shared<const Node>(Node{Op::Variable, 0.0, {}, true}));
}

Expr Expr::unary(Op op, Expr arg) {
  if (!is_unary(op)) throw std::invalid_argument("Expr::unary: not a unary op");
  if (arg.is_constant()) {
    double v = apply_unary(op, arg.value());
    if (foldable(v)) return constant(v);
  }
  if (op == Op::Neg && arg.op() == Op::Neg) return arg.children()[0];
  bool dep = arg.depends_on_x();
  return Expr(std::make_shared<const Node>(Node{op, 0.0, {std::move(arg)}, dep}));
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs) {
  if (!is_binary(op))
    throw std::invalid_argument("Expr::binary: not a binary op");
  if (lhs.is_constant() && rhs.is_constant()) {
    double v = apply_binary(op, lhs.value(), rhs.value());
    if (foldable(v)) return constant(v);
  }
  switch (op) {
    case Op::Add:
      if (lhs.is_constant(0.0)) return rhs;
      if (rhs.is_constant(0.0)) return lhs;
      break;
    case Op::Sub:
      if (rhs.is_constant(0.0)) return lhs;
      if (lhs.is_constant(0.0)) return unary(Op::Neg, std::move(rhs));
      break;
    case Op::Mul:
      if (lhs.is_constant(0.0) || rhs.is_constant(0.0)) return constant(0.0);
      if (lhs.is_constant(1.0)) return rhs;
      if (rhs.is_constant(1.0)) return lhs;
      if (lhs.is_constant(-1.0)) return unary(Op::Neg, std::move(rhs));
      if (rhs.is_constant(-1.0)) return unary(Op::Neg, std::move(lhs));
      break;
    case Op::Div:
      if (rhs.is_constant(1.0)) return lhs;
      if (lhs.is_constant(0.0) && !(rhs.is_constant(0.0)))
        return constant(0.0);
      break;
    default:
      break;
  }
  bool dep = lhs.depends_on_x() || rhs.depends_on_x();
  return Expr(std::make_shared<const Node>(
      Node{op, 0.0, {std::move(lhs), std::move(rhs)}, dep}));
}

Expr Expr::power(Expr base, double exponent) {
  if (!std::isfinite(exponent))
    throw std::invalid_argument("exponent must be finite");
  if (exponent == 0.0) return constant(1.0);
  if (exponent == 1.0) return base;
  if (base.is_constant()) {
    double v = apply_pow(base.value(), exponent);
    if (foldable(v)) return constant(v);
  }
  if (base.op() == Op::Pow && is_integer(exponent))
    return power(base.children()[0], base.value() * exponent);
  bool dep = base.depends_on_x();
  return Expr(std::make_shared<const Node>(
      Node{Op::Pow, exponent, {std::move(base)}, dep}));
}

Op Expr::op() const noexcept { return node_->op; }
double Expr::value() const noexcept { return node_->value; }
std::span<const Expr> Expr::children() const noexcept {
  return node_->children;
}
bool Expr::depends_on_x() const noexcept { return node_->depends_on_x; }

std::size_t Expr::node_count() const {
  std::size_t n = 1;
  for (const auto& c : children()) n += c.node_count();
  return n;
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::binary(Op::Add, a, b); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::binary(Op::Sub, a, b); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::binary(Op::Mul, a, b); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::binary(Op::Div, a, b); }
Expr operator-(const Expr& a) { return Expr::unary(Op::Neg, a); }
Expr operator+(double a, const Expr& b) { return Expr::constant(a) + b; }
Expr operator+(const Expr& a, double b) { return a + Expr::constant(b); }
Expr operator-(double a, const Expr& b) { return Expr::constant(a) - b; }
Expr operator-(const Expr& a, double b) { return a - Expr::constant(b); }
Expr operator*(double a, const Expr& b) { return Expr::constant(a) * b; }
Expr operator*(const Expr& a, double b) { return a * Expr::constant(b); }
Expr operator/(const Expr& a, double b) { return a / Expr::constant(b); }
Expr operator/(double a, const Expr& b) { return Expr::constant(a) / b; }

Expr exp(const Expr& e) { return Expr::unary(Op::Exp, e); }
Expr sin(const Expr& e) { return Expr::unary(Op::Sin, e); }
Expr cos(const Expr& e) { return Expr::unary(Op::Cos, e); }
Expr sinh(const Expr& e) { return Expr::unary(Op::Sinh, e); }
Expr cosh(const Expr& e) { return Expr::unary(Op::Cosh, e); }
Expr tanh(const Expr& e) { return Expr::unary(Op::Tanh, e); }
Expr sqrt(const Expr& e) { return Expr::unary(Op::Sqrt, e); }
Expr ln(const Expr& e) { return Expr::unary(Op::Ln, e); }
Expr pow(const Expr& base, double exponent) { return Expr::power(base, exponent); }

const char* op_name(Op op) {
  switch (op) {
    case Op::Constant: return "const";
    case Op::Variable: return "x";
    case Op::Neg: return "neg";
    case Op::Exp: return "exp";
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Sinh: return "sinh";
    case Op::Cosh: return "cosh";
    case Op::Tanh: return "tanh";
    case Op::Sqrt: return "sqrt";
    case Op::Ln: return "ln";
    case Op::Pow: return "pow";
    case Op::Add: return "add";
    case Op::Sub: return "sub";
    case Op::Mul: return "mul";
    case Op::Div: return "div";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// differentiation

Expr differentiate(const Expr& e) {
  if (!e.depends_on_x()) return Expr::constant(0.0);
  auto kids = e.children();
  switch (e.op()) {
    case Op::Constant:
      return Expr::constant(0.0);
    case Op::Variable:
      return Expr::constant(1.0);
    case Op::Neg:
      return -differentiate(kids[0]);
    case Op::Add:
      return differentiate(kids[0]) + differentiate(kids[1]);
    case Op::Sub:
      return differentiate(kids[0]) - differentiate(kids[1]);
    case Op::Mul: {
      const Expr& u = kids[0];
      const Expr& v = kids[1];
      return differentiate(u) * v + u * differentiate(v);
    }
    case Op::Div: {
      const Expr& u = kids[0];
      const Expr& v = kids[1];
      if (!v.depends_on_x()) return differentiate(u) / v;
      return (differentiate(u) * v - u * differentiate(v)) / pow(v, 2.0);
    }
    case Op::Pow: {
      const Expr& u = kids[0];
      double c = e.value();
      return c * pow(u, c - 1.0) * differentiate(u);
    }
    default:
      break;
  }

  const Expr& u = kids[0];
  Expr du = differentiate(u);
  switch (e.op()) {
    case Op::Exp: return e * du;
    case Op::Sin: return cos(u) * du;
    case Op::Cos: return -(sin(u) * du);
    case Op::Sinh: return cosh(u) * du;
    case Op::Cosh: return sinh(u) * du;
    case Op::Tanh: return (1.0 - pow(e, 2.0)) * du;
    case Op::Sqrt: return du / (2.0 * e);
    case Op::Ln: return du / u;
    default: break;
  }
  throw std::logic_error("differentiate: unhandled op");
}

Expr differentiate(const Expr& e, int times) {
  Expr d = e;
  for (int i = 0; i < times; ++i) d = differentiate(d);
  return d;
}

// ---------------------------------------------------------------------------
// evaluation

namespace {

double checked(double v, Op op) {
  if (std::isnan(v))
    throw DomainError(std::string("domain error in ") + op_name(op));
  if (std::isinf(v))
    throw OverflowError(std::string("overflow in ") + op_name(op));
  return v;
}

}  // namespace

double evaluate(const Expr& e, double x) {
  auto kids = e.children();
  switch (e.op()) {
    case Op::Constant:
      return e.value();
    case Op::Variable:
      return x;
    case Op::Pow: {
      double b = evaluate(kids[0], x);
      if (b < 0.0 && !is_integer(e.value()))
        throw DomainError("negative base raised to non-integer power");
      if (b == 0.0 && e.value() < 0.0)
        throw DomainError("zero raised to negative power");
      return checked(std::pow(b, e.value()), Op::Pow);
    }
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div: {
      double a = evaluate(kids[0], x);
      double b = evaluate(kids[1], x);
      if (e.op() == Op::Div && b == 0.0) throw DomainError("division by zero");
      return checked(apply_binary(e.op(), a, b), e.op());
    }
    default: {
      double u = evaluate(kids[0], x);
      if (e.op() == Op::Ln && u <= 0.0)
        throw DomainError("ln of non-positive argument");
      if (e.op() == Op::Sqrt && u < 0.0)
        throw DomainError("sqrt of negative argument");
      return checked(apply_unary(e.op(), u), e.op());
    }
  }
}

// ---------------------------------------------------------------------------
// printing

namespace {

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void print(const Expr& e, std::string& out) {
  auto kids = e.children();
  switch (e.op()) {
    case Op::Constant:
      if (std::signbit(e.value()) && e.value() != 0.0) {
        out += "(-";
        out += format_number(-e.value());
        out += ')';
      } else {
        out += format_number(std::fabs(e.value()));
      }
      return;
    case Op::Variable:
      out += 'x';
      return;
    case Op::Neg:
      out += "(-";
      print(kids[0], out);
      out += ')';
      return;
    case Op::Pow:
      out += '(';
      print(kids[0], out);
      out += ")^(";
      print(Expr::constant(e.value()), out);
      out += ')';
      return;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div: {
      static constexpr char symbols[] = {'+', '-', '*', '/'};
      out += '(';
      print(kids[0], out);
      out += ' ';
      out += symbols[static_cast<int>(e.op()) - static_cast<int>(Op::Add)];
      out += ' ';
      print(kids[1], out);
      out += ')';
      return;
    }
    default:
      out += op_name(e.op());
      out += '(';
      print(kids[0], out);
      out += ')';
      return;
  }
}

}  // namespace

std::string to_string(const Expr& e) {
  std::string out;
  print(e, out);
  return out;
}

}  // namespace pseudospec
