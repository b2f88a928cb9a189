#include <cmath>
#include <stdexcept>
#include <vector>

#include "pseudospec/errors.hpp"
#include "pseudospec/expr.hpp"

namespace pseudospec {

namespace {

using Series = std::vector<double>;

void check_finite(const Series& s, Op op) {
  for (double v : s) {
    if (std::isnan(v))
      throw DomainError(std::string("domain error in series ") + op_name(op));
    if (std::isinf(v))
      throw OverflowError(std::string("overflow in series ") + op_name(op));
  }
}

Series mul(const Series& a, const Series& b) {
  Series w(a.size(), 0.0);
  for (std::size_t k = 0; k < w.size(); ++k)
    for (std::size_t j = 0; j <= k; ++j) w[k] += a[j] * b[k - j];
  return w;
}

Series div(const Series& u, const Series& v) {
  if (v[0] == 0.0) throw DomainError("division by zero");
  Series w(u.size(), 0.0);
  for (std::size_t k = 0; k < w.size(); ++k) {
    double acc = u[k];
    for (std::size_t j = 1; j <= k; ++j) acc -= v[j] * w[k - j];
    w[k] = acc / v[0];
  }
  return w;
}

// Paired recurrences for (sin, cos) with sign = -1 and (sinh, cosh) with
// sign = +1, derived from s' = c u', c' = sign * s u'.
void trig_pair(const Series& u, double sign, double s0, double c0, Series& s,
               Series& c) {
  std::size_t n = u.size();
  s.assign(n, 0.0);
  c.assign(n, 0.0);
  s[0] = s0;
  c[0] = c0;
  for (std::size_t k = 1; k < n; ++k) {
    double as = 0.0, ac = 0.0;
    for (std::size_t j = 1; j <= k; ++j) {
      as += static_cast<double>(j) * u[j] * c[k - j];
      ac += static_cast<double>(j) * u[j] * s[k - j];
    }
    s[k] = as / static_cast<double>(k);
    c[k] = sign * ac / static_cast<double>(k);
  }
}

Series series_exp(const Series& u) {
  std::size_t n = u.size();
  Series w(n, 0.0);
  w[0] = std::exp(u[0]);
  for (std::size_t k = 1; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t j = 1; j <= k; ++j)
      acc += static_cast<double>(j) * u[j] * w[k - j];
    w[k] = acc / static_cast<double>(k);
  }
  return w;
}

// t' = (1 - t^2) u'
Series series_tanh(const Series& u) {
  std::size_t n = u.size();
  Series t(n, 0.0), p(n, 0.0);
  t[0] = std::tanh(u[0]);
  p[0] = 1.0 - t[0] * t[0];
  for (std::size_t k = 1; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t j = 1; j <= k; ++j)
      acc += static_cast<double>(j) * u[j] * p[k - j];
    t[k] = acc / static_cast<double>(k);
    double sq = 0.0;
    for (std::size_t j = 0; j <= k; ++j) sq += t[j] * t[k - j];
    p[k] = -sq;
  }
  return t;
}

Series series_sqrt(const Series& u) {
  if (u[0] < 0.0) throw DomainError("sqrt of negative argument");
  if (u[0] == 0.0) throw DomainError("sqrt series at a branch point");
  std::size_t n = u.size();
  Series w(n, 0.0);
  w[0] = std::sqrt(u[0]);
  for (std::size_t k = 1; k < n; ++k) {
    double acc = u[k];
    for (std::size_t j = 1; j < k; ++j) acc -= w[j] * w[k - j];
    w[k] = acc / (2.0 * w[0]);
  }
  return w;
}

Series series_ln(const Series& u) {
  if (u[0] <= 0.0) throw DomainError("ln of non-positive argument");
  std::size_t n = u.size();
  Series w(n, 0.0);
  w[0] = std::log(u[0]);
  for (std::size_t k = 1; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t j = 1; j < k; ++j)
      acc += static_cast<double>(j) * w[j] * u[k - j];
    w[k] = (u[k] - acc / static_cast<double>(k)) / u[0];
  }
  return w;
}

Series series_pow(const Series& u, double c) {
  std::size_t n = u.size();
  bool integral = std::floor(c) == c;
  if (integral && c >= 0.0 && c <= 64.0) {
    Series result(n, 0.0);
    result[0] = 1.0;
    Series base = u;
    for (auto e = static_cast<unsigned>(c); e != 0; e >>= 1) {
      if (e & 1u) result = mul(result, base);
      if (e > 1) base = mul(base, base);
    }
    return result;
  }
  if (u[0] == 0.0) {
    if (integral) throw DomainError("zero raised to negative power");
    throw DomainError("power series at a branch point");
  }
  if (u[0] < 0.0 && !integral)
    throw DomainError("negative base raised to non-integer power");
  // w u' c = w' u
  Series w(n, 0.0);
  w[0] = std::pow(u[0], c);
  for (std::size_t k = 1; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t j = 1; j <= k; ++j)
      acc += (c * static_cast<double>(j) - static_cast<double>(k - j)) * u[j] *
             w[k - j];
    w[k] = acc / (static_cast<double>(k) * u[0]);
  }
  return w;
}

Series eval_series(const Expr& e, double x0, std::size_t n) {
  auto kids = e.children();
  Series out;
  switch (e.op()) {
    case Op::Constant:
      out.assign(n, 0.0);
      out[0] = e.value();
      return out;
    case Op::Variable:
      out.assign(n, 0.0);
      out[0] = x0;
      if (n > 1) out[1] = 1.0;
      return out;
    case Op::Add:
    case Op::Sub: {
      Series a = eval_series(kids[0], x0, n);
      Series b = eval_series(kids[1], x0, n);
      double sign = e.op() == Op::Add ? 1.0 : -1.0;
      for (std::size_t k = 0; k < n; ++k) a[k] += sign * b[k];
      out = std::move(a);
      break;
    }
    case Op::Mul:
      out = mul(eval_series(kids[0], x0, n), eval_series(kids[1], x0, n));
      break;
    case Op::Div:
      out = div(eval_series(kids[0], x0, n), eval_series(kids[1], x0, n));
      break;
    case Op::Pow:
      out = series_pow(eval_series(kids[0], x0, n), e.value());
      break;
    default: {
      Series u = eval_series(kids[0], x0, n);
      Series s, c;
      switch (e.op()) {
        case Op::Neg:
          for (double& v : u) v = -v;
          out = std::move(u);
          break;
        case Op::Exp:
          out = series_exp(u);
          break;
        case Op::Sin:
          trig_pair(u, -1.0, std::sin(u[0]), std::cos(u[0]), s, c);
          out = std::move(s);
          break;
        case Op::Cos:
          trig_pair(u, -1.0, std::sin(u[0]), std::cos(u[0]), s, c);
          out = std::move(c);
          break;
        case Op::Sinh:
          trig_pair(u, 1.0, std::sinh(u[0]), std::cosh(u[0]), s, c);
          out = std::move(s);
          break;
        case Op::Cosh:
          trig_pair(u, 1.0, std::sinh(u[0]), std::cosh(u[0]), s, c);
          out = std::move(c);
          break;
        case Op::Tanh:
          out = series_tanh(u);
          break;
        case Op::Sqrt:
          out = series_sqrt(u);
          break;
        case Op::Ln:
          out = series_ln(u);
          break;
        default:
          throw std::logic_error("taylor: unhandled op");
      }
    }
  }
  check_finite(out, e.op());
  return out;
}

}  // namespace

std::vector<double> taylor_coefficients(const Expr& e, double x0,
                                        std::size_t order) {
  if (!std::isfinite(x0)) throw DomainError("expansion point must be finite");
  return eval_series(e, x0, order + 1);
}

}  // namespace pseudospec
