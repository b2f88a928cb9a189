#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "pseudospec/expr.hpp"
#include "pseudospec/linop.hpp"

namespace testing_support {

using pseudospec::cplx;
using pseudospec::Expr;
using pseudospec::Op;
using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int pick(Rng& rng, int count) {
  return std::uniform_int_distribution<int>(0, count - 1)(rng);
}

// Arbitrary tree over every node kind, depth <= max_depth. May be undefined
// on parts of the line; callers skip points where evaluation throws.
inline Expr random_tree(Rng& rng, int max_depth) {
  if (max_depth <= 0 || pick(rng, 4) == 0)
    return pick(rng, 3) == 0 ? Expr::constant(std::round(uniform(rng, -3, 3) * 4) / 4)
                             : Expr::variable();
  static constexpr Op unary_ops[] = {Op::Neg,  Op::Exp,  Op::Sin,  Op::Cos, Op::Sinh,
                                     Op::Cosh, Op::Tanh, Op::Sqrt, Op::Ln};
  static constexpr Op binary_ops[] = {Op::Add, Op::Sub, Op::Mul, Op::Div};
  switch (pick(rng, 3)) {
    case 0:
      return Expr::unary(unary_ops[pick(rng, 9)], random_tree(rng, max_depth - 1));
    case 1: {
      static constexpr double exponents[] = {2.0, 3.0, -1.0, 0.5, 1.5, -2.0};
      return Expr::power(random_tree(rng, max_depth - 1), exponents[pick(rng, 6)]);
    }
    default:
      return Expr::binary(binary_ops[pick(rng, 4)], random_tree(rng, max_depth - 1),
                          random_tree(rng, max_depth - 1));
  }
}

// Bounded smooth tree: sums and products of sin, cos, tanh of affine maps.
inline Expr random_bounded(Rng& rng, int depth) {
  const Expr x = Expr::variable();
  if (depth <= 0) {
    const Expr arg = uniform(rng, 0.3, 1.5) * x + uniform(rng, -1, 1);
    switch (pick(rng, 3)) {
      case 0: return pseudospec::sin(arg);
      case 1: return pseudospec::cos(arg);
      default: return pseudospec::tanh(arg);
    }
  }
  const Expr a = random_bounded(rng, depth - 1);
  const Expr b = random_bounded(rng, depth - 1);
  switch (pick(rng, 3)) {
    case 0: return a + uniform(rng, -1, 1) * b;
    case 1: return a * b;
    default: return pseudospec::sin(a + b);
  }
}

// Smooth generating function with no zeros on the real line.
inline Expr random_zero_free(Rng& rng) {
  const double sign = pick(rng, 2) ? 1.0 : -1.0;
  const Expr t = random_bounded(rng, 1 + pick(rng, 2));
  if (pick(rng, 2)) return sign * uniform(rng, 0.5, 2.0) * pseudospec::exp(0.5 * t);
  return sign * (1.5 + pseudospec::tanh(t));
}

inline pseudospec::ComplexMatrix random_matrix(Rng& rng, std::size_t n, double scale = 1.0) {
  pseudospec::ComplexMatrix a(n);
  std::normal_distribution<double> normal(0.0, scale);
  for (auto& z : a.data()) z = {normal(rng), normal(rng)};
  return a;
}

inline pseudospec::ComplexMatrix random_hermitian(Rng& rng, std::size_t n) {
  pseudospec::ComplexMatrix a = random_matrix(rng, n);
  pseudospec::ComplexMatrix h(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) h(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
  return h;
}

// Greedy multiset distance: each expected value is matched to the nearest
// unused computed value.
inline double multiset_distance(std::vector<cplx> got, const std::vector<cplx>& want) {
  double worst = 0.0;
  for (const cplx& w : want) {
    auto it = std::min_element(got.begin(), got.end(), [&](cplx a, cplx b) {
      return std::abs(a - w) < std::abs(b - w);
    });
    if (it == got.end()) return INFINITY;
    worst = std::max(worst, std::abs(*it - w));
    got.erase(it);
  }
  return got.empty() ? worst : INFINITY;
}

}  // namespace testing_support
