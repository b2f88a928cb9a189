#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace pseudospec {

// Uniform grid x_i = x_min + i*h, i = 0..n-1. n is odd so the midpoint is a
// node. interior_margin points at each edge are excluded from interior-only
// checks.
class Grid {
 public:
  Grid(double x_min, double x_max, std::size_t n,
       std::size_t interior_margin = 2);

  double x_min() const noexcept { return x_min_; }
  double x_max() const noexcept { return x_max_; }
  std::size_t size() const noexcept { return n_; }
  double spacing() const noexcept { return h_; }
  std::size_t interior_margin() const noexcept { return margin_; }
  std::size_t midpoint_index() const noexcept { return n_ / 2; }

  double x(std::size_t i) const noexcept {
    return i == n_ - 1 ? x_max_ : x_min_ + static_cast<double>(i) * h_;
  }
  std::vector<double> points() const;

  // [first_interior, last_interior] are the node indices used by
  // interior-only checks.
  std::size_t first_interior() const noexcept { return margin_; }
  // Below first_interior() when the margins cover the whole grid.
  std::size_t last_interior() const noexcept {
    return n_ > margin_ ? n_ - 1 - margin_ : 0;
  }

  // Same interval with h/2 (2n-1 nodes).
  Grid refined() const;

 private:
  double x_min_, x_max_;
  std::size_t n_;
  double h_;
  std::size_t margin_;
};

// Complex samples of a function on a grid; values are finite.
struct ComplexField {
  ComplexField(Grid grid, std::vector<std::complex<double>> values);

  Grid grid;
  std::vector<std::complex<double>> values;
};

// Trapezoid-rule antiderivative F with F[base_index] = 0.
std::vector<double> cumulative_integral(std::span<const double> samples,
                                        const Grid& grid,
                                        std::size_t base_index);

// Trapezoid rule over the whole grid.
double trapezoid(std::span<const double> samples, const Grid& grid);

enum class Normalizability { Normalizable, NotNormalizable, Indeterminate };

const char* to_string(Normalizability v);

struct NormalizabilityThresholds {
  // Normalizable when the last relative increase of I(L) is below plateau
  // and smaller than the one before it.
  double plateau = 1e-6;
  // NotNormalizable when I(L_k) / I(L_{k-2}) reaches growth_factor.
  double growth_factor = 2.0;
};

struct NormalizabilityReport {
  Normalizability verdict = Normalizability::Indeterminate;
  std::vector<double> widths;
  // I(L) = integral of |phi|^2 over [-L, L]; shorter than widths when the
  // builder overflowed.
  std::vector<double> integrals;
  bool overflowed = false;
  std::string reason;
};

using FieldBuilder = std::function<ComplexField(double half_width)>;

// Growing-domain estimate of the L2 norm. widths must be strictly increasing
// with at least 4 entries. OverflowError thrown by the builder counts as
// divergence.
NormalizabilityReport l2_norm_growth(const FieldBuilder& phi_builder,
                                     std::span<const double> widths,
                                     const NormalizabilityThresholds& t = {});

}  // namespace pseudospec
