#include "pseudospec/grid.hpp"

#include <cmath>

#include "pseudospec/errors.hpp"

namespace pseudospec {

Grid::Grid(double x_min, double x_max, std::size_t n,
           std::size_t interior_margin)
    : x_min_(x_min), x_max_(x_max), n_(n), h_(0.0), margin_(interior_margin) {
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_min < x_max))
    throw ConfigError("grid requires finite x_min < x_max");
  if (n < 3) throw ConfigError("grid requires at least 3 points");
  if (n % 2 == 0) throw ConfigError("grid point count must be odd");
  if (interior_margin < 1) throw ConfigError("interior margin must be >= 1");
  h_ = (x_max - x_min) / static_cast<double>(n - 1);
}

std::vector<double> Grid::points() const {
  std::vector<double> xs(n_);
  for (std::size_t i = 0; i < n_; ++i) xs[i] = x(i);
  return xs;
}

Grid Grid::refined() const { return Grid(x_min_, x_max_, 2 * n_ - 1, margin_); }

ComplexField::ComplexField(Grid g, std::vector<std::complex<double>> v)
    : grid(g), values(std::move(v)) {
  if (values.size() != grid.size())
    throw DimensionMismatch("field length does not match grid");
  for (const auto& z : values)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw OverflowError("field sample is not finite");
}

std::vector<double> cumulative_integral(std::span<const double> samples,
                                        const Grid& grid,
                                        std::size_t base_index) {
  const std::size_t n = grid.size();
  if (samples.size() != n)
    throw DimensionMismatch("sample count does not match grid");
  if (base_index >= n) throw DimensionMismatch("base index outside grid");
  const double half_h = 0.5 * grid.spacing();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = base_index + 1; i < n; ++i)
    out[i] = out[i - 1] + half_h * (samples[i - 1] + samples[i]);
  for (std::size_t i = base_index; i-- > 0;)
    out[i] = out[i + 1] - half_h * (samples[i] + samples[i + 1]);
  return out;
}

double trapezoid(std::span<const double> samples, const Grid& grid) {
  if (samples.size() != grid.size())
    throw DimensionMismatch("sample count does not match grid");
  double acc = 0.5 * (samples.front() + samples.back());
  for (std::size_t i = 1; i + 1 < samples.size(); ++i) acc += samples[i];
  return acc * grid.spacing();
}

const char* to_string(Normalizability v) {
  switch (v) {
    case Normalizability::Normalizable: return "Normalizable";
    case Normalizability::NotNormalizable: return "NotNormalizable";
    case Normalizability::Indeterminate: return "Indeterminate";
  }
  return "?";
}

NormalizabilityReport l2_norm_growth(const FieldBuilder& phi_builder,
                                     std::span<const double> widths,
                                     const NormalizabilityThresholds& t) {
  if (widths.size() < 4)
    throw ConfigError("normalizability probe needs at least 4 widths");
  for (std::size_t i = 1; i < widths.size(); ++i)
    if (!(widths[i] > widths[i - 1]))
      throw ConfigError("probe widths must be strictly increasing");

  NormalizabilityReport report;
  report.widths.assign(widths.begin(), widths.end());
  for (double L : widths) {
    double integral = 0.0;
    try {
      ComplexField phi = phi_builder(L);
      std::vector<double> density(phi.values.size());
      for (std::size_t i = 0; i < density.size(); ++i)
        density[i] = std::norm(phi.values[i]);
      integral = trapezoid(density, phi.grid);
    } catch (const OverflowError& e) {
      report.overflowed = true;
      report.verdict = Normalizability::NotNormalizable;
      report.reason = std::string("overflow at L = ") + std::to_string(L) +
                      ": " + e.what();
      return report;
    }
    if (!std::isfinite(integral)) {
      report.overflowed = true;
      report.verdict = Normalizability::NotNormalizable;
      report.reason = "integral of |phi|^2 not representable";
      return report;
    }
    report.integrals.push_back(integral);
  }

  const auto& I = report.integrals;
  const std::size_t k = I.size() - 1;
  if (I[k] <= 0.0) {
    report.reason = "integral of |phi|^2 vanishes on every window";
    return report;
  }
  if (I[k - 2] > 0.0 && I[k] / I[k - 2] >= t.growth_factor) {
    report.verdict = Normalizability::NotNormalizable;
    report.reason = "I(L) keeps growing";
    return report;
  }
  const double last = (I[k] - I[k - 1]) / I[k];
  const double previous = I[k - 1] > 0.0 ? (I[k - 1] - I[k - 2]) / I[k - 1]
                                         : INFINITY;
  // Once both increments sit below the plateau, their order is rounding noise.
  const bool settled = std::fabs(previous) < t.plateau;
  if (std::fabs(last) < t.plateau && (last <= previous || settled)) {
    report.verdict = Normalizability::Normalizable;
    report.reason = "I(L) has converged";
    return report;
  }
  report.reason = "I(L) neither converged nor diverged over the probe widths";
  return report;
}

}  // namespace pseudospec
