#include "pseudospec/model.hpp"

#include <algorithm>
#include <cmath>

#include "pseudospec/errors.hpp"

namespace pseudospec {

namespace {

// Series order used around simple zeros; the window is 10 h capped so the
// expansion stays well inside the convergence radius of typical g.
constexpr std::size_t kSeriesOrder = 24;
constexpr double kZeroWindowFactor = 10.0;
constexpr double kZeroWindowCap = 0.1;
constexpr double kBisectionTol = 1e-12;
constexpr double kSimpleSlopeMin = 1e-8;
constexpr double kRegularityTol = 1e-8;

using Series = std::vector<double>;

Series mul(const Series& a, const Series& b, std::size_t n) {
  Series w(n, 0.0);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j <= k; ++j) w[k] += a[j] * b[k - j];
  return w;
}

Series divide(const Series& u, const Series& v) {
  Series w(std::min(u.size(), v.size()), 0.0);
  for (std::size_t k = 0; k < w.size(); ++k) {
    double acc = u[k];
    for (std::size_t j = 1; j <= k; ++j) acc -= v[j] * w[k - j];
    w[k] = acc / v[0];
  }
  return w;
}

}  // namespace

ModelSpec ModelSpec::with_kernel(Expr g, double e_imag, double beta) {
  ModelSpec s;
  s.g = std::move(g);
  s.alpha = e_imag * e_imag;
  s.beta = beta;
  s.e_imag = e_imag;
  return s;
}

double series_value(std::span<const double> c, double dx, int derivative) {
  const auto d = static_cast<std::size_t>(derivative);
  double acc = 0.0;
  for (std::size_t k = c.size(); k-- > d;) {
    double factor = 1.0;
    for (std::size_t j = 0; j < d; ++j) factor *= static_cast<double>(k - j);
    acc = acc * dx + factor * c[k];
  }
  return acc;
}

// ---------------------------------------------------------------------------

ZeroExpansion::ZeroExpansion(const Expr& g, SimpleZero zero, std::size_t order)
    : zero_(zero), g_(taylor_coefficients(g, zero.location, order)) {
  g_[0] = 0.0;
}

std::vector<double> ZeroExpansion::superpotential_series(double e_imag) const {
  const double slope = g_[1];
  if (std::fabs(e_imag + slope) > kRegularityTol * std::max(1.0, std::fabs(slope)))
    throw SingularSuperpotential(
        "g vanishes at x = " + std::to_string(zero_.location) +
        " but e_imag + g'(x0) = " + std::to_string(e_imag + slope) +
        "; a regular f needs e_imag = " + std::to_string(-slope));
  const std::size_t m = g_.size() - 1;
  // -(e_imag + g')/(2g) with the common factor (x - x0) removed
  Series num(m - 1), den(m - 1);
  for (std::size_t k = 1; k < m; ++k) {
    num[k - 1] = -static_cast<double>(k + 1) * g_[k + 1];
    den[k - 1] = 2.0 * g_[k];
  }
  return divide(num, den);
}

std::vector<double> ZeroExpansion::ratio_series(double alpha) const {
  const std::size_t m = g_.size() - 2;
  Series gp(m), gpp(m);
  for (std::size_t k = 0; k < m; ++k) {
    gp[k] = static_cast<double>(k + 1) * g_[k + 1];
    gpp[k] = static_cast<double>((k + 1) * (k + 2)) * g_[k + 2];
  }
  Series num = mul(g_, gpp, m);
  Series gp2 = mul(gp, gp, m);
  Series den = mul(g_, g_, m);
  for (std::size_t k = 0; k < m; ++k) {
    num[k] = 2.0 * num[k] - gp2[k];
    den[k] *= 4.0;
  }
  num[0] += alpha;
  const double scale = std::max({1.0, gp2[0], std::fabs(alpha)});
  if (std::fabs(num[0]) > kRegularityTol * scale) return {};
  // num[1] vanishes identically when g(x0) = 0; strip the double zero.
  Series n2(num.begin() + 2, num.end()), d2(den.begin() + 2, den.end());
  return divide(n2, d2);
}

// ---------------------------------------------------------------------------

std::vector<SimpleZero> find_simple_zeros(const Expr& g, const Expr& g_prime,
                                          const Grid& grid) {
  const std::size_t n = grid.size();
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = evaluate(g, grid.x(i));

  std::vector<SimpleZero> zeros;
  auto accept = [&](double x0, double scale) {
    double gx = evaluate(g, x0);
    if (std::fabs(gx) > 1e-8 * std::max(1.0, scale))
      throw PotentialSingular("g changes sign through a singularity near x = " +
                              std::to_string(x0));
    double slope = evaluate(g_prime, x0);
    if (std::fabs(slope) <= kSimpleSlopeMin)
      throw NonSimpleZero("zero of g at x = " + std::to_string(x0) +
                          " is not simple (g' = " + std::to_string(slope) + ")");
    zeros.push_back({x0, slope});
  };

  for (std::size_t i = 0; i < n; ++i) {
    if (values[i] == 0.0) {
      accept(grid.x(i), 0.0);
      continue;
    }
    if (i == 0 || values[i - 1] == 0.0) continue;
    if ((values[i - 1] < 0.0) == (values[i] < 0.0)) continue;
    double a = grid.x(i - 1), b = grid.x(i);
    double ga = values[i - 1];
    while (b - a > kBisectionTol) {
      double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      double gm = evaluate(g, mid);
      if (gm == 0.0) {
        a = b = mid;
        break;
      }
      if ((gm < 0.0) == (ga < 0.0)) {
        a = mid;
        ga = gm;
      } else {
        b = mid;
      }
    }
    accept(0.5 * (a + b), std::max(std::fabs(values[i - 1]), std::fabs(values[i])));
  }
  return zeros;
}

// ---------------------------------------------------------------------------

Model::Model(ModelSpec spec, const Grid& domain)
    : spec_(std::move(spec)),
      g1_(differentiate(spec_.g)),
      g2_(differentiate(g1_)),
      g3_(differentiate(g2_)),
      window_(std::min(kZeroWindowFactor * domain.spacing(), kZeroWindowCap)) {
  if (!std::isfinite(spec_.alpha) || !std::isfinite(spec_.beta) ||
      (spec_.e_imag && !std::isfinite(*spec_.e_imag)))
    throw InvalidSpec("alpha, beta and e_imag must be finite");
  bool all_zero = true;
  for (std::size_t i = 0; i < domain.size() && all_zero; ++i)
    all_zero = evaluate(spec_.g, domain.x(i)) == 0.0;
  if (all_zero) throw InvalidSpec("g vanishes identically on the domain");
  zeros_ = find_simple_zeros(spec_.g, g1_, domain);
  for (const auto& z : zeros_) expansions_.emplace_back(spec_.g, z, kSeriesOrder);
  if (spec_.e_imag) {
    f_ = -(*spec_.e_imag + g1_) / (2.0 * spec_.g);
    f1_ = differentiate(f_);
    f2_ = differentiate(f1_);
  }
}

const ZeroExpansion* Model::expansion_near(double x) const {
  for (const auto& e : expansions_)
    if (std::fabs(x - e.zero().location) < window_) return &e;
  return nullptr;
}

double Model::g(double x) const { return evaluate(spec_.g, x); }

double Model::g_derivative(double x, int order) const {
  switch (order) {
    case 0: return evaluate(spec_.g, x);
    case 1: return evaluate(g1_, x);
    case 2: return evaluate(g2_, x);
    case 3: return evaluate(g3_, x);
    default: throw std::invalid_argument("g_derivative: order must be 0..3");
  }
}

bool Model::superpotential_regular(double e_imag) const {
  for (const auto& z : zeros_)
    if (std::fabs(e_imag + z.slope) >
        kRegularityTol * std::max(1.0, std::fabs(z.slope)))
      return false;
  return true;
}

double Model::superpotential_at(double x, double e_imag, int derivative) const {
  if (const ZeroExpansion* e = expansion_near(x)) {
    Series q = e->superpotential_series(e_imag);
    return series_value(q, x - e->zero().location, derivative);
  }
  if (evaluate(spec_.g, x) == 0.0)
    throw SingularSuperpotential("g vanishes at x = " + std::to_string(x) +
                                 " outside any resolved simple zero");
  if (e_imag == *spec_.e_imag) {
    switch (derivative) {
      case 0: return evaluate(f_, x);
      case 1: return evaluate(f1_, x);
      case 2: return evaluate(f2_, x);
      default: break;
    }
  }
  throw std::invalid_argument("superpotential: derivative order must be 0..2");
}

double Model::superpotential(double x, int derivative) const {
  if (!spec_.e_imag)
    throw InvalidSpec("the superpotential needs e_imag");
  return superpotential_at(x, *spec_.e_imag, derivative);
}

double Model::fsq_minus_fprime(double x) const {
  return fsq_minus_fprime(x, spec_.alpha);
}

double Model::fsq_minus_fprime(double x, double alpha) const {
  if (const ZeroExpansion* e = expansion_near(x)) {
    Series r = e->ratio_series(alpha);
    if (!r.empty()) return series_value(r, x - e->zero().location);
  }
  const double g0 = evaluate(spec_.g, x);
  if (g0 == 0.0)
    throw PotentialSingular("4g^2 vanishes at x = " + std::to_string(x) +
                            " and the numerator does not");
  const double r1 = evaluate(g1_, x) / g0;
  const double r2 = evaluate(g2_, x) / g0;
  const double value = 0.25 * (2.0 * r2 - r1 * r1 + (alpha / g0) / g0);
  if (!std::isfinite(value))
    throw OverflowError("(2gg'' - g'^2 + alpha)/(4g^2) is not representable at x = " +
                        std::to_string(x));
  return value;
}

std::complex<double> Model::potential(double x) const {
  const double g0 = evaluate(spec_.g, x);
  const double re = fsq_minus_fprime(x) - g0 * g0 + spec_.beta;
  const double im = -2.0 * evaluate(g1_, x);
  if (!std::isfinite(re))
    throw OverflowError("Re V is not representable at x = " + std::to_string(x));
  return {re, im};
}

// ---------------------------------------------------------------------------

SampledFields sample_fields(const Model& model, const Grid& grid) {
  const std::size_t n = grid.size();
  SampledFields s;
  s.g.resize(n);
  s.g_prime.resize(n);
  s.potential.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = grid.x(i);
    s.g[i] = model.g(x);
    s.g_prime[i] = model.g_derivative(x, 1);
    s.potential[i] = model.potential(x);
  }
  if (model.has_kernel()) {
    s.f.resize(n);
    s.f_prime.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      s.f[i] = model.superpotential(grid.x(i));
      s.f_prime[i] = model.superpotential(grid.x(i), 1);
    }
  }
  return s;
}

KernelState candidate_eigenfunction(const ModelSpec& spec, const Grid& grid) {
  return candidate_eigenfunction(Model(spec, grid), grid, grid.midpoint_index());
}

KernelState candidate_eigenfunction(const Model& model, const Grid& grid,
                                    std::size_t base_index) {
  const ModelSpec& spec = model.spec();
  if (!spec.e_imag)
    throw InvalidSpec("the kernel eigenfunction needs e_imag");
  const double ei = *spec.e_imag;
  if (std::fabs(ei * ei - spec.alpha) > kKernelConsistencyTol)
    throw InvalidSpec("kernel eigenfunction requires e_imag^2 = alpha (e_imag^2 = " +
                      std::to_string(ei * ei) + ", alpha = " +
                      std::to_string(spec.alpha) + ")");
  for (const auto& z : model.zeros())
    if (!model.superpotential_regular(ei) &&
        std::fabs(ei + z.slope) > kRegularityTol * std::max(1.0, std::fabs(z.slope)))
      throw SingularSuperpotential(
          "f is singular at the zero x = " + std::to_string(z.location) +
          " of g; a regular f needs e_imag = " + std::to_string(-z.slope));

  const std::size_t n = grid.size();
  std::vector<double> f(n), g(n);
  for (std::size_t i = 0; i < n; ++i) {
    f[i] = model.superpotential(grid.x(i));
    g[i] = model.g(grid.x(i));
    if (!std::isfinite(f[i]) || !std::isfinite(g[i]))
      throw QuadratureError("f or g is not finite at x = " + std::to_string(grid.x(i)));
  }
  const std::vector<double> F = cumulative_integral(f, grid, base_index);
  const std::vector<double> G = cumulative_integral(g, grid, base_index);
  std::vector<std::complex<double>> phi(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(F[i]) || !std::isfinite(G[i]))
      throw QuadratureError("integral of f + ig is not finite");
    if (-F[i] > 700.0)
      throw OverflowError("kernel eigenfunction overflows at x = " +
                          std::to_string(grid.x(i)));
    phi[i] = std::exp(-F[i]) * std::complex<double>(std::cos(G[i]), -std::sin(G[i]));
  }
  return {ComplexField(grid, std::move(phi)), {spec.beta, ei}};
}

// ---------------------------------------------------------------------------

const char* to_string(SpectrumClass c) {
  switch (c) {
    case SpectrumClass::RealSpectrumGuaranteed: return "RealSpectrumGuaranteed";
    case SpectrumClass::KnownRealEigenfunction: return "KnownRealEigenfunction";
    case SpectrumClass::RealSpectrumByExclusion: return "RealSpectrumByExclusion";
    case SpectrumClass::ComplexEigenvaluePresent: return "ComplexEigenvaluePresent";
    case SpectrumClass::Indeterminate: return "Indeterminate";
  }
  return "?";
}

namespace {

Grid probe_grid(double half_width, double spacing) {
  auto half = static_cast<std::size_t>(std::llround(half_width / spacing));
  return Grid(-half_width, half_width, 2 * std::max<std::size_t>(half, 2) + 1);
}

}  // namespace

Classification classify(const ModelSpec& spec, const NormalizabilityProbe& probe) {
  Classification out;
  if (spec.alpha < 0.0) {
    out.kind = SpectrumClass::RealSpectrumGuaranteed;
    out.reason = "alpha < 0: e_imag^2 = alpha has no real solution, so no "
                 "kernel element of O is an eigenfunction";
    return out;
  }

  std::vector<double> trial;
  if (spec.e_imag) {
    if (std::fabs(*spec.e_imag * *spec.e_imag - spec.alpha) > kKernelConsistencyTol)
      throw InvalidSpec("e_imag^2 must equal alpha");
    trial.push_back(*spec.e_imag);
  } else if (spec.alpha == 0.0) {
    trial.push_back(0.0);
  } else {
    trial = {-std::sqrt(spec.alpha), std::sqrt(spec.alpha)};
  }

  const Grid widest = probe_grid(probe.widths.back(), probe.spacing);
  const Model scan(spec, widest);
  bool any_regular = false, any_indeterminate = false;
  for (double ei : trial) {
    KernelCandidate cand{ei, scan.superpotential_regular(ei), std::nullopt};
    if (cand.regular) {
      any_regular = true;
      ModelSpec s = spec;
      s.e_imag = ei;
      auto builder = [&](double L) {
        return candidate_eigenfunction(s, probe_grid(L, probe.spacing)).phi;
      };
      cand.l2 = l2_norm_growth(builder, probe.widths, probe.thresholds);
      if (cand.l2->verdict == Normalizability::Normalizable) {
        out.candidates.push_back(cand);
        out.energy = std::complex<double>(spec.beta, ei);
        if (ei == 0.0) {
          out.kind = SpectrumClass::KnownRealEigenfunction;
          out.reason = "alpha = 0: the kernel eigenfunction is square-integrable "
                       "with real eigenvalue beta";
        } else {
          out.kind = SpectrumClass::ComplexEigenvaluePresent;
          out.reason = "alpha > 0: the kernel eigenfunction is square-integrable, "
                       "so beta + i e_imag is an eigenvalue";
        }
        return out;
      }
      if (cand.l2->verdict == Normalizability::Indeterminate) any_indeterminate = true;
    }
    out.candidates.push_back(cand);
  }

  if (any_indeterminate) {
    out.kind = SpectrumClass::Indeterminate;
    out.reason = "normalizability probe inconclusive";
  } else {
    out.kind = SpectrumClass::RealSpectrumByExclusion;
    out.reason = any_regular ? "kernel eigenfunction is not square-integrable"
                             : "no regular kernel eigenfunction";
  }
  return out;
}

// ---------------------------------------------------------------------------

IdentityReport check_identities(const ModelSpec& spec, const Grid& grid) {
  ModelSpec s = spec;
  if (!s.e_imag) {
    if (s.alpha < 0.0)
      throw InvalidSpec("identity checks need e_imag (alpha < 0 has no real e_imag)");
    const Model probe(s, grid);
    const double root = std::sqrt(s.alpha);
    s.e_imag = probe.superpotential_regular(-root) ? -root : root;
  }
  const double ei = *s.e_imag;
  const Model model(s, grid);
  const Model mirrored(s, Grid(-grid.x_max(), -grid.x_min(), grid.size(),
                               grid.interior_margin()));

  IdentityReport r;
  for (std::size_t i = grid.first_interior(); i <= grid.last_interior(); ++i) {
    const double x = grid.x(i);
    const double f = model.superpotential(x);
    const double f1 = model.superpotential(x, 1);
    const double f2 = model.superpotential(x, 2);
    const double q = f * f - f1;
    const double q1 = 2.0 * f * f1 - f2;
    r.integrated_residual = std::max(
        r.integrated_residual, std::fabs(q - model.fsq_minus_fprime(x, ei * ei)));
    const double lhs = 4.0 * model.g_derivative(x, 1) * q + 2.0 * model.g(x) * q1;
    r.unintegrated_residual =
        std::max(r.unintegrated_residual, std::fabs(lhs - model.g_derivative(x, 3)));
    r.evenness_residual =
        std::max(r.evenness_residual, std::fabs(model.g(x) - mirrored.g(-x)));
    r.pt_potential_residual =
        std::max(r.pt_potential_residual,
                 std::abs(std::conj(mirrored.potential(-x)) - model.potential(x)));
  }
  r.pt_symmetric = r.evenness_residual <= kEvennessTol;
  return r;
}

}  // namespace pseudospec
