#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pseudospec/expr.hpp"
#include "pseudospec/grid.hpp"

namespace pseudospec {

// Input to the construction: generating function g and the integration
// constants alpha and beta. e_imag is the imaginary part of the kernel
// eigenvalue, required whenever f or phi is needed.
struct ModelSpec {
  Expr g;
  double alpha = 0.0;
  double beta = 0.0;
  std::optional<double> e_imag;

  // alpha derived as e_imag^2.
  static ModelSpec with_kernel(Expr g, double e_imag, double beta = 0.0);
};

// Tolerance on e_imag^2 = alpha when the kernel state is requested.
inline constexpr double kKernelConsistencyTol = 1e-10;

struct SimpleZero {
  double location;  // g(location) = 0
  double slope;     // g'(location), nonzero
};

// Local power series of g around a simple zero; evaluates the ratios that are
// 0/0 there.
class ZeroExpansion {
 public:
  ZeroExpansion(const Expr& g, SimpleZero zero, std::size_t order);

  const SimpleZero& zero() const noexcept { return zero_; }

  // Coefficients of f = -(e_imag + g') / (2g) about the zero. Throws
  // SingularSuperpotential unless e_imag = -g'(x0).
  std::vector<double> superpotential_series(double e_imag) const;
  // Coefficients of (2 g g'' - g'^2 + alpha) / (4 g^2); empty when the
  // numerator does not vanish to second order (genuine double pole).
  std::vector<double> ratio_series(double alpha) const;
  std::vector<double> g_series() const { return g_; }

 private:
  SimpleZero zero_;
  std::vector<double> g_;
};

// Evaluates sum c_k (x - x0)^k and its derivatives.
double series_value(std::span<const double> c, double dx, int derivative = 0);

// The construction for one spec on one working domain. The domain is scanned
// for simple zeros of g; within zero_window of a zero, quotients are
// evaluated from the local power series instead of by direct division.
class Model {
 public:
  Model(ModelSpec spec, const Grid& domain);

  const ModelSpec& spec() const noexcept { return spec_; }
  std::span<const SimpleZero> zeros() const noexcept { return zeros_; }
  double zero_window() const noexcept { return window_; }
  bool has_kernel() const noexcept { return spec_.e_imag.has_value(); }

  double g(double x) const;
  // derivative order 0..3 of g
  double g_derivative(double x, int order) const;

  // f = -(E_i + g')/(2g) and its first two derivatives.
  double superpotential(double x, int derivative = 0) const;
  // (2 g g'' - g'^2 + alpha) / (4 g^2), the right-hand side for f^2 - f'.
  double fsq_minus_fprime(double x) const;
  double fsq_minus_fprime(double x, double alpha) const;
  // Re V = (2 g g'' - g'^2 + alpha)/(4 g^2) - g^2 + beta, Im V = -2 g'.
  std::complex<double> potential(double x) const;

  // True when every zero admits a regular f for this e_imag.
  bool superpotential_regular(double e_imag) const;

 private:
  const ZeroExpansion* expansion_near(double x) const;
  double superpotential_at(double x, double e_imag, int derivative) const;

  ModelSpec spec_;
  Expr g1_, g2_, g3_;
  Expr f_, f1_, f2_;
  std::vector<SimpleZero> zeros_;
  std::vector<ZeroExpansion> expansions_;
  double window_;
};

// Zero detection on grid nodes: exact zeros and sign changes refined by
// bisection. Throws NonSimpleZero when |g'| <= 1e-8 at the refined point.
std::vector<SimpleZero> find_simple_zeros(const Expr& g, const Expr& g_prime,
                                          const Grid& grid);

// Sampled real fields used by the discretization.
struct SampledFields {
  std::vector<double> g, g_prime, f, f_prime;
  std::vector<std::complex<double>> potential;
};

// f and f' are filled only when the ModelSpec carries e_imag.
SampledFields sample_fields(const Model& model, const Grid& grid);

struct KernelState {
  ComplexField phi;
  std::complex<double> energy;
};

// phi = exp(-integral(f + i g)) with phi = 1 at the grid midpoint, and its
// eigenvalue beta + i e_imag. Requires e_imag^2 = alpha.
KernelState candidate_eigenfunction(const ModelSpec& spec, const Grid& grid);
KernelState candidate_eigenfunction(const Model& model, const Grid& grid,
                                    std::size_t base_index);

enum class SpectrumClass {
  RealSpectrumGuaranteed,
  KnownRealEigenfunction,
  RealSpectrumByExclusion,
  ComplexEigenvaluePresent,
  Indeterminate,
};

const char* to_string(SpectrumClass c);

struct NormalizabilityProbe {
  std::vector<double> widths{4.0, 8.0, 16.0, 24.0};
  double spacing = 0.015;
  NormalizabilityThresholds thresholds;
};

struct KernelCandidate {
  double e_imag;
  bool regular;
  std::optional<NormalizabilityReport> l2;
};

struct Classification {
  SpectrumClass kind = SpectrumClass::Indeterminate;
  // Eigenvalue of the kernel state for KnownRealEigenfunction and
  // ComplexEigenvaluePresent.
  std::optional<std::complex<double>> energy;
  std::string reason;
  std::vector<KernelCandidate> candidates;
};

Classification classify(const ModelSpec& spec,
                        const NormalizabilityProbe& probe = {});

struct IdentityReport {
  // max |f^2 - f' - (2gg'' - g'^2 + E_i^2)/(4g^2)| with f from E_i
  double integrated_residual = 0.0;
  // max |4g'Q + 2gQ' - g'''| with Q = f^2 - f'
  double unintegrated_residual = 0.0;
  // max |g(x) - g(-x)|
  double evenness_residual = 0.0;
  bool pt_symmetric = false;
  // max |conj(V(-x)) - V(x)|
  double pt_potential_residual = 0.0;
};

inline constexpr double kEvennessTol = 1e-10;

IdentityReport check_identities(const ModelSpec& spec, const Grid& grid);

}  // namespace pseudospec
