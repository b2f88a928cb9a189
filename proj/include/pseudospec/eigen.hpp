#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "pseudospec/linop.hpp"

namespace pseudospec {

struct EigenOptions {
  bool balance = true;
  // Iteration budget per eigenvalue is max_iterations_factor * max(10, block).
  std::size_t max_iterations_factor = 30;
};

// All eigenvalues of a general complex matrix: balancing, unitary reduction
// to upper Hessenberg form, then single-shift QR with deflation (eigenvalues
// only). Throws NonFinite or NoConvergence.
std::vector<cplx> eigenvalues(ComplexMatrix a, const EigenOptions& options = {});

// Unit eigenvector for an (approximate) eigenvalue by inverse iteration.
CVector eigenvector(const ComplexMatrix& a, cplx lambda);

// LU with partial pivoting; used for inverse iteration and determinants.
class LuFactorization {
 public:
  explicit LuFactorization(ComplexMatrix a);

  bool singular() const noexcept { return singular_; }
  cplx determinant() const;
  CVector solve(CVector b) const;

 private:
  ComplexMatrix lu_;
  std::vector<std::size_t> pivot_;
  int sign_ = 1;
  bool singular_ = false;
};

struct SpectrumReport {
  // Sorted by real part, then imaginary part.
  std::vector<cplx> eigenvalues;
  std::vector<cplx> real_subset;
  std::vector<cplx> complex_subset;
  // Re lambda > energy_ceiling: box-dominated, left unclassified.
  std::vector<cplx> above_ceiling;
  double im_threshold = 0.0;
  double energy_ceiling = 0.0;
};

inline constexpr double kMatrixImThreshold = 1e-6;
inline constexpr double kPhysicsImThreshold = 1e-2;

SpectrumReport spectrum_report(std::vector<cplx> eigs, double im_threshold,
                               double energy_ceiling);

}  // namespace pseudospec
