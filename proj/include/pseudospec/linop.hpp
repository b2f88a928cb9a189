#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pseudospec/grid.hpp"

namespace pseudospec {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

// Dense square complex matrix, row-major.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t n) : n_(n), data_(n * n) {}

  static ComplexMatrix identity(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const {
    return data_[i * n_ + j];
  }
  std::span<cplx> row(std::size_t i) { return {data_.data() + i * n_, n_}; }
  std::span<const cplx> row(std::size_t i) const {
    return {data_.data() + i * n_, n_};
  }
  std::span<cplx> data() noexcept { return data_; }
  std::span<const cplx> data() const noexcept { return data_; }

  // A v
  CVector apply(std::span<const cplx> v) const;
  // A^H v
  CVector apply_adjoint(std::span<const cplx> v) const;
  ComplexMatrix adjoint() const;

  bool all_finite() const;
  double frobenius_norm() const;
  cplx trace() const;

 private:
  std::size_t n_ = 0;
  std::vector<cplx> data_;
};

// Zero entries of the left factor are skipped, so banded products are cheap.
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);

// Operators act on the n-2 interior nodes of the grid (Dirichlet: the
// wavefunction is pinned to 0 at both end nodes). Vector index k corresponds
// to grid node k + 1.

// -d^2/dx^2 + V with the 3-point stencil (-1, 2, -1)/h^2.
ComplexMatrix discretize_hamiltonian(const ComplexField& potential);

// d/dx + f + ig with the central difference, or -d/dx + f - ig when adjoint
// is set. The adjoint matrix is exactly the conjugate transpose of the plain
// one.
ComplexMatrix discretize_O(std::span<const double> f, std::span<const double> g,
                           const Grid& grid, bool adjoint);

enum class EtaMode { Composed, Direct };

// Composed: O^H O (exactly Hermitian PSD). Direct: the second-order form
// -d^2/dx^2 - 2ig d/dx + f^2 - f' + g^2 - ig' with the 3-point second
// difference; needs f' and g'.
ComplexMatrix build_eta(std::span<const double> f, std::span<const double> g,
                        const Grid& grid, EtaMode mode,
                        std::span<const double> f_prime = {},
                        std::span<const double> g_prime = {});

// Interior restriction of a grid field (drops the two end nodes).
CVector interior(const ComplexField& field);
CVector interior(std::span<const cplx> grid_values);

// Discrete L2 norm sqrt(h * sum |v_k|^2) over nodes first_interior..
// last_interior of the grid; v is an interior vector.
double interior_norm(std::span<const cplx> v, const Grid& grid);

struct ResidualReport {
  std::string relation;
  double h = 0.0;
  double residual = 0.0;
  // Filled by convergence(): residual(h/2) / residual(h) and log2 of its
  // inverse.
  std::optional<double> ratio;
  std::optional<double> order;
};

// max over probes of |(eta H - H^H eta) p| / |eta H p| on interior nodes.
ResidualReport pseudo_hermiticity_residual(const ComplexMatrix& H,
                                           const ComplexMatrix& eta,
                                           std::span<const CVector> probes,
                                           const Grid& grid);

// Combine reports from grids h (coarse) and h/2 (fine).
ResidualReport convergence(const ResidualReport& coarse,
                           const ResidualReport& fine);

// |H phi - E phi| / |phi| on interior nodes. Throws ZeroVector.
double eigen_residual(const ComplexMatrix& H, const ComplexField& phi,
                      cplx energy);

// |O phi| / |phi| on interior nodes. Throws ZeroVector.
double kernel_residual(const ComplexMatrix& O, const ComplexField& phi);

// psi^H A psi
cplx quadratic_form(const ComplexMatrix& a, std::span<const cplx> psi);

}  // namespace pseudospec
