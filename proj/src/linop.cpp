#include "pseudospec/linop.hpp"

#include <cmath>

#include "pseudospec/errors.hpp"

namespace pseudospec {

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CVector ComplexMatrix::apply(std::span<const cplx> v) const {
  if (v.size() != n_) throw DimensionMismatch("matrix-vector size mismatch");
  CVector out(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    const cplx* r = data_.data() + i * n_;
    cplx acc = 0.0;
    for (std::size_t j = 0; j < n_; ++j)
      if (r[j] != 0.0) acc += r[j] * v[j];
    out[i] = acc;
  }
  return out;
}

CVector ComplexMatrix::apply_adjoint(std::span<const cplx> v) const {
  if (v.size() != n_) throw DimensionMismatch("matrix-vector size mismatch");
  CVector out(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    const cplx* r = data_.data() + i * n_;
    const cplx vi = v[i];
    if (vi == 0.0) continue;
    for (std::size_t j = 0; j < n_; ++j)
      if (r[j] != 0.0) out[j] += std::conj(r[j]) * vi;
  }
  return out;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

bool ComplexMatrix::all_finite() const {
  for (const auto& z : data_)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

double ComplexMatrix::frobenius_norm() const {
  double acc = 0.0;
  for (const auto& z : data_) acc += std::norm(z);
  return std::sqrt(acc);
}

cplx ComplexMatrix::trace() const {
  cplx acc = 0.0;
  for (std::size_t i = 0; i < n_; ++i) acc += (*this)(i, i);
  return acc;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.size() != b.size()) throw DimensionMismatch("matrix product size mismatch");
  const std::size_t n = a.size();
  ComplexMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto dst = out.row(i);
    for (std::size_t k = 0; k < n; ++k) {
      const cplx aik = a(i, k);
      if (aik == 0.0) continue;
      auto src = b.row(k);
      for (std::size_t j = 0; j < n; ++j) dst[j] += aik * src[j];
    }
  }
  return out;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.size() != b.size()) throw DimensionMismatch("matrix difference size mismatch");
  ComplexMatrix out = a;
  auto d = out.data();
  auto s = b.data();
  for (std::size_t k = 0; k < d.size(); ++k) d[k] -= s[k];
  return out;
}

namespace {

void require_grid_length(std::size_t len, const Grid& grid, const char* what) {
  if (len != grid.size())
    throw DimensionMismatch(std::string(what) + " length does not match grid");
}

}  // namespace

ComplexMatrix discretize_hamiltonian(const ComplexField& potential) {
  const Grid& grid = potential.grid;
  const std::size_t m = grid.size() - 2;
  const double inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
  ComplexMatrix H(m);
  for (std::size_t k = 0; k < m; ++k) {
    H(k, k) = 2.0 * inv_h2 + potential.values[k + 1];
    if (k > 0) H(k, k - 1) = -inv_h2;
    if (k + 1 < m) H(k, k + 1) = -inv_h2;
  }
  return H;
}

ComplexMatrix discretize_O(std::span<const double> f, std::span<const double> g,
                           const Grid& grid, bool adjoint) {
  require_grid_length(f.size(), grid, "f");
  require_grid_length(g.size(), grid, "g");
  const std::size_t m = grid.size() - 2;
  const double d = 1.0 / (2.0 * grid.spacing());
  const double sign = adjoint ? -1.0 : 1.0;
  ComplexMatrix O(m);
  for (std::size_t k = 0; k < m; ++k) {
    O(k, k) = cplx(f[k + 1], adjoint ? -g[k + 1] : g[k + 1]);
    if (k > 0) O(k, k - 1) = -sign * d;
    if (k + 1 < m) O(k, k + 1) = sign * d;
  }
  return O;
}

ComplexMatrix build_eta(std::span<const double> f, std::span<const double> g,
                        const Grid& grid, EtaMode mode,
                        std::span<const double> f_prime,
                        std::span<const double> g_prime) {
  if (mode == EtaMode::Composed)
    return discretize_O(f, g, grid, true) * discretize_O(f, g, grid, false);

  require_grid_length(f.size(), grid, "f");
  require_grid_length(g.size(), grid, "g");
  require_grid_length(f_prime.size(), grid, "f'");
  require_grid_length(g_prime.size(), grid, "g'");
  const std::size_t m = grid.size() - 2;
  const double h = grid.spacing();
  const double inv_h2 = 1.0 / (h * h);
  const double d = 1.0 / (2.0 * h);
  ComplexMatrix eta(m);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t i = k + 1;
    // -2ig d/dx: row k gets -2ig_i * (+-1/(2h)) on the neighbours
    const cplx drift(0.0, -2.0 * g[i]);
    eta(k, k) = 2.0 * inv_h2 +
                cplx(f[i] * f[i] - f_prime[i] + g[i] * g[i], -g_prime[i]);
    if (k > 0) eta(k, k - 1) = -inv_h2 - drift * d;
    if (k + 1 < m) eta(k, k + 1) = -inv_h2 + drift * d;
  }
  return eta;
}

CVector interior(const ComplexField& field) { return interior(field.values); }

CVector interior(std::span<const cplx> grid_values) {
  if (grid_values.size() < 3) throw DimensionMismatch("field too short");
  return CVector(grid_values.begin() + 1, grid_values.end() - 1);
}

double interior_norm(std::span<const cplx> v, const Grid& grid) {
  if (v.size() != grid.size() - 2)
    throw DimensionMismatch("interior vector length does not match grid");
  double acc = 0.0;
  for (std::size_t i = grid.first_interior(); i <= grid.last_interior(); ++i)
    acc += std::norm(v[i - 1]);
  return std::sqrt(acc * grid.spacing());
}

ResidualReport pseudo_hermiticity_residual(const ComplexMatrix& H,
                                           const ComplexMatrix& eta,
                                           std::span<const CVector> probes,
                                           const Grid& grid) {
  if (H.size() != eta.size() || H.size() != grid.size() - 2)
    throw DimensionMismatch("H, eta and grid disagree in size");
  // eta H couples nodes up to three apart; rows closer than that to an end
  // node see the Dirichlet cut rather than the construction.
  const Grid rows(grid.x_min(), grid.x_max(), grid.size(),
                  std::max<std::size_t>(grid.interior_margin(), 4));
  ResidualReport report{"eta H = H^+ eta", grid.spacing(), 0.0, {}, {}};
  for (const CVector& p : probes) {
    if (p.size() != H.size()) throw DimensionMismatch("probe length mismatch");
    CVector left = eta.apply(H.apply(p));
    CVector right = H.apply_adjoint(eta.apply(p));
    CVector diff(left.size());
    for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = left[k] - right[k];
    const double scale = interior_norm(left, rows);
    if (scale == 0.0) throw ZeroVector("eta H annihilates the probe");
    report.residual = std::max(report.residual, interior_norm(diff, rows) / scale);
  }
  return report;
}

ResidualReport convergence(const ResidualReport& coarse, const ResidualReport& fine) {
  ResidualReport out = fine;
  out.ratio = coarse.residual > 0.0 ? fine.residual / coarse.residual : 0.0;
  out.order = (fine.residual > 0.0 && coarse.residual > 0.0)
                  ? std::log2(coarse.residual / fine.residual) /
                        std::log2(coarse.h / fine.h)
                  : 0.0;
  return out;
}

double eigen_residual(const ComplexMatrix& H, const ComplexField& phi, cplx energy) {
  CVector v = interior(phi);
  if (v.size() != H.size()) throw DimensionMismatch("phi does not match H");
  const double norm = interior_norm(v, phi.grid);
  if (norm == 0.0) throw ZeroVector("phi vanishes on the interior");
  CVector r = H.apply(v);
  for (std::size_t k = 0; k < r.size(); ++k) r[k] -= energy * v[k];
  return interior_norm(r, phi.grid) / norm;
}

double kernel_residual(const ComplexMatrix& O, const ComplexField& phi) {
  CVector v = interior(phi);
  if (v.size() != O.size()) throw DimensionMismatch("phi does not match O");
  const double norm = interior_norm(v, phi.grid);
  if (norm == 0.0) throw ZeroVector("phi vanishes on the interior");
  return interior_norm(O.apply(v), phi.grid) / norm;
}

cplx quadratic_form(const ComplexMatrix& a, std::span<const cplx> psi) {
  CVector ap = a.apply(psi);
  cplx acc = 0.0;
  for (std::size_t k = 0; k < psi.size(); ++k) acc += std::conj(psi[k]) * ap[k];
  return acc;
}

}  // namespace pseudospec
