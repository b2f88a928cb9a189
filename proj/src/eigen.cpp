#include "pseudospec/eigen.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <string>

#include "pseudospec/errors.hpp"

namespace pseudospec {

namespace {

inline double cabs1(cplx z) { return std::fabs(z.real()) + std::fabs(z.imag()); }

// Plane rotation G = [c s; -conj(s) c] with real c >= 0 and G [a; b] = [r; 0].
struct Rotation {
  double c;
  double sr, si;
};

Rotation make_rotation(cplx a, cplx b, cplx& r) {
  const double abs_a = std::abs(a);
  const double abs_b = std::abs(b);
  if (abs_b == 0.0) {
    r = a;
    return {1.0, 0.0, 0.0};
  }
  if (abs_a == 0.0) {
    r = abs_b;
    const cplx s = std::conj(b) / abs_b;
    return {0.0, s.real(), s.imag()};
  }
  const double norm = std::hypot(abs_a, abs_b);
  const cplx phase = a / abs_a;
  const cplx s = phase * std::conj(b) / norm;
  r = phase * norm;
  return {abs_a / norm, s.real(), s.imag()};
}

// Rows x, y of length len (interleaved re/im):
//   x <- c x + s y,  y <- -conj(s) x + c y
inline void rotate_rows(double* __restrict x, double* __restrict y,
                        std::size_t len, const Rotation& g) {
  const double c = g.c, sr = g.sr, si = g.si;
  for (std::size_t j = 0; j < 2 * len; j += 2) {
    const double xr = x[j], xi = x[j + 1];
    const double yr = y[j], yi = y[j + 1];
    x[j] = c * xr + sr * yr - si * yi;
    x[j + 1] = c * xi + sr * yi + si * yr;
    y[j] = c * yr - sr * xr - si * xi;
    y[j + 1] = c * yi - sr * xi + si * xr;
  }
}

// Entries a, b of one row: a <- c a + conj(s) b,  b <- -s a + c b
inline void rotate_pair(double* a, double* b, const Rotation& g) {
  const double c = g.c, sr = g.sr, si = g.si;
  const double ar = a[0], ai = a[1], br = b[0], bi = b[1];
  a[0] = c * ar + sr * br + si * bi;
  a[1] = c * ai + sr * bi - si * br;
  b[0] = c * br - sr * ar + si * ai;
  b[1] = c * bi - sr * ai - si * ar;
}

void balance(ComplexMatrix& a) {
  const std::size_t n = a.size();
  constexpr double radix = 2.0;
  constexpr double sq_radix = radix * radix;
  bool done = false;
  while (!done) {
    done = true;
    for (std::size_t i = 0; i < n; ++i) {
      double c = 0.0, r = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        c += cabs1(a(j, i));
        r += cabs1(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= sq_radix;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= sq_radix;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        const double inv = 1.0 / f;
        for (std::size_t j = 0; j < n; ++j) a(i, j) *= inv;
        for (std::size_t j = 0; j < n; ++j) a(j, i) *= f;
      }
    }
  }
}

void reduce_to_hessenberg(ComplexMatrix& a) {
  const std::size_t n = a.size();
  std::vector<cplx> v, w;
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double tail = 0.0;
    for (std::size_t i = k + 2; i < n; ++i) tail += std::norm(a(i, k));
    if (tail == 0.0) continue;

    const std::size_t m = n - k - 1;
    v.assign(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) v[i] = a(k + 1 + i, k);
    const double xnorm = std::sqrt(tail + std::norm(v[0]));
    const double abs0 = std::abs(v[0]);
    const cplx beta = abs0 == 0.0 ? cplx(-xnorm) : -(v[0] / abs0) * xnorm;
    v[0] -= beta;
    double vnorm2 = 0.0;
    for (const auto& z : v) vnorm2 += std::norm(z);
    const double tau = 2.0 / vnorm2;

    // left: rows k+1.., columns k+1..
    w.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      const cplx cv = std::conj(v[i]);
      auto row = a.row(k + 1 + i);
      for (std::size_t j = k + 1; j < n; ++j) w[j] += cv * row[j];
    }
    for (std::size_t i = 0; i < m; ++i) {
      const cplx tv = tau * v[i];
      auto row = a.row(k + 1 + i);
      for (std::size_t j = k + 1; j < n; ++j) row[j] -= tv * w[j];
    }
    a(k + 1, k) = beta;
    for (std::size_t i = k + 2; i < n; ++i) a(i, k) = 0.0;

    // right: all rows, columns k+1..
    for (std::size_t r = 0; r < n; ++r) {
      auto row = a.row(r);
      cplx s = 0.0;
      for (std::size_t i = 0; i < m; ++i) s += row[k + 1 + i] * v[i];
      s *= tau;
      for (std::size_t i = 0; i < m; ++i) row[k + 1 + i] -= s * std::conj(v[i]);
    }
  }
}

cplx wilkinson_shift(const ComplexMatrix& h, std::size_t i) {
  cplx t = h(i, i);
  const cplx u = std::sqrt(h(i - 1, i)) * std::sqrt(h(i, i - 1));
  double s = cabs1(u);
  if (s == 0.0) return t;
  const cplx x = 0.5 * (h(i - 1, i - 1) - t);
  const double sx = cabs1(x);
  s = std::max(s, sx);
  cplx y = s * std::sqrt((x / s) * (x / s) + (u / s) * (u / s));
  if (sx > 0.0 && (x.real() / sx) * y.real() + (x.imag() / sx) * y.imag() < 0.0)
    y = -y;
  const cplx denom = x + y;
  if (denom == 0.0) return t;
  return t - u * (u / denom);
}

// One implicit single-shift QR sweep on the active block [l, hi]. Column
// rotations for rows above the bulge are deferred and applied row by row
// afterwards, so every update streams through contiguous memory.
void qr_sweep(ComplexMatrix& h, std::size_t l, std::size_t hi, cplx shift,
              std::vector<Rotation>& rots) {
  const std::size_t n = h.size();
  double* base = reinterpret_cast<double*>(h.data().data());
  auto at = [&](std::size_t i, std::size_t j) { return base + 2 * (i * n + j); };

  rots.resize(hi - l);
  for (std::size_t k = l; k < hi; ++k) {
    cplx r;
    Rotation g;
    if (k == l) {
      g = make_rotation(h(l, l) - shift, h(l + 1, l), r);
    } else {
      g = make_rotation(h(k, k - 1), h(k + 1, k - 1), r);
      h(k, k - 1) = r;
      h(k + 1, k - 1) = 0.0;
    }
    rots[k - l] = g;
    rotate_rows(at(k, k), at(k + 1, k), hi - k + 1, g);
    const std::size_t last = std::min(k + 2, hi);
    for (std::size_t row = k + 1; row <= last; ++row)
      rotate_pair(at(row, k), at(row, k + 1), g);
  }
  // Each deferred row is a dependent chain; four rows are interleaved to keep
  // several chains in flight.
  std::size_t row = l;
  for (; row + 4 <= hi; row += 4) {
    double* p0 = at(row, 0);
    double* p1 = at(row + 1, 0);
    double* p2 = at(row + 2, 0);
    double* p3 = at(row + 3, 0);
    for (std::size_t k = row; k < row + 3; ++k) {
      const Rotation& g = rots[k - l];
      rotate_pair(p0 + 2 * k, p0 + 2 * (k + 1), g);
      if (k >= row + 1) rotate_pair(p1 + 2 * k, p1 + 2 * (k + 1), g);
      if (k >= row + 2) rotate_pair(p2 + 2 * k, p2 + 2 * (k + 1), g);
    }
    for (std::size_t k = row + 3; k < hi; ++k) {
      const Rotation& g = rots[k - l];
      rotate_pair(p0 + 2 * k, p0 + 2 * (k + 1), g);
      rotate_pair(p1 + 2 * k, p1 + 2 * (k + 1), g);
      rotate_pair(p2 + 2 * k, p2 + 2 * (k + 1), g);
      rotate_pair(p3 + 2 * k, p3 + 2 * (k + 1), g);
    }
  }
  for (; row < hi; ++row) {
    double* p = at(row, 0);
    for (std::size_t k = row; k < hi; ++k)
      rotate_pair(p + 2 * k, p + 2 * (k + 1), rots[k - l]);
  }
}

}  // namespace

std::vector<cplx> eigenvalues(ComplexMatrix a, const EigenOptions& options) {
  const std::size_t n = a.size();
  if (!a.all_finite()) throw NonFinite("matrix has non-finite entries");
  std::vector<cplx> eig(n);
  if (n == 0) return eig;
  if (n == 1) {
    eig[0] = a(0, 0);
    return eig;
  }
  if (options.balance) balance(a);
  reduce_to_hessenberg(a);

  const double ulp = DBL_EPSILON;
  const double smlnum = DBL_MIN * (static_cast<double>(n) / ulp);
  std::vector<Rotation> rots;

  std::size_t i = n - 1;
  for (;;) {
    std::size_t its = 0;
    const std::size_t itmax =
        options.max_iterations_factor * std::max<std::size_t>(10, i + 1);
    std::size_t l = 0;
    for (;;) {
      // Look for a negligible subdiagonal entry in [0, i].
      std::size_t k = i;
      for (; k > 0; --k) {
        const double sub = cabs1(a(k, k - 1));
        if (sub <= smlnum) break;
        double tst = cabs1(a(k - 1, k - 1)) + cabs1(a(k, k));
        if (tst == 0.0) {
          if (k >= 2) tst += std::fabs(a(k - 1, k - 2).real());
          if (k + 1 <= i) tst += std::fabs(a(k + 1, k).real());
        }
        if (sub <= ulp * tst) {
          const double ab = std::max(sub, cabs1(a(k - 1, k)));
          const double ba = std::min(sub, cabs1(a(k - 1, k)));
          const double aa =
              std::max(cabs1(a(k, k)), cabs1(a(k - 1, k - 1) - a(k, k)));
          const double bb =
              std::min(cabs1(a(k, k)), cabs1(a(k - 1, k - 1) - a(k, k)));
          const double s = aa + ab;
          if (ba * (ab / s) <= std::max(smlnum, ulp * (bb * (aa / s)))) break;
        }
      }
      l = k;
      if (l > 0) a(l, l - 1) = 0.0;
      if (l >= i) break;
      if (its >= itmax)
        throw NoConvergence(l, i,
                            "QR iteration did not converge for block [" +
                                std::to_string(l) + ", " + std::to_string(i) + "]");

      cplx shift;
      if (its == 10) {
        shift = 0.75 * std::fabs(a(l + 1, l).real()) + a(l, l);
      } else if (its == 20) {
        shift = 0.75 * std::fabs(a(i, i - 1).real()) + a(i, i);
      } else {
        shift = wilkinson_shift(a, i);
      }
      qr_sweep(a, l, i, shift, rots);
      ++its;
    }
    eig[i] = a(i, i);
    if (i == 0) break;
    --i;
  }
  return eig;
}

// ---------------------------------------------------------------------------

LuFactorization::LuFactorization(ComplexMatrix a)
    : lu_(std::move(a)), pivot_(lu_.size()) {
  const std::size_t n = lu_.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(lu_(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::abs(lu_(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    pivot_[k] = p;
    if (p != k) {
      std::swap_ranges(lu_.row(k).begin(), lu_.row(k).end(), lu_.row(p).begin());
      sign_ = -sign_;
    }
    const cplx pivot = lu_(k, k);
    if (pivot == 0.0) {
      singular_ = true;
      continue;
    }
    auto prow = lu_.row(k);
    for (std::size_t i = k + 1; i < n; ++i) {
      auto row = lu_.row(i);
      const cplx factor = row[k] / pivot;
      row[k] = factor;
      if (factor == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) row[j] -= factor * prow[j];
    }
  }
}

cplx LuFactorization::determinant() const {
  cplx det = static_cast<double>(sign_);
  for (std::size_t k = 0; k < lu_.size(); ++k) det *= lu_(k, k);
  return det;
}

CVector LuFactorization::solve(CVector b) const {
  const std::size_t n = lu_.size();
  if (b.size() != n) throw DimensionMismatch("rhs length mismatch");
  if (singular_) throw ZeroVector("matrix is singular");
  for (std::size_t k = 0; k < n; ++k) {
    std::swap(b[k], b[pivot_[k]]);
    for (std::size_t i = k + 1; i < n; ++i) b[i] -= lu_(i, k) * b[k];
  }
  for (std::size_t k = n; k-- > 0;) {
    cplx acc = b[k];
    for (std::size_t j = k + 1; j < n; ++j) acc -= lu_(k, j) * b[j];
    b[k] = acc / lu_(k, k);
  }
  return b;
}

CVector eigenvector(const ComplexMatrix& a, cplx lambda) {
  const std::size_t n = a.size();
  if (n == 0) return {};
  const double scale = std::max(a.frobenius_norm(), DBL_MIN);
  // Nudge the shift off the exact eigenvalue so the factorization is usable.
  ComplexMatrix shifted = a;
  const cplx perturbed = lambda + cplx(1.0, 1.0) * (64.0 * DBL_EPSILON * scale);
  for (std::size_t i = 0; i < n; ++i) shifted(i, i) -= perturbed;
  LuFactorization lu(std::move(shifted));
  if (lu.singular()) {
    ComplexMatrix again = a;
    const cplx wider = lambda + cplx(1.0, 1.0) * (1e6 * DBL_EPSILON * scale);
    for (std::size_t i = 0; i < n; ++i) again(i, i) -= wider;
    lu = LuFactorization(std::move(again));
  }
  CVector v(n, cplx(1.0 / std::sqrt(static_cast<double>(n))));
  for (int it = 0; it < 4; ++it) {
    v = lu.solve(std::move(v));
    double norm = 0.0;
    for (const auto& z : v) norm += std::norm(z);
    norm = std::sqrt(norm);
    if (!(norm > 0.0) || !std::isfinite(norm))
      throw NonFinite("inverse iteration broke down");
    for (auto& z : v) z /= norm;
  }
  return v;
}

// ---------------------------------------------------------------------------

SpectrumReport spectrum_report(std::vector<cplx> eigs, double im_threshold,
                               double energy_ceiling) {
  if (!(im_threshold > 0.0)) throw ConfigError("im_threshold must be positive");
  std::sort(eigs.begin(), eigs.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  SpectrumReport report;
  report.im_threshold = im_threshold;
  report.energy_ceiling = energy_ceiling;
  for (const cplx& z : eigs) {
    if (z.real() > energy_ceiling)
      report.above_ceiling.push_back(z);
    else if (std::fabs(z.imag()) <= im_threshold)
      report.real_subset.push_back(z);
    else
      report.complex_subset.push_back(z);
  }
  report.eigenvalues = std::move(eigs);
  return report;
}

}  // namespace pseudospec
