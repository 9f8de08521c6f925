#include "lrbox/spectral.hpp"

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "lrbox/errors.hpp"

namespace lrbox {

namespace {

struct RawEigen {
  std::vector<double> values;
  std::vector<double> vectors;  // column-major, n x m
};

// il/iu are 1-based inclusive indices into the ascending spectrum.
RawEigen run_stevr(const TruncatedHamiltonian& H, lapack_int il, lapack_int iu) {
  const auto n = static_cast<lapack_int>(H.size());
  std::vector<double> d(H.diag().begin(), H.diag().end());
  // stevr wants an off-diagonal array of length n.
  std::vector<double> e(static_cast<std::size_t>(n), 0.0);
  std::copy(H.offdiag().begin(), H.offdiag().end(), e.begin());

  const bool full = il == 1 && iu == n;
  const lapack_int m_max = iu - il + 1;
  lapack_int m = 0;
  RawEigen out;
  out.values.assign(static_cast<std::size_t>(n), 0.0);
  out.vectors.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(m_max), 0.0);
  std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(std::max(m_max, 1)));

  const lapack_int info =
      LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', full ? 'A' : 'I', n, d.data(), e.data(), 0.0, 0.0,
                     il, iu, 0.0, &m, out.values.data(), out.vectors.data(), n, isuppz.data());
  if (info < 0) {
    throw NumericError("dstevr: illegal argument " + std::to_string(-info));
  }
  if (info > 0 || m != m_max) {
    throw NumericError("tridiagonal eigensolver failed to converge", info > 0 ? info - 1 : m);
  }
  out.values.resize(static_cast<std::size_t>(m));
  return out;
}

double residual(const TruncatedHamiltonian& H, double E, std::span<const double> psi) {
  const auto Hpsi = apply(H, psi);
  double r = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double t = Hpsi[i] - E * psi[i];
    r += t * t;
  }
  return std::sqrt(r);
}

void check_residuals(const TruncatedHamiltonian& H, const RawEigen& raw, double tol) {
  const std::size_t n = H.size();
  const double bound = tol * (1.0 + H.norm_bound());
  for (std::size_t k = 0; k < raw.values.size(); ++k) {
    std::span<const double> psi(raw.vectors.data() + k * n, n);
    if (residual(H, raw.values[k], psi) > bound) {
      throw NumericError("eigenpair " + std::to_string(k) + " misses the residual tolerance",
                         static_cast<std::ptrdiff_t>(k));
    }
  }
}

std::size_t first_significant(std::span<const double> v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > 1e-8) return i;
  }
  return v.size();
}

// Inside clusters of numerically equal eigenvalues, order by the index of the
// first significant component so that output does not depend on solver internals.
void order_clusters(RawEigen& raw, std::size_t n, double tol) {
  const std::size_t m = raw.values.size();
  std::size_t start = 0;
  while (start < m) {
    std::size_t stop = start + 1;
    while (stop < m && raw.values[stop] - raw.values[stop - 1] <= tol) ++stop;
    if (stop - start > 1) {
      std::vector<std::size_t> perm(stop - start);
      std::iota(perm.begin(), perm.end(), start);
      auto key = [&](std::size_t k) {
        return first_significant({raw.vectors.data() + k * n, n});
      };
      std::stable_sort(perm.begin(), perm.end(),
                       [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
      std::vector<double> block(n * perm.size());
      for (std::size_t j = 0; j < perm.size(); ++j) {
        std::copy_n(raw.vectors.data() + perm[j] * n, n, block.data() + j * n);
      }
      std::copy(block.begin(), block.end(), raw.vectors.data() + start * n);
    }
    start = stop;
  }
}

void fix_sign(std::span<double> psi, std::span<const double> reference) {
  double s = 0.0;
  if (!reference.empty()) {
    if (reference.size() != psi.size()) {
      throw DimensionError("ground_state: reference length does not match dimension");
    }
    s = std::inner_product(psi.begin(), psi.end(), reference.begin(), 0.0);
  }
  if (s == 0.0) {
    const auto it = std::max_element(psi.begin(), psi.end(),
                                     [](double a, double b) { return std::abs(a) < std::abs(b); });
    s = *it;
  }
  if (s < 0.0) {
    for (auto& x : psi) x = -x;
  }
}

// Number of eigenvalues strictly below x (Sturm sequence of the LDL^T pivots).
std::size_t count_below(const TruncatedHamiltonian& H, double x) {
  const auto d = H.diag();
  const auto e = H.offdiag();
  std::size_t count = 0;
  double q = d[0] - x;
  const double tiny = std::numeric_limits<double>::min();
  for (std::size_t i = 0;; ++i) {
    if (q == 0.0) q = -tiny;
    if (q < 0.0) ++count;
    if (i + 1 == d.size()) break;
    q = d[i + 1] - x - e[i] * e[i] / q;
  }
  return count;
}

}  // namespace

EigenDecomposition::EigenDecomposition(std::vector<double> values, std::vector<double> vectors,
                                       double residual_tol)
    : values_(std::move(values)), vectors_(std::move(vectors)), residual_tol_(residual_tol) {
  if (vectors_.size() != values_.size() * values_.size()) {
    throw DimensionError("eigenvector storage must be n x n");
  }
}

EigenDecomposition eigendecompose(const TruncatedHamiltonian& H, double residual_tol) {
  if (H.size() < 2) throw DimensionError("eigendecompose needs n >= 2");
  const auto n = static_cast<lapack_int>(H.size());
  RawEigen raw = run_stevr(H, 1, n);
  check_residuals(H, raw, residual_tol);
  order_clusters(raw, H.size(), residual_tol * (1.0 + H.norm_bound()));
  return EigenDecomposition(std::move(raw.values), std::move(raw.vectors), residual_tol);
}

GroundState ground_state(const EigenDecomposition& eig, std::span<const double> reference) {
  if (eig.size() < 2) throw DimensionError("ground_state needs n >= 2");
  GroundState gs;
  gs.energy = eig.values()[0];
  gs.gap = eig.values()[1] - eig.values()[0];
  gs.degenerate = gs.gap <= eig.residual_tol() * (1.0 + std::abs(gs.energy));
  gs.vector.assign(eig.vector(0).begin(), eig.vector(0).end());
  fix_sign(gs.vector, reference);
  return gs;
}

GroundState ground_state(const TruncatedHamiltonian& H, std::span<const double> reference,
                         double residual_tol) {
  if (H.size() < 2) throw DimensionError("ground_state needs n >= 2");
  RawEigen raw = run_stevr(H, 1, 2);
  check_residuals(H, raw, residual_tol);
  GroundState gs;
  gs.energy = raw.values[0];
  gs.gap = raw.values[1] - raw.values[0];
  gs.degenerate = gs.gap <= residual_tol * (1.0 + H.norm_bound());
  gs.vector.assign(raw.vectors.begin(), raw.vectors.begin() + static_cast<long>(H.size()));
  fix_sign(gs.vector, reference);
  return gs;
}

std::vector<std::complex<double>> resolvent_solve(const TruncatedHamiltonian& H,
                                                  std::complex<double> z,
                                                  std::span<const std::complex<double>> v) {
  const std::size_t n = H.size();
  if (v.size() != n) throw DimensionError("resolvent_solve: vector length mismatch");
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw DomainError("resolvent_solve: shift must be finite");
  }
  if (z.imag() == 0.0) {
    const double margin = 1e-14 * (1.0 + H.norm_bound());
    if (count_below(H, z.real() + margin) != count_below(H, z.real() - margin)) {
      throw SingularShift("resolvent_solve: real shift coincides with an eigenvalue");
    }
  }

  using cd = std::complex<double>;
  std::vector<cd> dl(n - 1), du(n - 1), d(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    dl[i] = -H.offdiag()[i];
    du[i] = -H.offdiag()[i];
  }
  for (std::size_t i = 0; i < n; ++i) d[i] = z - H.diag()[i];
  return tridiagonal_solve(std::move(dl), std::move(d), std::move(du), {v.begin(), v.end()});
}

std::vector<std::complex<double>> tridiagonal_solve(std::vector<std::complex<double>> sub,
                                                    std::vector<std::complex<double>> diag,
                                                    std::vector<std::complex<double>> super,
                                                    std::vector<std::complex<double>> rhs) {
  const std::size_t n = diag.size();
  if (n == 0 || sub.size() + 1 != n || super.size() + 1 != n || rhs.size() != n) {
    throw DimensionError("tridiagonal_solve: inconsistent band lengths");
  }
  const auto nn = static_cast<lapack_int>(n);
  const lapack_int info = LAPACKE_zgtsv(LAPACK_COL_MAJOR, nn, 1, sub.data(), diag.data(),
                                        super.data(), rhs.data(), nn);
  if (info > 0) {
    throw SingularShift("tridiagonal solve hit an exactly singular pivot", info - 1);
  }
  if (info < 0) throw NumericError("zgtsv: illegal argument " + std::to_string(-info));
  return rhs;
}

std::vector<std::complex<double>> resolvent_column(const TruncatedHamiltonian& H,
                                                   std::complex<double> z, std::size_t n) {
  if (n >= H.size()) throw DimensionError("resolvent_column: index out of range");
  std::vector<std::complex<double>> e(H.size());
  e[n] = 1.0;
  return resolvent_solve(H, z, e);
}

std::complex<double> greens_entry(const TruncatedHamiltonian& H, std::complex<double> z,
                                  std::size_t m, std::size_t n) {
  if (m >= H.size()) throw DimensionError("greens_entry: index out of range");
  return resolvent_column(H, z, n)[m];
}

}  // namespace lrbox
