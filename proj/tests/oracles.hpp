#pragma once

// Reference computations that share no code with the library: bisection on
// the characteristic polynomial, dense complex elimination, plain quadrature,
// and the band integral of the free chain.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using cd = std::complex<double>;

/// Number of eigenvalues of the symmetric tridiagonal (d, e) below x, from the
/// sign changes of the characteristic-polynomial sequence p_k(x).
inline std::size_t sign_changes(const std::vector<double>& d, const std::vector<double>& e,
                                double x) {
  std::size_t count = 0;
  double p_prev = 1.0;
  double p = d[0] - x;
  if (p < 0.0) ++count;
  for (std::size_t k = 1; k < d.size(); ++k) {
    double next = (d[k] - x) * p - e[k - 1] * e[k - 1] * p_prev;
    // Rescale to avoid overflow; only signs and ratios matter.
    const double s = std::max(std::abs(next), std::abs(p));
    if (s > 1e100 || (s < 1e-100 && s > 0.0)) {
      next /= s;
      p /= s;
    }
    if (next == 0.0) next = -1e-300 * (p >= 0.0 ? 1.0 : -1.0);
    if ((next < 0.0) != (p < 0.0)) ++count;
    p_prev = p;
    p = next;
  }
  return count;
}

/// k-th (0-based, ascending) eigenvalue by bisection to absolute tolerance tol.
inline double bisect_eigenvalue(const std::vector<double>& d, const std::vector<double>& e,
                                std::size_t k, double tol = 1e-13) {
  double r = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    double row = std::abs(d[i]);
    if (i > 0) row += std::abs(e[i - 1]);
    if (i + 1 < d.size()) row += std::abs(e[i]);
    r = std::max(r, row);
  }
  double lo = -r - 1.0, hi = r + 1.0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (sign_changes(d, e, mid) > k) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Dense solve of (z - T) x = v for symmetric tridiagonal T with partial pivoting.
inline std::vector<cd> dense_shifted_solve(const std::vector<double>& d,
                                           const std::vector<double>& e, cd z,
                                           std::vector<cd> v) {
  const std::size_t n = d.size();
  std::vector<cd> a(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    a[i * n + i] = z - d[i];
    if (i + 1 < n) {
      a[i * n + i + 1] = -e[i];
      a[(i + 1) * n + i] = -e[i];
    }
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a[r * n + c]) > std::abs(a[piv * n + c])) piv = r;
    }
    for (std::size_t k = 0; k < n; ++k) std::swap(a[c * n + k], a[piv * n + k]);
    std::swap(v[c], v[piv]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const cd f = a[r * n + c] / a[c * n + c];
      if (f == 0.0) continue;
      for (std::size_t k = c; k < n; ++k) a[r * n + k] -= f * a[c * n + k];
      v[r] -= f * v[c];
    }
  }
  std::vector<cd> x(n);
  for (std::size_t i = n; i-- > 0;) {
    cd s = v[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[i * n + k] * x[k];
    x[i] = s / a[i * n + i];
  }
  return x;
}

/// Composite Simpson rule with an even number of panels.
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      std::size_t panels) {
  if (panels % 2) ++panels;
  const double h = (b - a) / static_cast<double>(panels);
  double s = f(a) + f(b);
  for (std::size_t i = 1; i < panels; ++i) {
    s += (i % 2 ? 4.0 : 2.0) * f(a + static_cast<double>(i) * h);
  }
  return s * h / 3.0;
}

inline cd simpson_c(const std::function<cd(double)>& f, double a, double b, std::size_t panels) {
  if (panels % 2) ++panels;
  const double h = (b - a) / static_cast<double>(panels);
  cd s = f(a) + f(b);
  for (std::size_t i = 1; i < panels; ++i) {
    s += (i % 2 ? 4.0 : 2.0) * f(a + static_cast<double>(i) * h);
  }
  return s * (h / 3.0);
}

/// Free chain G0_mn(z), Im z > 0, as the Fourier integral of e^{ik(m-n)} / (z - 2 cos k).
inline cd free_band_integral(cd z, long distance, std::size_t panels = 200000) {
  return simpson_c(
             [&](double k) {
               return std::cos(k * static_cast<double>(distance)) / (z - 2.0 * std::cos(k));
             },
             0.0, std::numbers::pi, panels) /
         std::numbers::pi;
}

inline std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(gen);
  return v;
}

inline std::vector<cd> random_cvector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<cd> v(n);
  for (auto& x : v) x = cd(u(gen), u(gen));
  return v;
}

inline double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline double norm2(const std::vector<cd>& v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

/// Dense (z - T) x for residual checks.
inline std::vector<cd> shifted_apply(const std::vector<double>& d, const std::vector<double>& e,
                                     cd z, const std::vector<cd>& x) {
  const std::size_t n = d.size();
  std::vector<cd> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = (z - d[i]) * x[i];
    if (i > 0) y[i] -= e[i - 1] * x[i - 1];
    if (i + 1 < n) y[i] -= e[i] * x[i + 1];
  }
  return y;
}

}  // namespace oracle
