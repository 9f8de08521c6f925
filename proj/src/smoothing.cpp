#include "lrbox/smoothing.hpp"

#include <cmath>
#include <numbers>

#include "lrbox/errors.hpp"

namespace lrbox {

namespace {

// E[x^{2k}] of the standard normal: (2k-1)!!.
double gaussian_even_moment(int k) {
  double m = 1.0;
  for (int j = 1; j <= k; ++j) m *= 2.0 * j - 1.0;
  return m;
}

// Gaussian elimination with partial pivoting on a small dense system.
std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a[r * n + c]) > std::abs(a[piv * n + c])) piv = r;
    }
    if (a[piv * n + c] == 0.0) throw NumericError("singular moment system", static_cast<long>(c));
    if (piv != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a[c * n + k], a[piv * n + k]);
      std::swap(b[c], b[piv]);
    }
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r * n + c] / a[c * n + c];
      for (std::size_t k = c; k < n; ++k) a[r * n + k] -= f * a[c * n + k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[i * n + k] * x[k];
    x[i] = s / a[i * n + i];
  }
  return x;
}

}  // namespace

std::vector<double> hermite_coefficients(int order) {
  if (order < 1 || order % 2 == 0) {
    throw DomainError("hermite kernel order must be a positive odd integer");
  }
  if (order > 15) throw DomainError("hermite kernel order above 15 is ill-conditioned");
  const auto m = static_cast<std::size_t>((order + 1) / 2);
  // Row i: integral of x^{2i} P(x) g(x) = delta_{i0}.
  std::vector<double> a(m * m);
  std::vector<double> b(m, 0.0);
  b[0] = 1.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) a[i * m + j] = gaussian_even_moment(static_cast<int>(i + j));
  }
  return solve_dense(std::move(a), std::move(b));
}

KernelSpec::KernelSpec(KernelFamily family, int order, double eta)
    : family_(family), order_(order), eta_(eta) {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw DomainError("kernel width eta must be > 0");
  if (family == KernelFamily::hermite) coeffs_ = hermite_coefficients(order);
}

KernelSpec KernelSpec::lorentzian(double eta) { return {KernelFamily::lorentzian, 0, eta}; }
KernelSpec KernelSpec::gaussian(double eta) { return {KernelFamily::gaussian, 1, eta}; }
KernelSpec KernelSpec::hermite(int order, double eta) {
  return {KernelFamily::hermite, order, eta};
}

KernelSpec KernelSpec::make(KernelFamily family, int order, double eta) {
  switch (family) {
    case KernelFamily::lorentzian:
      return lorentzian(eta);
    case KernelFamily::gaussian:
      return gaussian(eta);
    case KernelFamily::hermite:
      return hermite(order, eta);
  }
  throw DomainError("unknown kernel family");
}

std::string KernelSpec::label() const {
  if (family_ == KernelFamily::hermite) return "hermite(" + std::to_string(order_) + ")";
  return to_string(family_);
}

double KernelSpec::profile(double x) const {
  switch (family_) {
    case KernelFamily::lorentzian:
      return std::numbers::inv_pi / (1.0 + x * x);
    case KernelFamily::gaussian:
      return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
    case KernelFamily::hermite: {
      const double x2 = x * x;
      double p = 0.0;
      for (std::size_t j = coeffs_.size(); j-- > 0;) p = p * x2 + coeffs_[j];
      return p * std::exp(-0.5 * x2) / std::sqrt(2.0 * std::numbers::pi);
    }
  }
  return 0.0;
}

KernelFamily parse_kernel_family(const std::string& name) {
  if (name == "lorentzian") return KernelFamily::lorentzian;
  if (name == "gaussian") return KernelFamily::gaussian;
  if (name == "hermite") return KernelFamily::hermite;
  throw ConfigError("unknown kernel family '" + name + "'");
}

std::string to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::lorentzian:
      return "lorentzian";
    case KernelFamily::gaussian:
      return "gaussian";
    case KernelFamily::hermite:
      return "hermite";
  }
  return "?";
}

double smoothed_density(const SpectralWeights& sw, const KernelSpec& spec, double omega) {
  double a = 0.0;
  for (std::size_t k = 0; k < sw.weights.size(); ++k) {
    a += sw.weights[k] * spec(omega - sw.frequencies[k]);
  }
  return a;
}

std::vector<double> smoothed_density(const SpectralWeights& sw, const KernelSpec& spec,
                                     std::span<const double> omegas) {
  std::vector<double> out;
  out.reserve(omegas.size());
  for (double w : omegas) out.push_back(smoothed_density(sw, spec, w));
  return out;
}

OrderSlope order_slope(const SpectralWeights& sw, KernelFamily family, int order, double omega,
                       std::span<const double> etas, double exact) {
  OrderSlope r;
  r.etas.assign(etas.begin(), etas.end());
  for (double eta : etas) {
    const auto spec = KernelSpec::make(family, order, eta);
    r.errors.push_back(std::abs(smoothed_density(sw, spec, omega) - exact));
  }
  r.fit = fit_loglog(r.etas, r.errors);
  return r;
}

}  // namespace lrbox
