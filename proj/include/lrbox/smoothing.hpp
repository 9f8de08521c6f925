#pragma once

#include <span>
#include <string>
#include <vector>

#include "lrbox/fit.hpp"
#include "lrbox/response.hpp"

namespace lrbox {

enum class KernelFamily { lorentzian, gaussian, hermite };

/// Unit-mass smoothing kernel phi_eta(x) = phi(x/eta)/eta.
///
/// hermite(p), p odd: the standard Gaussian times the even polynomial of degree
/// p-1 that cancels the Gaussian moments 2, 4, ..., p-1. Its moments 1..p vanish
/// and moment p+1 does not. hermite(1) is the Gaussian. The kernel takes negative
/// values for p > 1.
class KernelSpec {
 public:
  static KernelSpec lorentzian(double eta);
  static KernelSpec gaussian(double eta);
  static KernelSpec hermite(int order, double eta);
  static KernelSpec make(KernelFamily family, int order, double eta);

  KernelFamily family() const noexcept { return family_; }
  double eta() const noexcept { return eta_; }
  /// 0 for the Lorentzian (no finite second moment), 1 for the Gaussian.
  int order() const noexcept { return order_; }
  std::string label() const;

  /// Unscaled profile phi(x).
  double profile(double x) const;
  /// phi_eta(x).
  double operator()(double x) const { return profile(x / eta_) / eta_; }

 private:
  KernelSpec(KernelFamily family, int order, double eta);

  KernelFamily family_;
  int order_;
  double eta_;
  std::vector<double> coeffs_;  // polynomial in x^2, lowest power first
};

KernelFamily parse_kernel_family(const std::string& name);
std::string to_string(KernelFamily family);

/// Coefficients a_0..a_{(p-1)/2} of P(x) = sum a_j x^{2j} such that P times the
/// standard Gaussian has unit mass and vanishing moments 2..p-1. Throws
/// DomainError for even or non-positive p.
std::vector<double> hermite_coefficients(int order);

/// A_eta(omega) = sum_k w_k phi_eta(omega - f_k) for each omega.
std::vector<double> smoothed_density(const SpectralWeights& sw, const KernelSpec& spec,
                                     std::span<const double> omegas);
double smoothed_density(const SpectralWeights& sw, const KernelSpec& spec, double omega);

struct OrderSlope {
  std::vector<double> etas;
  std::vector<double> errors;
  FitResult fit;
};

/// log|A_eta(omega) - exact| against log eta for the given family.
OrderSlope order_slope(const SpectralWeights& sw, KernelFamily family, int order, double omega,
                       std::span<const double> etas, double exact);

}  // namespace lrbox
