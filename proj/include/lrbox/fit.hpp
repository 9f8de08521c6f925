#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace lrbox {

/// Unweighted least-squares line y = slope x + intercept.
struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  /// Root-mean-square residual in the fitted (log) variable.
  double rms_residual = 0.0;
  std::size_t points = 0;
  /// Points dropped because they sat within 10x of the noise floor.
  std::size_t excluded = 0;
  /// 0 when no floor was detected.
  double noise_floor = 0.0;
};

FitResult fit_line(std::span<const double> x, std::span<const double> y);

/// Noise floor of an error series that decays along `x`, estimated from its
/// flattest tail segment. With points ordered by x and m = max(3, n/4), the last
/// m points at the low-error end count as a floor when their log-slope is below
/// a quarter of the slope of the first m points; the floor is their maximum.
/// Returns 0 when the series has no floor.
double estimate_noise_floor(std::span<const double> x, std::span<const double> values,
                            bool log_x);

/// log|err| against log x, after dropping points within 10x of the floor.
/// An explicit floor overrides the estimate. Throws FitError with fewer than
/// two usable points.
FitResult fit_loglog(std::span<const double> x, std::span<const double> err,
                     std::optional<double> floor = std::nullopt);

/// log|err| against x (exponential rate = -slope), same floor handling.
FitResult fit_semilog(std::span<const double> x, std::span<const double> err,
                      std::optional<double> floor = std::nullopt);

std::vector<double> logspace(double lo, double hi, std::size_t count);
std::vector<double> linspace(double lo, double hi, std::size_t count);
/// lo, lo+step, ... up to hi inclusive (within half a step).
std::vector<double> arange(double lo, double hi, double step);

}  // namespace lrbox
