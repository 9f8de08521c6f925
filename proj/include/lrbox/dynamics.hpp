#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "lrbox/fit.hpp"
#include "lrbox/model.hpp"
#include "lrbox/spectral.hpp"

namespace lrbox {

/// Causal drive profiles bounded by 1.
enum class Drive {
  ramp,  ///< f(t) = 1 - e^{-t} for t >= 0
  sin2,  ///< f(t) = sin^2(t) for t >= 0
};

double drive_value(Drive drive, double t) noexcept;
Drive parse_drive(const std::string& name);
std::string to_string(Drive drive);

using ComplexVector = std::vector<std::complex<double>>;

struct Trajectory {
  std::vector<double> times;
  /// states[j] is the state at times[j]; states[0] is the initial state.
  std::vector<ComplexVector> states;
  std::vector<double> norms;
  double dt = 0.0;
  double epsilon = 0.0;
};

/// e^{-iHt} v by eigenbasis expansion.
ComplexVector propagate_free(const EigenDecomposition& eig, std::span<const std::complex<double>> v,
                             double t);

/// dt = min(0.01, 0.1 / (||H|| + |epsilon|)).
double default_time_step(const TruncatedHamiltonian& H, double epsilon);

inline constexpr double kNormDriftTol = 1e-9;

/// Crank-Nicolson integration of i psi' = (H + epsilon f(t) diag(perturbation)) psi
/// from psi(0) = initial over [0, T], with the drive sampled at step midpoints.
/// Every `stride`-th state is stored (the final state always is).
///
/// Throws StepSizeError when dt (||H|| + |epsilon|) > 1, beyond which the
/// midpoint rule no longer resolves the fastest phase, or when the norm drifts
/// by more than kNormDriftTol.
Trajectory propagate_perturbed(const TruncatedHamiltonian& H,
                               std::span<const std::complex<double>> initial,
                               std::span<const double> perturbation, double epsilon, Drive drive,
                               double dt, double T, std::size_t stride = 1);

/// <psi, diag(observable) psi>.
double expectation(std::span<const std::complex<double>> psi, std::span<const double> observable);

/// Trapezoidal (K * f)(t_n) = int_0^{t_n} K(tau) f(t_n - tau) dtau on a uniform
/// grid t_n = n dt, given K(t_n).
std::vector<double> causal_convolution(std::span<const double> kernel, Drive drive, double dt);

struct KuboRow {
  double epsilon = 0.0;
  double sup_remainder = 0.0;
  double t_at_sup = 0.0;
  /// Richardson estimate of epsilon times the convolution quadrature error.
  double quadrature_error = 0.0;
  /// Set when the quadrature error exceeds a tenth of the remainder.
  bool quadrature_floor = false;
};

struct KuboReport {
  std::vector<KuboRow> rows;
  FitResult fit;
  double dt = 0.0;
  double T = 0.0;
};

/// R_eps(t) = <V_O>(t) - <V_O>_0 - eps (K_L * f)(t) on a ground state psi0 of H,
/// with diagonal V_O, V_P. Returns sup_t |R| per epsilon and the log-log slope.
KuboReport kubo_remainder(const TruncatedHamiltonian& H, const EigenDecomposition& eig,
                          std::span<const double> psi0, std::span<const double> observable,
                          std::span<const double> perturbation,
                          std::span<const double> epsilons, Drive drive, double T, double dt);

struct MomentRow {
  double t = 0.0;
  /// ||x psi(t)|| with x the physical coordinate.
  double position = 0.0;
  /// ||D psi(t)|| with D the forward difference over the grid spacing.
  double difference = 0.0;
};

struct MomentReport {
  std::vector<MomentRow> rows;
  /// ||x psi0|| + ||D psi0|| + 4 ||psi0||.
  double c0 = 0.0;
  /// Both moments stay below c0 (1 + t)^2 at every sampled time.
  bool within_bound = true;
};

MomentReport moment_growth(const EigenDecomposition& eig, const TruncatedHamiltonian& H,
                           std::span<const std::complex<double>> initial,
                           std::span<const double> ts);

}  // namespace lrbox
