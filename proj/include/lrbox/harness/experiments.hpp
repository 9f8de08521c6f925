#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "lrbox/dynamics.hpp"
#include "lrbox/fit.hpp"
#include "lrbox/harness/config.hpp"
#include "lrbox/harness/table.hpp"
#include "lrbox/response.hpp"
#include "lrbox/smoothing.hpp"

namespace lrbox {

using cplx = std::complex<double>;

nlohmann::json fit_json(const FitResult& fit);

/// Ground state and the delta-on-site-0 observable pair of the impurity chain.
struct ImpurityBox {
  TruncatedHamiltonian H;
  GroundState ground;
  ObservablePair obs;
};
ImpurityBox prepare_impurity(double V, long L);

/// Default observable pair: delta on site 0 for lattice models, exp(-x^2) for
/// continuum models; both act as V_O = V_P.
std::vector<double> default_observable(const TruncatedHamiltonian& H);

// ---------------------------------------------------------------- sweep

struct SweepRow {
  double omega = 0.0;
  double eta = 0.0;
  long L = 0;
  cplx finite;
  cplx exact;
  double error = 0.0;
  std::string status = "ok";
};

struct SweepFit {
  double omega = 0.0;
  double eta = 0.0;
  std::optional<FitResult> fit;
  std::string note;
  /// Exponential decay rate in L, -slope of log error.
  double rate() const { return fit ? -fit->slope : 0.0; }
};

struct SweepResult {
  /// omega outer, eta middle, L inner.
  std::vector<SweepRow> rows;
  std::vector<SweepFit> fits;
};

/// |K_L(omega + i eta) - K(omega + i eta)| for the impurity chain, with the
/// finite-box value from the resolvent route and an exponential fit in L per
/// (omega, eta).
SweepResult sweep_eta_L(double V, std::span<const double> omegas, std::span<const double> etas,
                        std::span<const long> Ls, unsigned threads = 1);

// ---------------------------------------------------------------- lap rate

struct LapRateResult {
  double omega = 0.0;
  cplx boundary;
  std::vector<double> etas;
  std::vector<cplx> values;
  std::vector<double> errors;
  bool in_continuum = true;
  FitResult fit;
};

/// log|K(omega + i eta) - K(omega + i0)| against log eta from the exact
/// oracle. Throws ThresholdError within 0.2 of a threshold or of 0.
LapRateResult lap_rate(double V, double omega, std::span<const double> etas);

inline constexpr double kLapThresholdDistance = 0.2;

// ---------------------------------------------------------------- locality

struct LocalityResult {
  double eta = 0.0;
  double alpha = 0.0;
  std::size_t first_site = 0;
  std::size_t last_site = 0;
  FitResult fit;
};

/// Exponential decay rate of |G(E0 + omega + i eta; center + d, center)| in d
/// over d in [5, L/2], using sites above 1e-12 of the window maximum. Throws
/// FitError with fewer than 10 usable sites.
LocalityResult locality_fit(const TruncatedHamiltonian& H, double E0, double omega, double eta);

// ---------------------------------------------------------------- optimal eta

struct OptimalEtaRow {
  long L = 0;
  /// Argmin and min of the error budget
  /// |K(w+i eta) - K(w+i0)| + |K_L(w+i eta) - K(w+i eta)|.
  double eta_star = 0.0;
  double min_error = 0.0;
  /// Same for the direct error |K_L(w+i eta) - K(w+i0)|.
  double direct_eta_star = 0.0;
  double direct_min_error = 0.0;
  double error_at_max_eta = 0.0;
  /// The budget scan has a single local minimum.
  bool unimodal = true;
};

struct OptimalEtaResult {
  double omega = 0.0;
  std::vector<double> etas;
  std::vector<OptimalEtaRow> rows;
  /// Per L, per eta: budget and direct errors.
  std::vector<std::vector<double>> budget;
  std::vector<std::vector<double>> direct;
};

OptimalEtaResult optimal_eta(double V, double omega, std::span<const long> Ls,
                             std::span<const double> etas, unsigned threads = 1);

std::vector<double> default_eta_scan();

// ---------------------------------------------------------------- distconv

struct DistconvRow {
  long L = 0;
  double error = 0.0;
  bool at_floor = false;
};

struct DistconvResult {
  long reference_L = 0;
  double center = 0.0;
  double width = 0.0;
  std::vector<DistconvRow> rows;
  /// 64 eps_mach times the quadrature of |K_ref g|.
  double floor = 0.0;
  /// g at the end of the tau grid; flagged when above the floor.
  double truncation = 0.0;
  bool truncation_flag = false;
  std::optional<FitResult> fit;
  std::string note;
};

/// |int (K_L - K_ref)(tau) g(tau) dtau| with g(tau) = exp(-(tau - center)^2 / (2 width^2)),
/// by the trapezoid rule on `taus`.
DistconvResult distconv(double V, std::span<const long> Ls, long reference_L, double center,
                        double width, std::span<const double> taus, unsigned threads = 1);

// ---------------------------------------------------------------- figures

struct Figure1Result {
  std::vector<long> Ls;
  std::vector<double> taus;
  std::vector<std::vector<double>> values;
  /// max|K| on [40, 60] over max|K| on [0, 20], per L.
  std::vector<double> decay_ratio;
};

Figure1Result figure1(double V, std::span<const long> Ls, std::span<const double> taus,
                      unsigned threads = 1);

/// max|y| over tau in [40, 60] divided by max|y| over [0, 20].
double decay_ratio(std::span<const double> taus, std::span<const double> values);

inline constexpr double kDecayThreshold = 0.05;

struct Figure2Curve {
  long L = 0;
  double eta = 0.0;
  std::vector<cplx> values;
  std::vector<cplx> exact;
  double sup_error = 0.0;
  /// Strict local maxima of -Im K_L over omega in [2.6, 6.4].
  std::size_t peaks = 0;
};

struct Figure2Result {
  std::vector<double> omegas;
  std::vector<Figure2Curve> curves;  // L outer, eta inner
};

Figure2Result figure2(double V, std::span<const long> Ls, std::span<const double> etas,
                      std::span<const double> omegas, unsigned threads = 1);

std::size_t count_peaks(std::span<const double> x, std::span<const double> y, double lo,
                        double hi);

// ---------------------------------------------------------------- kernel orders

struct KernelOrderResult {
  double omega = 0.0;
  double exact = 0.0;
  long L = 0;
  std::vector<std::string> labels;
  std::vector<OrderSlope> slopes;
};

/// Smoothed density of the box-L impurity chain against the exact boundary
/// density -Im K(omega + i0) / pi restricted to the resonant term.
KernelOrderResult kernel_orders(double V, long L, double omega, std::span<const double> etas,
                                std::span<const KernelFamily> families, int hermite_order);

// ---------------------------------------------------------------- CLI glue

struct ExperimentResult {
  std::string name;
  Table table;
  nlohmann::json summary;
};

const std::vector<std::string>& experiment_names();

/// Runs a named experiment with config defaults filled in. Throws InputError
/// for unknown names or unusable configs.
ExperimentResult run_experiment(const std::string& name, const ExperimentConfig& config);

}  // namespace lrbox
