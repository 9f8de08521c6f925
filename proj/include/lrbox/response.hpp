#pragma once

#include <array>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "lrbox/model.hpp"
#include "lrbox/spectral.hpp"

namespace lrbox {

/// Observable and perturbation already applied to the ground state:
/// observed = V_O psi0, perturbing = V_P psi0.
struct ObservablePair {
  std::vector<double> observed;
  std::vector<double> perturbing;
  std::string description;
};

struct TimeSample {
  double tau = 0.0;
  double value = 0.0;
};

struct ResponseSample {
  double omega = 0.0;
  double eta = 0.0;
  std::complex<double> value;
};

/// The two terms of the frequency response: resonant = <u_O, (z - (H-E0))^-1 u_P>,
/// antiresonant = <u_P, (z + (H-E0))^-1 u_O>; value = resonant - antiresonant.
struct ResponseTerms {
  std::complex<double> resonant;
  std::complex<double> antiresonant;
  std::complex<double> value() const { return resonant - antiresonant; }
};

/// Discrete spectral measure of the pair: weights w_k = <u_O,psi_k><psi_k,u_P>
/// at excitation frequencies f_k = E_k - E_0.
struct SpectralWeights {
  std::vector<double> weights;
  std::vector<double> frequencies;
};

/// V_O = V_P = delta on site 0 of a lattice model.
ObservablePair observables_delta0(const TruncatedHamiltonian& H, std::span<const double> psi0);

/// Diagonal multiplication potentials sampled on the grid.
ObservablePair observables_diagonal(std::span<const double> observable,
                                    std::span<const double> perturbation,
                                    std::span<const double> psi0, std::string description);

SpectralWeights spectral_weight(const EigenDecomposition& eig, const ObservablePair& obs);

/// K_L(tau) = -2 theta(tau) sum_k w_k sin(f_k tau), the sum-over-states form of
/// -i theta <u_O, e^{-i(H-E0)tau} u_P> + c.c. for a real eigenbasis.
std::vector<TimeSample> time_response(const SpectralWeights& sw, std::span<const double> taus);
std::vector<TimeSample> time_response(const EigenDecomposition& eig, const ObservablePair& obs,
                                      std::span<const double> taus);

ResponseTerms freq_response_sos_terms(const SpectralWeights& sw, double omega, double eta);
std::complex<double> freq_response_sos(const SpectralWeights& sw, double omega, double eta);
std::complex<double> freq_response_sos(const EigenDecomposition& eig, const ObservablePair& obs,
                                       double omega, double eta);

/// Shifted tridiagonal solves for both terms. The ground-state pieces of the
/// two terms cancel exactly, so they are projected out of the right-hand sides
/// before solving; otherwise near omega = 0 each term carries a 1/|z| pole that
/// cancels in the sum.
ResponseTerms freq_response_resolvent_terms(const TruncatedHamiltonian& H,
                                            const GroundState& ground, const ObservablePair& obs,
                                            double omega, double eta);
std::complex<double> freq_response_resolvent(const TruncatedHamiltonian& H,
                                             const GroundState& ground, const ObservablePair& obs,
                                             double omega, double eta);

/// Closed-form response of the infinite impurity chain H = A + V e0 e0^T
/// (unit hopping) for the delta-on-site-0 observable pair.
///
/// Free Green's function G0(z)_{mn} = zeta^{|m-n|} / s(z), s(z) = sqrt(z-2) sqrt(z+2)
/// with principal roots (|zeta| < 1 off [-2,2]); the impurity enters through the
/// rank-one update G_00 = 1 / (s - V). eta = 0 is the limit from the upper half plane.
class ImpurityOracle {
 public:
  /// Throws InvalidModel unless V < 0 (the only case with a bound ground state).
  explicit ImpurityOracle(double V);

  double V() const noexcept { return V_; }
  /// E0 = -sqrt(V^2 + 4).
  double ground_energy() const noexcept { return energy_; }
  /// Ratio psi0(n+1)/psi0(n) for n >= 0; negative for unit hopping.
  double decay_ratio() const noexcept { return zeta0_; }
  /// psi0(0)^2 = (1 - zeta0^2) / (1 + zeta0^2).
  double center_weight() const noexcept { return weight_; }
  /// psi0(site), sign fixed so that psi0(0) > 0.
  double amplitude(long site) const;

  /// G(z)_{mn} of the infinite chain, any z off the real spectrum; real z is
  /// taken as z + i0.
  std::complex<double> greens(std::complex<double> z, long m, long n) const;
  std::complex<double> greens_center(std::complex<double> z) const;

  /// Response at omega + i eta. Throws ThresholdError for eta = 0 within 1e-3 of
  /// +-(2 - E0), +-(-2 - E0) or 0.
  ResponseTerms response_terms(double omega, double eta) const;
  std::complex<double> response(double omega, double eta) const;

  /// Boundary density -Im(resonant term at omega + i0) / pi of the spectral measure,
  /// excluding the bound-state delta at omega = 0.
  double spectral_density(double omega) const;

  /// The four ionization thresholds -(2-E0), -(-2-E0), (-2-E0), (2-E0) ascending.
  std::array<double, 4> thresholds() const noexcept;

  static constexpr double kThresholdMargin = 1e-3;

 private:
  void check_boundary(double omega) const;

  double V_;
  double energy_;
  double zeta0_;
  double weight_;
};

std::complex<double> exact_lattice_response(double V, double omega, double eta);

}  // namespace lrbox
