#include "lrbox/response.hpp"

#include <cmath>
#include <numbers>

#include "lrbox/errors.hpp"

namespace lrbox {

namespace {

using cd = std::complex<double>;

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

cd dot(std::span<const double> a, std::span<const cd> b) {
  cd s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void require_positive_eta(double eta) {
  if (!(eta > 0.0)) {
    throw DomainError("finite-box response needs eta > 0 (eta = 0 is a singular distribution)");
  }
}

void check_pair(const ObservablePair& obs, std::size_t n) {
  if (obs.observed.size() != n || obs.perturbing.size() != n) {
    throw DimensionError("observable vectors do not match the Hamiltonian dimension");
  }
}

// s(z) = sqrt(z-2) sqrt(z+2) with principal roots; analytic off [-2,2].
cd band_root(cd z) { return std::sqrt(z - 2.0) * std::sqrt(z + 2.0); }

}  // namespace

ObservablePair observables_delta0(const TruncatedHamiltonian& H, std::span<const double> psi0) {
  if (H.kind() != ModelKind::lattice) {
    throw InvalidModel("observables_delta0 is defined for lattice models only");
  }
  if (psi0.size() != H.size()) throw DimensionError("psi0 length does not match H");
  std::vector<double> u(H.size(), 0.0);
  u[H.center()] = psi0[H.center()];
  return {u, u, "delta0"};
}

ObservablePair observables_diagonal(std::span<const double> observable,
                                    std::span<const double> perturbation,
                                    std::span<const double> psi0, std::string description) {
  if (observable.size() != psi0.size() || perturbation.size() != psi0.size()) {
    throw DimensionError("diagonal potentials must match psi0 length");
  }
  ObservablePair p;
  p.observed.resize(psi0.size());
  p.perturbing.resize(psi0.size());
  for (std::size_t i = 0; i < psi0.size(); ++i) {
    p.observed[i] = observable[i] * psi0[i];
    p.perturbing[i] = perturbation[i] * psi0[i];
  }
  p.description = std::move(description);
  return p;
}

SpectralWeights spectral_weight(const EigenDecomposition& eig, const ObservablePair& obs) {
  check_pair(obs, eig.size());
  SpectralWeights sw;
  sw.weights.resize(eig.size());
  sw.frequencies.resize(eig.size());
  const double E0 = eig.values()[0];
  for (std::size_t k = 0; k < eig.size(); ++k) {
    const auto psi = eig.vector(k);
    sw.weights[k] = dot(obs.observed, psi) * dot(psi, obs.perturbing);
    sw.frequencies[k] = eig.values()[k] - E0;
  }
  return sw;
}

std::vector<TimeSample> time_response(const SpectralWeights& sw, std::span<const double> taus) {
  std::vector<TimeSample> out;
  out.reserve(taus.size());
  for (double tau : taus) {
    double value = 0.0;
    if (tau > 0.0) {
      for (std::size_t k = 0; k < sw.weights.size(); ++k) {
        value -= 2.0 * sw.weights[k] * std::sin(sw.frequencies[k] * tau);
      }
    }
    out.push_back({tau, value});
  }
  return out;
}

std::vector<TimeSample> time_response(const EigenDecomposition& eig, const ObservablePair& obs,
                                      std::span<const double> taus) {
  return time_response(spectral_weight(eig, obs), taus);
}

ResponseTerms freq_response_sos_terms(const SpectralWeights& sw, double omega, double eta) {
  require_positive_eta(eta);
  const cd z(omega, eta);
  ResponseTerms t{0.0, 0.0};
  for (std::size_t k = 0; k < sw.weights.size(); ++k) {
    t.resonant += sw.weights[k] / (z - sw.frequencies[k]);
    t.antiresonant += sw.weights[k] / (z + sw.frequencies[k]);
  }
  return t;
}

std::complex<double> freq_response_sos(const SpectralWeights& sw, double omega, double eta) {
  return freq_response_sos_terms(sw, omega, eta).value();
}

std::complex<double> freq_response_sos(const EigenDecomposition& eig, const ObservablePair& obs,
                                       double omega, double eta) {
  return freq_response_sos(spectral_weight(eig, obs), omega, eta);
}

ResponseTerms freq_response_resolvent_terms(const TruncatedHamiltonian& H,
                                            const GroundState& ground, const ObservablePair& obs,
                                            double omega, double eta) {
  require_positive_eta(eta);
  check_pair(obs, H.size());
  if (ground.vector.size() != H.size()) {
    throw DimensionError("ground-state vector length does not match the Hamiltonian");
  }
  const double E0 = ground.energy;
  const cd z(omega, eta);
  auto project = [&](std::span<const double> u) {
    double c = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) c += ground.vector[i] * u[i];
    std::vector<cd> out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i] - c * ground.vector[i];
    return out;
  };
  const auto up = project(obs.perturbing);
  const auto uo = project(obs.observed);
  // (z - (H - E0))^-1 = R(E0 + z);  (z + (H - E0))^-1 = -R(E0 - z).
  ResponseTerms t;
  t.resonant = dot(obs.observed, resolvent_solve(H, E0 + z, up));
  t.antiresonant = -dot(obs.perturbing, resolvent_solve(H, E0 - z, uo));
  return t;
}

std::complex<double> freq_response_resolvent(const TruncatedHamiltonian& H,
                                             const GroundState& ground, const ObservablePair& obs,
                                             double omega, double eta) {
  return freq_response_resolvent_terms(H, ground, obs, omega, eta).value();
}

ImpurityOracle::ImpurityOracle(double V) : V_(V) {
  if (!std::isfinite(V)) throw InvalidModel("impurity potential must be finite");
  if (!(V < 0.0)) {
    throw InvalidModel("impurity model has no bound ground state unless V < 0");
  }
  // Pole of G_00 = 1/(s - V) below the band: s(E) = -sqrt(E^2 - 4) = V.
  energy_ = -std::sqrt(V * V + 4.0);
  zeta0_ = 0.5 * (energy_ + std::sqrt(energy_ * energy_ - 4.0));
  const double z2 = zeta0_ * zeta0_;
  weight_ = (1.0 - z2) / (1.0 + z2);
}

double ImpurityOracle::amplitude(long site) const {
  return std::sqrt(weight_) * std::pow(zeta0_, static_cast<double>(std::labs(site)));
}

std::complex<double> ImpurityOracle::greens(std::complex<double> z, long m, long n) const {
  if (z.imag() < 0.0) return std::conj(greens(std::conj(z), m, n));
  z = cd(z.real(), +0.0) + cd(0.0, z.imag());
  const cd s = band_root(z);
  const cd zeta = 0.5 * (z - s);
  auto free = [&](long a, long b) {
    return std::pow(zeta, static_cast<double>(std::labs(a - b))) / s;
  };
  const cd g00 = 1.0 / s;
  return free(m, n) + V_ * free(m, 0) * free(0, n) / (1.0 - V_ * g00);
}

std::complex<double> ImpurityOracle::greens_center(std::complex<double> z) const {
  if (z.imag() < 0.0) return std::conj(greens_center(std::conj(z)));
  z = cd(z.real(), +0.0) + cd(0.0, z.imag());
  return 1.0 / (band_root(z) - V_);
}

std::array<double, 4> ImpurityOracle::thresholds() const noexcept {
  const double lo = -2.0 - energy_;
  const double hi = 2.0 - energy_;
  return {-hi, -lo, lo, hi};
}

void ImpurityOracle::check_boundary(double omega) const {
  for (double t : thresholds()) {
    if (std::abs(omega - t) < kThresholdMargin) {
      throw ThresholdError("boundary value requested within 1e-3 of an ionization threshold");
    }
  }
  if (std::abs(omega) < kThresholdMargin) {
    throw ThresholdError("boundary value requested within 1e-3 of the bound-state pole at 0");
  }
}

ResponseTerms ImpurityOracle::response_terms(double omega, double eta) const {
  if (!(eta >= 0.0) || !std::isfinite(omega)) throw DomainError("oracle needs eta >= 0");
  if (eta == 0.0) check_boundary(omega);
  // u = psi0(0) e0, so both terms reduce to G_00 at shifted energies;
  // (z + H - E0)^-1 = -R(E0 - z) and R(E0 - z) = conj R(E0 - conj z).
  ResponseTerms t;
  t.resonant = weight_ * greens_center(cd(energy_ + omega, eta));
  t.antiresonant = -weight_ * std::conj(greens_center(cd(energy_ - omega, eta)));
  return t;
}

std::complex<double> ImpurityOracle::response(double omega, double eta) const {
  return response_terms(omega, eta).value();
}

double ImpurityOracle::spectral_density(double omega) const {
  return -response_terms(omega, 0.0).resonant.imag() / std::numbers::pi;
}

std::complex<double> exact_lattice_response(double V, double omega, double eta) {
  return ImpurityOracle(V).response(omega, eta);
}

}  // namespace lrbox
