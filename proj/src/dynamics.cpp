#include "lrbox/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "lrbox/errors.hpp"
#include "lrbox/response.hpp"

namespace lrbox {

namespace {

using cd = std::complex<double>;

double norm(std::span<const cd> v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

}  // namespace

double drive_value(Drive drive, double t) noexcept {
  if (t < 0.0) return 0.0;
  switch (drive) {
    case Drive::ramp:
      return -std::expm1(-t);
    case Drive::sin2: {
      const double s = std::sin(t);
      return s * s;
    }
  }
  return 0.0;
}

Drive parse_drive(const std::string& name) {
  if (name == "ramp") return Drive::ramp;
  if (name == "sin2") return Drive::sin2;
  throw ConfigError("unknown drive '" + name + "'");
}

std::string to_string(Drive drive) { return drive == Drive::ramp ? "ramp" : "sin2"; }

ComplexVector propagate_free(const EigenDecomposition& eig, std::span<const cd> v, double t) {
  const std::size_t n = eig.size();
  if (v.size() != n) throw DimensionError("propagate_free: vector length mismatch");
  ComplexVector out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto psi = eig.vector(k);
    cd c = 0.0;
    for (std::size_t i = 0; i < n; ++i) c += psi[i] * v[i];
    c *= std::polar(1.0, -eig.values()[k] * t);
    for (std::size_t i = 0; i < n; ++i) out[i] += c * psi[i];
  }
  return out;
}

double default_time_step(const TruncatedHamiltonian& H, double epsilon) {
  return std::min(0.01, 0.1 / (H.norm_bound() + std::abs(epsilon)));
}

Trajectory propagate_perturbed(const TruncatedHamiltonian& H, std::span<const cd> initial,
                               std::span<const double> perturbation, double epsilon, Drive drive,
                               double dt, double T, std::size_t stride) {
  const std::size_t n = H.size();
  if (initial.size() != n || perturbation.size() != n) {
    throw DimensionError("propagate_perturbed: vector length mismatch");
  }
  if (!(dt > 0.0) || !(T >= 0.0) || stride == 0) {
    throw DomainError("propagate_perturbed needs dt > 0, T >= 0, stride >= 1");
  }
  if (!(std::abs(epsilon) < 1.0)) throw DomainError("perturbation strength must satisfy |eps| < 1");
  if (dt * (H.norm_bound() + std::abs(epsilon)) > 1.0) {
    throw StepSizeError("time step too large for the Hamiltonian norm");
  }

  const auto steps = static_cast<std::size_t>(std::llround(T / dt));
  const double n0 = norm(initial);
  Trajectory tr;
  tr.dt = dt;
  tr.epsilon = epsilon;
  ComplexVector psi(initial.begin(), initial.end());
  tr.times.push_back(0.0);
  tr.states.push_back(psi);
  tr.norms.push_back(n0);

  const auto d = H.diag();
  const auto e = H.offdiag();
  const cd half(0.0, 0.5 * dt);
  std::vector<cd> off(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) off[i] = half * e[i];
  std::vector<cd> rhs(n), diag(n);

  for (std::size_t step = 0; step < steps; ++step) {
    const double f = epsilon * drive_value(drive, (static_cast<double>(step) + 0.5) * dt);
    for (std::size_t i = 0; i < n; ++i) {
      const cd a = half * (d[i] + f * perturbation[i]);
      diag[i] = 1.0 + a;
      rhs[i] = (1.0 - a) * psi[i];
      if (i > 0) rhs[i] -= off[i - 1] * psi[i - 1];
      if (i + 1 < n) rhs[i] -= off[i] * psi[i + 1];
    }
    psi = tridiagonal_solve(off, diag, off, rhs);
    const double nrm = norm(psi);
    if (std::abs(nrm - n0) > kNormDriftTol * std::max(1.0, n0)) {
      throw StepSizeError("norm drift exceeds tolerance", static_cast<std::ptrdiff_t>(step));
    }
    if ((step + 1) % stride == 0 || step + 1 == steps) {
      tr.times.push_back(static_cast<double>(step + 1) * dt);
      tr.states.push_back(psi);
      tr.norms.push_back(nrm);
    }
  }
  return tr;
}

double expectation(std::span<const cd> psi, std::span<const double> observable) {
  if (psi.size() != observable.size()) throw DimensionError("expectation: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) s += observable[i] * std::norm(psi[i]);
  return s;
}

std::vector<double> causal_convolution(std::span<const double> kernel, Drive drive, double dt) {
  const std::size_t m = kernel.size();
  std::vector<double> f(m);
  for (std::size_t j = 0; j < m; ++j) f[j] = drive_value(drive, static_cast<double>(j) * dt);
  std::vector<double> out(m, 0.0);
  for (std::size_t j = 1; j < m; ++j) {
    double s = 0.5 * (kernel[j] * f[0] + kernel[0] * f[j]);
    for (std::size_t k = 1; k < j; ++k) s += kernel[j - k] * f[k];
    out[j] = dt * s;
  }
  return out;
}

KuboReport kubo_remainder(const TruncatedHamiltonian& H, const EigenDecomposition& eig,
                          std::span<const double> psi0, std::span<const double> observable,
                          std::span<const double> perturbation, std::span<const double> epsilons,
                          Drive drive, double T, double dt) {
  if (epsilons.size() < 2) throw DomainError("kubo_remainder needs at least two epsilons");
  const auto obs = observables_diagonal(observable, perturbation, psi0, "kubo");
  const auto steps = static_cast<std::size_t>(std::llround(T / dt));
  std::vector<double> taus(steps + 1);
  for (std::size_t j = 0; j <= steps; ++j) taus[j] = static_cast<double>(j) * dt;
  std::vector<double> kernel;
  for (const auto& s : time_response(eig, obs, taus)) kernel.push_back(s.value);
  const auto conv = causal_convolution(kernel, drive, dt);

  // Same quadrature on the doubled step, compared at the shared times.
  std::vector<double> coarse_kernel;
  for (std::size_t j = 0; j <= steps; j += 2) coarse_kernel.push_back(kernel[j]);
  const auto coarse = causal_convolution(coarse_kernel, drive, 2.0 * dt);
  double quad = 0.0;
  for (std::size_t j = 0; j < coarse.size(); ++j) {
    quad = std::max(quad, std::abs(conv[2 * j] - coarse[j]) / 3.0);
  }

  const ComplexVector initial(psi0.begin(), psi0.end());
  const double base = expectation(initial, observable);

  KuboReport rep;
  rep.dt = dt;
  rep.T = T;
  std::vector<double> eps_abs, sups;
  for (double eps : epsilons) {
    const auto tr = propagate_perturbed(H, initial, perturbation, eps, drive, dt, T, 1);
    KuboRow row;
    row.epsilon = eps;
    for (std::size_t j = 0; j < tr.states.size(); ++j) {
      const double r = expectation(tr.states[j], observable) - base - eps * conv[j];
      if (std::abs(r) > row.sup_remainder) {
        row.sup_remainder = std::abs(r);
        row.t_at_sup = tr.times[j];
      }
    }
    row.quadrature_error = std::abs(eps) * quad;
    row.quadrature_floor = row.quadrature_error > 0.1 * row.sup_remainder;
    eps_abs.push_back(std::abs(eps));
    sups.push_back(row.sup_remainder);
    rep.rows.push_back(row);
  }
  // The quadrature error is an explicit floor; no tail-based estimate is needed.
  rep.fit = fit_loglog(eps_abs, sups, 0.0);
  return rep;
}

MomentReport moment_growth(const EigenDecomposition& eig, const TruncatedHamiltonian& H,
                           std::span<const cd> initial, std::span<const double> ts) {
  const std::size_t n = H.size();
  if (initial.size() != n || eig.size() != n) {
    throw DimensionError("moment_growth: dimension mismatch");
  }
  const double h = H.spacing();
  auto moments = [&](std::span<const cd> psi) {
    double x2 = 0.0, d2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      x2 += H.position(i) * H.position(i) * std::norm(psi[i]);
      const cd next = i + 1 < n ? psi[i + 1] : cd(0.0);
      d2 += std::norm((next - psi[i]) / h);
    }
    return std::pair{std::sqrt(x2), std::sqrt(d2)};
  };

  MomentReport rep;
  const auto [x0, d0] = moments(initial);
  rep.c0 = x0 + d0 + 4.0 * norm(initial);
  for (double t : ts) {
    const auto psi = propagate_free(eig, initial, t);
    const auto [x, dd] = moments(psi);
    rep.rows.push_back({t, x, dd});
    const double bound = rep.c0 * (1.0 + t) * (1.0 + t);
    if (x > bound || dd > bound) rep.within_bound = false;
  }
  return rep;
}

}  // namespace lrbox
