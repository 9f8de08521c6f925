#include "lrbox/harness/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lrbox/errors.hpp"
#include "lrbox/harness/parallel.hpp"

namespace lrbox {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double trapezoid(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) s += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  return s;
}

std::vector<long> to_sites(std::span<const double> Ls) {
  std::vector<long> out;
  for (double l : Ls) {
    const long s = std::lround(l);
    if (s < 1) throw ConfigError("lattice L values must be >= 1");
    out.push_back(s);
  }
  return out;
}

double impurity_V(const ExperimentConfig& c) {
  if (const auto* li = std::get_if<LatticeImpurity>(&c.model)) return li->V;
  throw InvalidModel("this experiment needs the lattice_impurity model (exact oracle)");
}

template <class T>
std::vector<T> value_or(const std::optional<std::vector<T>>& v, std::vector<T> fallback) {
  return v ? *v : std::move(fallback);
}

std::vector<double> list_or(const std::optional<std::vector<double>>& v,
                            std::vector<double> fallback) {
  return value_or(v, std::move(fallback));
}

ObservablePair pair_for(const TruncatedHamiltonian& H, std::span<const double> psi0) {
  const auto o = default_observable(H);
  return observables_diagonal(o, o, psi0,
                              H.kind() == ModelKind::lattice ? "delta0" : "gaussian exp(-x^2)");
}

}  // namespace

nlohmann::json fit_json(const FitResult& fit) {
  return {{"slope", fit.slope},
          {"intercept", fit.intercept},
          {"r_squared", fit.r_squared},
          {"rms_residual", fit.rms_residual},
          {"points", fit.points},
          {"excluded", fit.excluded},
          {"noise_floor", fit.noise_floor}};
}

ImpurityBox prepare_impurity(double V, long L) {
  auto H = build_lattice(V, L);
  auto gs = ground_state(H);
  auto obs = observables_delta0(H, gs.vector);
  return {std::move(H), std::move(gs), std::move(obs)};
}

std::vector<double> default_observable(const TruncatedHamiltonian& H) {
  std::vector<double> o(H.size(), 0.0);
  if (H.kind() == ModelKind::lattice) {
    o[H.center()] = 1.0;
  } else {
    for (std::size_t i = 0; i < H.size(); ++i) o[i] = std::exp(-H.position(i) * H.position(i));
  }
  return o;
}

// ---------------------------------------------------------------- sweep

SweepResult sweep_eta_L(double V, std::span<const double> omegas, std::span<const double> etas,
                        std::span<const long> Ls, unsigned threads) {
  const ImpurityOracle oracle(V);
  const std::size_t nw = omegas.size(), ne = etas.size(), nl = Ls.size();
  SweepResult res;
  res.rows.resize(nw * ne * nl);
  auto slot = [&](std::size_t w, std::size_t e, std::size_t l) { return (w * ne + e) * nl + l; };

  parallel_for(nl, threads, [&](std::size_t l) {
    const auto box = prepare_impurity(V, Ls[l]);
    for (std::size_t w = 0; w < nw; ++w) {
      for (std::size_t e = 0; e < ne; ++e) {
        SweepRow& row = res.rows[slot(w, e, l)];
        row.omega = omegas[w];
        row.eta = etas[e];
        row.L = Ls[l];
        try {
          row.finite = freq_response_resolvent(box.H, box.ground, box.obs, omegas[w],
                                               etas[e]);
          row.exact = oracle.response(omegas[w], etas[e]);
          row.error = std::abs(row.finite - row.exact);
        } catch (const Error& err) {
          row.finite = row.exact = cplx(kNaN, kNaN);
          row.error = kNaN;
          row.status = err.what();
        }
      }
    }
  });

  for (std::size_t w = 0; w < nw; ++w) {
    for (std::size_t e = 0; e < ne; ++e) {
      SweepFit f;
      f.omega = omegas[w];
      f.eta = etas[e];
      std::vector<double> x, y;
      for (std::size_t l = 0; l < nl; ++l) {
        const auto& row = res.rows[slot(w, e, l)];
        if (row.status != "ok") continue;
        x.push_back(static_cast<double>(row.L));
        y.push_back(row.error);
      }
      try {
        f.fit = fit_semilog(x, y);
      } catch (const Error& err) {
        f.note = err.what();
      }
      res.fits.push_back(std::move(f));
    }
  }
  return res;
}

// ---------------------------------------------------------------- lap rate

LapRateResult lap_rate(double V, double omega, std::span<const double> etas) {
  const ImpurityOracle oracle(V);
  for (double t : oracle.thresholds()) {
    if (std::abs(omega - t) < kLapThresholdDistance) {
      throw ThresholdError("lap_rate: omega lies within 0.2 of an ionization threshold");
    }
  }
  if (std::abs(omega) < kLapThresholdDistance) {
    throw ThresholdError("lap_rate: omega lies within 0.2 of the bound-state pole");
  }
  LapRateResult r;
  r.omega = omega;
  const auto th = oracle.thresholds();
  r.in_continuum = std::abs(omega) > th[2] && std::abs(omega) < th[3];
  r.boundary = oracle.response(omega, 0.0);
  for (double eta : etas) {
    if (!(eta > 0.0)) throw DomainError("lap_rate: etas must be positive");
    const cplx v = oracle.response(omega, eta);
    r.etas.push_back(eta);
    r.values.push_back(v);
    r.errors.push_back(std::abs(v - r.boundary));
  }
  r.fit = fit_loglog(r.etas, r.errors);
  return r;
}

// ---------------------------------------------------------------- locality

LocalityResult locality_fit(const TruncatedHamiltonian& H, double E0, double omega, double eta) {
  if (H.kind() != ModelKind::lattice) throw InvalidModel("locality_fit needs a lattice model");
  if (!(eta > 0.0)) throw DomainError("locality_fit needs eta > 0");
  const auto col = resolvent_column(H, cplx(E0 + omega, eta), H.center());
  const std::size_t c = H.center();
  const std::size_t first = 5;
  const std::size_t last = std::max<std::size_t>(first + 1, c / 2);
  if (c + last >= H.size()) throw FitError("locality_fit: box too small for the fit window");

  std::vector<double> d, g;
  double peak = 0.0;
  for (std::size_t k = first; k <= last; ++k) {
    d.push_back(static_cast<double>(k));
    g.push_back(std::abs(col[c + k]));
    peak = std::max(peak, g.back());
  }
  const double cut = 1e-12 * peak;
  const auto usable = std::count_if(g.begin(), g.end(), [&](double v) { return v > cut; });
  if (usable < 10) {
    throw FitError("locality_fit: fewer than 10 sites resolved above round-off");
  }
  LocalityResult r;
  r.eta = eta;
  r.first_site = first;
  r.last_site = last;
  // Explicit floor one decade under the cut so that the 10x rule drops exactly
  // the sites below it.
  r.fit = fit_semilog(d, g, 0.1 * cut);
  r.alpha = -r.fit.slope;
  return r;
}

// ---------------------------------------------------------------- optimal eta

std::vector<double> default_eta_scan() { return logspace(1e-3, 1.0, 241); }

OptimalEtaResult optimal_eta(double V, double omega, std::span<const long> Ls,
                             std::span<const double> etas, unsigned threads) {
  const ImpurityOracle oracle(V);
  const cplx boundary = oracle.response(omega, 0.0);
  OptimalEtaResult res;
  res.omega = omega;
  res.etas.assign(etas.begin(), etas.end());
  if (etas.empty()) throw DomainError("optimal_eta needs a non-empty eta scan");
  std::vector<cplx> smoothed;
  for (double eta : etas) smoothed.push_back(oracle.response(omega, eta));

  res.rows.resize(Ls.size());
  res.budget.resize(Ls.size());
  res.direct.resize(Ls.size());
  parallel_for(Ls.size(), threads, [&](std::size_t l) {
    const auto box = prepare_impurity(V, Ls[l]);
    auto& budget = res.budget[l];
    auto& direct = res.direct[l];
    for (std::size_t e = 0; e < etas.size(); ++e) {
      const cplx kl = freq_response_resolvent(box.H, box.ground, box.obs, omega, etas[e]);
      budget.push_back(std::abs(smoothed[e] - boundary) + std::abs(kl - smoothed[e]));
      direct.push_back(std::abs(kl - boundary));
    }
    OptimalEtaRow row;
    row.L = Ls[l];
    const auto ib = std::min_element(budget.begin(), budget.end()) - budget.begin();
    const auto id = std::min_element(direct.begin(), direct.end()) - direct.begin();
    row.eta_star = etas[static_cast<std::size_t>(ib)];
    row.min_error = budget[static_cast<std::size_t>(ib)];
    row.direct_eta_star = etas[static_cast<std::size_t>(id)];
    row.direct_min_error = direct[static_cast<std::size_t>(id)];
    row.error_at_max_eta = budget.back();
    std::size_t minima = 0;
    for (std::size_t e = 0; e < budget.size(); ++e) {
      const bool left = e == 0 || budget[e] < budget[e - 1];
      const bool right = e + 1 == budget.size() || budget[e] < budget[e + 1];
      if (left && right) ++minima;
    }
    row.unimodal = minima == 1;
    res.rows[l] = row;
  });
  return res;
}

// ---------------------------------------------------------------- distconv

DistconvResult distconv(double V, std::span<const long> Ls, long reference_L, double center,
                        double width, std::span<const double> taus, unsigned threads) {
  if (taus.size() < 2) throw DomainError("distconv needs at least two tau points");
  if (!(width > 0.0)) throw DomainError("distconv needs a positive test-function width");
  for (long L : Ls) {
    if (4 * L > reference_L) throw DomainError("distconv needs reference_L >= 4 max(L)");
  }
  std::vector<double> g(taus.size());
  for (std::size_t i = 0; i < taus.size(); ++i) {
    const double u = (taus[i] - center) / width;
    g[i] = std::exp(-0.5 * u * u);
  }

  auto kernel = [&](long L) {
    const auto H = build_lattice(V, L);
    const auto eig = eigendecompose(H);
    const auto gs = ground_state(eig);
    const auto sw = spectral_weight(eig, observables_delta0(H, gs.vector));
    std::vector<double> k;
    for (const auto& s : time_response(sw, taus)) k.push_back(s.value);
    return k;
  };

  std::vector<std::vector<double>> ks(Ls.size() + 1);
  parallel_for(Ls.size() + 1, threads, [&](std::size_t i) {
    ks[i] = kernel(i == 0 ? reference_L : Ls[i - 1]);
  });
  const auto& kref = ks[0];

  DistconvResult res;
  res.reference_L = reference_L;
  res.center = center;
  res.width = width;
  std::vector<double> abs_kg(taus.size());
  for (std::size_t i = 0; i < taus.size(); ++i) abs_kg[i] = std::abs(kref[i]) * g[i];
  res.floor = 64.0 * std::numeric_limits<double>::epsilon() * trapezoid(taus, abs_kg);
  res.truncation = std::max(g.front() * (taus.front() > 0.0 ? 1.0 : 0.0), g.back());
  res.truncation_flag = res.truncation > res.floor;

  std::vector<double> x, y;
  for (std::size_t l = 0; l < Ls.size(); ++l) {
    std::vector<double> diff(taus.size());
    for (std::size_t i = 0; i < taus.size(); ++i) diff[i] = (ks[l + 1][i] - kref[i]) * g[i];
    DistconvRow row;
    row.L = Ls[l];
    row.error = std::abs(trapezoid(taus, diff));
    row.at_floor = row.error <= 10.0 * res.floor;
    res.rows.push_back(row);
    x.push_back(static_cast<double>(row.L));
    y.push_back(row.error);
  }
  try {
    res.fit = fit_loglog(x, y, res.floor);
  } catch (const FitError& e) {
    res.note = e.what();
  }
  return res;
}

// ---------------------------------------------------------------- figures

double decay_ratio(std::span<const double> taus, std::span<const double> values) {
  double early = 0.0, late = 0.0;
  bool has_late = false;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    if (taus[i] >= 0.0 && taus[i] <= 20.0) early = std::max(early, std::abs(values[i]));
    if (taus[i] >= 40.0 && taus[i] <= 60.0) {
      late = std::max(late, std::abs(values[i]));
      has_late = true;
    }
  }
  if (!has_late || early == 0.0) {
    throw DomainError("decay statistic needs samples on [0, 20] and [40, 60]");
  }
  return late / early;
}

Figure1Result figure1(double V, std::span<const long> Ls, std::span<const double> taus,
                      unsigned threads) {
  Figure1Result r;
  r.Ls.assign(Ls.begin(), Ls.end());
  r.taus.assign(taus.begin(), taus.end());
  r.values.resize(Ls.size());
  r.decay_ratio.resize(Ls.size(), kNaN);
  parallel_for(Ls.size(), threads, [&](std::size_t l) {
    const auto H = build_lattice(V, Ls[l]);
    const auto eig = eigendecompose(H);
    const auto gs = ground_state(eig);
    for (const auto& s : time_response(eig, observables_delta0(H, gs.vector), taus)) {
      r.values[l].push_back(s.value);
    }
  });
  for (std::size_t l = 0; l < Ls.size(); ++l) {
    try {
      r.decay_ratio[l] = decay_ratio(taus, r.values[l]);
    } catch (const DomainError&) {
      // grid does not reach the late window; ratio stays NaN
    }
  }
  return r;
}

std::size_t count_peaks(std::span<const double> x, std::span<const double> y, double lo,
                        double hi) {
  std::size_t peaks = 0;
  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    if (x[i] < lo || x[i] > hi) continue;
    if (y[i] > y[i - 1] && y[i] > y[i + 1]) ++peaks;
  }
  return peaks;
}

Figure2Result figure2(double V, std::span<const long> Ls, std::span<const double> etas,
                      std::span<const double> omegas, unsigned threads) {
  const ImpurityOracle oracle(V);
  Figure2Result r;
  r.omegas.assign(omegas.begin(), omegas.end());
  r.curves.resize(Ls.size() * etas.size());
  parallel_for(Ls.size(), threads, [&](std::size_t l) {
    const auto H = build_lattice(V, Ls[l]);
    const auto eig = eigendecompose(H);
    const auto gs = ground_state(eig);
    const auto sw = spectral_weight(eig, observables_delta0(H, gs.vector));
    for (std::size_t e = 0; e < etas.size(); ++e) {
      auto& c = r.curves[l * etas.size() + e];
      c.L = Ls[l];
      c.eta = etas[e];
      std::vector<double> y;
      for (double w : omegas) {
        c.values.push_back(freq_response_sos(sw, w, etas[e]));
        c.exact.push_back(oracle.response(w, etas[e]));
        c.sup_error = std::max(c.sup_error, std::abs(c.values.back() - c.exact.back()));
        y.push_back(-c.values.back().imag());
      }
      c.peaks = count_peaks(omegas, y, 2.6, 6.4);
    }
  });
  return r;
}

// ---------------------------------------------------------------- kernel orders

KernelOrderResult kernel_orders(double V, long L, double omega, std::span<const double> etas,
                                std::span<const KernelFamily> families, int hermite_order) {
  const ImpurityOracle oracle(V);
  KernelOrderResult r;
  r.omega = omega;
  r.L = L;
  r.exact = oracle.spectral_density(omega);
  const auto H = build_lattice(V, L);
  const auto eig = eigendecompose(H);
  const auto gs = ground_state(eig);
  const auto sw = spectral_weight(eig, observables_delta0(H, gs.vector));
  for (auto fam : families) {
    r.labels.push_back(KernelSpec::make(fam, hermite_order, 1.0).label());
    r.slopes.push_back(order_slope(sw, fam, hermite_order, omega, etas, r.exact));
  }
  return r;
}

// ---------------------------------------------------------------- CLI glue

namespace {

ExperimentResult run_ground_state(const ExperimentConfig& c) {
  const auto Ls = list_or(c.L, {1000});
  Table t({"L", "n", "E0", "gap", "degenerate", "psi0_center", "E0_reference", "abs_error"});
  std::vector<std::vector<Cell>> rows(Ls.size());
  std::optional<double> ref;
  if (const auto* li = std::get_if<LatticeImpurity>(&c.model); li && li->V < 0.0) {
    ref = ImpurityOracle(li->V).ground_energy();
  } else if (const auto* co = std::get_if<Continuum1d>(&c.model)) {
    if (const auto* pt = std::get_if<PoschlTeller>(&co->potential)) {
      const double lam = 0.5 * (std::sqrt(1.0 + 4.0 * pt->depth) - 1.0);
      ref = -lam * lam;
    }
  }
  parallel_for(Ls.size(), c.threads, [&](std::size_t i) {
    const auto H = build(c.model, Ls[i]);
    const auto gs = ground_state(H);
    rows[i] = {Ls[i],
               static_cast<long long>(H.size()),
               gs.energy,
               gs.gap,
               std::string(gs.degenerate ? "true" : "false"),
               gs.vector[H.center()],
               ref ? *ref : kNaN,
               ref ? std::abs(gs.energy - *ref) : kNaN};
  });
  for (auto& row : rows) t.add_row(std::move(row));
  nlohmann::json s{{"model", describe(c.model)}};
  if (ref) s["reference_energy"] = *ref;
  return {"ground-state", std::move(t), s};
}

ExperimentResult run_time_response(const ExperimentConfig& c) {
  const auto Ls = list_or(c.L, {100});
  const auto taus = list_or(c.tau, arange(0.0, 100.0, 0.05));
  Table t({"L", "tau", "K"});
  std::vector<std::vector<double>> vals(Ls.size());
  parallel_for(Ls.size(), c.threads, [&](std::size_t i) {
    const auto H = build(c.model, Ls[i]);
    const auto eig = eigendecompose(H);
    const auto gs = ground_state(eig);
    for (const auto& s : time_response(eig, pair_for(H, gs.vector), taus)) {
      vals[i].push_back(s.value);
    }
  });
  for (std::size_t i = 0; i < Ls.size(); ++i) {
    for (std::size_t j = 0; j < taus.size(); ++j) t.add_row({Ls[i], taus[j], vals[i][j]});
  }
  return {"time-response", std::move(t), {{"model", describe(c.model)}}};
}

ExperimentResult run_freq_response(const ExperimentConfig& c) {
  const auto Ls = list_or(c.L, {200});
  const auto etas = list_or(c.eta, {0.5});
  const auto omegas = list_or(c.omega, arange(0.0, 9.0, 0.05));
  std::optional<ImpurityOracle> oracle;
  if (const auto* li = std::get_if<LatticeImpurity>(&c.model); li && li->V < 0.0) {
    oracle.emplace(li->V);
  }
  Table t({"L", "eta", "omega", "re_sos", "im_sos", "re_resolvent", "im_resolvent", "rel_diff",
           "re_exact", "im_exact", "abs_error"});
  std::vector<std::vector<std::vector<Cell>>> rows(Ls.size());
  std::vector<double> max_rel(Ls.size(), 0.0);
  parallel_for(Ls.size(), c.threads, [&](std::size_t i) {
    const auto H = build(c.model, Ls[i]);
    const auto eig = eigendecompose(H);
    const auto gs = ground_state(eig);
    const auto obs = pair_for(H, gs.vector);
    const auto sw = spectral_weight(eig, obs);
    for (double eta : etas) {
      for (double w : omegas) {
        const cplx a = freq_response_sos(sw, w, eta);
        const cplx b = freq_response_resolvent(H, gs, obs, w, eta);
        const double rel = std::abs(a - b) / std::max(std::abs(a), 1e-300);
        max_rel[i] = std::max(max_rel[i], rel);
        const cplx ex = oracle ? oracle->response(w, eta) : cplx(kNaN, kNaN);
        rows[i].push_back({Ls[i], eta, w, a.real(), a.imag(), b.real(), b.imag(), rel, ex.real(),
                           ex.imag(), oracle ? std::abs(a - ex) : kNaN});
      }
    }
  });
  for (auto& block : rows) {
    for (auto& row : block) t.add_row(std::move(row));
  }
  return {"freq-response",
          std::move(t),
          {{"model", describe(c.model)},
           {"max_rel_diff", *std::max_element(max_rel.begin(), max_rel.end())}}};
}

ExperimentResult run_sweep(const ExperimentConfig& c) {
  const double V = impurity_V(c);
  const auto omegas = list_or(c.omega, {3.0});
  const auto etas = list_or(c.eta, {0.05, 0.1, 0.2});
  const auto Ls = to_sites(list_or(c.L, arange(50.0, 1600.0, 10.0)));
  const auto r = sweep_eta_L(V, omegas, etas, Ls, c.threads);
  Table t({"omega", "eta", "L", "re_finite", "im_finite", "re_exact", "im_exact", "abs_error",
           "status"});
  for (const auto& row : r.rows) {
    t.add_row({row.omega, row.eta, static_cast<long long>(row.L), row.finite.real(),
               row.finite.imag(), row.exact.real(), row.exact.imag(), row.error, row.status});
  }
  nlohmann::json fits = nlohmann::json::array();
  for (const auto& f : r.fits) {
    nlohmann::json j{{"omega", f.omega}, {"eta", f.eta}};
    if (f.fit) {
      j["fit"] = fit_json(*f.fit);
      j["rate"] = f.rate();
      j["rate_over_eta"] = f.rate() / f.eta;
    } else {
      j["error"] = f.note;
    }
    fits.push_back(j);
  }
  return {"sweep", std::move(t), {{"fits", fits}}};
}

ExperimentResult run_lap_rate(const ExperimentConfig& c) {
  const double V = impurity_V(c);
  const auto omegas = list_or(c.omega, {3.0});
  const auto etas = list_or(c.eta, logspace(1e-3, 1e-1, 9));
  Table t({"omega", "eta", "re_K", "im_K", "re_boundary", "im_boundary", "abs_error"});
  nlohmann::json fits = nlohmann::json::array();
  for (double w : omegas) {
    const auto r = lap_rate(V, w, etas);
    for (std::size_t i = 0; i < r.etas.size(); ++i) {
      t.add_row({w, r.etas[i], r.values[i].real(), r.values[i].imag(), r.boundary.real(),
                 r.boundary.imag(), r.errors[i]});
    }
    fits.push_back({{"omega", w}, {"in_continuum", r.in_continuum}, {"fit", fit_json(r.fit)}});
  }
  return {"lap-rate", std::move(t), {{"fits", fits}}};
}

ExperimentResult run_locality(const ExperimentConfig& c) {
  const auto Ls = list_or(c.L, {2000});
  const auto omegas = list_or(c.omega, {3.0});
  const auto etas = list_or(c.eta, {0.05, 0.1, 0.2, 0.4});
  const auto H = build(c.model, Ls.front());
  const double E0 = ground_state(H).energy;
  Table t({"L", "omega", "eta", "alpha", "alpha_over_eta", "r_squared", "rms_residual", "points",
           "first_site", "last_site"});
  std::vector<LocalityResult> res(omegas.size() * etas.size());
  parallel_for(res.size(), c.threads, [&](std::size_t i) {
    res[i] = locality_fit(H, E0, omegas[i / etas.size()], etas[i % etas.size()]);
  });
  for (std::size_t i = 0; i < res.size(); ++i) {
    const auto& r = res[i];
    t.add_row({static_cast<long long>(std::lround(Ls.front())), omegas[i / etas.size()], r.eta,
               r.alpha, r.alpha / r.eta, r.fit.r_squared, r.fit.rms_residual,
               static_cast<long long>(r.fit.points), static_cast<long long>(r.first_site),
               static_cast<long long>(r.last_site)});
  }
  return {"locality", std::move(t), {{"energy_shift", E0}}};
}

ExperimentResult run_optimal_eta(const ExperimentConfig& c) {
  const double V = impurity_V(c);
  const double omega = list_or(c.omega, {3.0}).front();
  const auto Ls = to_sites(list_or(c.L, {250, 500, 1000}));
  const auto etas = list_or(c.eta, default_eta_scan());
  const auto r = optimal_eta(V, omega, Ls, etas, c.threads);
  Table t({"L", "eta_star", "min_error", "direct_eta_star", "direct_min_error",
           "error_at_max_eta", "unimodal"});
  for (const auto& row : r.rows) {
    t.add_row({static_cast<long long>(row.L), row.eta_star, row.min_error, row.direct_eta_star,
               row.direct_min_error, row.error_at_max_eta,
               std::string(row.unimodal ? "true" : "false")});
  }
  nlohmann::json ratios = nlohmann::json::array();
  for (std::size_t i = 1; i < r.rows.size(); ++i) {
    ratios.push_back({{"L", r.rows[i - 1].L},
                      {"L_next", r.rows[i].L},
                      {"eta_star_ratio", r.rows[i].eta_star / r.rows[i - 1].eta_star},
                      {"min_error_ratio", r.rows[i].min_error / r.rows[i - 1].min_error},
                      {"direct_eta_star_ratio",
                       r.rows[i].direct_eta_star / r.rows[i - 1].direct_eta_star},
                      {"direct_min_error_ratio",
                       r.rows[i].direct_min_error / r.rows[i - 1].direct_min_error}});
  }
  return {"optimal-eta", std::move(t), {{"omega", omega}, {"ratios", ratios}}};
}

ExperimentResult run_distconv(const ExperimentConfig& c) {
  const double V = impurity_V(c);
  const auto Ls = to_sites(list_or(c.L, {100, 200, 400}));
  const long ref = c.reference_L ? std::lround(*c.reference_L)
                                 : 4 * *std::max_element(Ls.begin(), Ls.end());
  const auto taus =
      list_or(c.tau, arange(0.0, c.test_center + 10.0 * c.test_width, 0.01));
  const auto r = distconv(V, Ls, ref, c.test_center, c.test_width, taus, c.threads);
  Table t({"L", "reference_L", "pairing_error", "floor", "at_floor"});
  for (const auto& row : r.rows) {
    t.add_row({static_cast<long long>(row.L), static_cast<long long>(ref), row.error, r.floor,
               std::string(row.at_floor ? "true" : "false")});
  }
  nlohmann::json s{{"floor", r.floor},
                   {"truncation", r.truncation},
                   {"truncation_flag", r.truncation_flag}};
  if (r.fit) {
    s["fit"] = fit_json(*r.fit);
  } else {
    s["fit_error"] = r.note;
  }
  return {"distconv", std::move(t), s};
}

ExperimentResult run_kubo(const ExperimentConfig& c) {
  const double L = list_or(c.L, {200}).front();
  const auto eps = list_or(c.epsilon, {0.01, 0.02, 0.04, 0.08});
  const double T = c.T.value_or(10.0);
  const auto H = build(c.model, L);
  const double max_eps = std::abs(*std::max_element(
      eps.begin(), eps.end(), [](double a, double b) { return std::abs(a) < std::abs(b); }));
  const double dt = c.dt.value_or(default_time_step(H, max_eps));
  const auto eig = eigendecompose(H);
  const auto gs = ground_state(eig);
  const auto o = default_observable(H);
  const auto rep = kubo_remainder(H, eig, gs.vector, o, o, eps, c.drive, T, dt);
  Table t({"epsilon", "sup_remainder", "t_at_sup", "quadrature_error", "quadrature_floor"});
  for (const auto& row : rep.rows) {
    t.add_row({row.epsilon, row.sup_remainder, row.t_at_sup, row.quadrature_error,
               std::string(row.quadrature_floor ? "true" : "false")});
  }
  return {"kubo-check",
          std::move(t),
          {{"dt", dt}, {"T", T}, {"drive", to_string(c.drive)}, {"fit", fit_json(rep.fit)}}};
}

ExperimentResult run_figure1(const ExperimentConfig& c) {
  const double V = impurity_V(c);
  const auto Ls = to_sites(list_or(c.L, {30, 100, 1000}));
  const auto taus = list_or(c.tau, arange(0.0, 100.0, 0.05));
  const auto r = figure1(V, Ls, taus, c.threads);
  Table t({"L", "tau", "K"});
  nlohmann::json ratios = nlohmann::json::object();
  for (std::size_t l = 0; l < Ls.size(); ++l) {
    for (std::size_t j = 0; j < taus.size(); ++j) {
      t.add_row({static_cast<long long>(Ls[l]), taus[j], r.values[l][j]});
    }
    ratios[std::to_string(Ls[l])] = r.decay_ratio[l];
  }
  return {"figure1",
          std::move(t),
          {{"decay_ratio", ratios}, {"decay_threshold", kDecayThreshold},
           {"grid_note", "tau grid chosen freely (step 0.05 on [0, 100] by default)"}}};
}

ExperimentResult run_figure2(const ExperimentConfig& c) {
  const double V = impurity_V(c);
  const auto Ls = to_sites(list_or(c.L, {30, 1000}));
  const auto etas = list_or(c.eta, {0.02, 0.5});
  const auto omegas = list_or(c.omega, arange(0.0, 9.0, 0.001));
  const auto r = figure2(V, Ls, etas, omegas, c.threads);
  Table t({"L", "eta", "omega", "re_K", "im_K", "re_exact", "im_exact", "abs_error"});
  nlohmann::json curves = nlohmann::json::array();
  for (const auto& cv : r.curves) {
    for (std::size_t i = 0; i < omegas.size(); ++i) {
      t.add_row({static_cast<long long>(cv.L), cv.eta, omegas[i], cv.values[i].real(),
                 cv.values[i].imag(), cv.exact[i].real(), cv.exact[i].imag(),
                 std::abs(cv.values[i] - cv.exact[i])});
    }
    curves.push_back({{"L", cv.L}, {"eta", cv.eta}, {"peaks", cv.peaks},
                      {"sup_error", cv.sup_error}});
  }
  return {"figure2",
          std::move(t),
          {{"curves", curves},
           {"grid_note", "omega grid chosen freely (step 0.001 on [0, 9] by default)"}}};
}

ExperimentResult run_kernel_order(const ExperimentConfig& c) {
  const double V = impurity_V(c);
  const long L = to_sites(list_or(c.L, {2000})).front();
  const double omega = list_or(c.omega, {3.0}).front();
  const auto etas = list_or(c.eta, logspace(0.01, 0.1, 9));
  std::vector<KernelFamily> fams;
  for (const auto& k : value_or<std::string>(c.kernels, {"lorentzian", "gaussian", "hermite"})) {
    fams.push_back(parse_kernel_family(k));
  }
  const auto r = kernel_orders(V, L, omega, etas, fams, c.kernel_order);
  Table t({"kernel", "eta", "abs_error"});
  nlohmann::json slopes = nlohmann::json::array();
  for (std::size_t k = 0; k < r.labels.size(); ++k) {
    for (std::size_t i = 0; i < r.slopes[k].etas.size(); ++i) {
      t.add_row({r.labels[k], r.slopes[k].etas[i], r.slopes[k].errors[i]});
    }
    slopes.push_back({{"kernel", r.labels[k]}, {"fit", fit_json(r.slopes[k].fit)}});
  }
  return {"kernel-order",
          std::move(t),
          {{"omega", omega}, {"L", L}, {"exact_density", r.exact}, {"slopes", slopes}}};
}

using Runner = ExperimentResult (*)(const ExperimentConfig&);

const std::vector<std::pair<std::string, Runner>>& registry() {
  static const std::vector<std::pair<std::string, Runner>> r = {
      {"ground-state", run_ground_state}, {"time-response", run_time_response},
      {"freq-response", run_freq_response}, {"sweep", run_sweep},
      {"lap-rate", run_lap_rate},         {"locality", run_locality},
      {"optimal-eta", run_optimal_eta},   {"distconv", run_distconv},
      {"kubo-check", run_kubo},           {"figure1", run_figure1},
      {"figure2", run_figure2},           {"kernel-order", run_kernel_order}};
  return r;
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, fn] : registry()) n.push_back(name);
    return n;
  }();
  return names;
}

ExperimentResult run_experiment(const std::string& name, const ExperimentConfig& config) {
  validate(config);
  for (const auto& [n, fn] : registry()) {
    if (n == name) return fn(config);
  }
  throw ConfigError("unknown experiment '" + name + "'");
}

}  // namespace lrbox
