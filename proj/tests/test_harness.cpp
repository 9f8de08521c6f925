#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lrbox/errors.hpp"
#include "lrbox/fit.hpp"
#include "lrbox/harness/cli.hpp"
#include "lrbox/harness/config.hpp"
#include "lrbox/harness/experiments.hpp"
#include "lrbox/harness/manifest.hpp"
#include "lrbox/harness/parallel.hpp"
#include "lrbox/harness/table.hpp"

using namespace lrbox;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("lrbox_test_" + name);
  fs::remove_all(dir);
  return dir;
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "lrbox");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_SUITE("fit") {
  TEST_CASE("exact line") {
    const std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7};
    const auto f = fit_line(x, y);
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.intercept == doctest::Approx(1.0));
    CHECK(f.r_squared == doctest::Approx(1.0));
    CHECK(f.rms_residual < 1e-14);
    CHECK(f.points == 4);
    CHECK_THROWS_AS(fit_line(std::vector<double>{1}, std::vector<double>{1}), FitError);
    CHECK_THROWS_AS(fit_line(std::vector<double>{1, 1}, std::vector<double>{1, 2}), FitError);
  }

  TEST_CASE("power law without floor") {
    const auto x = logspace(1e-3, 1e-1, 12);
    std::vector<double> y;
    for (double v : x) y.push_back(3.0 * v * v);
    const auto f = fit_loglog(x, y);
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.excluded == 0);
    CHECK(f.noise_floor == 0.0);
  }

  TEST_CASE("exponential decay into a floor") {
    std::vector<double> x, y;
    for (int L = 10; L <= 400; L += 10) {
      x.push_back(L);
      const double noise = 1e-16 * (1.0 + 0.5 * std::sin(L));
      y.push_back(std::exp(-0.2 * L) + noise);
    }
    const auto f = fit_semilog(x, y);
    CHECK(f.noise_floor > 0.0);
    CHECK(f.noise_floor < 1e-15);
    CHECK(f.excluded > 20);
    CHECK(-f.slope == doctest::Approx(0.2).epsilon(0.01));
  }

  TEST_CASE("all points at the floor") {
    const std::vector<double> x{1, 2, 3}, y{1e-17, 2e-17, 1e-17};
    CHECK_THROWS_AS(fit_loglog(x, y, 1e-16), FitError);
    CHECK_THROWS_AS(fit_loglog(std::vector<double>{0, 1}, std::vector<double>{1, 1}), DomainError);
  }

  TEST_CASE("grids") {
    const auto a = arange(50.0, 1600.0, 10.0);
    CHECK(a.size() == 156);
    CHECK(a.back() == doctest::Approx(1600.0));
    const auto l = logspace(1e-3, 1.0, 241);
    CHECK(l.front() == 1e-3);
    CHECK(l.back() == 1.0);
    CHECK(l[120] == doctest::Approx(std::sqrt(1e-3)));
    CHECK(linspace(0.0, 1.0, 5)[2] == 0.5);
  }
}

TEST_SUITE("harness") {
  TEST_CASE("round-trip number formatting") {
    for (double v : {0.1, 1.0 / 3.0, -4.47213595499958, 1e-300, 6.02e23, 0.0}) {
      CHECK(std::stod(format_double(v)) == v);
    }
    CHECK(format_double(1000.0) == "1000");
    CHECK(format_double(NAN) == "nan");
    CHECK(format_double(-INFINITY) == "-inf");
  }

  TEST_CASE("table CSV") {
    Table t({"a", "b", "c"});
    t.add_row({1.5, 2LL, std::string("x,y")});
    t.add_row({0.25, 3LL, std::string("plain")});
    CHECK(t.to_csv() == "a,b,c\n1.5,2,\"x,y\"\n0.25,3,plain\n");
    CHECK(t.numbers("b") == std::vector<double>{2.0, 3.0});
    CHECK_THROWS_AS(t.numbers("c"), DimensionError);
    CHECK_THROWS_AS(t.add_row({1.0}), DimensionError);
    CHECK_THROWS_AS(t.column("zz"), DimensionError);
  }

  TEST_CASE("sha256") {
    CHECK(sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  }

  TEST_CASE("parallel_for keeps slot order and rethrows") {
    std::vector<int> out(100, -1);
    parallel_for(out.size(), 4, [&](std::size_t i) { out[i] = static_cast<int>(i * i); });
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == static_cast<int>(i * i));
    CHECK_THROWS_AS(parallel_for(10, 3,
                                 [](std::size_t i) {
                                   if (i == 7) throw DomainError("seven");
                                 }),
                    DomainError);
  }

  TEST_CASE("config parsing") {
    const auto c = parse_config(R"(
model: {kind: lattice_impurity, V: -3}
L: {from: 50, to: 100, step: 25}
eta: {from: 0.01, to: 0.1, count: 3, log: true}
omega: [1.0, 3.0]
drive: sin2
kernels: [gaussian]
kernel_order: 5
test_function: {center: 8, width: 2}
threads: 2
seed: 9
)");
    CHECK(std::get<LatticeImpurity>(c.model).V == -3.0);
    CHECK(*c.L == std::vector<double>{50, 75, 100});
    CHECK(c.eta->size() == 3);
    CHECK((*c.eta)[1] == doctest::Approx(std::sqrt(1e-3)));
    CHECK(c.drive == Drive::sin2);
    CHECK(c.kernel_order == 5);
    CHECK(c.test_center == 8.0);
    CHECK(c.threads == 2);
    CHECK(c.seed == 9);
    const auto j = c.echo();
    CHECK(j["model"]["V"] == -3.0);
    CHECK(j["drive"] == "sin2");

    const auto cont = parse_config("model: {kind: continuum_1d, potential: gaussian_well, depth: 2, width: 0.5, h: 0.1}");
    const auto& m = std::get<Continuum1d>(cont.model);
    CHECK(m.h == 0.1);
    CHECK(std::get<GaussianWell>(m.potential).width == 0.5);
    CHECK(parse_config("").out == "out");
  }

  TEST_CASE("config errors") {
    CHECK_THROWS_AS(parse_config("omega: [3, 1]"), ConfigError);
    CHECK_THROWS_AS(parse_config("eta: [0.1, -0.1]"), ConfigError);
    CHECK_THROWS_AS(parse_config("L: []"), ConfigError);
    CHECK_THROWS_AS(parse_config("bogus: 1"), ConfigError);
    CHECK_THROWS_AS(parse_config("model: {kind: cubic}"), ConfigError);
    CHECK_THROWS_AS(parse_config("drive: step"), ConfigError);
    CHECK_THROWS_AS(parse_config("kernel_order: 4"), ConfigError);
    CHECK_THROWS_AS(parse_config("eta: [abc]"), ConfigError);
    CHECK_THROWS_AS(parse_config("{"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.yaml"), ConfigError);
  }

  TEST_CASE("sweep rows are ordered and errors nonnegative") {
    const std::vector<double> omegas{3.0, 4.0}, etas{0.1, 0.2};
    const std::vector<long> Ls{40, 60, 80};
    const auto r = sweep_eta_L(-4.0, omegas, etas, Ls, 3);
    REQUIRE(r.rows.size() == 12);
    CHECK(r.rows[0].omega == 3.0);
    CHECK(r.rows[0].eta == 0.1);
    CHECK(r.rows[1].L == 60);
    CHECK(r.rows[3].eta == 0.2);
    CHECK(r.rows[6].omega == 4.0);
    for (const auto& row : r.rows) CHECK(row.error >= 0.0);
    CHECK(r.fits.size() == 4);
  }

  TEST_CASE("sweep errors decrease with L") {
    const std::vector<double> omegas{3.0}, etas{0.1};
    const std::vector<long> Ls{50, 100, 200, 400, 800};
    const auto r = sweep_eta_L(-4.0, omegas, etas, Ls);
    for (std::size_t i = 1; i < 3; ++i) CHECK(r.rows[i].error < r.rows[i - 1].error);
    const std::vector<double> big{0.5};
    const std::vector<long> one{1000};
    CHECK(sweep_eta_L(-4.0, omegas, big, one).rows[0].error < 1e-10);
  }

  TEST_CASE("lap rate preconditions") {
    const auto etas = logspace(1e-3, 1e-1, 5);
    CHECK_THROWS_AS(lap_rate(-4.0, -2.0 + std::sqrt(20.0) + 0.1, etas), ThresholdError);
    CHECK_THROWS_AS(lap_rate(-4.0, 0.1, etas), ThresholdError);
    const auto gap = lap_rate(-4.0, 1.0, etas);
    CHECK_FALSE(gap.in_continuum);
    CHECK(gap.fit.slope >= 0.9);
    const auto r = lap_rate(-4.0, 3.0, etas);
    CHECK(r.in_continuum);
    CHECK(r.fit.slope == doctest::Approx(1.0).epsilon(0.15));
  }

  TEST_CASE("locality rates are positive and grow with eta") {
    const auto H = build_lattice(-4.0, 600);
    const double E0 = ground_state(H).energy;
    double prev = 0.0;
    for (double eta : {0.1, 0.2, 0.4, 2.0}) {
      const auto r = locality_fit(H, E0, 3.0, eta);
      CHECK(r.alpha > prev);
      prev = r.alpha;
    }
    // Below the band the decay is exp(-acosh(|E| / 2) d), independent of eta.
    const double E = E0 - 1.5;
    CHECK(locality_fit(H, E0, -1.5, 0.1).alpha == doctest::Approx(std::acosh(-E / 2.0)).epsilon(0.01));
    CHECK_THROWS_AS(locality_fit(H, E0, -20.0, 0.1), FitError);
    CHECK_THROWS_AS(locality_fit(H, E0, 3.0, 0.0), DomainError);
    const auto tiny = build_lattice(-4.0, 20);
    CHECK_THROWS_AS(locality_fit(tiny, E0, 3.0, 0.1), FitError);
  }

  TEST_CASE("optimal eta minimum property") {
    const std::vector<long> Ls{100, 200};
    const auto etas = logspace(1e-3, 1.0, 61);
    const auto r = optimal_eta(-4.0, 3.0, Ls, etas);
    for (const auto& row : r.rows) {
      CHECK(row.min_error <= row.error_at_max_eta);
      CHECK(row.eta_star > 1e-3);
    }
    CHECK(r.rows[1].eta_star < r.rows[0].eta_star);
  }

  TEST_CASE("distconv with small-time test function") {
    // Test function supported well before the boundary echo: already converged.
    std::vector<double> taus;
    for (double t = 0.0; t <= 10.0; t += 0.01) taus.push_back(t);
    const std::vector<long> Ls{30, 60};
    const auto r = distconv(-4.0, Ls, 240, 3.0, 0.5, taus);
    for (const auto& row : r.rows) CHECK(row.error < 1e-12);
    CHECK_THROWS_AS(distconv(-4.0, Ls, 200, 3.0, 0.5, taus), DomainError);
  }

  TEST_CASE("figure statistics helpers") {
    const std::vector<double> x{0, 1, 2, 3, 4, 5, 6}, y{0, 1, 0, 2, 0, 3, 0};
    CHECK(count_peaks(x, y, 0.0, 6.0) == 3);
    CHECK(count_peaks(x, y, 2.5, 6.0) == 2);
    std::vector<double> t, v;
    for (double s = 0.0; s <= 60.0; s += 0.5) {
      t.push_back(s);
      v.push_back(std::exp(-s / 5.0));
    }
    CHECK(decay_ratio(t, v) == doctest::Approx(std::exp(-8.0)));
    CHECK_THROWS_AS(decay_ratio(std::vector<double>{0, 1}, std::vector<double>{1, 1}), DomainError);
  }

  TEST_CASE("experiments are deterministic across thread counts") {
    ExperimentConfig c;
    c.L = std::vector<double>{30, 50};
    c.omega = std::vector<double>{0.5, 3.0, 5.0};
    c.eta = std::vector<double>{0.1, 0.3};
    for (const std::string name : {"freq-response", "sweep"}) {
      c.threads = 1;
      const auto a = run_experiment(name, c).table.to_csv();
      c.threads = 3;
      const auto b = run_experiment(name, c).table.to_csv();
      CHECK(a == b);
    }
  }

  TEST_CASE("non-lattice models run the generic experiments") {
    ExperimentConfig c;
    c.model = Continuum1d{PoschlTeller{2.0}, 0.1};
    c.L = std::vector<double>{8.0};
    const auto gs = run_experiment("ground-state", c);
    CHECK(std::abs(gs.table.numbers("abs_error")[0]) < 5e-3);
    c.omega = std::vector<double>{0.5, 1.5};
    c.eta = std::vector<double>{0.2};
    const auto fr = run_experiment("freq-response", c);
    for (double d : fr.table.numbers("rel_diff")) CHECK(d < 1e-9);
    CHECK_THROWS_AS(run_experiment("sweep", c), InvalidModel);
    CHECK_THROWS_AS(run_experiment("nope", c), ConfigError);
  }
}

TEST_SUITE("cli") {
  TEST_CASE("successful run writes CSV and manifest") {
    const auto dir = scratch("ok");
    CHECK(cli({"freq-response", "--out", dir.string(), "--L", "20", "--eta", "0.5", "--omega",
               "1", "3", "5"}) == 0);
    const auto csv = slurp(dir / "freq-response.csv");
    CHECK(csv.rfind("L,eta,omega,", 0) == 0);
    const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
    CHECK(manifest["checksums"]["freq-response.csv"] == sha256_hex(csv));
    CHECK(manifest["config"]["L"][0] == 20.0);
    CHECK(manifest["version"] == tool_version());
    CHECK(manifest["subcommand"] == "freq-response");
  }

  TEST_CASE("identical runs give identical bytes") {
    const auto a = scratch("det_a"), b = scratch("det_b");
    const auto cfg = scratch("det_cfg");
    fs::create_directories(cfg);
    {
      std::ofstream f(cfg / "c.yaml");
      f << "L: [40, 60]\nomega: [3.0]\neta: [0.1, 0.2]\nseed: 3\n";
    }
    CHECK(cli({"sweep", "--config", (cfg / "c.yaml").string(), "--out", a.string()}) == 0);
    CHECK(cli({"sweep", "--config", (cfg / "c.yaml").string(), "--out", b.string(), "--threads",
               "2"}) == 0);
    CHECK(slurp(a / "sweep.csv") == slurp(b / "sweep.csv"));
  }

  TEST_CASE("flags override the config file") {
    const auto dir = scratch("override");
    fs::create_directories(dir);
    {
      std::ofstream f(dir / "c.yaml");
      f << "L: [40]\nomega: [3.0]\neta: [0.1]\n";
    }
    CHECK(cli({"sweep", "--config", (dir / "c.yaml").string(), "--out", dir.string(), "--L",
               "70"}) == 0);
    const auto csv = slurp(dir / "sweep.csv");
    CHECK(csv.find("\n3,0.1,70,") != std::string::npos);
  }

  TEST_CASE("exit codes") {
    const auto dir = scratch("codes");
    CHECK(cli({"sweep", "--out", dir.string(), "--config", "/nonexistent.yaml"}) == 2);
    CHECK(cli({"sweep", "--out", dir.string(), "--eta", "-1"}) == 2);
    CHECK(cli({"not-a-command"}) == 2);
    CHECK(cli({"lap-rate", "--out", dir.string(), "--omega", "2.48"}) == 2);
    CHECK(cli({"kubo-check", "--out", dir.string(), "--L", "20", "--dt", "0.5"}) == 3);
    CHECK(cli({"ground-state", "--out", dir.string(), "--L", "10"}) == 0);
  }
}
