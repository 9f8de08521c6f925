#include "lrbox/harness/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "lrbox/errors.hpp"
#include "lrbox/harness/config.hpp"
#include "lrbox/harness/experiments.hpp"
#include "lrbox/harness/manifest.hpp"

namespace lrbox {

namespace {

struct Overrides {
  std::string config;
  std::optional<std::string> out;
  std::optional<unsigned> threads;
  std::optional<std::uint64_t> seed;
  std::optional<double> V;
  std::vector<double> L, eta, omega, tau, epsilon;
  std::optional<std::string> drive;
  std::optional<double> dt, T, reference_L;
  std::vector<std::string> kernels;
  std::optional<int> kernel_order;
};

void add_globals(CLI::App& app, Overrides& o) {
  app.add_option("--config", o.config, "YAML experiment config");
  app.add_option("--out", o.out, "output directory");
  app.add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", o.seed, "seed for randomized inputs");
}

void add_overrides(CLI::App& sub, Overrides& o) {
  add_globals(sub, o);
  sub.add_option("--V", o.V, "impurity potential (lattice_impurity model)");
  sub.add_option("--L", o.L, "box half-widths");
  sub.add_option("--eta", o.eta, "broadening parameters");
  sub.add_option("--omega", o.omega, "frequencies");
  sub.add_option("--tau", o.tau, "times");
  sub.add_option("--epsilon", o.epsilon, "perturbation strengths");
  sub.add_option("--drive", o.drive, "ramp or sin2");
  sub.add_option("--dt", o.dt, "time step");
  sub.add_option("--T", o.T, "final time");
  sub.add_option("--reference-L", o.reference_L, "reference box for distconv");
  sub.add_option("--kernels", o.kernels, "lorentzian, gaussian, hermite");
  sub.add_option("--kernel-order", o.kernel_order, "hermite kernel order (odd)");
}

ExperimentConfig resolve(const Overrides& o) {
  ExperimentConfig c = o.config.empty() ? ExperimentConfig{} : load_config(o.config);
  if (o.out) c.out = *o.out;
  if (o.threads) c.threads = *o.threads;
  if (o.seed) c.seed = *o.seed;
  if (o.V) c.model = LatticeImpurity{*o.V};
  if (!o.L.empty()) c.L = o.L;
  if (!o.eta.empty()) c.eta = o.eta;
  if (!o.omega.empty()) c.omega = o.omega;
  if (!o.tau.empty()) c.tau = o.tau;
  if (!o.epsilon.empty()) c.epsilon = o.epsilon;
  if (o.drive) c.drive = parse_drive(*o.drive);
  if (o.dt) c.dt = *o.dt;
  if (o.T) c.T = *o.T;
  if (o.reference_L) c.reference_L = *o.reference_L;
  if (!o.kernels.empty()) c.kernels = o.kernels;
  if (o.kernel_order) c.kernel_order = *o.kernel_order;
  validate(c);
  return c;
}

int execute(const std::string& name, const Overrides& o) {
  RunManifest manifest;
  manifest.subcommand = name;
  manifest.started = utc_timestamp();
  const ExperimentConfig config = resolve(o);
  manifest.config = config.echo();

  const auto result = run_experiment(name, config);

  const std::filesystem::path dir(config.out);
  std::filesystem::create_directories(dir);
  const std::string file = name + ".csv";
  {
    std::ofstream out(dir / file, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + (dir / file).string());
    result.table.write_csv(out);
  }
  manifest.checksums[file] = sha256_file(dir / file);
  manifest.summary = result.summary;
  manifest.finished = utc_timestamp();
  write_manifest(dir / "manifest.json", manifest);

  std::cout << name << ": " << result.table.rows().size() << " rows -> " << (dir / file).string()
            << '\n'
            << result.summary.dump(2) << '\n';
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Finite-box linear response toolkit"};
  app.require_subcommand(1);
  Overrides o;
  add_globals(app, o);
  std::string chosen;
  for (const auto& name : experiment_names()) {
    auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
    add_overrides(*sub, o);
    sub->callback([&chosen, name] { chosen = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    return execute(chosen, o);
  } catch (const InputError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what();
    if (e.index() >= 0) std::cerr << " (index " << e.index() << ")";
    std::cerr << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace lrbox
