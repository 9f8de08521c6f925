#include "lrbox/harness/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "lrbox/errors.hpp"
#include "lrbox/fit.hpp"

namespace lrbox {

namespace {

template <class T>
T scalar(const YAML::Node& node, const std::string& key) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception& e) {
    throw ConfigError("bad value for '" + key + "': " + e.what());
  }
}

std::vector<double> number_list(const YAML::Node& node, const std::string& key) {
  if (node.IsSequence()) {
    std::vector<double> out;
    for (const auto& item : node) out.push_back(scalar<double>(item, key));
    return out;
  }
  if (node.IsScalar()) return {scalar<double>(node, key)};
  if (node.IsMap()) {
    if (!node["from"] || !node["to"]) throw ConfigError("'" + key + "' range needs from and to");
    const double from = scalar<double>(node["from"], key);
    const double to = scalar<double>(node["to"], key);
    if (node["step"]) return arange(from, to, scalar<double>(node["step"], key));
    if (node["count"]) {
      const auto count = scalar<std::size_t>(node["count"], key);
      if (count == 0) throw ConfigError("'" + key + "' count must be positive");
      const bool log = node["log"] && scalar<bool>(node["log"], key);
      if (log && !(from > 0.0 && to > 0.0)) {
        throw ConfigError("'" + key + "' log range needs positive bounds");
      }
      return log ? logspace(from, to, count) : linspace(from, to, count);
    }
    throw ConfigError("'" + key + "' range needs step or count");
  }
  throw ConfigError("'" + key + "' must be a number, a list or a range");
}

ContinuumPotential parse_potential(const YAML::Node& m) {
  const std::string name = m["potential"] ? scalar<std::string>(m["potential"], "potential")
                                          : "poschl_teller";
  if (name == "poschl_teller") {
    PoschlTeller p;
    if (m["depth"]) p.depth = scalar<double>(m["depth"], "depth");
    return p;
  }
  if (name == "gaussian_well") {
    GaussianWell g;
    if (m["depth"]) g.depth = scalar<double>(m["depth"], "depth");
    if (m["width"]) g.width = scalar<double>(m["width"], "width");
    return g;
  }
  throw ConfigError("unknown potential preset '" + name + "'");
}

ModelSpec parse_model(const YAML::Node& m) {
  if (!m.IsMap()) throw ConfigError("'model' must be a map");
  const std::string kind = m["kind"] ? scalar<std::string>(m["kind"], "kind") : "lattice_impurity";
  if (kind == "lattice_impurity") {
    LatticeImpurity li;
    if (m["V"]) li.V = scalar<double>(m["V"], "V");
    return li;
  }
  if (kind == "lattice_onsite") {
    if (!m["values"]) throw ConfigError("lattice_onsite needs 'values'");
    return LatticeOnsite{number_list(m["values"], "values")};
  }
  if (kind == "continuum_1d") {
    Continuum1d c;
    c.potential = parse_potential(m);
    if (m["h"]) c.h = scalar<double>(m["h"], "h");
    return c;
  }
  throw ConfigError("unknown model kind '" + kind + "'");
}

nlohmann::json model_json(const ModelSpec& spec) {
  return std::visit(
      [](const auto& m) -> nlohmann::json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LatticeImpurity>) {
          return {{"kind", "lattice_impurity"}, {"V", m.V}};
        } else if constexpr (std::is_same_v<T, LatticeOnsite>) {
          return {{"kind", "lattice_onsite"}, {"values", m.values}};
        } else {
          nlohmann::json j{{"kind", "continuum_1d"}, {"h", m.h}};
          std::visit(
              [&](const auto& p) {
                using P = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<P, PoschlTeller>) {
                  j["potential"] = "poschl_teller";
                  j["depth"] = p.depth;
                } else {
                  j["potential"] = "gaussian_well";
                  j["depth"] = p.depth;
                  j["width"] = p.width;
                }
              },
              m.potential);
          return j;
        }
      },
      spec);
}

const std::vector<std::string> kKnownKeys = {
    "model", "L",       "eta",          "omega",        "tau",         "epsilon",
    "drive", "dt",      "T",            "kernels",      "kernel_order", "test_function",
    "reference_L", "out", "threads",    "seed"};

}  // namespace

nlohmann::json ExperimentConfig::echo() const {
  nlohmann::json j;
  j["model"] = model_json(model);
  auto opt = [&](const char* key, const auto& v) {
    if (v) j[key] = *v;
  };
  opt("L", L);
  opt("eta", eta);
  opt("omega", omega);
  opt("tau", tau);
  opt("epsilon", epsilon);
  opt("dt", dt);
  opt("T", T);
  opt("kernels", kernels);
  opt("reference_L", reference_L);
  j["drive"] = to_string(drive);
  j["kernel_order"] = kernel_order;
  j["test_function"] = {{"center", test_center}, {"width", test_width}};
  j["out"] = out;
  j["threads"] = threads;
  j["seed"] = seed;
  return j;
}

ExperimentConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config is not valid YAML: ") + e.what());
  }
  ExperimentConfig c;
  if (root.IsNull()) return c;
  if (!root.IsMap()) throw ConfigError("config must be a key-value map");
  for (const auto& kv : root) {
    const auto key = kv.first.as<std::string>();
    if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) == kKnownKeys.end()) {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  if (root["model"]) c.model = parse_model(root["model"]);
  if (root["L"]) c.L = number_list(root["L"], "L");
  if (root["eta"]) c.eta = number_list(root["eta"], "eta");
  if (root["omega"]) c.omega = number_list(root["omega"], "omega");
  if (root["tau"]) c.tau = number_list(root["tau"], "tau");
  if (root["epsilon"]) c.epsilon = number_list(root["epsilon"], "epsilon");
  if (root["drive"]) c.drive = parse_drive(scalar<std::string>(root["drive"], "drive"));
  if (root["dt"]) c.dt = scalar<double>(root["dt"], "dt");
  if (root["T"]) c.T = scalar<double>(root["T"], "T");
  if (root["kernels"]) {
    std::vector<std::string> ks;
    for (const auto& k : root["kernels"]) ks.push_back(scalar<std::string>(k, "kernels"));
    c.kernels = ks;
  }
  if (root["kernel_order"]) c.kernel_order = scalar<int>(root["kernel_order"], "kernel_order");
  if (const auto tf = root["test_function"]) {
    if (tf["center"]) c.test_center = scalar<double>(tf["center"], "test_function.center");
    if (tf["width"]) c.test_width = scalar<double>(tf["width"], "test_function.width");
  }
  if (root["reference_L"]) c.reference_L = scalar<double>(root["reference_L"], "reference_L");
  if (root["out"]) c.out = scalar<std::string>(root["out"], "out");
  if (root["threads"]) c.threads = scalar<unsigned>(root["threads"], "threads");
  if (root["seed"]) c.seed = scalar<std::uint64_t>(root["seed"], "seed");
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void validate(const ExperimentConfig& c) {
  auto nonempty = [](const auto& v, const char* key) {
    if (v && v->empty()) throw ConfigError(std::string("'") + key + "' must not be empty");
  };
  auto finite = [](const auto& v, const char* key) {
    if (!v) return;
    for (double x : *v) {
      if (!std::isfinite(x)) throw ConfigError(std::string("'") + key + "' has a non-finite entry");
    }
  };
  nonempty(c.L, "L");
  nonempty(c.eta, "eta");
  nonempty(c.omega, "omega");
  nonempty(c.tau, "tau");
  nonempty(c.epsilon, "epsilon");
  nonempty(c.kernels, "kernels");
  finite(c.L, "L");
  finite(c.eta, "eta");
  finite(c.omega, "omega");
  finite(c.tau, "tau");
  finite(c.epsilon, "epsilon");
  if (c.omega && !std::is_sorted(c.omega->begin(), c.omega->end())) {
    throw ConfigError("'omega' must be sorted ascending");
  }
  if (c.tau && !std::is_sorted(c.tau->begin(), c.tau->end())) {
    throw ConfigError("'tau' must be sorted ascending");
  }
  if (c.eta) {
    for (double e : *c.eta) {
      if (!(e > 0.0)) throw ConfigError("'eta' entries must be positive");
    }
  }
  if (c.L) {
    for (double l : *c.L) {
      if (!(l > 0.0)) throw ConfigError("'L' entries must be positive");
    }
  }
  if (c.epsilon) {
    for (double e : *c.epsilon) {
      if (!(std::abs(e) < 1.0)) throw ConfigError("'epsilon' entries must satisfy |eps| < 1");
    }
  }
  if (c.dt && !(*c.dt > 0.0)) throw ConfigError("'dt' must be positive");
  if (c.T && !(*c.T > 0.0)) throw ConfigError("'T' must be positive");
  if (c.kernels) {
    for (const auto& k : *c.kernels) parse_kernel_family(k);
  }
  if (c.kernel_order < 1 || c.kernel_order % 2 == 0) {
    throw ConfigError("'kernel_order' must be a positive odd integer");
  }
  if (!(c.test_width > 0.0)) throw ConfigError("test function width must be positive");
  if (c.reference_L && !(*c.reference_L > 0.0)) throw ConfigError("'reference_L' must be positive");
  if (c.threads == 0) throw ConfigError("'threads' must be at least 1");
}

}  // namespace lrbox
