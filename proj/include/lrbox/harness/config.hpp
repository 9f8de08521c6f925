#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lrbox/dynamics.hpp"
#include "lrbox/model.hpp"
#include "lrbox/smoothing.hpp"

namespace lrbox {

/// Declarative description of an experiment run. Unset optionals fall back to
/// per-experiment defaults (see README).
struct ExperimentConfig {
  ModelSpec model = LatticeImpurity{};
  std::optional<std::vector<double>> L;
  std::optional<std::vector<double>> eta;
  std::optional<std::vector<double>> omega;
  std::optional<std::vector<double>> tau;
  std::optional<std::vector<double>> epsilon;
  Drive drive = Drive::ramp;
  std::optional<double> dt;
  std::optional<double> T;
  std::optional<std::vector<std::string>> kernels;
  int kernel_order = 3;
  double test_center = 10.0;
  double test_width = 5.0;
  std::optional<double> reference_L;
  std::string out = "out";
  unsigned threads = 1;
  std::uint64_t seed = 0;

  nlohmann::json echo() const;
};

/// Parses YAML text. Lists may be given as sequences, as
/// {from, to, step} or as {from, to, count, log}. Throws ConfigError.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Checks the sweep invariants: lists non-empty, omegas sorted, etas and Ls
/// positive. Throws ConfigError.
void validate(const ExperimentConfig& config);

}  // namespace lrbox
