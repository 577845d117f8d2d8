#pragma once

#include "mapcalc/optimizer.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace mapcalc {

struct DescentConfig {
  json target = json{{"kind", "torus"}, {"periods", {6.283185307179586, 6.283185307179586}}};
  json initial = json{{"kind", "torus_linear"}, {"winding", {1, 0}}, {"amplitude", {0.0, 0.3}}};
  int resolution = 64;
  int steps = 5000;
  double step_size = 0.1;
  double grad_tolerance = 1e-7;
  std::optional<double> expected_energy = 3.141592653589793;
  double energy_tolerance = 1e-3;
};

/// Everything a suite run depends on. Parsed from a single JSON object in
/// which every field is optional.
struct ExperimentConfig {
  std::uint64_t seed = 1;
  int resolution = 64;
  int order = 2;
  int trials = 20;
  std::optional<double> delta;
  double epsilon = 0.05;
  double sphere_radius = 1.0;
  std::vector<double> torus_periods{6.283185307179586, 6.283185307179586};
  std::string conformal = "1 + 0.3*z*z";
  int conformal_resolution = 16;
  DescentConfig descent;
  std::string out = "mapcalc-out";

  /// Throws ConfigError on malformed or out-of-range fields (resolution
  /// must be even and >= 8, order in [0, 4]).
  static ExperimentConfig from_json(const json& j);
  json to_json() const;
  void validate() const;
};

struct CheckResult {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string anchor;

  json to_json() const;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;
  json extra = json::object();

  bool pass() const;
  json to_json() const;
};

enum class Suite { Charts, Topology, Omega, Taylor, Transitions, Descent, All };

/// Throws ConfigError for unknown names.
Suite parse_suite(const std::string& name);
std::string suite_name(Suite suite);
/// All expands to the six concrete suites.
std::vector<Suite> expand(Suite suite);

/// Runs one concrete suite. The descent suite writes its trace and final map
/// into `out_dir` when given.
SuiteReport run_suite(const ExperimentConfig& config, Suite suite,
                      const std::filesystem::path* out_dir = nullptr);

/// The descent demo of the config: the starting map, the run and its report.
struct DescentRun {
  SampledMap initial;
  DescentResult result;
  SuiteReport report;
};
DescentRun run_descent(const ExperimentConfig& config);

}  // namespace mapcalc
