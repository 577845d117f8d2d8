// mapcalc: runs the property suites and the descent demo from a JSON config.
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 configuration error,
// 3 I/O error.

#include "mapcalc/errors.hpp"
#include "mapcalc/io.hpp"
#include "mapcalc/parallel.hpp"
#include "mapcalc/suites.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using namespace mapcalc;

namespace {

enum Exit { kPass = 0, kFail = 1, kConfig = 2, kIo = 3 };

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> resolution;
  std::optional<int> order;
  std::optional<int> trials;
  std::optional<int> steps;
  std::optional<double> step_size;
  std::string out;
};

ExperimentConfig load_config(const std::string& path, const Overrides& o) {
  json j = read_json(path);
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  if (o.seed) j["seed"] = *o.seed;
  if (o.resolution) j["resolution"] = *o.resolution;
  if (o.order) j["order"] = *o.order;
  if (o.trials) j["trials"] = *o.trials;
  if (o.steps) j["descent"]["steps"] = *o.steps;
  if (o.step_size) j["descent"]["step_size"] = *o.step_size;
  if (!o.out.empty()) j["out"] = o.out;
  return ExperimentConfig::from_json(j);
}

fs::path prepare_out(const std::string& dir) {
  fs::path out(dir);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
  return out;
}

// Timestamps live here so that reports stay byte-identical across runs.
void write_metadata(const fs::path& out, const std::string& command) {
  std::time_t now = std::time(nullptr);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  write_json(json{{"command", command}, {"timestamp", stamp}, {"threads", thread_count()}},
             (out / "metadata.json").string());
}

// The output directory is left out so reports from different directories
// compare equal.
json report_config(const ExperimentConfig& config) {
  json j = config.to_json();
  j.erase("out");
  return j;
}

void print_report(const SuiteReport& r) {
  for (const CheckResult& c : r.checks)
    std::printf("%s  %-12s %-60s residual=%.3e tol=%.1e\n", c.pass ? "PASS" : "FAIL",
                r.suite.c_str(), c.name.c_str(), c.residual, c.tolerance);
}

int run_command(const std::string& config_path, const std::string& suite_arg,
                const Overrides& o) {
  ExperimentConfig config = load_config(config_path, o);
  Suite suite = parse_suite(suite_arg);
  fs::path out = prepare_out(config.out);
  bool pass = true;
  json summary{{"suites", json::object()}};
  for (Suite s : expand(suite)) {
    SuiteReport report = run_suite(config, s, &out);
    print_report(report);
    json j = report.to_json();
    j["config"] = report_config(config);
    write_json(j, (out / ("report_" + report.suite + ".json")).string());
    summary["suites"][report.suite] = report.pass();
    pass = pass && report.pass();
  }
  summary["pass"] = pass;
  if (suite == Suite::All) write_json(summary, (out / "report_all.json").string());
  write_metadata(out, "run " + suite_arg);
  return pass ? kPass : kFail;
}

int descend_command(const std::string& config_path, const Overrides& o) {
  ExperimentConfig config = load_config(config_path, o);
  fs::path out = prepare_out(config.out);
  DescentRun run = run_descent(config);
  if (!run.result.trace.rows.empty())
    write_trace_csv(run.result.trace, (out / "descent_trace.csv").string());
  write_map_csv(run.initial, (out / "descent_initial_map.csv").string());
  write_map_csv(run.result.map, (out / "descent_final_map.csv").string());
  json j = run.report.to_json();
  j["config"] = report_config(config);
  write_json(j, (out / "report_descent.json").string());
  write_metadata(out, "descend");
  print_report(run.report);
  std::printf("final_energy=%.12f steps=%zu\n", run.report.extra["final_energy"].get<double>(),
              run.result.trace.rows.size());
  return run.report.pass() ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Charts, topology and descent on spaces of maps"};
  app.require_subcommand(1);
  Overrides o;
  std::string config_path, suite = "all";

  CLI::App* run = app.add_subcommand("run", "run property suites");
  run->add_option("--config", config_path, "JSON config file")->required();
  run->add_option("--suite", suite, "charts|topology|omega|taylor|transitions|descent|all");
  run->add_option("--out", o.out, "output directory (overrides the config)");
  run->add_option("--seed", o.seed, "random seed");
  run->add_option("--resolution", o.resolution, "samples per full turn");
  run->add_option("--order", o.order, "derivative order k");
  run->add_option("--trials", o.trials, "random trials per check");

  CLI::App* descend = app.add_subcommand("descend", "run the descent demo");
  descend->add_option("--config", config_path, "JSON config file")->required();
  descend->add_option("--out", o.out, "output directory (overrides the config)");
  descend->add_option("--steps", o.steps, "maximum number of steps");
  descend->add_option("--step-size", o.step_size, "initial step size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kPass : kConfig;
  }

  try {
    if (run->parsed()) return run_command(config_path, suite, o);
    return descend_command(config_path, o);
  } catch (const IoError& e) {
    std::cerr << "mapcalc: " << e.what() << '\n';
    return kIo;
  } catch (const ConfigError& e) {
    std::cerr << "mapcalc: " << e.what() << '\n';
    return kConfig;
  } catch (const ParseError& e) {
    std::cerr << "mapcalc: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "mapcalc: " << e.what() << '\n';
    return kFail;
  }
}
