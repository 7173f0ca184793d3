// polelab: run scenarios, list the catalog, dump symmetrization profiles.
//
//   polelab list
//   polelab run <config|builtin> [--report out.json] [--csv out.csv] [--threads N] [--seed N]
//   polelab profile <config|builtin> [--csv out.csv]

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "polelab/polelab.hpp"

namespace {

int write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return 0;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write '" << path << "'\n";
    return 2;
  }
  out << text;
  return 0;
}

std::string profile_csv(const polelab::ScenarioConfig& cfg, const polelab::RunOptions& run) {
  std::ostringstream os;
  polelab::dump_profile(cfg, os, run);
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks of growth and integral inequalities on model manifolds"};
  app.require_subcommand(1);

  std::string config;
  std::string report_path, csv_path;
  int threads = 1;
  std::optional<std::uint64_t> seed;

  auto* list = app.add_subcommand("list", "List manifolds, fields, checks and built-in scenarios");

  auto* run = app.add_subcommand("run", "Run a scenario config (or a built-in scenario name)");
  run->add_option("config", config, "Config file or built-in scenario")->required();
  run->add_option("--report", report_path, "Report path ('-' for stdout)");
  run->add_option("--csv", csv_path, "Also write the profile CSV");
  run->add_option("--threads", threads, "Worker threads for independent checks")->check(CLI::PositiveNumber);
  run->add_option("--seed", seed, "Override the geodesic sampling seed");

  auto* profile = app.add_subcommand("profile", "Write the symmetrization profile CSV");
  profile->add_option("config", config, "Config file or built-in scenario")->required();
  profile->add_option("--csv", csv_path, "CSV path ('-' for stdout)");
  profile->add_option("--seed", seed, "Unused; accepted for symmetry with run");

  CLI11_PARSE(app, argc, argv);

  if (list->parsed()) {
    std::cout << polelab::list_catalog();
    return 0;
  }

  try {
    const polelab::ScenarioConfig cfg = polelab::load_config(config);
    polelab::RunOptions opts{threads, seed};

    if (profile->parsed()) return write_text(csv_path.empty() ? cfg.csv_path : csv_path, profile_csv(cfg, opts));

    const polelab::ScenarioResult result = polelab::run_scenario(cfg, opts);
    const std::string report = polelab::format_report(result.report);
    if (int rc = write_text(report_path.empty() ? cfg.report_path : report_path, report)) return rc;
    const std::string csv = csv_path.empty() ? cfg.csv_path : csv_path;
    if (!csv.empty())
      if (int rc = write_text(csv, profile_csv(cfg, opts))) return rc;
    for (const auto& c : result.checks)
      std::cerr << polelab::to_string(c.id) << ": " << polelab::to_string(c.verdict.kind) << "\n";
    return result.exit_code;
  } catch (const polelab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
