#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vring/config.hpp"

namespace vring {

struct CheckResult {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double tolerance = 0.0;
  nlohmann::json detail = nlohmann::json::object();
};

struct ValidationReport {
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;

  bool all_pass() const;
  std::vector<std::string> failing() const;
};

/// Kernel identities, profile moments, mean-value identity and the antidivergence
/// synthetic suite. Random sample points come from `seed` and are recorded.
ValidationReport run_validation_suite(const RunConfig& cfg);
nlohmann::json to_json_value(const ValidationReport& report);

struct CommandResult {
  int exit_code = 0;
  std::vector<std::filesystem::path> files;
  std::string summary;
};

/// Writes validate_report.json; exit code 1 when a check fails.
CommandResult cmd_validate(const RunConfig& cfg);
/// Writes velocity_<t>.csv, reynolds_<t>.csv and diagnostics_<t>.json.
/// Throws ConfigError when c(t) >= L/4.
CommandResult cmd_field(const RunConfig& cfg, double t);
/// Writes energy_scan.csv and slope_fit.json; exit code 1 when the slope misses
/// -L Gamma^2 / 2 by more than 10% or E_sub fails to decrease.
CommandResult cmd_energy_scan(const RunConfig& cfg);

/// Short decimal label for file names, e.g. 0.01 or 1e-05.
std::string time_label(double t);

}  // namespace vring
