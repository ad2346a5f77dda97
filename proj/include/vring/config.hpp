#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "vring/biot_savart.hpp"
#include "vring/ring.hpp"

namespace vring {

/// Raised for malformed or inconsistent run configurations (CLI exit code 2).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Run configuration, read from a JSON file whose keys mirror the fields.
/// Missing keys keep their defaults; unknown keys are rejected.
struct RunConfig {
  double gamma = 1.0;
  double L = 1.0;
  double nu_tur = 1.0;
  /// Tolerance of the cached kernel table behind every velocity evaluation.
  double quad_tol = 1e-8;
  GridSpec grid;
  std::vector<double> t_list{1e-6, 3e-6, 1e-5, 3e-5, 1e-4, 3e-4, 1e-3};
  std::filesystem::path output_dir = "vring_out";
  std::uint64_t seed = 20240611;
  unsigned workers = 1;

  /// Throws ConfigError on nonpositive tolerances or times, rmin <= 0, bad ring parameters.
  void validate() const;
  RingParams params() const;
  VelocityOptions velocity_options() const;
};

RunConfig config_from_json(const nlohmann::json& j);
void to_json(nlohmann::json& j, const RunConfig& cfg);
/// Reads and validates a config file.
RunConfig load_config(const std::filesystem::path& path);

}  // namespace vring
