#include "vring/config.hpp"

#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

namespace vring {
namespace {

template <class T>
void read(const nlohmann::json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: bad value for '") + key + "': " + e.what());
  }
}

void reject_unknown(const nlohmann::json& j, const std::set<std::string>& known,
                    const std::string& where) {
  for (const auto& item : j.items()) {
    if (!known.count(item.key())) {
      throw ConfigError("config: unknown key '" + item.key() + "' in " + where);
    }
  }
}

}  // namespace

void RunConfig::validate() const {
  try {
    params().validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!(quad_tol > 0.0)) throw ConfigError("config: quad_tol must be positive");
  try {
    grid.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  for (double t : t_list) {
    if (!(t > 0.0)) throw ConfigError("config: t_list entries must be positive");
  }
  if (workers < 1) throw ConfigError("config: workers must be at least 1");
  if (output_dir.empty()) throw ConfigError("config: output_dir must not be empty");
}

RingParams RunConfig::params() const { return RingParams{L, gamma, nu_tur}; }

VelocityOptions RunConfig::velocity_options() const {
  VelocityOptions opt;
  opt.kernel_tol = quad_tol;
  return opt;
}

RunConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  reject_unknown(j, {"gamma", "L", "nu_tur", "quad_tol", "grid", "t_list", "output_dir", "seed",
                     "workers"},
                 "config");
  RunConfig cfg;
  read(j, "gamma", cfg.gamma);
  read(j, "L", cfg.L);
  read(j, "nu_tur", cfg.nu_tur);
  read(j, "quad_tol", cfg.quad_tol);
  read(j, "t_list", cfg.t_list);
  read(j, "seed", cfg.seed);
  read(j, "workers", cfg.workers);
  if (j.contains("output_dir")) {
    std::string dir;
    read(j, "output_dir", dir);
    cfg.output_dir = dir;
  }
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    if (!g.is_object()) throw ConfigError("config: grid must be an object");
    reject_unknown(g, {"rmin", "rmax", "zmin", "zmax", "nr", "nz"}, "grid");
    read(g, "rmin", cfg.grid.rmin);
    read(g, "rmax", cfg.grid.rmax);
    read(g, "zmin", cfg.grid.zmin);
    read(g, "zmax", cfg.grid.zmax);
    read(g, "nr", cfg.grid.nr);
    read(g, "nz", cfg.grid.nz);
  }
  return cfg;
}

void to_json(nlohmann::json& j, const RunConfig& cfg) {
  j = {{"gamma", cfg.gamma},
       {"L", cfg.L},
       {"nu_tur", cfg.nu_tur},
       {"quad_tol", cfg.quad_tol},
       {"grid",
        {{"rmin", cfg.grid.rmin},
         {"rmax", cfg.grid.rmax},
         {"zmin", cfg.grid.zmin},
         {"zmax", cfg.grid.zmax},
         {"nr", cfg.grid.nr},
         {"nz", cfg.grid.nz}}},
       {"t_list", cfg.t_list},
       {"output_dir", cfg.output_dir.string()},
       {"seed", cfg.seed},
       {"workers", cfg.workers}};
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config: " + path.string() + ": " + e.what());
  }
  RunConfig cfg = config_from_json(j);
  cfg.validate();
  return cfg;
}

}  // namespace vring
