#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "vring/commands.hpp"
#include "vring/config.hpp"
#include "vring/parallel.hpp"

namespace {

struct Overrides {
  std::string config;
  std::string out;
  std::optional<unsigned> workers;
  std::optional<std::uint64_t> seed;
  std::optional<double> quad_tol;
};

vring::RunConfig resolve(const Overrides& o) {
  vring::RunConfig cfg = o.config.empty() ? vring::RunConfig{} : vring::load_config(o.config);
  if (!o.out.empty()) cfg.output_dir = o.out;
  if (o.workers) cfg.workers = *o.workers;
  if (o.seed) cfg.seed = *o.seed;
  if (o.quad_tol) cfg.quad_tol = *o.quad_tol;
  cfg.validate();
  vring::set_default_workers(cfg.workers);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Axisymmetric vortex-ring subsolution: validation, field dumps, energy scans"};
  app.require_subcommand(1);
  app.fallthrough();

  Overrides o;
  app.add_option("--config", o.config, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--out", o.out, "Output directory");
  app.add_option("--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", o.seed, "Seed for random verification points");
  app.add_option("--quad-tol", o.quad_tol, "Kernel table tolerance");

  auto* validate = app.add_subcommand("validate", "Run the identity and synthetic check suite");
  double t = 0.0;
  auto* field = app.add_subcommand("field", "Dump velocity and Reynolds stress grids at time t");
  field->add_option("--t", t, "Time")->required();
  auto* scan = app.add_subcommand("energy-scan", "Energy over t_list and the log c slope fit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const vring::RunConfig cfg = resolve(o);
    vring::CommandResult res;
    if (validate->parsed()) {
      res = vring::cmd_validate(cfg);
    } else if (field->parsed()) {
      res = vring::cmd_field(cfg, t);
    } else if (scan->parsed()) {
      res = vring::cmd_energy_scan(cfg);
    }
    std::cout << res.summary;
    if (res.exit_code != 0) std::cerr << "vring: checks failed\n";
    return res.exit_code;
  } catch (const vring::ConfigError& e) {
    std::cerr << "vring: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "vring: error: " << e.what() << '\n';
    return 1;
  }
}
