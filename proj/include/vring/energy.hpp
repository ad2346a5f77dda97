#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "vring/biot_savart.hpp"
#include "vring/geometry.hpp"
#include "vring/reynolds.hpp"
#include "vring/ring.hpp"

namespace vring {

struct EnergyOptions {
  VelocityOptions velocity;
  /// Gauss nodes per radial panel (distance from the core centre).
  int radial_nodes = 8;
  /// Trapezoid nodes on full circles about the core centre.
  int circle_nodes = 32;
  /// Gauss nodes per angular panel on arcs cut by the axis or the truncation sphere.
  int arc_nodes = 12;
  /// Core-disk rule for the Reynolds energy: Gauss nodes per rho panel, trapezoid in theta.
  int stress_rho_nodes = 6;
  int stress_theta = 32;
};

/// pi \int r |v|^2 over the half-disk |zeta| < R of the meridional plane, which is the
/// kinetic energy (1/2)\int |v|^2 dx inside the ball of radius R in space.
struct KineticEnergy {
  double truncated = 0.0;
  /// Energy of the far dipole field outside the ball, pi Gamma^2 L^4 / (12 R^3).
  double tail = 0.0;
  /// 1.5 * tail; bounds the omitted far-field energy.
  double tail_bound = 0.0;
  double truncation_radius = 0.0;

  /// truncated + tail.
  double total() const { return truncated + tail; }
};

KineticEnergy kinetic_energy(const BiotSavart& bs, double truncation_radius,
                             const EnergyOptions& options = {});
KineticEnergy kinetic_energy(const RingParams& params, const VorticityProfile& profile, double t,
                             double truncation_radius, const EnergyOptions& options = {});

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  /// -L Gamma^2 / 2.
  double target = 0.0;
  std::vector<double> t;
  std::vector<double> c;
  std::vector<double> energy;

  double relative_error() const;
};

/// Least-squares fit of E_v(t_k) against log c(t_k). Requires at least 5 distinct positive
/// times, all with c < L/20.
SlopeFit energy_slope_fit(const RingParams& params, const VorticityProfile& profile,
                          const std::vector<double>& t_list, const EnergyOptions& options = {},
                          double truncation_radius_over_L = 10.0);
/// Same fit on energies that are already computed.
SlopeFit fit_log_slope(const RingParams& params, const std::vector<double>& t_list,
                       const std::vector<double>& energy);
void validate_slope_times(const RingParams& params, const std::vector<double>& t_list);

/// Largest eigenvalue of the traceless part of the 3x3 lift
/// Rrr e_r e_r + Rrz (e_r e_z + e_z e_r) + Rzz e_z e_z; always >= 0.
double lambda_max_traceless(const SymTensor2& R);

/// (3/2) \int_core lambda_max(R) 2 pi r dzeta.
double reynolds_energy_bound(const SymTensorField& R, const EnergyOptions& options = {});

struct EnergyReport {
  double t = 0.0;
  double c = 0.0;
  double E_v = 0.0;
  double E_R_bound = 0.0;
  double E_sub = 0.0;
  double tail = 0.0;
  double tail_bound = 0.0;
  double truncation_radius = 0.0;
  std::optional<double> slope_fit;
};

/// E_v (with tail) plus the Reynolds bound, E_sub = E_v + E_R_bound.
EnergyReport total_subsolution_energy(const ReynoldsPipeline& pipeline, double truncation_radius,
                                      const EnergyOptions& options = {});
EnergyReport total_subsolution_energy(const RingParams& params, const VorticityProfile& profile,
                                      double t, const EnergyOptions& options = {},
                                      double truncation_radius_over_L = 10.0);

/// True when E_sub strictly decreases as t increases (reports in any order).
bool energy_decreasing(std::vector<EnergyReport> reports);

void to_json(nlohmann::json& j, const EnergyReport& r);
EnergyReport energy_report_from_json(const nlohmann::json& j);

/// CSV with header t,c,E_v,E_R,tail_bound.
void write_energy_scan_csv(std::ostream& out, const std::vector<EnergyReport>& reports);

}  // namespace vring
