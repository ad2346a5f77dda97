#pragma once

#include <optional>

#include <nlohmann/json_fwd.hpp>

#include "vring/geometry.hpp"
#include "vring/profile.hpp"

namespace vring {

/// Physical parameters of the ring: radius L, circulation gamma, turbulence viscosity nu_tur.
struct RingParams {
  double L = 1.0;
  double gamma = 1.0;
  double nu_tur = 1.0;

  /// Throws std::invalid_argument unless L > 0, gamma != 0 and nu_tur > 0.
  void validate() const;
  /// Turbulence Reynolds number |gamma| / nu_tur.
  double reynolds_number() const;
};

double thickness(const RingParams& params, double t);
double height(const RingParams& params, double t);
/// Closed-form dh/dt = -(gamma / (4 pi L)) log c.
double height_rate(const RingParams& params, double t);
double angle(const RingParams& params, const VorticityProfile& profile, double t, double rho);
/// Closed-form da/dt = -gamma_rho / (2 pi c^2).
double angle_rate(const RingParams& params, const VorticityProfile& profile, double t,
                  double rho);

/// Internal polar coordinates (rho, alpha) of a core point.
struct CoreCoords {
  double rho;
  double alpha;
};

/// Frozen-time snapshot of the ring. Construction rejects t <= 0 and c >= L/4.
struct RingState {
  double t;
  double c;
  double h;
  double c_rate;
  double h_rate;
  RingParams params;

  static RingState at(const RingParams& params, double t);
  Vec2 center() const { return {params.L, h}; }
};

void to_json(nlohmann::json& j, const RingState& s);
RingState ring_state_from_json(const nlohmann::json& j);

/// The ring at a fixed time together with its vorticity profile.
/// Immutable; all members are const and thread-safe.
class Ring {
 public:
  Ring(const RingParams& params, VorticityProfile profile, double t);

  const RingState& state() const { return state_; }
  const RingParams& params() const { return state_.params; }
  const VorticityProfile& profile() const { return profile_; }
  double t() const { return state_.t; }
  double c() const { return state_.c; }
  Vec2 center() const { return state_.center(); }

  /// Unreduced rotation angle a(t, rho) and its time derivative.
  double angle(double rho) const;
  double angle_rate(double rho) const;
  double gamma_rho(double rho) const;

  /// Geometric angle alpha + a(t, rho), reduced to [0, 2 pi).
  double theta(double rho, double alpha) const;

  HalfPlanePoint gamma(double rho, double alpha) const;
  Vec2 dgamma_dt(double rho, double alpha) const;
  /// Same quantity as a function of the geometric angle theta.
  Vec2 dgamma_dt_geometric(double rho, double theta) const;

  /// (rho, alpha) of a point of the closed core, or nullopt outside.
  std::optional<CoreCoords> invert(Vec2 zeta) const;

  /// Vorticity w(rho)/c^2 inside the core, zero outside.
  double vorticity(Vec2 zeta) const;

 private:
  RingState state_;
  VorticityProfile profile_;
};

HalfPlanePoint gamma(const RingParams& params, const VorticityProfile& profile, double t,
                     double rho, double alpha);
Vec2 dgamma_dt(const RingParams& params, const VorticityProfile& profile, double t, double rho,
               double alpha);
std::optional<CoreCoords> invert_gamma(const RingParams& params, const VorticityProfile& profile,
                                       double t, const HalfPlanePoint& zeta);
double vorticity_flux(const RingParams& params, const VorticityProfile& profile, double t,
                      const HalfPlanePoint& zeta);

}  // namespace vring
