#include "vring/ring.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace vring {
namespace {

void require_positive_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("ring: t must be positive");
}

void require_rho(double rho) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("ring: rho must lie in [0, 1]");
}

}  // namespace

void RingParams::validate() const {
  if (!(L > 0.0) || !std::isfinite(L)) throw std::invalid_argument("ring: L must be positive");
  if (gamma == 0.0 || !std::isfinite(gamma)) {
    throw std::invalid_argument("ring: gamma must be finite and nonzero");
  }
  if (!(nu_tur > 0.0) || !std::isfinite(nu_tur)) {
    throw std::invalid_argument("ring: nu_tur must be positive");
  }
}

double RingParams::reynolds_number() const { return std::abs(gamma) / nu_tur; }

double thickness(const RingParams& params, double t) {
  require_positive_time(t);
  return std::sqrt(params.nu_tur * t);
}

double height(const RingParams& params, double t) {
  const double c = thickness(params, t);
  return params.gamma / (8.0 * kPi * params.L) * (1.0 - 2.0 * std::log(c)) * t;
}

double height_rate(const RingParams& params, double t) {
  const double c = thickness(params, t);
  return -params.gamma / (4.0 * kPi * params.L) * std::log(c);
}

double angle(const RingParams& params, const VorticityProfile& profile, double t, double rho) {
  require_positive_time(t);
  require_rho(rho);
  return -gamma_rho(profile, rho) / (kTwoPi * params.nu_tur) * std::log(t);
}

double angle_rate(const RingParams& params, const VorticityProfile& profile, double t,
                  double rho) {
  require_positive_time(t);
  require_rho(rho);
  return -gamma_rho(profile, rho) / (kTwoPi * params.nu_tur * t);
}

RingState RingState::at(const RingParams& params, double t) {
  params.validate();
  const double c = thickness(params, t);
  if (!(c < 0.25 * params.L)) {
    throw std::domain_error("ring: core thickness c(t) must be below L/4");
  }
  return RingState{t, c, height(params, t), params.nu_tur / (2.0 * c), height_rate(params, t),
                   params};
}

void to_json(nlohmann::json& j, const RingState& s) {
  j = nlohmann::json{{"t", s.t},          {"c", s.c},
                     {"h", s.h},          {"L", s.params.L},
                     {"gamma", s.params.gamma}, {"nu_tur", s.params.nu_tur}};
}

RingState ring_state_from_json(const nlohmann::json& j) {
  RingParams p{j.at("L").get<double>(), j.at("gamma").get<double>(),
               j.at("nu_tur").get<double>()};
  return RingState::at(p, j.at("t").get<double>());
}

Ring::Ring(const RingParams& params, VorticityProfile profile, double t)
    : state_(RingState::at(params, t)), profile_(std::move(profile)) {}

double Ring::gamma_rho(double rho) const { return vring::gamma_rho(profile_, rho); }

double Ring::angle(double rho) const {
  require_rho(rho);
  return -gamma_rho(rho) / (kTwoPi * state_.params.nu_tur) * std::log(state_.t);
}

double Ring::angle_rate(double rho) const {
  require_rho(rho);
  return -gamma_rho(rho) / (kTwoPi * state_.c * state_.c);
}

double Ring::theta(double rho, double alpha) const { return wrap_angle(alpha + angle(rho)); }

HalfPlanePoint Ring::gamma(double rho, double alpha) const {
  return HalfPlanePoint(center() + state_.c * rho * std::polar(1.0, theta(rho, alpha)));
}

Vec2 Ring::dgamma_dt(double rho, double alpha) const {
  return dgamma_dt_geometric(rho, theta(rho, alpha));
}

Vec2 Ring::dgamma_dt_geometric(double rho, double th) const {
  require_rho(rho);
  const Vec2 e = std::polar(1.0, th);
  const Vec2 i(0.0, 1.0);
  return i * state_.h_rate + state_.c_rate * rho * e + i * state_.c * rho * angle_rate(rho) * e;
}

std::optional<CoreCoords> Ring::invert(Vec2 zeta) const {
  const Vec2 d = zeta - center();
  const double dist = std::abs(d);
  const double slack = 4.0 * std::numeric_limits<double>::epsilon();
  if (dist > state_.c * (1.0 + slack)) return std::nullopt;
  const double rho = std::min(1.0, dist / state_.c);
  if (rho == 0.0) return CoreCoords{0.0, 0.0};
  return CoreCoords{rho, wrap_angle(std::arg(d) - angle(rho))};
}

double Ring::vorticity(Vec2 zeta) const {
  const double dist = std::abs(zeta - center());
  if (dist >= state_.c) return 0.0;
  return profile_(dist / state_.c) / (state_.c * state_.c);
}

HalfPlanePoint gamma(const RingParams& params, const VorticityProfile& profile, double t,
                     double rho, double alpha) {
  return Ring(params, profile, t).gamma(rho, alpha);
}

Vec2 dgamma_dt(const RingParams& params, const VorticityProfile& profile, double t, double rho,
               double alpha) {
  return Ring(params, profile, t).dgamma_dt(rho, alpha);
}

std::optional<CoreCoords> invert_gamma(const RingParams& params, const VorticityProfile& profile,
                                       double t, const HalfPlanePoint& zeta) {
  return Ring(params, profile, t).invert(zeta.complex());
}

double vorticity_flux(const RingParams& params, const VorticityProfile& profile, double t,
                      const HalfPlanePoint& zeta) {
  return Ring(params, profile, t).vorticity(zeta.complex());
}

}  // namespace vring
