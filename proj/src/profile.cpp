#include "vring/profile.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "vring/geometry.hpp"
#include "vring/quadrature.hpp"

namespace vring {
namespace {

// Basis shapes per unit strength: b1 = rho(1-rho), b2 = -rho(1-rho) log(e rho).
// Their rho^1 and rho^3 moments are exact rationals.
constexpr double kB1M1 = 1.0 / 12.0;
constexpr double kB2M1 = -5.0 / 144.0;
constexpr double kB1M3 = 1.0 / 30.0;
constexpr double kB2M3 = -19.0 / 900.0;

constexpr double kTinyRho = 1e-300;
constexpr double kMomentTol = 1e-15;

const std::array<double, 6> kGradedBreaks = {0.0, 1e-4, 1e-3, 1e-2, 1e-1, 1.0};

double shape_moment(const VorticityProfile::Shape& f, int k) {
  return quad::adaptive_panels(
      [&](double x) { return f(x) * std::pow(x, k); }, kGradedBreaks, kMomentTol);
}

// \int_0^rho s^2(1-s) ds and \int_0^rho s^2(1-s) log(e s) ds.
double b1_primitive(double r) { return r * r * r / 3.0 - r * r * r * r / 4.0; }

double b2_primitive(double r) {
  if (r < kTinyRho) return 0.0;
  const double lr = std::log(r);
  const double r3 = r * r * r;
  const double r4 = r3 * r;
  const double log_part = (r3 * lr / 3.0 - r3 / 9.0) - (r4 * lr / 4.0 - r4 / 16.0);
  return -(b1_primitive(r) + log_part);
}

}  // namespace

VorticityProfile VorticityProfile::solve(double strength) { return solve(strength, Shape{}); }

VorticityProfile VorticityProfile::solve(double strength, Shape extra) {
  if (strength == 0.0 || !std::isfinite(strength)) {
    throw std::invalid_argument("solve_profile: strength must be finite and nonzero");
  }
  double rhs1 = 1.0 / kTwoPi;
  double rhs3 = 0.0;
  if (extra) {
    rhs1 -= shape_moment(extra, 1);
    rhs3 -= shape_moment(extra, 3);
  }
  const double det = kB1M1 * kB2M3 - kB2M1 * kB1M3;
  if (std::abs(det) < 1e-12) throw std::logic_error("solve_profile: singular moment system");
  const double x1 = (rhs1 * kB2M3 - kB2M1 * rhs3) / det;
  const double x2 = (kB1M1 * rhs3 - kB1M3 * rhs1) / det;
  if (x1 == 0.0) throw std::domain_error("solve_profile: degenerate leading coefficient");
  return VorticityProfile(strength, x1, x2 / x1, std::move(extra));
}

VorticityProfile VorticityProfile::from_coefficients(double strength, double c1, double c2) {
  if (strength == 0.0 || !std::isfinite(strength)) {
    throw std::invalid_argument("profile: strength must be finite and nonzero");
  }
  return VorticityProfile(strength, c1, c2, Shape{});
}

double VorticityProfile::operator()(double rho) const {
  if (rho < 0.0 || std::isnan(rho)) throw std::invalid_argument("profile: rho must be >= 0");
  if (rho >= 1.0 || rho < kTinyRho) return 0.0;
  const double base = rho * (1.0 - rho);
  double w = c1_ * base * (1.0 - c2_ * (1.0 + std::log(rho)));
  if (extra_) w += extra_(rho);
  return gamma_ * w;
}

double VorticityProfile::flux_primitive(double rho) const {
  if (rho < 0.0) throw std::invalid_argument("profile: rho must be >= 0");
  const double r = std::min(rho, 1.0);
  double value = c1_ * b1_primitive(r) + c1_ * c2_ * b2_primitive(r);
  if (extra_ && r > 0.0) {
    const std::array<double, 3> breaks = {0.0, 0.01 * r, r};
    value += quad::adaptive_panels([&](double s) { return extra_(s) * s; }, breaks, kMomentTol);
  }
  return gamma_ * value;
}

VorticityProfile solve_profile(double strength) { return VorticityProfile::solve(strength); }

double eval_profile(const VorticityProfile& p, double rho) { return p(rho); }

double moment(const VorticityProfile& p, int k) {
  if (k < 0) throw std::invalid_argument("moment: k must be >= 0");
  return quad::adaptive_panels([&](double x) { return p(x) * std::pow(x, k); }, kGradedBreaks,
                               kMomentTol);
}

double gamma_rho(const VorticityProfile& p, double rho) {
  if (rho < 0.0 || rho > 1.0) throw std::invalid_argument("gamma_rho: rho must lie in [0, 1]");
  if (rho == 0.0) return 0.0;
  // 2 pi \int_0^1 w(rho l) l dl = (2 pi / rho^2) \int_0^rho w(s) s ds; the
  // ansatz part is integrated in closed form.
  return kTwoPi * p.flux_primitive(rho) / (rho * rho);
}

double gamma_rho_substitution(const VorticityProfile& p, double rho) {
  if (!(rho > 0.0) || rho > 1.0) {
    throw std::invalid_argument("gamma_rho_substitution: rho must lie in (0, 1]");
  }
  const std::array<double, 5> breaks = {0.0, 1e-3 * rho, 1e-2 * rho, 0.1 * rho, rho};
  const double inner =
      quad::adaptive_panels([&](double s) { return p(s) * s; }, breaks, kMomentTol);
  return kTwoPi * inner / (rho * rho);
}

double rotation_energy_integral(const VorticityProfile& p) {
  return quad::adaptive_panels(
      [&](double x) { return p(x) * x * p.flux_primitive(x); }, kGradedBreaks, kMomentTol);
}

void to_json(nlohmann::json& j, const VorticityProfile& p) {
  if (p.has_extra_shape()) {
    throw std::logic_error("profile: profiles with a user shape are not serializable");
  }
  j = nlohmann::json{{"gamma", p.strength()}, {"c1", p.c1()}, {"c2", p.c2()}};
}

VorticityProfile profile_from_json(const nlohmann::json& j) {
  return VorticityProfile::from_coefficients(j.at("gamma").get<double>(),
                                             j.at("c1").get<double>(),
                                             j.at("c2").get<double>());
}

}  // namespace vring
