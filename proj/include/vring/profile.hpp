#pragma once

#include <functional>

#include <nlohmann/json_fwd.hpp>

namespace vring {

/// Radial vorticity density of the ring core,
///
///   w(rho) = Gamma * [ c1 rho (1 - rho) (1 - c2 log(e rho)) + p(rho) ]   on [0, 1],
///
/// and zero outside. The coefficients are fixed so that
///   2 pi \int_0^1 w rho drho = Gamma   and   \int_0^1 w rho^3 drho = 0.
/// `p` is an optional user-supplied continuous shape (per unit strength) that
/// is re-projected onto both constraints through c1 and c1*c2.
///
/// Immutable after construction; all queries are const and thread-safe.
class VorticityProfile {
 public:
  using Shape = std::function<double(double)>;

  static VorticityProfile solve(double strength);
  static VorticityProfile solve(double strength, Shape extra);

  /// Rebuilds a plain (no extra shape) profile from stored coefficients.
  static VorticityProfile from_coefficients(double strength, double c1, double c2);

  double strength() const { return gamma_; }
  double c1() const { return c1_; }
  double c2() const { return c2_; }
  bool has_extra_shape() const { return static_cast<bool>(extra_); }

  /// w(rho); rejects rho < 0.
  double operator()(double rho) const;

  /// \int_0^rho w(s) s ds for rho in [0, 1] (clamped above 1).
  double flux_primitive(double rho) const;

 private:
  VorticityProfile(double gamma, double c1, double c2, Shape extra)
      : gamma_(gamma), c1_(c1), c2_(c2), extra_(std::move(extra)) {}

  double gamma_;
  double c1_;
  double c2_;
  Shape extra_;
};

VorticityProfile solve_profile(double strength);
double eval_profile(const VorticityProfile& p, double rho);

/// \int_0^1 w(rho) rho^k drho by graded adaptive Gauss-Kronrod.
double moment(const VorticityProfile& p, int k);

/// Layerwise circulation Gamma_rho = 2 pi \int_0^1 w(rho lambda) lambda dlambda, rho in [0, 1].
double gamma_rho(const VorticityProfile& p, double rho);

/// Same quantity through (2 pi / rho^2) \int_0^rho w(s) s ds, by quadrature. rho > 0.
double gamma_rho_substitution(const VorticityProfile& p, double rho);

/// Rotation-energy integral \int_0^1 w(rho) rho^3 f(rho)/rho^2 drho with the layer flux
/// f(rho) = \int_0^rho w(s) s ds = rho^2 gamma_rho / (2 pi). Since f' = w rho it equals
/// f(1)^2 / 2 = Gamma^2 / (8 pi^2) for every admissible profile. (Weighting by gamma_rho
/// itself multiplies the result by 2 pi.)
double rotation_energy_integral(const VorticityProfile& p);

void to_json(nlohmann::json& j, const VorticityProfile& p);
VorticityProfile profile_from_json(const nlohmann::json& j);

}  // namespace vring
