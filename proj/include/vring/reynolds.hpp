#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "vring/biot_savart.hpp"
#include "vring/geometry.hpp"
#include "vring/ring.hpp"

namespace vring {

using VectorField = std::function<Vec2(Vec2)>;

struct ReynoldsOptions {
  VelocityOptions velocity;
  /// Polar table (rho, theta) of the velocity correction w = v - v_lead used by
  /// the forcing; rho nodes are k / grid_rho, theta nodes are uniform.
  int grid_rho = 32;
  int grid_theta = 64;
  /// Gauss nodes per rho panel and trapezoid nodes in theta for A1, A2.
  int coef_rho_nodes = 8;
  int coef_theta = 32;
  /// Compatibility gate, relative to the L1 norm of the forcing.
  double compat_tol = 1e-4;
};

/// dgamma/dt - v at gamma(rho, alpha), assembled as i h' + c' rho e^{i theta} - w with
/// w = v - v_lead, so the O(1/c) rotation terms cancel exactly instead of numerically.
/// With include_height = false the i h' term is dropped (cancellation check).
Vec2 discrepancy(const BiotSavart& bs, double rho, double alpha, bool include_height = true);
Vec2 discrepancy(const RingParams& params, const VorticityProfile& profile, double t, double rho,
                 double alpha);

/// Same quantity at a point given by its geometric polar coordinates about the core centre.
Vec2 discrepancy_geometric(const BiotSavart& bs, double rho, double theta);

/// Pressure corrector q1 = (c1 phi_1(rho) + c2 phi_2(rho) sin(theta)) / c^2 on the core disk,
/// with bumps phi_j(rho) = kappa_j rho^2 (1 - rho)^2 normalized by
/// 2 pi \int_0^1 phi_j rho^j drho = 1.
struct PressureCorrector {
  static constexpr double kappa1 = 30.0 / kPi;
  static constexpr double kappa2 = 105.0 / (2.0 * kPi);

  double t = 0.0;
  double c = 0.0;
  Vec2 center{0.0, 0.0};
  /// A1 = \int r w (dgamma/dt - v)^perp, A2 = \int r w (dgamma/dt - v).(zeta - zeta0).
  Vec2 A1{0.0, 0.0};
  double A2 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;

  static double bump(int j, double rho);
  static double bump_derivative(int j, double rho);

  double q1(Vec2 zeta) const;
  Vec2 grad_q1(Vec2 zeta) const;
  /// |A1 . e_z| / |A1 . e_r|; A1 . e_z vanishes identically.
  double ez_relative() const;
};

PressureCorrector q1_coefficients(const BiotSavart& bs, const ReynoldsOptions& options = {});
PressureCorrector q1_coefficients(const RingParams& params, const VorticityProfile& profile,
                                  double t);
Vec2 grad_q1(const PressureCorrector& corr, const HalfPlanePoint& zeta);

/// Residuals of the two compatibility conditions of a field supported on B(x0, c).
struct CompatibilityResiduals {
  Vec2 mean{0.0, 0.0};  // \int f
  double moment = 0.0;  // \int f . (x - x0)^perp
  double l1 = 0.0;      // \int |f|
  double radius = 0.0;

  double mean_relative() const;
  double moment_relative() const;  // moment / (radius * l1)
};

/// Polar Gauss x trapezoid quadrature over B(x0, c), graded toward the centre.
CompatibilityResiduals compatibility_residuals(const VectorField& f, Vec2 x0, double c);

class CompatibilityError : public std::runtime_error {
 public:
  CompatibilityError(const CompatibilityResiduals& res, double tol);
  const CompatibilityResiduals& residuals() const { return residuals_; }

 private:
  CompatibilityResiduals residuals_;
};

/// F = r (w (dgamma/dt - v)^perp + grad q1), supported on the core disk.
/// The velocity correction is read from a bicubic polar table; everything else is
/// evaluated in closed form. Thread-safe.
class ForcingField {
 public:
  ForcingField(const BiotSavart& bs, PressureCorrector corr, const ReynoldsOptions& options = {});

  Vec2 operator()(Vec2 zeta) const;
  /// Forcing without the pressure corrector.
  Vec2 uncorrected(Vec2 zeta) const;

  Vec2 center() const { return center_; }
  double radius() const { return c_; }
  const PressureCorrector& corrector() const { return corr_; }
  const CompatibilityResiduals& compatibility() const { return compat_; }
  /// Max |F| over the table nodes.
  double sup_norm() const { return sup_; }
  /// Interpolated w = v - v_lead at geometric polar coordinates.
  Vec2 velocity_correction(double rho, double theta) const;

 private:
  Vec2 flux_part(Vec2 zeta, double rho, double theta) const;

  PressureCorrector corr_;
  Vec2 center_;
  double c_;
  double h_rate_;
  double c_rate_;
  VorticityProfile profile_;
  int n_rho_;
  int n_theta_;
  std::vector<Vec2> table_;  // (n_rho + 2) rows of n_theta, the last row a ghost
  CompatibilityResiduals compat_;
  double sup_ = 0.0;
};

ForcingField forcing(const BiotSavart& bs, const PressureCorrector& corr,
                     const ReynoldsOptions& options = {});

/// Symmetric tensor field supported on the closed ball B(center, radius); evaluation
/// returns a structural zero outside.
class SymTensorField {
 public:
  using Map = std::function<SymTensor2(Vec2)>;
  SymTensorField(Vec2 center, double radius, Map map);

  SymTensor2 operator()(Vec2 zeta) const;
  Vec2 center() const { return center_; }
  double radius() const { return radius_; }
  bool in_support(Vec2 zeta) const;

  static SymTensorField zero(Vec2 center, double radius);

 private:
  Vec2 center_;
  double radius_;
  Map map_;
};

struct AntidivergenceOptions {
  /// Gauss nodes per angular panel and per radial panel.
  int beta_nodes = 12;
  int ray_nodes = 12;
  /// Panels on the mollifier rays.
  int mollifier_panels = 3;
  /// Grade radial panels toward the ball centre, where the production forcing has a
  /// rho log(rho) point singularity.
  bool grade_center = true;
  double compat_tol = 1e-4;
};

/// Normalization k of the mollifier k exp(-1 / (1 - |y - x0|^2 / c^2)) on B(x0, c).
double mollifier_constant(double c);

/// Compact-support right inverse of the divergence: div(R f) = f with R f symmetric and
/// supported on B(x0, c). Throws CompatibilityError when the compatibility residuals exceed
/// options.compat_tol (relative to the L1 norm). `f` must outlive the returned field.
///
/// Evaluation uses the mollified representation in polar coordinates about the evaluation
/// point x: with y = x - s e and x + l e the point where f is sampled, every angular
/// direction e factorizes into mollifier moments \int s^n phi(x - s e) ds and forcing
/// moments \int l^n f(x + l e) dl over the chords of the ball.
SymTensorField antidivergence(VectorField f, Vec2 x0, double c,
                              const AntidivergenceOptions& options = {});

/// R = -(1/r) R(F); keeps the forcing alive.
SymTensorField reynolds_field(std::shared_ptr<const ForcingField> forcing,
                              const AntidivergenceOptions& options = {});

struct ReynoldsPipeline {
  std::shared_ptr<const BiotSavart> velocity;
  PressureCorrector corrector;
  std::shared_ptr<const ForcingField> forcing;
  SymTensorField stress;
};

/// Velocity, corrector, forcing and stress at time t.
ReynoldsPipeline build_reynolds(const RingParams& params, const VorticityProfile& profile, double t,
                                const ReynoldsOptions& options = {},
                                const AntidivergenceOptions& antidiv = {});

/// Finite-difference divergence of a tensor field in the plane, div(T)_l = d_j T_lj.
Vec2 fd_divergence(const std::function<SymTensor2(Vec2)>& field, Vec2 x, double h);

struct LiftSample {
  HalfPlanePoint point;
  Vec2 div_3d;     // (x1, x3) components of the cartesian divergence at azimuth 0
  double div_3d_y;  // x2 component, zero by symmetry
  Vec2 div_half;   // (1/r) div_zeta(r R)
  double mismatch;  // |div_3d - div_half| / max(|div_3d|, |div_half|), 0 when both vanish
};

struct LiftReport {
  std::vector<LiftSample> samples;
  double max_mismatch = 0.0;
};

/// Lifts R to the 3x3 tensor Rrr e_r e_r + Rrz (e_r e_z + e_z e_r) + Rzz e_z e_z, takes the
/// cartesian divergence by central differences at azimuth 0 and compares with
/// (1/r) div_zeta(r R) from half-plane differences. Rejects points with r <= 10 h.
LiftReport verify_axisymmetric_lift(const SymTensorField& R, const std::vector<HalfPlanePoint>& points,
                                    double h);

/// q00(zeta) = -\int\int K_2d(zeta - gamma) . dgamma/dt w rho drho dalpha.
double q00_potential(const Ring& ring, const HalfPlanePoint& zeta);
double q00_potential(const RingParams& params, const VorticityProfile& profile, double t,
                     const HalfPlanePoint& zeta);

/// {"A1": [.,.], "A2": ., "c1": ., "c2": ., "compat_mean": [.,.], "compat_moment": .} plus
/// relative residuals and the core geometry.
nlohmann::json reynolds_diagnostics(const ForcingField& forcing);

struct TensorRow {
  double r;
  double z;
  SymTensor2 R;
};

std::vector<TensorRow> tensor_field_grid(const SymTensorField& field, const GridSpec& grid,
                                         unsigned workers = 0);
/// CSV with header r,z,Rrr,Rrz,Rzz.
void write_tensor_csv(std::ostream& out, const std::vector<TensorRow>& rows);

}  // namespace vring
