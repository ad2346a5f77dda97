#pragma once

#include <iosfwd>
#include <memory>
#include <vector>

#include "vring/geometry.hpp"
#include "vring/kernels.hpp"
#include "vring/ring.hpp"

namespace vring {

/// Meridional velocity at a point with its split into the G-kernel part
/// (`v_rot`) and the H-kernel part (`v_up`); v == v_rot + v_up.
struct VelocitySample {
  HalfPlanePoint point;
  Vec2 v;
  Vec2 v_rot;
  Vec2 v_up;
};

struct VelocityOptions {
  /// Relative accuracy of the cached kernel table.
  double kernel_tol = 1e-11;
  /// Gauss-Legendre nodes per panel in the singular (near/inside) rules.
  int panel_nodes = 16;
  /// Points farther than far_ratio * c from the core centre use the tensor rule.
  double far_ratio = 3.0;
  /// Target accuracy of the periodic trapezoid rule in the far field.
  double far_tol = 1e-12;
};

/// Velocity induced by the core vorticity of a ring through the
/// axisymmetric Biot-Savart law, v(zeta) = \int K_ax(zeta, zeta') w(zeta') dzeta'.
///
/// Points far from the core use Gauss-Legendre in rho' times the periodic
/// trapezoid rule in alpha' about the core centre. Points inside or near the
/// core use polar coordinates (R, beta) centred at the evaluation point, so
/// the R dR Jacobian cancels the 1/|zeta - zeta'| singularity; angular panels
/// are graded toward nearly tangent rays and radial panels toward R = 0 (or the
/// near chord end) and the closest approach to the core centre.
///
/// Immutable after construction and safe for concurrent use.
class BiotSavart {
 public:
  explicit BiotSavart(Ring ring, VelocityOptions options = {});

  const Ring& ring() const { return ring_; }
  const VelocityOptions& options() const { return options_; }

  VelocitySample velocity(const HalfPlanePoint& zeta) const;
  VelocitySample velocity_on_ring(double rho, double alpha) const;

  /// -(i rho Gamma_rho / (2 pi c)) e^{i theta} - (i Gamma / (4 pi L)) log c.
  Vec2 asymptotic_leading(double rho, double alpha) const;
  /// velocity_on_ring - asymptotic_leading.
  Vec2 residual(double rho, double alpha) const;

 private:
  struct Accum;
  void add_far(Vec2 zeta, double r, Accum& acc) const;
  void add_polar(Vec2 zeta, double r, Accum& acc) const;
  void add_ray(Vec2 zeta, double r, double beta, double r_lo, double r_hi, double weight,
               double grade_scale, Accum& acc) const;

  Ring ring_;
  VelocityOptions options_;
  std::shared_ptr<const kernel::Table> table_;
  std::vector<double> rho_nodes_;
  std::vector<double> rho_weights_;  // quadrature weight times w(rho) rho
};

VelocitySample velocity(const RingParams& params, const VorticityProfile& profile, double t,
                        const HalfPlanePoint& zeta);
VelocitySample velocity_on_ring(const RingParams& params, const VorticityProfile& profile,
                                double t, double rho, double alpha);
Vec2 asymptotic_leading(const RingParams& params, const VorticityProfile& profile, double t,
                        double rho, double alpha);
Vec2 residual(const RingParams& params, const VorticityProfile& profile, double t, double rho,
              double alpha);

/// Rectangular sampling grid of the half-plane; rmin must be positive.
struct GridSpec {
  double rmin = 0.5;
  double rmax = 1.5;
  double zmin = -0.5;
  double zmax = 0.5;
  int nr = 21;
  int nz = 21;

  void validate() const;
  double r_at(int i) const;
  double z_at(int j) const;
};

struct FieldRow {
  double r;
  double z;
  Vec2 v;
};

/// Velocity on the grid, ordered row-major in (z, r): z outer, r inner.
std::vector<FieldRow> velocity_field_grid(const BiotSavart& bs, const GridSpec& grid,
                                          unsigned workers = 0);

/// CSV with header r,z,vr,vz and 17 significant digits.
void write_velocity_csv(std::ostream& out, const std::vector<FieldRow>& rows);

}  // namespace vring
