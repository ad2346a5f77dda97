#pragma once

#include <complex>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "vring/geometry.hpp"

namespace vring::kernel {

/// Scalar kernels of the axisymmetric Biot-Savart law,
///
///   G(s) = \int_0^pi cos(phi) / (2(1 - cos phi) + s)^{3/2} dphi,
///   H(s) = \int_0^pi (1 - cos phi) / (2(1 - cos phi) + s)^{3/2} dphi,
///
/// evaluated by direct quadrature (relative error well below 1e-12). Both reject s <= 0.
double G(double s);
double H(double s);
double G_derivative(double s);
double H_derivative(double s);

struct Pair {
  double G;
  double H;
};

/// Log-spaced cubic Hermite table of (G, H) in u = log s with exact nodal
/// derivatives. Smooth normalized forms g = s (1+s)^{3/2} G and
/// h = (1+s)^{3/2} H + log(s/(1+s))/4 are interpolated, so the relative error
/// is uniform from s -> 0 to s -> infinity. Points beyond the upper end fall
/// back to direct quadrature.
class Table {
 public:
  /// Builds a table whose interpolation error does not exceed `rel_tol`
  /// (measured at all cell midpoints during construction).
  explicit Table(double rel_tol);

  Pair operator()(double s) const;
  double rel_tol() const { return rel_tol_; }
  double spacing() const { return du_; }
  std::size_t size() const { return g_.size(); }
  /// Largest relative midpoint error seen while building.
  double measured_error() const { return measured_error_; }

 private:
  void fill(double du);
  double max_midpoint_error() const;

  double rel_tol_;
  double u_min_;
  double u_max_;
  double du_ = 0.0;
  double measured_error_ = 0.0;
  std::vector<double> g_, dg_, h_, dh_;
};

/// Shared table with accuracy at least `rel_tol`; rebuilt (once) when a
/// tighter tolerance is requested than the current table provides. The
/// returned pointer stays valid after later rebuilds.
std::shared_ptr<const Table> shared_table(double rel_tol);

/// Closed forms of \int_0^pi (phi^2 + s)^{-3/2} dphi and \int_0^pi phi^2 (phi^2 + s)^{-3/2} dphi.
double aux_exact_1(double s);
double aux_exact_2(double s);
/// The same integrals by graded adaptive quadrature.
double aux_quadrature_1(double s);
double aux_quadrature_2(double s);

/// Axisymmetric Biot-Savart kernel
///   K(zeta, zeta') = (i / (2 pi r)) (sqrt(r'/r) H(s) - zbar G(s)),
///   zbar = (zeta - zeta') / sqrt(r r'),  s = |zbar|^2,
/// split into the G part (`rot`) and the H part (`up`).
struct AxKernel {
  Vec2 rot;
  Vec2 up;
  Vec2 total() const { return rot + up; }
};

/// Uses direct quadrature for G and H. Rejects coincident points.
AxKernel K_ax(const HalfPlanePoint& zeta, const HalfPlanePoint& zeta_p);
/// Same, with G and H from `table`.
AxKernel K_ax(const HalfPlanePoint& zeta, const HalfPlanePoint& zeta_p, const Table& table);

/// Planar point-vortex kernel i / (2 pi conj(zeta)). Rejects zeta = 0.
Vec2 K_2d(Vec2 zeta);

/// (1/2pi) \int_0^{2pi} da / (rho - rho' e^{-ia}) = [rho > rho'] / rho.
double mean_value_circle(double rho, double rho_p);
/// Periodic trapezoid evaluation of the same integral, refined by doubling
/// until successive values agree to `tol`.
std::complex<double> mean_value_circle_quadrature(double rho, double rho_p, double tol = 1e-14);

/// CSV with header s,G,H,G_res,H_res where G_res = G - 1/s and H_res = H + log(s)/4.
void write_kernel_csv(std::ostream& out, std::span<const double> s_values);

}  // namespace vring::kernel
