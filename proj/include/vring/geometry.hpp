#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>

namespace vring {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// A meridional 2-vector (v_r, v_z), identified with the complex number v_r + i v_z.
using Vec2 = std::complex<double>;

/// Counter-clockwise rotation by a right angle: (a, b) -> (-b, a), i.e. i*v.
inline Vec2 perp(Vec2 v) { return {-v.imag(), v.real()}; }

inline double dot(Vec2 a, Vec2 b) { return a.real() * b.real() + a.imag() * b.imag(); }

/// Reduces an angle to [0, 2*pi).
inline double wrap_angle(double a) {
  double w = std::fmod(a, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

/// A point (r, z) of the meridional half-plane, r > 0.
class HalfPlanePoint {
 public:
  HalfPlanePoint(double r, double z) : r_(r), z_(z) {
    if (!(r > 0.0)) throw std::invalid_argument("HalfPlanePoint: r must be positive");
  }
  explicit HalfPlanePoint(Vec2 zeta) : HalfPlanePoint(zeta.real(), zeta.imag()) {}

  double r() const { return r_; }
  double z() const { return z_; }
  Vec2 complex() const { return {r_, z_}; }

 private:
  double r_;
  double z_;
};

/// Symmetric 2x2 tensor on the meridional plane.
struct SymTensor2 {
  double rr = 0.0;
  double rz = 0.0;
  double zz = 0.0;

  SymTensor2& operator+=(const SymTensor2& o) {
    rr += o.rr;
    rz += o.rz;
    zz += o.zz;
    return *this;
  }
  friend SymTensor2 operator*(double s, const SymTensor2& t) {
    return {s * t.rr, s * t.rz, s * t.zz};
  }
  /// Row-wise contraction with a vector: (T v)_l = T_lj v_j.
  Vec2 apply(Vec2 v) const {
    return {rr * v.real() + rz * v.imag(), rz * v.real() + zz * v.imag()};
  }
};

}  // namespace vring
