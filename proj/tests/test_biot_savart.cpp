#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "vring/biot_savart.hpp"
#include "vring/parallel.hpp"

using namespace vring;

namespace {

const RingParams kUnit{1.0, 1.0, 1.0};

}  // namespace

TEST_CASE("axis velocity matches the thin-filament formula") {
  // On the axis a filament of radius L induces v_z = Gamma L^2 / (2 (L^2 + d^2)^{3/2});
  // the finite core changes this only at O(c^2).
  const double t = 1e-6;
  const BiotSavart bs(Ring(kUnit, VorticityProfile::solve(1.0), t));
  const double h = bs.ring().center().imag();
  for (double d : {0.0, 0.5, 2.0}) {
    const auto s = bs.velocity(HalfPlanePoint(1e-4, h + d));
    const double ref = 0.5 / std::pow(1.0 + d * d, 1.5);
    CHECK(s.v.imag() == doctest::Approx(ref).epsilon(1e-5));
    CHECK(std::abs(s.v.real()) < 1e-4);
  }
}

TEST_CASE("v_r vanishes on the axis") {
  const BiotSavart bs(Ring(kUnit, VorticityProfile::solve(1.0), 1e-4));
  const double z = bs.ring().center().imag() + 0.3;
  double prev = 1e300;
  for (double r : {1e-1, 1e-2, 1e-3, 1e-4}) {
    const double vr = std::abs(bs.velocity(HalfPlanePoint(r, z)).v.real());
    CHECK(vr < prev);
    prev = vr;
  }
  CHECK(prev < 1e-4);
}

TEST_CASE("velocity splits and scales linearly in Gamma") {
  // Doubling Gamma doubles the vorticity; the core also rises twice as fast, so compare
  // at equal offsets from the core centre. The internal rotation only relabels rings of a
  // radial profile and leaves the field unchanged.
  const double t = 1e-3;
  const BiotSavart one(Ring(kUnit, VorticityProfile::solve(1.0), t));
  const BiotSavart two(Ring({1.0, 2.0, 1.0}, VorticityProfile::solve(2.0), t));
  for (const Vec2 offset : {Vec2(0.01, 0.02), Vec2(-0.3, -0.4), Vec2(1.5, 1.0)}) {
    const auto a = one.velocity(HalfPlanePoint(one.ring().center() + offset));
    const auto b = two.velocity(HalfPlanePoint(two.ring().center() + offset));
    CHECK(std::abs(a.v - (a.v_rot + a.v_up)) <= 1e-14 * std::abs(a.v));
    CHECK(std::abs(b.v - 2.0 * a.v) <= 1e-10 * std::abs(b.v));
  }
}

TEST_CASE("velocity matches a brute-force core integral") {
  // Far point: tensor Gauss x trapezoid over the core with direct kernel quadrature.
  const double t = 1e-3;
  const auto prof = VorticityProfile::solve(1.0);
  const Ring ring(kUnit, prof, t);
  const BiotSavart bs(ring);
  const HalfPlanePoint p(1.3, 0.5);
  Vec2 ref{0.0, 0.0};
  const int nr = 400;
  const int na = 64;
  for (int i = 0; i < nr; ++i) {
    const double rho = (i + 0.5) / nr;
    for (int k = 0; k < na; ++k) {
      const double alpha = kTwoPi * k / na;
      const auto q = ring.gamma(rho, alpha);
      ref += kernel::K_ax(p, q).total() * prof(rho) * rho * (1.0 / nr) * (kTwoPi / na);
    }
  }
  CHECK(std::abs(bs.velocity(p).v - ref) <= 1e-5 * std::abs(ref));
}

TEST_CASE("residual stays bounded while the rotation term grows") {
  const auto prof = VorticityProfile::solve(1.0);
  double rmin = 1e300;
  double rmax = 0.0;
  double lead_small = 0.0;
  double lead_large = 0.0;
  for (double c : {1e-2, 1e-3}) {
    const BiotSavart bs(Ring(kUnit, prof, c * c));
    double sup = 0.0;
    double lead = 0.0;
    for (double rho : {0.25, 0.75, 1.0}) {
      for (double alpha : {0.0, 2.0, 4.0}) {
        sup = std::max(sup, std::abs(bs.residual(rho, alpha)));
        lead = std::max(lead, rho * gamma_rho(prof, rho) / (kTwoPi * c));
      }
    }
    rmin = std::min(rmin, sup);
    rmax = std::max(rmax, sup);
    (c == 1e-2 ? lead_large : lead_small) = lead;
  }
  CHECK(rmax / rmin <= 3.0);
  CHECK(lead_small / lead_large == doctest::Approx(10.0).epsilon(1e-12));

  // At the centre only the vertical term remains.
  const BiotSavart bs(Ring(kUnit, prof, 1e-4));
  const Vec2 lead0 = bs.asymptotic_leading(0.0, 0.3);
  CHECK(lead0.real() == 0.0);
  CHECK(lead0.imag() == doctest::Approx(-std::log(1e-2) / (4.0 * kPi)));
}

TEST_CASE("grid dump") {
  GridSpec grid;
  grid.nr = 4;
  grid.nz = 3;
  const BiotSavart bs(Ring(kUnit, VorticityProfile::solve(1.0), 1e-2));
  const auto rows1 = velocity_field_grid(bs, grid, 1);
  const auto rows2 = velocity_field_grid(bs, grid, 3);
  REQUIRE(rows1.size() == 12);
  std::ostringstream a;
  std::ostringstream b;
  write_velocity_csv(a, rows1);
  write_velocity_csv(b, rows2);
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("r,z,vr,vz\n", 0) == 0);

  GridSpec bad;
  bad.rmin = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
