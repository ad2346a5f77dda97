#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <nlohmann/json.hpp>

#include "vring/ring.hpp"

using namespace vring;

TEST_CASE("thickness") {
  CHECK(thickness({1.0, 1.0, 1.0}, 1.0) == doctest::Approx(1.0));
  CHECK(thickness({1.0, 1.0, 1.0}, 1e-4) == doctest::Approx(1e-2));
  CHECK(thickness({1.0, 1.0, 0.25}, 4.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(thickness({1.0, 1.0, 1.0}, 0.0), std::invalid_argument);
}

TEST_CASE("height and its rate") {
  const RingParams p{1.0, 1.0, 1.0};
  const double e2 = std::exp(-2.0);
  CHECK(height(p, e2) == doctest::Approx(3.0 * e2 / (8.0 * kPi)).epsilon(1e-14));
  CHECK(std::abs(height({1.0, 1e-300, 1.0}, 0.01)) < 1e-300);
  CHECK_THROWS_AS(height(p, -1.0), std::invalid_argument);

  // Differentiating (G/8piL)(1 - 2 log c) t with d(log c)/dt = 1/(2t) gives exactly
  // -(G/4piL) log c; the -G/(8piL) from the product rule cancels the constant.
  const double t = 1e-3;
  const double dt = 1e-7;
  const double fd = (height(p, t + dt) - height(p, t - dt)) / (2.0 * dt);
  const double exact = -std::log(thickness(p, t)) / (4.0 * kPi);
  CHECK(fd == doctest::Approx(exact).epsilon(1e-6));
  CHECK(height_rate(p, t) == doctest::Approx(-std::log(thickness(p, t)) / (4.0 * kPi)));

  const RingParams q{2.0, 3.0, 1.0};
  CHECK(height_rate(q, t) == doctest::Approx(-3.0 * std::log(thickness(q, t)) / (8.0 * kPi)));
}

TEST_CASE("rotation angle") {
  const RingParams p{1.0, 1.0, 1.0};
  const auto prof = VorticityProfile::solve(1.0);
  CHECK(angle(p, prof, 1.0, 0.7) == doctest::Approx(0.0).scale(1e-15));
  CHECK(angle(p, prof, 0.01, 0.0) == 0.0);
  for (double rho : {0.2, 0.6, 1.0}) {
    const double t = 2e-3;
    const double dt = 1e-8;
    const double fd = (angle(p, prof, t + dt, rho) - angle(p, prof, t - dt, rho)) / (2.0 * dt);
    const double exact = -gamma_rho(prof, rho) / (kTwoPi * thickness(p, t) * thickness(p, t));
    CHECK(fd == doctest::Approx(exact).epsilon(1e-6));
    CHECK(angle_rate(p, prof, t, rho) == doctest::Approx(exact).epsilon(1e-12));
  }
}

TEST_CASE("validity window and state") {
  const RingParams p{1.0, 1.0, 1.0};
  CHECK_THROWS_AS(RingState::at(p, 10.0), std::domain_error);
  CHECK_THROWS_AS(RingState::at(p, 1.0 / 16.0), std::domain_error);
  CHECK_THROWS_AS(RingState::at(p, 0.0), std::invalid_argument);
  CHECK_NOTHROW(RingState::at(p, 0.9 / 16.0));
  CHECK_THROWS_AS((RingParams{0.0, 1.0, 1.0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((RingParams{1.0, 0.0, 1.0}).validate(), std::invalid_argument);

  const RingState s = RingState::at(p, 1e-2);
  nlohmann::json j = s;
  const RingState r = ring_state_from_json(j);
  CHECK(r.t == s.t);
  CHECK(r.c == s.c);
  CHECK(r.h == s.h);
  CHECK(r.params.L == s.params.L);
}

TEST_CASE("core parametrization") {
  const RingParams p{1.0, 1.0, 1.0};
  const auto prof = VorticityProfile::solve(1.0);
  const Ring ring(p, prof, 1e-2);
  const double c = ring.c();

  const auto g0 = ring.gamma(0.0, 1.3);
  CHECK(g0.r() == doctest::Approx(1.0));
  CHECK(g0.z() == doctest::Approx(ring.center().imag()));

  // Outer equatorial point once alpha + a = 0.
  const double a = ring.angle(1.0);
  const auto g1 = ring.gamma(1.0, -a);
  CHECK(g1.r() == doctest::Approx(1.0 + c).epsilon(1e-14));
  CHECK(g1.z() == doctest::Approx(ring.center().imag()).epsilon(1e-14));

  const Vec2 v0 = ring.dgamma_dt(0.0, 0.4);
  CHECK(v0.real() == 0.0);
  CHECK(v0.imag() == doctest::Approx(height_rate(p, 1e-2)));

  // Finite-difference oracle for dgamma/dt at fixed (rho, alpha).
  for (double rho : {0.3, 1.0}) {
    const double t = 1e-2;
    const double dt = 1e-7;
    const Vec2 fd = (gamma(p, prof, t + dt, rho, 0.8).complex() -
                     gamma(p, prof, t - dt, rho, 0.8).complex()) /
                    (2.0 * dt);
    CHECK(std::abs(fd - dgamma_dt(p, prof, t, rho, 0.8)) <= 1e-6 * std::abs(fd));
  }

  // At rho = 1 the growth rate c' = nu/(2c) and the rotation c a' = -Gamma/(2 pi c) are
  // orthogonal and both O(1/c); the height rate is only O(log c).
  const double limit = std::hypot(0.5, 1.0 / kTwoPi);
  for (double t : {1e-4, 1e-6, 1e-8}) {
    const double cc = thickness(p, t);
    for (double alpha : {0.0, 2.0}) {
      const double scaled = std::abs(dgamma_dt(p, prof, t, 1.0, alpha)) * cc;
      CHECK(scaled == doctest::Approx(limit).epsilon(20.0 * cc * std::abs(std::log(cc))));
    }
  }
}

TEST_CASE("inversion") {
  const RingParams p{1.0, 1.0, 1.0};
  const auto prof = VorticityProfile::solve(1.0);
  const Ring ring(p, prof, 1e-2);
  const auto at_center = ring.invert(ring.center());
  REQUIRE(at_center);
  CHECK(at_center->rho == 0.0);
  CHECK(at_center->alpha == 0.0);

  CHECK_FALSE(ring.invert(ring.center() + Vec2(1.01 * ring.c(), 0.0)));

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const double rho = std::sqrt(u(rng));
    const double alpha = kTwoPi * u(rng);
    const auto back = ring.invert(ring.gamma(rho, alpha).complex());
    REQUIRE(back);
    CHECK(back->rho == doctest::Approx(rho).epsilon(1e-12));
    const double da = std::remainder(back->alpha - alpha, kTwoPi);
    CHECK(std::abs(da) * rho <= 1e-12);
  }
}

TEST_CASE("vorticity integrates to the circulation") {
  const RingParams p{1.0, 1.0, 1.0};
  const auto prof = VorticityProfile::solve(1.0);
  const Ring ring(p, prof, 1e-2);
  const double c = ring.c();
  CHECK(ring.vorticity(ring.center() + Vec2(0.0, 1.5 * c)) == 0.0);

  // Gauss-Kronrod in rho (adaptive, resolves rho log rho) times the trapezoid in angle.
  const int na = 16;
  const double sum = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      [&](double rho) {
        double ring_sum = 0.0;
        for (int k = 0; k < na; ++k) {
          ring_sum += ring.vorticity(ring.center() + c * rho * std::polar(1.0, kTwoPi * k / na));
        }
        return ring_sum * kTwoPi / na * c * c * rho;
      },
      0.0, 1.0, 30, 1e-13);
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(vorticity_flux(p, prof, 1e-2, HalfPlanePoint(ring.center())) == 0.0);
}
