#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <nlohmann/json.hpp>

#include "vring/geometry.hpp"
#include "vring/profile.hpp"

using namespace vring;

namespace {

// Beta-type integrals: \int_0^1 rho^n drho = 1/(n+1), \int_0^1 rho^n log rho drho = -1/(n+1)^2.
double poly(int n) { return 1.0 / (n + 1); }
double poly_log(int n) { return -1.0 / ((n + 1.0) * (n + 1.0)); }

// \int_0^1 rho^k rho (1 - rho) (1 - c2 log(e rho)) drho in closed form.
double ansatz_moment(int k, double c2) {
  const double plain = poly(k + 1) - poly(k + 2);
  const double logs = poly_log(k + 1) - poly_log(k + 2);
  return (1.0 - c2) * plain - c2 * logs;
}

double gk(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 20, 1e-14);
}

}  // namespace

TEST_CASE("profile coefficients have the closed forms") {
  const auto p = VorticityProfile::solve(1.0);
  CHECK(p.c2() == doctest::Approx(30.0 / 19.0).epsilon(1e-13));
  CHECK(p.c1() == doctest::Approx(228.0 / (13.0 * kPi)).epsilon(1e-13));
  // The beta integrals behind c2.
  CHECK(poly(4) - poly(5) == doctest::Approx(1.0 / 30.0));
  // \int rho^4 (1 - rho) log(e rho) drho.
  CHECK(ansatz_moment(3, 0.0) - ansatz_moment(3, 1.0) == doctest::Approx(19.0 / 900.0));

  const auto q = VorticityProfile::solve(-2.0);
  CHECK(q.c2() == doctest::Approx(p.c2()).epsilon(1e-14));
  for (double rho : {0.1, 0.37, 0.8}) {
    CHECK(q(rho) == doctest::Approx(-2.0 * p(rho)).epsilon(1e-14));
  }
}

TEST_CASE("profile values") {
  const auto p = VorticityProfile::solve(1.0);
  CHECK(p(0.0) == 0.0);
  CHECK(std::abs(p(1.0)) < 1e-15);
  CHECK(p(1e-305) == 0.0);
  const double c1 = 228.0 / (13.0 * kPi);
  const double c2 = 30.0 / 19.0;
  CHECK(p(0.5) == doctest::Approx(c1 * 0.25 * (1.0 - c2 * std::log(std::exp(1.0) / 2.0))).epsilon(1e-14));
  CHECK_THROWS_AS(p(-0.1), std::invalid_argument);
}

TEST_CASE("moments match the closed-form oracle") {
  for (double g : {1.0, 3.0, -0.7}) {
    const auto p = VorticityProfile::solve(g);
    const double c1 = 228.0 / (13.0 * kPi);
    for (int k : {0, 1, 2, 3, 5}) {
      const double exact = g * c1 * ansatz_moment(k, 30.0 / 19.0);
      CHECK(std::abs(moment(p, k) - exact) <= 1e-13 * std::abs(g));
    }
    CHECK(std::abs(kTwoPi * moment(p, 1) - g) <= 1e-10 * std::abs(g));
    CHECK(std::abs(moment(p, 3)) <= 1e-10 * std::abs(g));
  }
  CHECK(moment(VorticityProfile::solve(1.0), 1) == doctest::Approx(1.0 / kTwoPi).epsilon(1e-13));
  CHECK(moment(VorticityProfile::solve(3.0), 1) == doctest::Approx(3.0 / kTwoPi).epsilon(1e-13));
}

TEST_CASE("layer circulation") {
  const auto p = VorticityProfile::solve(1.0);
  CHECK(gamma_rho(p, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(gamma_rho(p, 0.0) == 0.0);

  // Brute-force midpoint sum with 10^6 nodes of 2 pi \int_0^1 w(rho l) l dl at rho = 1/2.
  const int n = 1000000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double l = (i + 0.5) / n;
    sum += p(0.5 * l) * l;
  }
  CHECK(gamma_rho(p, 0.5) == doctest::Approx(kTwoPi * sum / n).epsilon(1e-8));
  for (double rho : {0.05, 0.3, 0.9}) {
    CHECK(gamma_rho_substitution(p, rho) == doctest::Approx(gamma_rho(p, rho)).epsilon(1e-11));
  }
}

TEST_CASE("rotation energy is independent of the admissible profile") {
  const double target = 1.0 / (8.0 * kPi * kPi);
  const VorticityProfile profiles[] = {
      VorticityProfile::solve(1.0),
      VorticityProfile::solve(1.0, [](double x) { return x * x * (1.0 - x); }),
      VorticityProfile::solve(1.0, [](double x) { return std::sin(kPi * x); }),
      VorticityProfile::solve(1.0, [](double x) { return x * std::exp(-x); })};
  for (const auto& p : profiles) {
    CHECK(std::abs(kTwoPi * moment(p, 1) - 1.0) <= 1e-10);
    CHECK(std::abs(moment(p, 3)) <= 1e-10);
    CHECK(rotation_energy_integral(p) == doctest::Approx(target).epsilon(1e-8));
    // Independent oracle: \int w rho^3 gamma_rho drho / (2 pi), by Gauss-Kronrod.
    const double oracle = gk([&](double r) { return p(r) * r * r * r * gamma_rho(p, r); }, 0.0, 1.0);
    CHECK(oracle / kTwoPi == doctest::Approx(target).epsilon(1e-8));
  }
  CHECK(rotation_energy_integral(VorticityProfile::solve(2.0)) ==
        doctest::Approx(4.0 * target).epsilon(1e-8));
}

TEST_CASE("profile json round trip") {
  const auto p = VorticityProfile::solve(1.5);
  nlohmann::json j = p;
  const auto q = profile_from_json(j);
  CHECK(q.strength() == p.strength());
  CHECK(q.c1() == p.c1());
  CHECK(q.c2() == p.c2());
}
