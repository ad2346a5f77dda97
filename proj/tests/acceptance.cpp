// Acceptance gate: one PASS/FAIL line per criterion. Optional arguments select criteria by
// number, e.g. `vring_acceptance 1 5 9`.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "vring/biot_savart.hpp"
#include "vring/energy.hpp"
#include "vring/kernels.hpp"
#include "vring/profile.hpp"
#include "vring/reynolds.hpp"
#include "vring/synthetic.hpp"

using namespace vring;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

// Pinned tolerances.
constexpr double kMomentTol = 1e-10;
constexpr double kRotationTol = 1e-8;
constexpr double kMedianFactor = 3.0;
constexpr double kAuxTol = 1e-10;
constexpr double kMeanValueTol = 1e-10;
constexpr double kResidualRatio = 3.0;
constexpr double kAntidivTol = 1e-2;
constexpr double kScalingBound = 2.0;
constexpr double kHalvingRatio = 0.7;
constexpr double kCompatTol = 1e-4;
constexpr double kBalanceTol = 2e-2;
constexpr double kSlopeTol = 0.1;
constexpr double kBandTol = 10.0;
constexpr double kLiftTol = 1e-2;

const RingParams kUnit{1.0, 1.0, 1.0};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double sup_entry(const SymTensor2& t) {
  return std::max({std::abs(t.rr), std::abs(t.rz), std::abs(t.zz)});
}

const ReynoldsPipeline& unit_pipeline(double t) {
  static std::map<double, ReynoldsPipeline> cache;
  auto it = cache.find(t);
  if (it == cache.end()) {
    it = cache.emplace(t, build_reynolds(kUnit, VorticityProfile::solve(1.0), t)).first;
  }
  return it->second;
}

Outcome c1_profile_moments() {
  double worst = 0.0;
  for (double g : {1.0, -2.0, 3.5}) {
    const auto p = VorticityProfile::solve(g);
    worst = std::max(worst, std::abs(kTwoPi * moment(p, 1) - g) / std::abs(g));
    worst = std::max(worst, std::abs(moment(p, 3)) / std::abs(g));
  }
  return {worst <= kMomentTol, fmt("max relative residual %.3e (tol %.0e), Gamma in {1,-2,3.5}", worst, kMomentTol)};
}

Outcome c2_rotation_energy() {
  const std::vector<VorticityProfile> profiles{
      VorticityProfile::solve(1.0),
      VorticityProfile::solve(1.0, [](double x) { return x * x * (1.0 - x); }),
      VorticityProfile::solve(1.0, [](double x) { return std::sin(kPi * x); })};
  const double target = 1.0 / (8.0 * kPi * kPi);
  double worst = 0.0;
  for (const auto& p : profiles) {
    worst = std::max(worst, std::abs(rotation_energy_integral(p) - target) / target);
  }
  return {worst <= kRotationTol,
          fmt("3 profiles, max relative error %.3e vs 1/(8 pi^2) (tol %.0e)", worst, kRotationTol)};
}

Outcome c3_kernel_asymptotics() {
  std::vector<double> g;
  std::vector<double> h;
  for (int k = 0; k < 20; ++k) {
    const double s = std::pow(10.0, -8.0 + 6.0 * k / 19.0);
    g.push_back(std::abs(kernel::G(s) - 1.0 / s) / std::abs(std::log(s)));
    h.push_back(std::abs(kernel::H(s) + 0.25 * std::log(s)));
  }
  auto ratio = [](std::vector<double> v) {
    const double mx = *std::max_element(v.begin(), v.end());
    std::sort(v.begin(), v.end());
    return mx / (0.5 * (v[9] + v[10]));
  };
  const double rg = ratio(g);
  const double rh = ratio(h);
  double aux = 0.0;
  for (double s : {1e-8, 1e-6, 1e-4, 1e-2, 1.0, 3.0 * kPi * kPi}) {
    aux = std::max(aux, std::abs(kernel::aux_quadrature_1(s) / kernel::aux_exact_1(s) - 1.0));
    aux = std::max(aux, std::abs(kernel::aux_quadrature_2(s) / kernel::aux_exact_2(s) - 1.0));
  }
  const bool ok = rg <= kMedianFactor && rh <= kMedianFactor && aux <= kAuxTol;
  return {ok, fmt("max/median G %.3f, H %.3f (limit %.0f); aux integrals %.2e (tol %.0e)", rg, rh,
                  kMedianFactor, aux, kAuxTol)};
}

Outcome c4_mean_value() {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(0.01, 2.0);
  double worst = 0.0;
  int n = 0;
  while (n < 100) {
    const double a = u(rng);
    const double b = u(rng);
    if (std::abs(a - b) < 0.01 * std::max(a, b)) continue;
    const auto q = kernel::mean_value_circle_quadrature(a, b);
    worst = std::max({worst, std::abs(q.real() - kernel::mean_value_circle(a, b)), std::abs(q.imag())});
    ++n;
  }
  return {worst <= kMeanValueTol, fmt("100 random pairs, max error %.3e (tol %.0e)", worst, kMeanValueTol)};
}

Outcome c5_velocity_asymptotics() {
  const auto prof = VorticityProfile::solve(1.0);
  std::vector<double> sups;
  std::vector<double> leads;
  for (double c : {1e-2, 3e-3, 1e-3}) {
    const BiotSavart bs(Ring(kUnit, prof, c * c));
    double sup = 0.0;
    double lead = 0.0;
    for (int i = 0; i < 8; ++i) {
      const double rho = i / 7.0;
      for (int j = 0; j < 8; ++j) {
        const double alpha = kTwoPi * j / 8.0;
        sup = std::max(sup, std::abs(bs.residual(rho, alpha)));
        lead = std::max(lead, rho * gamma_rho(prof, rho) / (kTwoPi * c));
      }
    }
    sups.push_back(sup);
    leads.push_back(lead);
  }
  const double ratio = *std::max_element(sups.begin(), sups.end()) /
                       *std::min_element(sups.begin(), sups.end());
  const double growth = leads[2] / leads[0];
  const bool ok = ratio <= kResidualRatio && std::abs(growth - 10.0) < 1e-9;
  return {ok, fmt("residual sup %.4f/%.4f/%.4f, max/min %.3f (limit %.0f); rotation term x%.2f",
                  sups[0], sups[1], sups[2], ratio, kResidualRatio, growth)};
}

Outcome c6_antidivergence() {
  const Vec2 x0(1.0, 0.0);
  const double c = 0.1;
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double div_err = 0.0;
  double outside = 0.0;
  for (auto kind : {SyntheticKind::DipolePair, SyntheticKind::RotatedDipole,
                    SyntheticKind::CompactCurl}) {
    const VectorField f = synthetic_field(kind, x0, c);
    const SymTensorField R = antidivergence(f, x0, c);
    double sup_f = 0.0;
    for (int i = 0; i <= 40; ++i) {
      for (int k = 0; k < 64; ++k) {
        sup_f = std::max(sup_f, std::abs(f(x0 + c * (i / 40.0) * std::polar(1.0, kTwoPi * k / 64))));
      }
    }
    for (int k = 0; k < 50; ++k) {
      const Vec2 x = x0 + 0.9 * c * std::sqrt(u(rng)) * std::polar(1.0, kTwoPi * u(rng));
      const Vec2 div = fd_divergence([&](Vec2 z) { return R(z); }, x, 1e-3 * c);
      div_err = std::max(div_err, std::abs(div - f(x)) / sup_f);
    }
    for (int k = 0; k < 50; ++k) {
      const Vec2 x = x0 + c * (1.0 + 1e-12 + u(rng)) * std::polar(1.0, kTwoPi * u(rng));
      outside = std::max(outside, sup_entry(R(x)));
    }
  }
  // Same normalized field (sup 1) rescaled to c in {0.2, 0.1, 0.05}.
  std::vector<double> sup_r;
  for (double cc : {0.2, 0.1, 0.05}) {
    const VectorField f = synthetic_field(SyntheticKind::CompactCurl, x0, cc);
    double sup_f = 0.0;
    for (int i = 0; i <= 40; ++i) {
      for (int k = 0; k < 64; ++k) {
        sup_f = std::max(sup_f, std::abs(f(x0 + cc * (i / 40.0) * std::polar(1.0, kTwoPi * k / 64))));
      }
    }
    const VectorField g = [f, sup_f](Vec2 z) { return f(z) / sup_f; };
    const SymTensorField R = antidivergence(g, x0, cc);
    double s = 0.0;
    for (int i = 0; i < 10; ++i) {
      for (int k = 0; k < 16; ++k) {
        s = std::max(s, sup_entry(R(x0 + cc * (0.1 * i) * std::polar(1.0, kTwoPi * k / 16))));
      }
    }
    sup_r.push_back(s);
  }
  const double n0 = sup_r[0] / 0.2;
  const double n1 = sup_r[1] / 0.1;
  const double n2 = sup_r[2] / 0.05;
  const double spread = std::max({n0, n1, n2}) / std::min({n0, n1, n2});
  const double halving = std::max(sup_r[1] / sup_r[0], sup_r[2] / sup_r[1]);
  const bool ok = div_err <= kAntidivTol && outside == 0.0 && spread <= kScalingBound &&
                  halving <= kHalvingRatio;
  return {ok, fmt("div error %.2e of |f|inf at 150 points (tol %.0e); outside max %.1e; "
                  "sup|Rf|/(c|f|) %.4f/%.4f/%.4f; c->c/2 sup ratio %.3f (limit %.1f)",
                  div_err, kAntidivTol, outside, n0, n1, n2, halving, kHalvingRatio)};
}

Outcome c7_compatibility() {
  double worst = 0.0;
  double ez = 0.0;
  for (double t : {1e-2, 1e-3, 1e-4}) {
    const ForcingField& F = *unit_pipeline(t).forcing;
    worst = std::max({worst, F.compatibility().mean_relative(), F.compatibility().moment_relative()});
    ez = std::max(ez, F.corrector().ez_relative());
  }
  const bool ok = worst <= kCompatTol && ez <= kCompatTol;
  return {ok, fmt("t in {1e-2,1e-3,1e-4}: max residual %.2e, A1.e_z relative %.2e (tol %.0e)",
                  worst, ez, kCompatTol)};
}

Outcome c8_momentum_balance() {
  const ReynoldsPipeline& p = unit_pipeline(1e-2);
  const ForcingField& F = *p.forcing;
  const double c = F.radius();
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const Vec2 z = F.center() + 0.9 * c * std::sqrt(u(rng)) * std::polar(1.0, kTwoPi * u(rng));
    const Vec2 div = fd_divergence([&](Vec2 w) { return w.real() * p.stress(w); }, z, 1e-3 * c);
    worst = std::max(worst, std::abs(-div - F(z)) / F.sup_norm());
  }
  return {worst <= kBalanceTol,
          fmt("t=1e-2, 20 points: max |div(rR)+F| / sup|F| = %.2e (tol %.0e)", worst, kBalanceTol)};
}

Outcome c9_energy_law() {
  const std::vector<double> ts{1e-6, 3e-6, 1e-5, 3e-5, 1e-4, 3e-4, 1e-3};
  const std::vector<double> band_ts{1e-6, 3e-5, 1e-3};
  bool ok = true;
  std::string detail;
  for (const auto& [g, L] : std::vector<std::pair<double, double>>{{1, 1}, {2, 1}, {1, 2}}) {
    const RingParams params{L, g, 1.0};
    const auto prof = VorticityProfile::solve(g);
    const SlopeFit fit = energy_slope_fit(params, prof, ts);
    std::vector<double> er;
    for (double t : band_ts) er.push_back(reynolds_energy_bound(build_reynolds(params, prof, t).stress));
    const double band = *std::max_element(er.begin(), er.end()) / *std::min_element(er.begin(), er.end());
    const bool grows = fit.energy.front() > fit.energy.back();
    ok = ok && fit.relative_error() <= kSlopeTol && band <= kBandTol && grows;
    detail += fmt("(G=%g,L=%g) slope %.4f target %.2f rel %.3f, E_R band %.3f; ", g, L, fit.slope,
                  fit.target, fit.relative_error(), band);
  }
  return {ok, detail + fmt("tol %.0f%%, band limit %.0f", 100 * kSlopeTol, kBandTol)};
}

Outcome c10_lift() {
  const ReynoldsPipeline& p = unit_pipeline(1e-2);
  const Vec2 x0 = p.forcing->center();
  const double c = p.forcing->radius();
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<HalfPlanePoint> pts;
  for (int k = 0; k < 20; ++k) {
    pts.emplace_back(x0 + 0.85 * c * std::sqrt(u(rng)) * std::polar(1.0, kTwoPi * u(rng)));
  }
  const LiftReport rep = verify_axisymmetric_lift(p.stress, pts, 1e-3 * c);
  return {rep.max_mismatch <= kLiftTol,
          fmt("t=1e-2, 20 points: max relative mismatch %.2e (tol %.0e)", rep.max_mismatch, kLiftTol)};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
  double time_limit;  // seconds, 0 when the budget is only "minutes"
};

}  // namespace

int main(int argc, char** argv) {
  std::setvbuf(stdout, nullptr, _IONBF, 0);
  const std::vector<Criterion> all{
      {1, "profile moments", c1_profile_moments, 1.0},
      {2, "rotation-energy identity", c2_rotation_energy, 5.0},
      {3, "kernel asymptotics", c3_kernel_asymptotics, 10.0},
      {4, "mean-value circle identity", c4_mean_value, 5.0},
      {5, "velocity asymptotics", c5_velocity_asymptotics, 0.0},
      {6, "antidivergence", c6_antidivergence, 0.0},
      {7, "compatibility", c7_compatibility, 0.0},
      {8, "momentum balance", c8_momentum_balance, 0.0},
      {9, "energy law", c9_energy_law, 0.0},
      {10, "axisymmetric lift", c10_lift, 60.0},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

  int failed = 0;
  for (const auto& c : all) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    // The lift check reuses the t = 1e-2 pipeline; its budget covers the verification only.
    if (c.id == 10) (void)unit_pipeline(1e-2);
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o{false, ""};
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = c.time_limit == 0.0 || secs <= c.time_limit;
    const bool pass = o.pass && in_time;
    if (!pass) ++failed;
    std::printf("[%s] C%d %s: %s [%.1f s%s]\n", pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), secs,
                c.time_limit > 0.0 ? fmt(", limit %.0f s", c.time_limit).c_str() : "");
  }
  return failed == 0 ? 0 : 1;
}
