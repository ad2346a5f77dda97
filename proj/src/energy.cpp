#include "vring/energy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "vring/parallel.hpp"
#include "vring/quadrature.hpp"

namespace vring {
namespace {

constexpr std::array<double, 5> kCoreBreaks = {0.0, 0.1, 0.35, 0.7, 1.0};

struct WeightedPoint {
  Vec2 zeta;
  double weight;  // area weight
};

void add_gauss(std::vector<std::pair<double, double>>& out, double a, double b, int n) {
  const auto& rule = quad::gauss_legendre(n);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  for (std::size_t k = 0; k < rule.size(); ++k) {
    out.emplace_back(mid + half * rule.nodes[k], half * rule.weights[k]);
  }
}

// Angular nodes about z0 at distance d inside {r > 0} and {|zeta| < R}.
std::vector<std::pair<double, double>> angular_nodes(Vec2 z0, double d, double R,
                                                     const EnergyOptions& opt) {
  std::vector<std::pair<double, double>> out;
  const double L = z0.real();
  const double m = std::abs(z0);
  if (d < L && d + m <= R) {
    const int n = opt.circle_nodes;
    for (int j = 0; j < n; ++j) out.emplace_back(kTwoPi * (j + 0.5) / n, kTwoPi / n);
    return out;
  }
  std::vector<double> cuts{-kPi, kPi};
  auto add_cut = [&](double b) { cuts.push_back(std::remainder(b, kTwoPi)); };
  if (d >= L) {
    const double a = std::acos(-L / d);
    add_cut(a);
    add_cut(-a);
  }
  const double C = (R * R - m * m - d * d) / (2.0 * d * m);
  if (std::abs(C) < 1.0) {
    const double b0 = std::arg(z0);
    add_cut(b0 + std::acos(C));
    add_cut(b0 - std::acos(C));
  }
  std::sort(cuts.begin(), cuts.end());
  auto inside = [&](double b) {
    const Vec2 zeta = z0 + std::polar(d, b);
    return zeta.real() > 0.0 && std::abs(zeta) < R;
  };
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i];
    const double b = cuts[i + 1];
    if (b - a <= 0.0 || !inside(0.5 * (a + b))) continue;
    const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / (0.25 * kPi))));
    for (int p = 0; p < panels; ++p) {
      add_gauss(out, a + (b - a) * p / panels, a + (b - a) * (p + 1) / panels, opt.arc_nodes);
    }
  }
  return out;
}

std::vector<double> radial_breaks(double c, double L, double d_max, double trunc_start) {
  std::vector<double> b{c};
  for (double d = 2.0 * c; d < 0.5 * L; d *= 2.0) b.push_back(d);
  for (double f : {0.5, 0.75, 0.9, 1.0}) b.push_back(f * L);
  for (double d = 1.5 * L; d < d_max; d *= 1.5) b.push_back(d);
  b.push_back(trunc_start);
  b.push_back(d_max);
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  std::vector<double> out;
  for (double x : b) {
    if (x >= c && x <= d_max && (out.empty() || x > out.back() * (1.0 + 1e-12))) out.push_back(x);
  }
  return out;
}

}  // namespace

KineticEnergy kinetic_energy(const BiotSavart& bs, double truncation_radius,
                             const EnergyOptions& options) {
  const Ring& ring = bs.ring();
  const double L = ring.params().L;
  if (!(truncation_radius >= 10.0 * L)) {
    throw std::invalid_argument("kinetic_energy: truncation radius must be at least 10 L");
  }
  if (options.radial_nodes < 2 || options.circle_nodes < 8 || options.arc_nodes < 2) {
    throw std::invalid_argument("kinetic_energy: quadrature too coarse");
  }
  const double c = ring.c();
  const Vec2 z0 = ring.center();
  std::vector<WeightedPoint> points;

  // Core disk in polar coordinates about the centre.
  {
    std::vector<std::pair<double, double>> rho;
    for (std::size_t p = 0; p + 1 < kCoreBreaks.size(); ++p) {
      add_gauss(rho, kCoreBreaks[p], kCoreBreaks[p + 1], options.radial_nodes);
    }
    const int n = options.circle_nodes;
    for (const auto& [x, w] : rho) {
      for (int j = 0; j < n; ++j) {
        const double beta = kTwoPi * (j + 0.5) / n;
        points.push_back({z0 + c * x * std::polar(1.0, beta), w * c * c * x * kTwoPi / n});
      }
    }
  }
  // Outside the core: geometric shells up to the truncation sphere.
  const double m = std::abs(z0);
  const auto breaks = radial_breaks(c, L, truncation_radius + m, truncation_radius - m);
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    std::vector<std::pair<double, double>> radial;
    add_gauss(radial, breaks[p], breaks[p + 1], options.radial_nodes);
    for (const auto& [d, wd] : radial) {
      for (const auto& [beta, wb] : angular_nodes(z0, d, truncation_radius, options)) {
        points.push_back({z0 + std::polar(d, beta), wd * wb * d});
      }
    }
  }

  std::vector<double> contrib(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    const Vec2 z = points[i].zeta;
    const Vec2 v = bs.velocity(HalfPlanePoint(z)).v;
    contrib[i] = points[i].weight * z.real() * std::norm(v);
  });
  quad::CompensatedSum acc;
  for (double x : contrib) acc.add(x);

  KineticEnergy out;
  out.truncation_radius = truncation_radius;
  out.truncated = kPi * acc.value();
  const double gamma = ring.params().gamma;
  out.tail = kPi * gamma * gamma * std::pow(L, 4) / (12.0 * std::pow(truncation_radius, 3));
  out.tail_bound = 1.5 * out.tail;
  return out;
}

KineticEnergy kinetic_energy(const RingParams& params, const VorticityProfile& profile, double t,
                             double truncation_radius, const EnergyOptions& options) {
  if (!(t > 0.0)) throw std::invalid_argument("kinetic_energy: t must be positive");
  return kinetic_energy(BiotSavart(Ring(params, profile, t), options.velocity), truncation_radius,
                        options);
}

// ---------------------------------------------------------------------------

double SlopeFit::relative_error() const { return std::abs(slope - target) / std::abs(target); }

void validate_slope_times(const RingParams& params, const std::vector<double>& t_list) {
  params.validate();
  if (t_list.size() < 5) throw std::invalid_argument("energy_slope_fit: need at least 5 times");
  for (double t : t_list) {
    if (!(t > 0.0)) throw std::invalid_argument("energy_slope_fit: times must be positive");
    if (!(thickness(params, t) < params.L / 20.0)) {
      throw std::invalid_argument("energy_slope_fit: every time needs c < L/20");
    }
  }
  std::vector<double> sorted = t_list;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("energy_slope_fit: repeated times");
  }
}

SlopeFit fit_log_slope(const RingParams& params, const std::vector<double>& t_list,
                       const std::vector<double>& energy) {
  validate_slope_times(params, t_list);
  if (energy.size() != t_list.size()) {
    throw std::invalid_argument("fit_log_slope: size mismatch");
  }
  SlopeFit fit;
  fit.t = t_list;
  fit.energy = energy;
  const auto n = static_cast<double>(t_list.size());
  double sx = 0.0;
  double sy = 0.0;
  for (std::size_t k = 0; k < t_list.size(); ++k) {
    fit.c.push_back(thickness(params, t_list[k]));
    sx += std::log(fit.c.back());
    sy += energy[k];
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t k = 0; k < t_list.size(); ++k) {
    const double dx = std::log(fit.c[k]) - mx;
    sxx += dx * dx;
    sxy += dx * (energy[k] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.target = -0.5 * params.L * params.gamma * params.gamma;
  return fit;
}

SlopeFit energy_slope_fit(const RingParams& params, const VorticityProfile& profile,
                          const std::vector<double>& t_list, const EnergyOptions& options,
                          double truncation_radius_over_L) {
  validate_slope_times(params, t_list);
  std::vector<double> energy;
  for (double t : t_list) {
    energy.push_back(
        kinetic_energy(params, profile, t, truncation_radius_over_L * params.L, options).total());
  }
  return fit_log_slope(params, t_list, energy);
}

// ---------------------------------------------------------------------------

double lambda_max_traceless(const SymTensor2& R) {
  // The lift has eigenvalues lambda_+, lambda_- of the meridional block and 0 (e_theta).
  const double mean = 0.5 * (R.rr + R.zz);
  const double rad = std::hypot(0.5 * (R.rr - R.zz), R.rz);
  const double trace = R.rr + R.zz;
  return std::max(std::max(mean + rad, 0.0) - trace / 3.0, 0.0);
}

double reynolds_energy_bound(const SymTensorField& R, const EnergyOptions& options) {
  const double c = R.radius();
  const Vec2 z0 = R.center();
  std::vector<std::pair<double, double>> rho;
  for (std::size_t p = 0; p + 1 < kCoreBreaks.size(); ++p) {
    add_gauss(rho, kCoreBreaks[p], kCoreBreaks[p + 1], options.stress_rho_nodes);
  }
  const auto nt = static_cast<std::size_t>(options.stress_theta);
  std::vector<double> contrib(rho.size() * nt);
  parallel_for(contrib.size(), [&](std::size_t idx) {
    const auto& [x, w] = rho[idx / nt];
    const double beta = kTwoPi * (static_cast<double>(idx % nt) + 0.5) / static_cast<double>(nt);
    const Vec2 z = z0 + c * x * std::polar(1.0, beta);
    contrib[idx] = w * c * c * x * (kTwoPi / static_cast<double>(nt)) * kTwoPi * z.real() *
                   lambda_max_traceless(R(z));
  });
  quad::CompensatedSum acc;
  for (double x : contrib) acc.add(x);
  return 1.5 * acc.value();
}

// ---------------------------------------------------------------------------

EnergyReport total_subsolution_energy(const ReynoldsPipeline& pipeline, double truncation_radius,
                                      const EnergyOptions& options) {
  const KineticEnergy ke = kinetic_energy(*pipeline.velocity, truncation_radius, options);
  EnergyReport r;
  r.t = pipeline.velocity->ring().t();
  r.c = pipeline.velocity->ring().c();
  r.E_v = ke.total();
  r.E_R_bound = reynolds_energy_bound(pipeline.stress, options);
  r.E_sub = r.E_v + r.E_R_bound;
  r.tail = ke.tail;
  r.tail_bound = ke.tail_bound;
  r.truncation_radius = truncation_radius;
  return r;
}

EnergyReport total_subsolution_energy(const RingParams& params, const VorticityProfile& profile,
                                      double t, const EnergyOptions& options,
                                      double truncation_radius_over_L) {
  ReynoldsOptions ropt;
  ropt.velocity = options.velocity;
  const ReynoldsPipeline pipeline = build_reynolds(params, profile, t, ropt);
  return total_subsolution_energy(pipeline, truncation_radius_over_L * params.L, options);
}

bool energy_decreasing(std::vector<EnergyReport> reports) {
  std::sort(reports.begin(), reports.end(),
            [](const EnergyReport& a, const EnergyReport& b) { return a.t < b.t; });
  for (std::size_t k = 0; k + 1 < reports.size(); ++k) {
    if (!(reports[k].E_sub > reports[k + 1].E_sub)) return false;
  }
  return true;
}

void to_json(nlohmann::json& j, const EnergyReport& r) {
  j = {{"t", r.t},
       {"c", r.c},
       {"E_v", r.E_v},
       {"E_R_bound", r.E_R_bound},
       {"E_sub", r.E_sub},
       {"tail", r.tail},
       {"tail_bound", r.tail_bound},
       {"truncation_radius", r.truncation_radius},
       {"slope_fit", r.slope_fit ? nlohmann::json(*r.slope_fit) : nlohmann::json(nullptr)}};
}

EnergyReport energy_report_from_json(const nlohmann::json& j) {
  EnergyReport r;
  r.t = j.at("t").get<double>();
  r.c = j.at("c").get<double>();
  r.E_v = j.at("E_v").get<double>();
  r.E_R_bound = j.at("E_R_bound").get<double>();
  r.E_sub = j.at("E_sub").get<double>();
  r.tail = j.at("tail").get<double>();
  r.tail_bound = j.at("tail_bound").get<double>();
  r.truncation_radius = j.at("truncation_radius").get<double>();
  if (j.contains("slope_fit") && !j.at("slope_fit").is_null()) {
    r.slope_fit = j.at("slope_fit").get<double>();
  }
  return r;
}

void write_energy_scan_csv(std::ostream& out, const std::vector<EnergyReport>& reports) {
  out << "t,c,E_v,E_R,tail_bound\n" << std::setprecision(17);
  for (const auto& r : reports) {
    out << r.t << ',' << r.c << ',' << r.E_v << ',' << r.E_R_bound << ',' << r.tail_bound << '\n';
  }
}

}  // namespace vring
