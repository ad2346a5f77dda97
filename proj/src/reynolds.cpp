#include "vring/reynolds.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "vring/kernels.hpp"
#include "vring/parallel.hpp"
#include "vring/quadrature.hpp"

namespace vring {
namespace {

const Vec2 kI(0.0, 1.0);

// Radial panels for integrals over the core; graded toward the centre, where the
// profile has a rho log(rho) factor.
constexpr std::array<double, 6> kCoefBreaks = {0.0, 0.02, 0.1, 0.35, 0.7, 1.0};
constexpr std::array<double, 9> kCompatBreaks = {0.0, 0.01, 0.05, 0.15, 0.3, 0.5, 0.7, 0.85, 1.0};
constexpr int kCompatNodes = 12;
constexpr int kCompatTheta = 128;

void finalize_breaks(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  out.reserve(v.size());
  for (double x : v) {
    if (out.empty() || x - out.back() > 1e-14 * std::max(1.0, std::abs(x))) out.push_back(x);
  }
  v.swap(out);
}

// Breaks on [0, len] graded geometrically (factor 4) both ways from the point of the
// ray x + l e closest to `centre`, starting at the miss distance.
std::vector<double> ray_breaks(Vec2 x, Vec2 e, Vec2 centre, double len, double scale) {
  std::vector<double> breaks{0.0, len};
  const Vec2 u = x - centre;
  const double l_star = std::clamp(-dot(u, e), 0.0, len);
  const double miss = std::abs(u + l_star * e);
  if (l_star > 0.0 && l_star < len) breaks.push_back(l_star);
  for (double off = std::max(miss, 1e-10 * scale); off < len; off *= 4.0) {
    if (l_star - off > 0.0) breaks.push_back(l_star - off);
    if (l_star + off < len) breaks.push_back(l_star + off);
  }
  finalize_breaks(breaks);
  return breaks;
}

// Forward chord length from a point at offset u (|u| < c) along direction e.
double chord(Vec2 u, Vec2 e, double c) {
  const double p = dot(u, e);
  const double gap = (c - std::abs(u)) * (c + std::abs(u));
  const double root = std::sqrt(std::max(0.0, gap + p * p));
  return p > 0.0 ? gap / (root + p) : root - p;
}

template <class T>
T gauss_panels(const std::vector<double>& breaks, int nodes, const std::function<T(double)>& f) {
  const auto& rule = quad::gauss_legendre(nodes);
  T acc{};
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double half = 0.5 * (breaks[p + 1] - breaks[p]);
    const double mid = 0.5 * (breaks[p + 1] + breaks[p]);
    for (std::size_t k = 0; k < rule.size(); ++k) {
      acc += half * rule.weights[k] * f(mid + half * rule.nodes[k]);
    }
  }
  return acc;
}

double mollifier_unit_mass() {
  // \int_{|y| < 1} exp(-1 / (1 - |y|^2)) dy
  static const double mass = kTwoPi * quad::adaptive(
                                          [](double s) {
                                            const double q = 1.0 - s * s;
                                            return q > 0.0 ? std::exp(-1.0 / q) * s : 0.0;
                                          },
                                          0.0, 1.0, 1e-15);
  return mass;
}

// Integral over B(x0, c) of g, which may be singular like 1/|y - p| at p and like
// rho log(rho) at x0. Polar coordinates about p when p is within 2c of the centre.
double disk_integral(const std::function<double(Vec2)>& g, Vec2 x0, double c, Vec2 p) {
  const Vec2 u = p - x0;
  const double d = std::abs(u);
  constexpr int kNodes = 16;
  if (d >= 2.0 * c) {
    const std::vector<double> breaks(kCoefBreaks.begin(), kCoefBreaks.end());
    constexpr int kTheta = 64;
    double acc = 0.0;
    for (int j = 0; j < kTheta; ++j) {
      const Vec2 e = std::polar(1.0, kTwoPi * j / kTheta);
      acc += gauss_panels<double>(breaks, kNodes,
                                  [&](double rho) { return g(x0 + c * rho * e) * rho; });
    }
    return acc * c * c * kTwoPi / kTheta;
  }
  auto ray = [&](Vec2 e, double lo, double hi) {
    std::vector<double> breaks = ray_breaks(p + lo * e, e, x0, hi - lo, c);
    for (double& b : breaks) b += lo;
    // Grade toward the near end, where the 1/R factor of g is cancelled by R dR.
    for (double span = 0.2 * (breaks[1] - lo); span > 1e-6 * c; span *= 0.2) {
      breaks.push_back(lo + span);
    }
    finalize_breaks(breaks);
    return gauss_panels<double>(breaks, kNodes, [&](double R) { return g(p + R * e) * R; });
  };
  const double bu = d > 0.0 ? std::arg(u) : 0.0;
  if (d < c) {
    std::vector<double> breaks{-kPi, -0.5 * kPi, 0.0, 0.5 * kPi, kPi};
    for (double off = 0.3 * kPi; off > 1e-3; off *= 0.3) {
      breaks.push_back(-kPi + off);
      breaks.push_back(kPi - off);
    }
    finalize_breaks(breaks);
    return gauss_panels<double>(breaks, kNodes, [&](double delta) {
      const Vec2 e = std::polar(1.0, bu + delta);
      return ray(e, 0.0, chord(u, e, c));
    });
  }
  // Outside: the cone |delta| < delta_m around the centre direction, with
  // delta = delta_m sin(psi) to absorb the square-root behaviour at the tangents.
  const double delta_m = std::asin(std::min(1.0, c / d));
  const std::vector<double> breaks{-0.5 * kPi, -0.25 * kPi, 0.0, 0.25 * kPi, 0.5 * kPi};
  return gauss_panels<double>(breaks, kNodes, [&](double psi) {
    const double delta = delta_m * std::sin(psi);
    const Vec2 e = std::polar(1.0, bu + kPi + delta);
    const double sd = std::sin(delta);
    const double root = std::sqrt(std::max(0.0, c * c - d * d * sd * sd));
    const double r_plus = d * std::cos(delta) + root;
    const double r_minus = (d - c) * (d + c) / r_plus;
    return delta_m * std::cos(psi) * ray(e, r_minus, r_plus);
  });
}

}  // namespace

// ---------------------------------------------------------------------------
// Discrepancy

Vec2 discrepancy_geometric(const BiotSavart& bs, double rho, double theta) {
  const Ring& ring = bs.ring();
  const double c = ring.c();
  const Vec2 e = std::polar(1.0, theta);
  const Vec2 v = bs.velocity(HalfPlanePoint(ring.center() + c * rho * e)).v;
  const Vec2 v_lead = -kI * rho * ring.gamma_rho(rho) / (kTwoPi * c) * e;
  const auto& s = ring.state();
  return kI * s.h_rate + s.c_rate * rho * e - (v - v_lead);
}

Vec2 discrepancy(const BiotSavart& bs, double rho, double alpha, bool include_height) {
  if (rho < 0.0 || rho > 1.0) throw std::invalid_argument("discrepancy: rho must lie in [0, 1]");
  const Vec2 d = discrepancy_geometric(bs, rho, bs.ring().theta(rho, alpha));
  return include_height ? d : d - kI * bs.ring().state().h_rate;
}

Vec2 discrepancy(const RingParams& params, const VorticityProfile& profile, double t, double rho,
                 double alpha) {
  return discrepancy(BiotSavart(Ring(params, profile, t)), rho, alpha);
}

// ---------------------------------------------------------------------------
// Pressure corrector

double PressureCorrector::bump(int j, double rho) {
  if (rho < 0.0 || rho >= 1.0) return 0.0;
  const double kappa = j == 1 ? kappa1 : kappa2;
  const double q = rho * (1.0 - rho);
  return kappa * q * q;
}

double PressureCorrector::bump_derivative(int j, double rho) {
  if (rho < 0.0 || rho >= 1.0) return 0.0;
  const double kappa = j == 1 ? kappa1 : kappa2;
  return 2.0 * kappa * rho * (1.0 - rho) * (1.0 - 2.0 * rho);
}

double PressureCorrector::q1(Vec2 zeta) const {
  const Vec2 u = zeta - center;
  const double rho = std::abs(u) / c;
  if (rho >= 1.0) return 0.0;
  const double sin_t = rho > 0.0 ? u.imag() / std::abs(u) : 0.0;
  return (c1 * bump(1, rho) + c2 * bump(2, rho) * sin_t) / (c * c);
}

Vec2 PressureCorrector::grad_q1(Vec2 zeta) const {
  const Vec2 u = zeta - center;
  const double dist = std::abs(u);
  const double rho = dist / c;
  if (rho >= 1.0 || rho == 0.0) return {0.0, 0.0};
  const Vec2 e = u / dist;
  const double radial = c1 * bump_derivative(1, rho) + c2 * bump_derivative(2, rho) * e.imag();
  // d/dtheta of sin(theta) = cos(theta); bump(2) / rho stays bounded at the centre.
  const double angular = c2 * (bump(2, rho) / rho) * e.real();
  return (radial * e + angular * kI * e) / (c * c * c);
}

double PressureCorrector::ez_relative() const {
  return std::abs(A1.imag()) / std::abs(A1.real());
}

PressureCorrector q1_coefficients(const BiotSavart& bs, const ReynoldsOptions& options) {
  if (options.coef_rho_nodes < 2 || options.coef_theta < 4) {
    throw std::invalid_argument("q1_coefficients: quadrature too coarse");
  }
  const Ring& ring = bs.ring();
  const double c = ring.c();
  const Vec2 z0 = ring.center();
  const auto& rule = quad::gauss_legendre(options.coef_rho_nodes);
  std::vector<double> rho_nodes;
  std::vector<double> rho_weights;
  for (std::size_t p = 0; p + 1 < kCoefBreaks.size(); ++p) {
    const double half = 0.5 * (kCoefBreaks[p + 1] - kCoefBreaks[p]);
    const double mid = 0.5 * (kCoefBreaks[p + 1] + kCoefBreaks[p]);
    for (std::size_t k = 0; k < rule.size(); ++k) {
      rho_nodes.push_back(mid + half * rule.nodes[k]);
      rho_weights.push_back(half * rule.weights[k]);
    }
  }
  const std::size_t nt = static_cast<std::size_t>(options.coef_theta);
  const std::size_t n = rho_nodes.size() * nt;
  std::vector<Vec2> a1(n);
  std::vector<double> a2(n);
  parallel_for(n, [&](std::size_t idx) {
    const std::size_t i = idx / nt;
    const std::size_t j = idx % nt;
    const double rho = rho_nodes[i];
    const double theta = kTwoPi * (static_cast<double>(j) + 0.5) / static_cast<double>(nt);
    const Vec2 offset = c * rho * std::polar(1.0, theta);
    const double r = (z0 + offset).real();
    const Vec2 disc = discrepancy_geometric(bs, rho, theta);
    // d zeta = c^2 rho drho dtheta and w = profile / c^2.
    const double weight = rho_weights[i] * (kTwoPi / static_cast<double>(nt)) * r *
                          ring.profile()(rho) * rho;
    a1[idx] = weight * perp(disc);
    a2[idx] = weight * dot(disc, offset);
  });
  quad::CompensatedSum a1r;
  quad::CompensatedSum a1z;
  quad::CompensatedSum a2s;
  for (std::size_t idx = 0; idx < n; ++idx) {
    a1r.add(a1[idx].real());
    a1z.add(a1[idx].imag());
    a2s.add(a2[idx]);
  }
  PressureCorrector corr;
  corr.t = ring.t();
  corr.c = c;
  corr.center = z0;
  corr.A1 = {a1r.value(), a1z.value()};
  corr.A2 = a2s.value();
  corr.c1 = corr.A1.real();
  corr.c2 = -2.0 * corr.A2 / c;
  return corr;
}

PressureCorrector q1_coefficients(const RingParams& params, const VorticityProfile& profile,
                                  double t) {
  return q1_coefficients(BiotSavart(Ring(params, profile, t)));
}

Vec2 grad_q1(const PressureCorrector& corr, const HalfPlanePoint& zeta) {
  return corr.grad_q1(zeta.complex());
}

// ---------------------------------------------------------------------------
// Compatibility

double CompatibilityResiduals::mean_relative() const {
  return l1 > 0.0 ? std::abs(mean) / l1 : 0.0;
}

double CompatibilityResiduals::moment_relative() const {
  return l1 > 0.0 ? std::abs(moment) / (radius * l1) : 0.0;
}

CompatibilityResiduals compatibility_residuals(const VectorField& f, Vec2 x0, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("compatibility_residuals: radius must be positive");
  const auto& rule = quad::gauss_legendre(kCompatNodes);
  quad::CompensatedSum mr;
  quad::CompensatedSum mz;
  quad::CompensatedSum mom;
  quad::CompensatedSum l1;
  const double dtheta = kTwoPi / kCompatTheta;
  for (std::size_t p = 0; p + 1 < kCompatBreaks.size(); ++p) {
    const double half = 0.5 * (kCompatBreaks[p + 1] - kCompatBreaks[p]);
    const double mid = 0.5 * (kCompatBreaks[p + 1] + kCompatBreaks[p]);
    for (std::size_t k = 0; k < rule.size(); ++k) {
      const double rho = mid + half * rule.nodes[k];
      const double w = half * rule.weights[k] * rho * c * c * dtheta;
      for (int j = 0; j < kCompatTheta; ++j) {
        const Vec2 u = c * rho * std::polar(1.0, dtheta * (j + 0.5));
        const Vec2 v = f(x0 + u);
        mr.add(w * v.real());
        mz.add(w * v.imag());
        mom.add(w * dot(v, perp(u)));
        l1.add(w * std::abs(v));
      }
    }
  }
  return {{mr.value(), mz.value()}, mom.value(), l1.value(), c};
}

namespace {
std::string compat_message(const CompatibilityResiduals& r, double tol) {
  std::ostringstream os;
  os << std::setprecision(6) << "antidivergence: compatibility conditions violated (mean "
     << r.mean_relative() << ", moment " << r.moment_relative() << ", tolerance " << tol << ")";
  return os.str();
}
}  // namespace

CompatibilityError::CompatibilityError(const CompatibilityResiduals& res, double tol)
    : std::runtime_error(compat_message(res, tol)), residuals_(res) {}

// ---------------------------------------------------------------------------
// Forcing

ForcingField::ForcingField(const BiotSavart& bs, PressureCorrector corr,
                           const ReynoldsOptions& options)
    : corr_(corr),
      center_(bs.ring().center()),
      c_(bs.ring().c()),
      h_rate_(bs.ring().state().h_rate),
      c_rate_(bs.ring().state().c_rate),
      profile_(bs.ring().profile()),
      n_rho_(options.grid_rho),
      n_theta_(options.grid_theta) {
  if (n_rho_ < 4 || n_theta_ < 8 || n_theta_ % 2 != 0) {
    throw std::invalid_argument("forcing: grid_rho >= 4 and even grid_theta >= 8 required");
  }
  if (std::abs(corr_.t - bs.ring().t()) > 1e-12 * bs.ring().t()) {
    throw std::invalid_argument("forcing: pressure corrector built at a different time");
  }
  const std::size_t nt = static_cast<std::size_t>(n_theta_);
  table_.assign((static_cast<std::size_t>(n_rho_) + 2) * nt, Vec2{});
  const Ring& ring = bs.ring();
  auto correction = [&](double rho, double theta) {
    const Vec2 e = std::polar(1.0, theta);
    const Vec2 v = bs.velocity(HalfPlanePoint(center_ + c_ * rho * e)).v;
    return v - (-kI * rho * ring.gamma_rho(rho) / (kTwoPi * c_) * e);
  };
  const Vec2 at_centre = correction(0.0, 0.0);
  const std::size_t n = static_cast<std::size_t>(n_rho_) * nt;
  parallel_for(n, [&](std::size_t idx) {
    const std::size_t k = idx / nt + 1;
    const std::size_t j = idx % nt;
    table_[k * nt + j] = correction(static_cast<double>(k) / n_rho_, kTwoPi * j / n_theta_);
  });
  for (std::size_t j = 0; j < nt; ++j) {
    table_[j] = at_centre;
    const std::size_t N = static_cast<std::size_t>(n_rho_);
    // Cubic extrapolation for the ghost row beyond rho = 1.
    table_[(N + 1) * nt + j] =
        3.0 * table_[N * nt + j] - 3.0 * table_[(N - 1) * nt + j] + table_[(N - 2) * nt + j];
  }
  for (int k = 0; k <= n_rho_; ++k) {
    for (int j = 0; j < n_theta_; ++j) {
      const double rho = std::min(static_cast<double>(k) / n_rho_, 1.0 - 1e-12);
      sup_ = std::max(sup_, std::abs((*this)(center_ + c_ * rho *
                                                  std::polar(1.0, kTwoPi * j / n_theta_))));
    }
  }
  compat_ = compatibility_residuals([this](Vec2 z) { return (*this)(z); }, center_, c_);
}

Vec2 ForcingField::velocity_correction(double rho, double theta) const {
  const int N = n_rho_;
  const int M = n_theta_;
  const double x = std::clamp(rho, 0.0, 1.0) * N;
  const int k = std::min(static_cast<int>(x), N - 1);
  const double s = x - k;
  const double y = wrap_angle(theta) / kTwoPi * M;
  const int j = std::min(static_cast<int>(y), M - 1);
  const double t = y - j;
  auto weights = [](double u) {
    return std::array<double, 4>{0.5 * (-u * u * u + 2.0 * u * u - u),
                                 0.5 * (3.0 * u * u * u - 5.0 * u * u + 2.0),
                                 0.5 * (-3.0 * u * u * u + 4.0 * u * u + u),
                                 0.5 * (u * u * u - u * u)};
  };
  const auto wr = weights(s);
  const auto wt = weights(t);
  auto at = [&](int kk, int jj) {
    if (kk < 0) {
      // Through the centre: w(-rho, theta) = w(rho, theta + pi).
      kk = -kk;
      jj += M / 2;
    }
    jj = ((jj % M) + M) % M;
    return table_[static_cast<std::size_t>(kk) * M + jj];
  };
  Vec2 acc{0.0, 0.0};
  for (int a = 0; a < 4; ++a) {
    Vec2 row{0.0, 0.0};
    for (int b = 0; b < 4; ++b) row += wt[b] * at(k - 1 + a, j - 1 + b);
    acc += wr[a] * row;
  }
  return acc;
}

Vec2 ForcingField::flux_part(Vec2 zeta, double rho, double theta) const {
  const Vec2 e = std::polar(1.0, theta);
  const Vec2 disc = kI * h_rate_ + c_rate_ * rho * e - velocity_correction(rho, theta);
  return zeta.real() * profile_(rho) / (c_ * c_) * perp(disc);
}

Vec2 ForcingField::uncorrected(Vec2 zeta) const {
  const Vec2 u = zeta - center_;
  const double dist = std::abs(u);
  if (dist >= c_) return {0.0, 0.0};
  return flux_part(zeta, dist / c_, dist > 0.0 ? std::arg(u) : 0.0);
}

Vec2 ForcingField::operator()(Vec2 zeta) const {
  const Vec2 u = zeta - center_;
  const double dist = std::abs(u);
  if (dist >= c_) return {0.0, 0.0};
  return flux_part(zeta, dist / c_, dist > 0.0 ? std::arg(u) : 0.0) +
         zeta.real() * corr_.grad_q1(zeta);
}

ForcingField forcing(const BiotSavart& bs, const PressureCorrector& corr,
                     const ReynoldsOptions& options) {
  return ForcingField(bs, corr, options);
}

// ---------------------------------------------------------------------------
// Tensor fields and the antidivergence

SymTensorField::SymTensorField(Vec2 center, double radius, Map map)
    : center_(center), radius_(radius), map_(std::move(map)) {
  if (!(radius > 0.0)) throw std::invalid_argument("SymTensorField: radius must be positive");
}

bool SymTensorField::in_support(Vec2 zeta) const { return std::abs(zeta - center_) < radius_; }

SymTensor2 SymTensorField::operator()(Vec2 zeta) const {
  if (!in_support(zeta) || !map_) return {};
  return map_(zeta);
}

SymTensorField SymTensorField::zero(Vec2 center, double radius) {
  return SymTensorField(center, radius, nullptr);
}

double mollifier_constant(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("mollifier_constant: radius must be positive");
  return 1.0 / (c * c * mollifier_unit_mass());
}

namespace {

struct RayMoments {
  Vec2 m0, m1, m2;
};

SymTensor2 antidivergence_at(const VectorField& f, Vec2 x0, double c, double k_moll,
                             const AntidivergenceOptions& opt, Vec2 x) {
  const Vec2 u = x - x0;
  const double d = std::abs(u);
  const double bu = d > 0.0 ? std::arg(u) : 0.0;
  const double eps = std::sqrt(std::max(0.0, (1.0 - d / c) * (1.0 + d / c)));

  std::vector<double> breaks{-kPi, -0.5 * kPi, 0.0, 0.5 * kPi, kPi};
  if (opt.grade_center && d > 0.0) {
    // Rays x + l e with e close to the centre direction pass near the singular point.
    double off = 0.3 * kPi;
    for (int k = 0; k < 6; ++k, off *= 0.3) {
      breaks.push_back(-kPi + off);
      breaks.push_back(kPi - off);
    }
  }
  // Chords change on the scale eps near the tangent directions when x is near the edge.
  for (double off = 0.5 * eps; off < 0.25 * kPi; off *= 2.0) {
    for (double t : {-0.5 * kPi, 0.5 * kPi}) {
      breaks.push_back(t - off);
      breaks.push_back(t + off);
    }
  }
  finalize_breaks(breaks);

  const auto& brule = quad::gauss_legendre(opt.beta_nodes);
  const auto& rrule = quad::gauss_legendre(opt.ray_nodes);
  double rr = 0.0;
  double rz = 0.0;
  double zz = 0.0;
  const double inv_c2 = 1.0 / (c * c);
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double bhalf = 0.5 * (breaks[p + 1] - breaks[p]);
    const double bmid = 0.5 * (breaks[p + 1] + breaks[p]);
    for (std::size_t ib = 0; ib < brule.size(); ++ib) {
      const Vec2 e = std::polar(1.0, bu + bmid + bhalf * brule.nodes[ib]);
      const double wb = bhalf * brule.weights[ib];
      const double l_max = chord(u, e, c);
      const double m_max = chord(u, -e, c);

      // Mollifier moments along y = x - s e.
      double phi0 = 0.0;
      double phi1 = 0.0;
      Vec2 psi0{0.0, 0.0};
      Vec2 psi1{0.0, 0.0};
      Vec2 psi2{0.0, 0.0};
      const double span = m_max / opt.mollifier_panels;
      for (int q = 0; q < opt.mollifier_panels; ++q) {
        for (std::size_t i = 0; i < rrule.size(); ++i) {
          const double s = span * (q + 0.5 + 0.5 * rrule.nodes[i]);
          const double w = 0.5 * span * rrule.weights[i];
          const Vec2 y = u - s * e;
          const double gap = 1.0 - std::norm(y) * inv_c2;
          if (gap <= 0.0) continue;
          const double phi = k_moll * std::exp(-1.0 / gap);
          const Vec2 grad = phi * (-2.0 * inv_c2 / (gap * gap)) * y;
          phi0 += w * phi;
          phi1 += w * s * phi;
          psi0 += w * grad;
          psi1 += w * s * grad;
          psi2 += w * s * s * grad;
        }
      }
      if (phi0 == 0.0 && psi0 == Vec2{}) continue;

      // Forcing moments along x + l e.
      RayMoments mom{{}, {}, {}};
      const std::vector<double> lb =
          opt.grade_center ? ray_breaks(x, e, x0, l_max, c) : std::vector<double>{0.0, l_max};
      for (std::size_t q = 0; q + 1 < lb.size(); ++q) {
        const double half = 0.5 * (lb[q + 1] - lb[q]);
        const double mid = 0.5 * (lb[q + 1] + lb[q]);
        for (std::size_t i = 0; i < rrule.size(); ++i) {
          const double l = mid + half * rrule.nodes[i];
          const Vec2 fv = half * rrule.weights[i] * f(x + l * e);
          mom.m0 += fv;
          mom.m1 += l * fv;
          mom.m2 += l * l * fv;
        }
      }

      const Vec2 Y = phi1 * mom.m0 + phi0 * mom.m1;
      const Vec2 T = dot(e, psi2) * mom.m0 + 2.0 * dot(e, psi1) * mom.m1 + dot(e, psi0) * mom.m2;
      const double S = dot(psi2, mom.m0) + 2.0 * dot(psi1, mom.m1) + dot(psi0, mom.m2);
      const double er = e.real();
      const double ez = e.imag();
      rr += wb * (-2.0 * er * Y.real() + er * T.real() - er * er * S);
      rz += wb * (-(ez * Y.real() + er * Y.imag()) + 0.5 * (ez * T.real() + er * T.imag()) -
                  er * ez * S);
      zz += wb * (-2.0 * ez * Y.imag() + ez * T.imag() - ez * ez * S);
    }
  }
  return {rr, rz, zz};
}

}  // namespace

SymTensorField antidivergence(VectorField f, Vec2 x0, double c, const AntidivergenceOptions& options) {
  if (!(c > 0.0)) throw std::invalid_argument("antidivergence: radius must be positive");
  if (options.beta_nodes < 2 || options.ray_nodes < 2 || options.mollifier_panels < 1) {
    throw std::invalid_argument("antidivergence: quadrature too coarse");
  }
  const CompatibilityResiduals res = compatibility_residuals(f, x0, c);
  if (res.mean_relative() > options.compat_tol || res.moment_relative() > options.compat_tol) {
    throw CompatibilityError(res, options.compat_tol);
  }
  if (res.l1 == 0.0) return SymTensorField::zero(x0, c);
  const double k_moll = mollifier_constant(c);
  return SymTensorField(x0, c, [f = std::move(f), x0, c, k_moll, options](Vec2 x) {
    return antidivergence_at(f, x0, c, k_moll, options, x);
  });
}

SymTensorField reynolds_field(std::shared_ptr<const ForcingField> forcing,
                              const AntidivergenceOptions& options) {
  if (!forcing) throw std::invalid_argument("reynolds_field: null forcing");
  AntidivergenceOptions opt = options;
  opt.grade_center = true;
  SymTensorField rf = antidivergence([forcing](Vec2 z) { return (*forcing)(z); },
                                     forcing->center(), forcing->radius(), opt);
  return SymTensorField(forcing->center(), forcing->radius(),
                        [rf](Vec2 z) { return (-1.0 / z.real()) * rf(z); });
}

ReynoldsPipeline build_reynolds(const RingParams& params, const VorticityProfile& profile, double t,
                                const ReynoldsOptions& options,
                                const AntidivergenceOptions& antidiv) {
  auto bs = std::make_shared<const BiotSavart>(Ring(params, profile, t), options.velocity);
  PressureCorrector corr = q1_coefficients(*bs, options);
  auto f = std::make_shared<const ForcingField>(*bs, corr, options);
  SymTensorField stress = reynolds_field(f, antidiv);
  return {std::move(bs), corr, std::move(f), std::move(stress)};
}

// ---------------------------------------------------------------------------
// Finite-difference checks

namespace {
// Fourth-order central difference.
template <class F>
auto central(const F& g, double h) {
  return (g(-2.0 * h) - 8.0 * g(-h) + 8.0 * g(h) - g(2.0 * h)) / (12.0 * h);
}
}  // namespace

Vec2 fd_divergence(const std::function<SymTensor2(Vec2)>& field, Vec2 x, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("fd_divergence: step must be positive");
  const Vec2 dr = central([&](double s) { return field(x + Vec2(s, 0.0)).apply({1.0, 0.0}); }, h);
  const Vec2 dz = central([&](double s) { return field(x + Vec2(0.0, s)).apply({0.0, 1.0}); }, h);
  return dr + dz;
}

LiftReport verify_axisymmetric_lift(const SymTensorField& R,
                                    const std::vector<HalfPlanePoint>& points, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("verify_axisymmetric_lift: step must be positive");
  using Mat3 = std::array<std::array<double, 3>, 3>;
  auto lifted = [&](const std::array<double, 3>& x) {
    const double r = std::hypot(x[0], x[1]);
    const SymTensor2 T = R(Vec2(r, x[2]));
    const std::array<double, 3> er{x[0] / r, x[1] / r, 0.0};
    const std::array<double, 3> ez{0.0, 0.0, 1.0};
    Mat3 m{};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        m[i][j] = T.rr * er[i] * er[j] + T.rz * (er[i] * ez[j] + ez[i] * er[j]) +
                  T.zz * ez[i] * ez[j];
      }
    }
    return m;
  };
  LiftReport report;
  for (const auto& p : points) {
    if (p.r() <= 10.0 * h) {
      throw std::invalid_argument("verify_axisymmetric_lift: point too close to the axis");
    }
    const std::array<double, 3> x{p.r(), 0.0, p.z()};
    std::array<double, 3> div{0.0, 0.0, 0.0};
    for (int j = 0; j < 3; ++j) {
      for (int i = 0; i < 3; ++i) {
        div[i] += central(
            [&](double s) {
              std::array<double, 3> y = x;
              y[j] += s;
              return lifted(y)[i][j];
            },
            h);
      }
    }
    const Vec2 half =
        fd_divergence([&](Vec2 z) { return z.real() * R(z); }, p.complex(), h) / p.r();
    const Vec2 d3(div[0], div[2]);
    const double scale = std::max(std::abs(d3), std::abs(half));
    const double mismatch = scale > 0.0 ? std::abs(d3 - half) / scale : 0.0;
    report.samples.push_back({p, d3, div[1], half, mismatch});
    report.max_mismatch = std::max(report.max_mismatch, mismatch);
  }
  return report;
}

// ---------------------------------------------------------------------------
// q00

double q00_potential(const Ring& ring, const HalfPlanePoint& zeta) {
  const double c = ring.c();
  const Vec2 z0 = ring.center();
  const Vec2 p = zeta.complex();
  // In the core, rho drho dalpha = dy / c^2 and dalpha = dtheta at fixed rho.
  const double inv_c2 = 1.0 / (c * c);
  auto integrand = [&](Vec2 y) {
    const Vec2 u = y - z0;
    const double rho = std::min(1.0, std::abs(u) / c);
    if (rho >= 1.0 || y == p) return 0.0;
    const double theta = rho > 0.0 ? std::arg(u) : 0.0;
    const Vec2 dg = ring.dgamma_dt_geometric(rho, theta);
    return dot(kernel::K_2d(p - y), dg) * ring.profile()(rho) * inv_c2;
  };
  return -disk_integral(integrand, z0, c, p);
}

double q00_potential(const RingParams& params, const VorticityProfile& profile, double t,
                     const HalfPlanePoint& zeta) {
  return q00_potential(Ring(params, profile, t), zeta);
}

// ---------------------------------------------------------------------------
// Output

nlohmann::json reynolds_diagnostics(const ForcingField& forcing) {
  const auto& corr = forcing.corrector();
  const auto& compat = forcing.compatibility();
  return {{"t", corr.t},
          {"c", corr.c},
          {"center", {corr.center.real(), corr.center.imag()}},
          {"A1", {corr.A1.real(), corr.A1.imag()}},
          {"A2", corr.A2},
          {"c1", corr.c1},
          {"c2", corr.c2},
          {"A1_ez_relative", corr.ez_relative()},
          {"compat_mean", {compat.mean.real(), compat.mean.imag()}},
          {"compat_moment", compat.moment},
          {"compat_l1", compat.l1},
          {"compat_mean_relative", compat.mean_relative()},
          {"compat_moment_relative", compat.moment_relative()},
          {"sup_F", forcing.sup_norm()}};
}

std::vector<TensorRow> tensor_field_grid(const SymTensorField& field, const GridSpec& grid,
                                         unsigned workers) {
  grid.validate();
  const auto n = static_cast<std::size_t>(grid.nr) * static_cast<std::size_t>(grid.nz);
  std::vector<TensorRow> rows(n);
  parallel_for(
      n,
      [&](std::size_t idx) {
        const double r = grid.r_at(static_cast<int>(idx % grid.nr));
        const double z = grid.z_at(static_cast<int>(idx / grid.nr));
        rows[idx] = {r, z, field(Vec2(r, z))};
      },
      workers);
  return rows;
}

void write_tensor_csv(std::ostream& out, const std::vector<TensorRow>& rows) {
  out << "r,z,Rrr,Rrz,Rzz\n" << std::setprecision(17);
  for (const auto& row : rows) {
    out << row.r << ',' << row.z << ',' << row.R.rr << ',' << row.R.rz << ',' << row.R.zz << '\n';
  }
}

}  // namespace vring
