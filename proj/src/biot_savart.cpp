#include "vring/biot_savart.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

#include "vring/parallel.hpp"
#include "vring/quadrature.hpp"

namespace vring {
namespace {

constexpr double kBoundarySnap = 1e-12;
constexpr double kGrade = 0.2;

// Panels of the rho' rule in the far field; graded toward rho' = 0 where the
// profile carries a rho log(rho) factor.
constexpr double kRhoBreaks[] = {0.0, 0.002, 0.02, 0.1, 0.35, 0.7, 1.0};


void finalize_breaks(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  out.reserve(v.size());
  for (double x : v) {
    if (out.empty() || x - out.back() > 1e-15 * std::max(1.0, std::abs(x))) out.push_back(x);
  }
  v.swap(out);
}

}  // namespace

struct BiotSavart::Accum {
  Vec2 rot{0.0, 0.0};
  Vec2 up{0.0, 0.0};
};

BiotSavart::BiotSavart(Ring ring, VelocityOptions options)
    : ring_(std::move(ring)),
      options_(options),
      table_(kernel::shared_table(options.kernel_tol)) {
  if (options_.panel_nodes < 2) throw std::invalid_argument("velocity: panel_nodes must be >= 2");
  if (!(options_.far_ratio >= 2.0)) throw std::invalid_argument("velocity: far_ratio must be >= 2");
  const auto& rule = quad::gauss_legendre(options_.panel_nodes);
  const auto& profile = ring_.profile();
  for (std::size_t p = 0; p + 1 < std::size(kRhoBreaks); ++p) {
    const double a = kRhoBreaks[p];
    const double b = kRhoBreaks[p + 1];
    for (std::size_t k = 0; k < rule.size(); ++k) {
      const double x = 0.5 * (a + b) + 0.5 * (b - a) * rule.nodes[k];
      rho_nodes_.push_back(x);
      rho_weights_.push_back(0.5 * (b - a) * rule.weights[k] * profile(x) * x);
    }
  }
}

void BiotSavart::add_far(Vec2 zeta, double r, Accum& acc) const {
  const double c = ring_.c();
  const Vec2 z0 = ring_.center();
  const double d = std::abs(zeta - z0);
  const double q = c / d;
  int n = static_cast<int>(std::ceil(std::log(options_.far_tol) / std::log(q))) + 8;
  n = std::clamp(n + (n % 2), 16, 512);
  const double dalpha = kTwoPi / n;
  const kernel::Table& table = *table_;
  for (int j = 0; j < n; ++j) {
    const Vec2 e = std::polar(1.0, dalpha * j);
    for (std::size_t k = 0; k < rho_nodes_.size(); ++k) {
      const double w = rho_weights_[k] * dalpha;
      if (w == 0.0) continue;
      const Vec2 zp = z0 + c * rho_nodes_[k] * e;
      const double rp = zp.real();
      const Vec2 diff = zeta - zp;
      const double rrp = r * rp;
      const double s = std::norm(diff) / rrp;
      const kernel::Pair gh = table(s);
      const double scale = std::sqrt(rrp);
      acc.rot += w * (-(diff / scale) * gh.G);
      acc.up += w * (std::sqrt(rp / r) * gh.H);
    }
  }
}

void BiotSavart::add_ray(Vec2 zeta, double r, double beta, double r_lo, double r_hi,
                         double weight, double grade_scale, Accum& acc) const {
  if (!(r_hi > r_lo)) return;
  const double c = ring_.c();
  const Vec2 z0 = ring_.center();
  const Vec2 e = std::polar(1.0, beta);

  // Closest approach of the ray to the core centre, and the miss distance.
  const double r_star = -dot(zeta - z0, e);
  const double miss = std::abs(dot(zeta - z0, perp(e)));
  const bool star_inside = r_star > r_lo && r_star < r_hi;

  std::vector<double> breaks{r_lo, r_hi};
  if (star_inside) {
    // The profile has a rho log(rho) point singularity at the centre; along
    // the ray it is smoothed over the miss distance, so grade both ways.
    breaks.push_back(r_star);
    for (double off = std::max(miss, 1e-6 * c); off < c; off *= 4.0) {
      if (r_star - off > r_lo) breaks.push_back(r_star - off);
      if (r_star + off < r_hi) breaks.push_back(r_star + off);
    }
  }
  // Grade toward the start of the ray, where the kernel is singular (inside,
  // r_lo = 0) or nearly singular (just outside, at distance r_lo).
  finalize_breaks(breaks);
  const double first_end = breaks[1];
  const int levels = r_lo == 0.0 ? 3 : 8;
  double span = first_end - r_lo;
  for (int k = 0; k < levels; ++k) {
    span *= kGrade;
    if (span <= 0.5 * grade_scale) break;
    breaks.push_back(r_lo + span);
  }
  finalize_breaks(breaks);

  const auto& rule = quad::gauss_legendre(options_.panel_nodes);
  const kernel::Table& table = *table_;
  const auto& profile = ring_.profile();
  const double inv_c2 = 1.0 / (c * c);
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double a = breaks[p];
    const double b = breaks[p + 1];
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    for (std::size_t k = 0; k < rule.size(); ++k) {
      const double R = mid + half * rule.nodes[k];
      const Vec2 zp = zeta + R * e;
      const double rho = std::abs(zp - z0) / c;
      if (rho >= 1.0) continue;
      const double omega = profile(rho) * inv_c2;
      const double w = weight * half * rule.weights[k] * R * omega;
      if (w == 0.0) continue;
      const double rp = zp.real();
      const double rrp = r * rp;
      const Vec2 diff = -R * e;
      const double s = R * R / rrp;
      const kernel::Pair gh = table(s);
      acc.rot += w * (-(diff / std::sqrt(rrp)) * gh.G);
      acc.up += w * (std::sqrt(rp / r) * gh.H);
    }
  }
}

void BiotSavart::add_polar(Vec2 zeta, double r, Accum& acc) const {
  const double c = ring_.c();
  const Vec2 z0 = ring_.center();
  const Vec2 offset = zeta - z0;
  double d = std::abs(offset);
  const double beta_out = d > 0.0 ? std::arg(offset) : 0.0;
  const auto& rule = quad::gauss_legendre(options_.panel_nodes);

  if (d < c * (1.0 - kBoundarySnap)) {
    // Inside: every ray from zeta leaves the disk once, at R_plus(delta).
    const double eps = (c - d) / c;
    std::vector<double> breaks{-kPi, -0.5 * kPi, 0.0, 0.5 * kPi, kPi};
    const double scale = std::sqrt(eps);
    if (d > 0.0) {
      // Rays toward the centre cross the profile's point singularity.
      for (double off = 0.3 * kPi; off > 1e-3; off *= 0.3) {
        breaks.push_back(-kPi + off);
        breaks.push_back(kPi - off);
      }
      for (double off = 0.5 * kPi * 0.3; off > 0.3 * scale; off *= 0.3) {
        for (double centre : {-0.5 * kPi, 0.5 * kPi}) {
          breaks.push_back(centre - off);
          breaks.push_back(centre + off);
        }
      }
    }
    finalize_breaks(breaks);
    for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
      const double a = breaks[p];
      const double b = breaks[p + 1];
      const double half = 0.5 * (b - a);
      for (std::size_t k = 0; k < rule.size(); ++k) {
        const double delta = 0.5 * (a + b) + half * rule.nodes[k];
        const double cd = std::cos(delta);
        const double sd = std::sin(delta);
        const double root = std::sqrt(std::max(0.0, c * c - d * d * sd * sd));
        // R_plus = -d cos + root, rationalized when d cos > 0.
        const double r_plus = cd > 0.0 ? (c * c - d * d) / (d * cd + root) : root - d * cd;
        add_ray(zeta, r, beta_out + delta, 0.0, r_plus, half * rule.weights[k], 0.0, acc);
      }
    }
    return;
  }

  // On or outside the boundary: rays within the cone |delta| <= delta_m around
  // the direction of the core centre cut the disk along [R_minus, R_plus].
  d = std::max(d, c);
  const double eps = (d - c) / c;
  const double delta_m = std::asin(std::min(1.0, c / d));
  const double beta_c = beta_out + kPi;
  std::vector<double> breaks{-0.5 * kPi, -0.25 * kPi, 0.0, 0.25 * kPi, 0.5 * kPi};
  for (double off = 0.3 * delta_m; off > 1e-3 * delta_m; off *= 0.3) {
    breaks.push_back(std::asin(off / delta_m));
    breaks.push_back(-std::asin(off / delta_m));
  }
  if (eps > 0.0) {
    for (double off = 0.5 * std::sqrt(eps); off < 0.8 * delta_m; off *= 3.0) {
      const double psi = std::asin(off / delta_m);
      breaks.push_back(psi);
      breaks.push_back(-psi);
    }
  }
  finalize_breaks(breaks);
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double a = breaks[p];
    const double b = breaks[p + 1];
    const double half = 0.5 * (b - a);
    for (std::size_t k = 0; k < rule.size(); ++k) {
      const double psi = 0.5 * (a + b) + half * rule.nodes[k];
      const double delta = delta_m * std::sin(psi);
      const double jac = delta_m * std::cos(psi);
      const double cd = std::cos(delta);
      const double sd = std::sin(delta);
      const double root = std::sqrt(std::max(0.0, c * c - d * d * sd * sd));
      const double r_plus = d * cd + root;
      const double r_minus = (d * d - c * c) / r_plus;
      add_ray(zeta, r, beta_c + delta, r_minus, r_plus, half * rule.weights[k] * jac, r_minus,
              acc);
    }
  }
}

VelocitySample BiotSavart::velocity(const HalfPlanePoint& zeta) const {
  const Vec2 z = zeta.complex();
  const double r = zeta.r();
  Accum acc;
  const double d = std::abs(z - ring_.center());
  if (d >= options_.far_ratio * ring_.c()) {
    add_far(z, r, acc);
  } else {
    add_polar(z, r, acc);
  }
  const Vec2 pref = Vec2(0.0, 1.0) / (kTwoPi * r);
  const Vec2 rot = pref * acc.rot;
  const Vec2 up = pref * acc.up;
  return {zeta, rot + up, rot, up};
}

VelocitySample BiotSavart::velocity_on_ring(double rho, double alpha) const {
  return velocity(ring_.gamma(rho, alpha));
}

Vec2 BiotSavart::asymptotic_leading(double rho, double alpha) const {
  const double c = ring_.c();
  const auto& p = ring_.params();
  const Vec2 i(0.0, 1.0);
  const Vec2 rotation = -i * rho * ring_.gamma_rho(rho) / (kTwoPi * c) *
                        std::polar(1.0, ring_.theta(rho, alpha));
  const Vec2 translation = -i * p.gamma / (4.0 * kPi * p.L) * std::log(c);
  return rotation + translation;
}

Vec2 BiotSavart::residual(double rho, double alpha) const {
  return velocity_on_ring(rho, alpha).v - asymptotic_leading(rho, alpha);
}

VelocitySample velocity(const RingParams& params, const VorticityProfile& profile, double t,
                        const HalfPlanePoint& zeta) {
  return BiotSavart(Ring(params, profile, t)).velocity(zeta);
}

VelocitySample velocity_on_ring(const RingParams& params, const VorticityProfile& profile,
                                double t, double rho, double alpha) {
  return BiotSavart(Ring(params, profile, t)).velocity_on_ring(rho, alpha);
}

Vec2 asymptotic_leading(const RingParams& params, const VorticityProfile& profile, double t,
                        double rho, double alpha) {
  return BiotSavart(Ring(params, profile, t)).asymptotic_leading(rho, alpha);
}

Vec2 residual(const RingParams& params, const VorticityProfile& profile, double t, double rho,
              double alpha) {
  return BiotSavart(Ring(params, profile, t)).residual(rho, alpha);
}

void GridSpec::validate() const {
  if (!(rmin > 0.0)) throw std::invalid_argument("grid: rmin must be positive");
  if (!(rmax >= rmin) || !(zmax >= zmin)) throw std::invalid_argument("grid: empty extent");
  if (nr < 1 || nz < 1) throw std::invalid_argument("grid: nr and nz must be >= 1");
  if ((nr > 1 && rmax == rmin) || (nz > 1 && zmax == zmin)) {
    throw std::invalid_argument("grid: degenerate extent with several nodes");
  }
}

double GridSpec::r_at(int i) const {
  return nr == 1 ? rmin : rmin + (rmax - rmin) * i / (nr - 1);
}

double GridSpec::z_at(int j) const {
  return nz == 1 ? zmin : zmin + (zmax - zmin) * j / (nz - 1);
}

std::vector<FieldRow> velocity_field_grid(const BiotSavart& bs, const GridSpec& grid,
                                          unsigned workers) {
  grid.validate();
  const auto n = static_cast<std::size_t>(grid.nr) * static_cast<std::size_t>(grid.nz);
  std::vector<FieldRow> rows(n);
  parallel_for(
      n,
      [&](std::size_t idx) {
        const int j = static_cast<int>(idx / grid.nr);
        const int i = static_cast<int>(idx % grid.nr);
        const double r = grid.r_at(i);
        const double z = grid.z_at(j);
        rows[idx] = {r, z, bs.velocity(HalfPlanePoint(r, z)).v};
      },
      workers);
  return rows;
}

void write_velocity_csv(std::ostream& out, const std::vector<FieldRow>& rows) {
  out << "r,z,vr,vz\n" << std::setprecision(17);
  for (const auto& row : rows) {
    out << row.r << ',' << row.z << ',' << row.v.real() << ',' << row.v.imag() << '\n';
  }
}

}  // namespace vring
