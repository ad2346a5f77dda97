#include "vring/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "vring/quadrature.hpp"

namespace vring::kernel {
namespace {

constexpr int kNodes = 20;
constexpr double kSMin = 1e-14;
constexpr double kSMax = 1e10;

void require_positive(double s, const char* what) {
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw std::invalid_argument(std::string(what) + ": s must be positive and finite");
  }
}

struct Direct {
  double G = 0.0;
  double H = 0.0;
  double dG = 0.0;
  double dH = 0.0;
};

// Integrands at angle phi, scaled by the quadrature weight w. The G-type
// integrands subtract the zero-mean term cos(phi) (s+2)^{-p}, which removes
// the cancellation that otherwise loses all digits at large s.
void accumulate(double s, double phi, double w, Direct& acc) {
  const double half = std::sin(0.5 * phi);
  const double one_minus_cos = 2.0 * half * half;
  const double cosp = 1.0 - one_minus_cos;
  const double D = 2.0 * one_minus_cos + s;
  const double E = s + 2.0;
  const double a = std::sqrt(E);
  const double b = std::sqrt(D);
  const double ab = a * b;
  const double DE = D * E;
  const double DE_sqrt = std::sqrt(DE);
  const double num = 2.0 * cosp * cosp;  // cos(phi) (E - D)
  const double g3 = num * (E + ab + D) / ((a + b) * DE * DE_sqrt);
  const double g5 =
      num * (E * E + E * ab + DE + D * ab + D * D) / ((a + b) * DE * DE * DE_sqrt);
  const double D15 = D * b;
  acc.G += w * g3;
  acc.H += w * one_minus_cos / D15;
  acc.dG += w * (-1.5 * g5);
  acc.dH += w * (-1.5 * one_minus_cos / (D15 * D));
}

// phi in [0, 1] through phi = sqrt(s) sinh(v), which flattens the O(sqrt s)
// peak; phi in [1, pi] on two plain panels.
Direct direct(double s) {
  const auto& rule = quad::gauss_legendre(kNodes);
  Direct acc;
  const double rs = std::sqrt(s);
  const double v_end = std::asinh(1.0 / rs);
  const int panels = std::max(1, static_cast<int>(std::ceil(v_end)));
  const double width = v_end / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * width;
    for (std::size_t k = 0; k < rule.size(); ++k) {
      const double v = mid + 0.5 * width * rule.nodes[k];
      const double phi = rs * std::sinh(v);
      accumulate(s, phi, 0.5 * width * rule.weights[k] * rs * std::cosh(v), acc);
    }
  }
  const double breaks[3] = {1.0, 2.0, kPi};
  for (int p = 0; p < 2; ++p) {
    const double a = breaks[p];
    const double b = breaks[p + 1];
    for (std::size_t k = 0; k < rule.size(); ++k) {
      const double phi = 0.5 * (a + b) + 0.5 * (b - a) * rule.nodes[k];
      accumulate(s, phi, 0.5 * (b - a) * rule.weights[k], acc);
    }
  }
  return acc;
}

struct Normalized {
  double g, dg, h, dh;  // values and u-derivatives
};

Normalized normalized(double s) {
  const Direct d = direct(s);
  const double p15 = std::pow(1.0 + s, 1.5);
  const double p05 = std::sqrt(1.0 + s);
  const double g = d.G * s * p15;
  const double dg_ds = d.dG * s * p15 + d.G * p15 + 1.5 * d.G * s * p05;
  const double h = d.H * p15 + 0.25 * (std::log(s) - std::log1p(s));
  const double dh_ds = d.dH * p15 + 1.5 * d.H * p05 + 0.25 * (1.0 / s - 1.0 / (1.0 + s));
  return {g, s * dg_ds, h, s * dh_ds};
}

Pair denormalize(double s, double g, double h) {
  const double p15 = std::pow(1.0 + s, 1.5);
  return {g / (s * p15), (h - 0.25 * (std::log(s) - std::log1p(s))) / p15};
}

double hermite(double t, double du, double f0, double d0, double f1, double d1) {
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * f0 + (t3 - 2 * t2 + t) * du * d0 + (-2 * t3 + 3 * t2) * f1 +
         (t3 - t2) * du * d1;
}

}  // namespace

double G(double s) {
  require_positive(s, "G");
  return direct(s).G;
}

double H(double s) {
  require_positive(s, "H");
  return direct(s).H;
}

double G_derivative(double s) {
  require_positive(s, "G_derivative");
  return direct(s).dG;
}

double H_derivative(double s) {
  require_positive(s, "H_derivative");
  return direct(s).dH;
}

Table::Table(double rel_tol)
    : rel_tol_(rel_tol), u_min_(std::log(kSMin)), u_max_(std::log(kSMax)) {
  if (!(rel_tol > 0.0)) throw std::invalid_argument("kernel table: tolerance must be positive");
  double du = 0.2;
  for (;;) {
    fill(du);
    measured_error_ = max_midpoint_error();
    if (measured_error_ <= 0.5 * rel_tol_ || du < 1e-3) break;
    du *= 0.5;
  }
  if (measured_error_ > rel_tol_) {
    throw std::runtime_error("kernel table: requested tolerance is below attainable accuracy");
  }
}

void Table::fill(double du) {
  const auto n = static_cast<std::size_t>(std::ceil((u_max_ - u_min_) / du)) + 1;
  du_ = (u_max_ - u_min_) / static_cast<double>(n - 1);
  g_.resize(n);
  dg_.resize(n);
  h_.resize(n);
  dh_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Normalized v = normalized(std::exp(u_min_ + du_ * static_cast<double>(k)));
    g_[k] = v.g;
    dg_[k] = v.dg;
    h_[k] = v.h;
    dh_[k] = v.dh;
  }
}

double Table::max_midpoint_error() const {
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < g_.size(); ++k) {
    const double s = std::exp(u_min_ + du_ * (static_cast<double>(k) + 0.5));
    const Direct d = direct(s);
    const Pair p = (*this)(s);
    worst = std::max({worst, std::abs(p.G - d.G) / std::abs(d.G),
                      std::abs(p.H - d.H) / std::abs(d.H)});
  }
  return worst;
}

Pair Table::operator()(double s) const {
  require_positive(s, "kernel table");
  const double u = std::log(s);
  if (u >= u_max_) {
    const Direct d = direct(s);
    return {d.G, d.H};
  }
  if (u <= u_min_) return denormalize(s, g_.front(), h_.front());
  const double x = (u - u_min_) / du_;
  const auto k = std::min(static_cast<std::size_t>(x), g_.size() - 2);
  const double t = x - static_cast<double>(k);
  return denormalize(s, hermite(t, du_, g_[k], dg_[k], g_[k + 1], dg_[k + 1]),
                     hermite(t, du_, h_[k], dh_[k], h_[k + 1], dh_[k + 1]));
}

std::shared_ptr<const Table> shared_table(double rel_tol) {
  static std::mutex mutex;
  static std::shared_ptr<const Table> current;
  std::lock_guard lock(mutex);
  if (!current || current->rel_tol() > rel_tol) current = std::make_shared<const Table>(rel_tol);
  return current;
}

double aux_exact_1(double s) {
  require_positive(s, "aux_exact_1");
  return kPi / (s * std::sqrt(s + kPi * kPi));
}

double aux_exact_2(double s) {
  require_positive(s, "aux_exact_2");
  return std::asinh(kPi / std::sqrt(s)) - kPi / std::sqrt(s + kPi * kPi);
}

namespace {
std::vector<double> aux_breaks(double s) {
  std::vector<double> breaks{0.0};
  for (double b = 0.25 * std::sqrt(s); b < kPi; b *= 4.0) breaks.push_back(b);
  breaks.push_back(kPi);
  return breaks;
}
}  // namespace

double aux_quadrature_1(double s) {
  require_positive(s, "aux_quadrature_1");
  return quad::adaptive_panels(
      [s](double p) { return 1.0 / ((p * p + s) * std::sqrt(p * p + s)); }, aux_breaks(s),
      1e-14);
}

double aux_quadrature_2(double s) {
  require_positive(s, "aux_quadrature_2");
  return quad::adaptive_panels(
      [s](double p) { return p * p / ((p * p + s) * std::sqrt(p * p + s)); }, aux_breaks(s),
      1e-14);
}

namespace {
AxKernel assemble(Vec2 zeta, Vec2 zeta_p, double r, double r_p, Pair gh) {
  const double scale = std::sqrt(r * r_p);
  const Vec2 zbar = (zeta - zeta_p) / scale;
  const Vec2 pref = Vec2(0.0, 1.0) / (kTwoPi * r);
  return {pref * (-zbar * gh.G), pref * (std::sqrt(r_p / r) * gh.H)};
}

double kernel_argument(const HalfPlanePoint& zeta, const HalfPlanePoint& zeta_p) {
  const double s = std::norm(zeta.complex() - zeta_p.complex()) / (zeta.r() * zeta_p.r());
  if (!(s > 0.0)) throw std::invalid_argument("K_ax: coincident points");
  return s;
}
}  // namespace

AxKernel K_ax(const HalfPlanePoint& zeta, const HalfPlanePoint& zeta_p) {
  const double s = kernel_argument(zeta, zeta_p);
  const Direct d = direct(s);
  return assemble(zeta.complex(), zeta_p.complex(), zeta.r(), zeta_p.r(), {d.G, d.H});
}

AxKernel K_ax(const HalfPlanePoint& zeta, const HalfPlanePoint& zeta_p, const Table& table) {
  const double s = kernel_argument(zeta, zeta_p);
  return assemble(zeta.complex(), zeta_p.complex(), zeta.r(), zeta_p.r(), table(s));
}

Vec2 K_2d(Vec2 zeta) {
  if (zeta == Vec2(0.0, 0.0)) throw std::invalid_argument("K_2d: zero argument");
  return Vec2(0.0, 1.0) / (kTwoPi * std::conj(zeta));
}

double mean_value_circle(double rho, double rho_p) {
  if (!(rho > 0.0) || !(rho_p > 0.0)) {
    throw std::invalid_argument("mean_value_circle: radii must be positive");
  }
  if (rho == rho_p) throw std::invalid_argument("mean_value_circle: equal radii are singular");
  return rho > rho_p ? 1.0 / rho : 0.0;
}

std::complex<double> mean_value_circle_quadrature(double rho, double rho_p, double tol) {
  if (!(rho > 0.0) || !(rho_p > 0.0)) {
    throw std::invalid_argument("mean_value_circle: radii must be positive");
  }
  if (rho == rho_p) throw std::invalid_argument("mean_value_circle: equal radii are singular");
  auto trapezoid = [&](std::size_t n) {
    std::complex<double> sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double a = kTwoPi * static_cast<double>(k) / static_cast<double>(n);
      sum += 1.0 / (rho - rho_p * std::polar(1.0, -a));
    }
    return sum / static_cast<double>(n);
  };
  std::size_t n = 64;
  std::complex<double> prev = trapezoid(n);
  while (n < (std::size_t{1} << 24)) {
    n *= 2;
    const std::complex<double> next = trapezoid(n);
    if (std::abs(next - prev) <= tol * std::max(1.0, std::abs(next))) return next;
    prev = next;
  }
  throw std::runtime_error("mean_value_circle_quadrature: no convergence");
}

void write_kernel_csv(std::ostream& out, std::span<const double> s_values) {
  out << "s,G,H,G_res,H_res\n" << std::setprecision(17);
  for (const double s : s_values) {
    require_positive(s, "write_kernel_csv");
    const Direct d = direct(s);
    out << s << ',' << d.G << ',' << d.H << ',' << d.G - 1.0 / s << ','
        << d.H + 0.25 * std::log(s) << '\n';
  }
}

}  // namespace vring::kernel
