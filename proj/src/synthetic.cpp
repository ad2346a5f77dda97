#include "vring/synthetic.hpp"

#include <cmath>

namespace vring {
namespace {

double bump(Vec2 y, Vec2 a, double s) {
  const double q = std::norm(y - a) / (s * s);
  if (q >= 1.0) return 0.0;
  const double w = 1.0 - q;
  return w * w * w * w;
}

Vec2 bump_gradient(Vec2 y, Vec2 a, double s) {
  const double q = std::norm(y - a) / (s * s);
  if (q >= 1.0) return {0.0, 0.0};
  const double w = 1.0 - q;
  return (-8.0 * w * w * w / (s * s)) * (y - a);
}

}  // namespace

VectorField synthetic_field(SyntheticKind kind, Vec2 x0, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("synthetic_field: radius must be positive");
  switch (kind) {
    case SyntheticKind::DipolePair:
    case SyntheticKind::RotatedDipole: {
      const Vec2 e = kind == SyntheticKind::DipolePair ? Vec2(1.0, 0.0) : std::polar(1.0, 0.7);
      const Vec2 a = 0.4 * c * e;
      return [=](Vec2 y) { return (bump(y, x0 + a, 0.5 * c) - bump(y, x0 - a, 0.5 * c)) * e; };
    }
    case SyntheticKind::CompactCurl:
      // \int b(.; s) = pi s^2 / 5, so the weight 4 = (0.9 / 0.45)^2 balances the masses.
      return [=](Vec2 y) {
        return perp(bump_gradient(y, x0, 0.9 * c) - 4.0 * bump_gradient(y, x0, 0.45 * c));
      };
  }
  throw std::invalid_argument("synthetic_field: unknown kind");
}

std::string to_string(SyntheticKind kind) {
  switch (kind) {
    case SyntheticKind::DipolePair:
      return "dipole_pair";
    case SyntheticKind::RotatedDipole:
      return "rotated_dipole";
    case SyntheticKind::CompactCurl:
      return "compact_curl";
  }
  return "unknown";
}

}  // namespace vring
