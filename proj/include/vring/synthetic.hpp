#pragma once

#include <string>

#include "vring/reynolds.hpp"

namespace vring {

/// Compactly supported test fields on B(x0, c) that satisfy both compatibility
/// conditions exactly. Built from the C^3 bump (1 - |y - a|^2 / s^2)^4.
enum class SyntheticKind {
  /// e_r [b(x0 + 0.4c e_r) - b(x0 - 0.4c e_r)] with bump radius c/2.
  DipolePair,
  /// The same pair along the direction at angle 0.7 rad, pointing along that direction.
  RotatedDipole,
  /// perp(grad g), g = b(x0; 0.9c) - 4 b(x0; 0.45c), which has zero mean.
  CompactCurl,
};

VectorField synthetic_field(SyntheticKind kind, Vec2 x0, double c);
std::string to_string(SyntheticKind kind);

}  // namespace vring
