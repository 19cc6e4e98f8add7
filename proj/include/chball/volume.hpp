#pragma once

// Volumes of Bergman balls and the resulting lower bound for the volume of a
// complex hyperbolic n-manifold.
//
//   sigma_{2n-1}   = 2 pi^n / (n-1)!                      (unit sphere in C^n)
//   Vol(B(r0))     = 4^n sigma_{2n-1} / (2n) sinh^{2n}(r0 / 2)

#include <string>

#include "chball/bounds.hpp"

namespace chball {

double sphere_volume(int n);
ExtendedReal sphere_volume_extended(int n);

double ball_volume(int n, double r0);
ExtendedReal ball_volume_extended(int n, const ExtendedReal& r0);

// How the embedded-ball radius enters the volume formula.
enum class RadiusConvention {
  // Vol(B(r)) with r the embedded ball radius: sinh^{2n}(r / 2). At
  // r = 0.01 / 17^(n-1) this is the printed sinh^{2n}(0.005 / 17^(n-1)).
  Printed,
  // sinh^{2n}(r): the radius itself inside sinh, i.e. Vol(B(2r)).
  FullRadius,
};

const char* to_string(RadiusConvention c) noexcept;

struct VolumeResult {
  int n = 2;
  double r0 = 0.0;          // radius handed to the ball-volume formula
  double sphere_vol = 0.0;
  double ball_vol = 0.0;
  double manifold_bound = 0.0;
  RadiusConvention convention = RadiusConvention::Printed;
  ExtendedReal manifold_bound_extended;

  // manifold_bound_extended with the given number of significant digits.
  std::string extended_string(int digits = 12) const;
};

// Evaluated in 50-digit arithmetic, then echoed to double.
VolumeResult manifold_volume_bound(int n, double ball_radius,
                                   RadiusConvention convention = RadiusConvention::Printed);

// 0.01 / 17^(n-1).
double paper_ball_radius(int n);

// Reference values: minimal volume of a compact complex hyperbolic surface and
// of a cusped one.
inline constexpr double kCompactSurfaceMinVolume = 8.0 * 9.8696044010893586188;
inline constexpr double kCuspedSurfaceMinVolume = 8.0 * 9.8696044010893586188 / 3.0;

}  // namespace chball
