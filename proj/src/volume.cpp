#include "chball/volume.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include <boost/math/constants/constants.hpp>

#include "chball/errors.hpp"

namespace chball {

namespace {

void check_dimension(int n) {
  if (n < 1) throw InvalidInput("volume formulas need n >= 1, got " + std::to_string(n));
}

}  // namespace

ExtendedReal sphere_volume_extended(int n) {
  check_dimension(n);
  const ExtendedReal pi = boost::math::constants::pi<ExtendedReal>();
  ExtendedReal factorial = 1;
  for (int k = 2; k < n; ++k) factorial *= k;
  return 2 * boost::multiprecision::pow(pi, n) / factorial;
}

double sphere_volume(int n) { return static_cast<double>(sphere_volume_extended(n)); }

double ball_volume(int n, double r0) {
  check_dimension(n);
  if (!(r0 >= 0.0)) throw InvalidInput("ball radius must be >= 0");
  const double coefficient = std::pow(4.0, n) * sphere_volume(n) / (2.0 * n);
  return coefficient * std::pow(std::sinh(r0 / 2.0), 2 * n);
}

ExtendedReal ball_volume_extended(int n, const ExtendedReal& r0) {
  check_dimension(n);
  if (r0 < 0) throw InvalidInput("ball radius must be >= 0");
  const ExtendedReal coefficient = boost::multiprecision::pow(ExtendedReal(4), n) *
                                   sphere_volume_extended(n) / (2 * n);
  return coefficient * boost::multiprecision::pow(boost::multiprecision::sinh(r0 / 2), 2 * n);
}

const char* to_string(RadiusConvention c) noexcept {
  return c == RadiusConvention::Printed ? "printed" : "full-radius";
}

std::string VolumeResult::extended_string(int digits) const {
  std::ostringstream out;
  out << std::scientific << std::setprecision(digits - 1) << manifold_bound_extended;
  return out.str();
}

VolumeResult manifold_volume_bound(int n, double ball_radius, RadiusConvention convention) {
  if (n < 2) throw InvalidInput("manifold volume bound needs n >= 2");
  if (!(ball_radius > 0.0)) throw InvalidInput("manifold volume bound needs ball_radius > 0");
  VolumeResult out;
  out.n = n;
  out.convention = convention;
  // Printed: Vol(B(r)) = C sinh^{2n}(r/2). Full radius: C sinh^{2n}(r) = Vol(B(2r)).
  const ExtendedReal radius(ball_radius);
  const ExtendedReal r0 = convention == RadiusConvention::Printed ? radius : 2 * radius;
  out.r0 = static_cast<double>(r0);
  out.sphere_vol = sphere_volume(n);
  out.manifold_bound_extended = ball_volume_extended(n, r0);
  out.manifold_bound = static_cast<double>(out.manifold_bound_extended);
  out.ball_vol = out.manifold_bound;
  return out;
}

double paper_ball_radius(int n) {
  if (n < 2) throw InvalidInput("paper_ball_radius needs n >= 2");
  return 0.01 / std::pow(17.0, n - 1);
}

}  // namespace chball
