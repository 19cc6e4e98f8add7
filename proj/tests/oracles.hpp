#pragma once

// Independent reference computations shared by the unit tests and the
// acceptance run. None of these call into the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace chball::oracle {

using Wide = boost::multiprecision::cpp_bin_float_100;

inline constexpr double kPiD = 3.14159265358979323846;

// Smallest q <= floor(Q^m) meeting the Dirichlet bound with nearest numerators.
inline std::int64_t brute_force_denominator(const std::vector<double>& thetas, double Q) {
  const int m = static_cast<int>(thetas.size());
  const auto limit = static_cast<std::int64_t>(std::floor(std::pow(Q, m) + 1e-9));
  for (std::int64_t q = 1; q <= limit; ++q) {
    double worst = 0.0;
    for (const double t : thetas) {
      const double p = std::round(static_cast<double>(q) * t);
      worst = std::max(worst, std::abs(t - p / static_cast<double>(q)));
    }
    if (worst <= 1.0 / (static_cast<double>(q) * Q) + 1e-15) return q;
  }
  return 0;
}

// Integral of the shell density 4^n sigma sinh^{2n-1}(t/2) cosh(t/2) / 2.
inline double shell_quadrature(int n, double r0) {
  const double sigma = 2.0 * std::pow(kPiD, n) / std::tgamma(n);
  auto density = [&](double t) {
    return std::pow(4.0, n) * sigma * std::pow(std::sinh(t / 2.0), 2 * n - 1) * std::cosh(t / 2.0) / 2.0;
  };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(density, 0.0, r0, 15, 1e-14);
}

// sinh by its Taylor series, summed in 100-digit binary arithmetic.
inline Wide series_sinh(const Wide& x) {
  Wide term = x;
  Wide sum = x;
  const Wide x2 = x * x;
  for (int k = 1; k < 60; ++k) {
    term *= x2 / ((2 * k) * (2 * k + 1));
    sum += term;
  }
  return sum;
}

// Ball-volume bound evaluated from the closed form in 100-digit arithmetic.
inline Wide independent_bound(int n, const Wide& radius) {
  Wide factorial = 1;
  for (int k = 2; k < n; ++k) factorial *= k;
  const Wide sigma = 2 * pow(boost::math::constants::pi<Wide>(), n) / factorial;
  return pow(Wide(4), n) * sigma / (2 * n) * pow(series_sinh(radius / 2), 2 * n);
}

}  // namespace chball::oracle
