#pragma once

// Simultaneous rational approximation by the pigeonhole principle, and
// approximation of a unitary matrix by one of finite order.

#include <cstdint>
#include <vector>

#include "chball/linalg.hpp"

namespace chball {

inline constexpr double kPigeonholeGuard = 1e7;

enum class ApproxRoute {
  Pigeonhole,  // box collision in the ceil(Q)-grid walk
  Scan,        // direct search over q <= Q^m, used when the walk's q exceeds Q^m
};

// |theta_i - p_i / q| <= 1 / (q Q) for every i, with 1 <= q <= Q^m.
struct RationalApprox {
  std::vector<double> thetas;
  std::int64_t q = 1;
  std::vector<std::int64_t> p;
  double max_err = 0.0;
  double Q = 1.0;
  int m = 0;
  ApproxRoute route = ApproxRoute::Pigeonhole;

  // Re-evaluates q <= Q^m and max_err <= 1/(qQ) (+1e-15) from the thetas.
  bool certificate_holds() const;
};

// Throws InvalidInput for thetas outside [0,1], Q <= 1 or an empty list, and
// ResourceLimit when ceil(Q)^m exceeds kPigeonholeGuard.
RationalApprox dirichlet_approx(const std::vector<double>& thetas, double Q);

enum class SpectrumMode {
  FullSpectrum,  // all n eigenvalue angles are approximated
  Projective,    // A is divided by one eigenvalue first; n - 1 angles remain
};

const char* to_string(SpectrumMode mode) noexcept;

struct FiniteOrderApprox {
  CMatrix B;
  std::int64_t q = 1;
  // ||A / phase - B||. phase is 1 in FullSpectrum mode and the normalizing
  // eigenvalue in Projective mode, so B approximates A up to that scalar.
  double err = 0.0;
  Complex phase{1.0, 0.0};
  SpectrumMode mode = SpectrumMode::Projective;
  double Q = 1.0;
  int m = 0;                    // number of angles handed to the pigeonhole step
  double predicted_err = 0.0;   // 2 max_j |sin(pi (theta_j - p_j / q))|
  std::vector<double> angles;   // sorted angles of A / phase in [0, 1)
  std::vector<std::int64_t> numerators;  // p_j for each sorted angle
};

// Spectral decomposition A = V diag(e^{2 pi i theta_j}) V*, angles sorted
// ascending. Projective mode divides by the eigenvalue of largest angle.
// Repeated angles share one numerator. Throws InvalidInput if A is not unitary
// within 1e-10.
FiniteOrderApprox finite_order_approx(const CMatrix& a, double Q,
                                      SpectrumMode mode = SpectrumMode::Projective);

}  // namespace chball
