#pragma once

// Operator norm, spectral radius, and the distance-to-U(n) certificate.

#include <cstdint>

#include "chball/isometry.hpp"
#include "chball/linalg.hpp"

namespace chball {

// max |lambda| over the spectrum. Throws NumericalError if the eigen-solver
// does not converge.
double spectral_radius(const CMatrix& m);

// sqrt(spectral_radius(M* M)), with M* M handed to a self-adjoint solver.
double operator_norm(const CMatrix& m);

// Upper bound on dist(A, U(n)) with an explicit witness.
//
// With r = exp(rho(0, A(0)) / 2) and B the boost carrying 0 to A(0), the
// witness O = B^-1 A fixes the origin, so it is block diagonal
// diag(O_1, e^{i theta}) with O_1 in U(n). Then
//     ||A - O|| <= ||B^-1 - Id|| ||A|| <= (r - 1) r.
struct UnitaryDistanceCertificate {
  CMatrix witness;
  double actual;  // ||A - witness||
  double bound;   // r (r - 1)
  double r;

  Complex phase() const { return witness(witness.rows() - 1, witness.cols() - 1); }
};

// Throws ValidationError if B^-1 A does not fix the origin.
UnitaryDistanceCertificate dist_to_unitary(const ComplexIsometry& a);

// r = exp(rho(0, A(0)) / 2) >= 1.
double displacement_parameter(const ComplexIsometry& a);

struct PowerBoundCheck {
  double lhs;  // ||A^q - B^q||
  double rhs;  // (r^q - 1)/(r - 1) ||A - B||
  bool holds;  // lhs <= rhs + kPowerBoundSlack
};

inline constexpr double kPowerBoundSlack = 1e-9;

// (r^q - 1)/(r - 1), replaced by its limit q when |r - 1| < 1e-12.
double geometric_sum(double r, std::int64_t q);

// B is an (n+1)x(n+1) origin-stabilizing unitary diag(B_1, b) or an n x n
// block (embedded with last entry 1). Throws InvalidInput for q < 1 or a
// non-unitary / non-block B.
PowerBoundCheck power_difference_bound_check(const ComplexIsometry& a, const CMatrix& b,
                                             std::int64_t q);

// ||A|| ||A - Id||. A measurement; it says nothing about discreteness.
double jorgensen_quantity(const ComplexIsometry& a);

}  // namespace chball
