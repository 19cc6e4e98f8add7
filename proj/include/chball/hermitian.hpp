#pragma once

// Signature-(n,1) Hermitian geometry and the unit-ball model of complex
// hyperbolic n-space.
//
// A vector z in C^{n,1} is paired with w by
//     <z, w> = z_1 conj(w_1) + ... + z_n conj(w_n) - z_{n+1} conj(w_{n+1}).
// Negative vectors project to the open unit ball B^{2n} in C^n through the
// section z_{n+1} = 1, and the Bergman distance between two ball points is
//     cosh^2(rho/2) = <x,y><y,x> / (<x,x><y,y>)
// evaluated on any lifts.

#include <compare>

#include "chball/linalg.hpp"

namespace chball {

class SignatureForm {
 public:
  explicit SignatureForm(int n);

  int n() const noexcept { return n_; }
  int dim() const noexcept { return n_ + 1; }

  // diag(+1, ..., +1, -1)
  CMatrix matrix() const;

  bool operator==(const SignatureForm&) const = default;

 private:
  int n_;
};

class HermitianVector {
 public:
  // The form is inferred from the length: n = coords.size() - 1.
  explicit HermitianVector(CVector coords);
  HermitianVector(CVector coords, SignatureForm form);

  const CVector& coords() const noexcept { return coords_; }
  const SignatureForm& form() const noexcept { return form_; }
  int n() const noexcept { return form_.n(); }

  Complex operator[](int i) const { return coords_(i); }

 private:
  CVector coords_;
  SignatureForm form_;
};

class BallPoint {
 public:
  // Points with |z|^2 >= 1 - kBoundaryMargin are rejected with NotInBall.
  static constexpr double kBoundaryMargin = 1e-12;

  explicit BallPoint(CVector coords);

  static BallPoint origin(int n);

  const CVector& coords() const noexcept { return coords_; }
  int n() const noexcept { return static_cast<int>(coords_.size()); }
  double norm_squared() const { return coords_.squaredNorm(); }

 private:
  CVector coords_;
};

enum class PointClass { Negative, Null, Positive };

const char* to_string(PointClass c) noexcept;

inline constexpr double kDefaultPointClassTol = 1e-10;

Complex herm_product(const HermitianVector& z, const HermitianVector& w);

HermitianVector standard_lift(const BallPoint& p);

// Inverse of standard_lift up to projective scaling. Throws NotInBall when
// the last coordinate vanishes or the vector is not negative.
BallPoint project_to_ball(const HermitianVector& v);

// Sign of <v,v> against tol * |v|^2.
PointClass point_class(const HermitianVector& v, double tol = kDefaultPointClassTol);

// Bergman distance between interior points.
double bergman_distance(const BallPoint& x, const BallPoint& y);

// Same distance evaluated from arbitrary negative lifts via the cross-ratio
// (clamped to >= 1 before arccosh). Throws NotInBall for non-negative input.
double bergman_distance(const HermitianVector& x, const HermitianVector& y);

}  // namespace chball
