#include "chball/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chball/errors.hpp"

namespace chball {

SignatureForm::SignatureForm(int n) : n_(n) {
  if (n < 1) throw InvalidInput("signature form needs n >= 1, got " + std::to_string(n));
}

CMatrix SignatureForm::matrix() const {
  CMatrix j = CMatrix::Identity(dim(), dim());
  j(n_, n_) = -1.0;
  return j;
}

namespace {

int dimension_from_length(Eigen::Index len) {
  if (len < 2) {
    throw InvalidInput("a vector of C^{n,1} needs at least 2 coordinates, got " +
                       std::to_string(len));
  }
  return static_cast<int>(len) - 1;
}

}  // namespace

HermitianVector::HermitianVector(CVector coords)
    : coords_(std::move(coords)), form_(dimension_from_length(coords_.size())) {}

HermitianVector::HermitianVector(CVector coords, SignatureForm form)
    : coords_(std::move(coords)), form_(form) {
  if (coords_.size() != form_.dim()) {
    throw InvalidInput("vector has " + std::to_string(coords_.size()) +
                       " coordinates but the form has dimension " + std::to_string(form_.dim()));
  }
}

BallPoint::BallPoint(CVector coords) : coords_(std::move(coords)) {
  if (coords_.size() < 1) throw InvalidInput("ball point needs n >= 1 coordinates");
  const double r2 = coords_.squaredNorm();
  if (!(r2 < 1.0 - kBoundaryMargin)) {
    throw NotInBall("point with |z|^2 = " + std::to_string(r2) + " is not inside the unit ball");
  }
}

BallPoint BallPoint::origin(int n) {
  if (n < 1) throw InvalidInput("ball dimension must be >= 1");
  return BallPoint(CVector::Zero(n));
}

const char* to_string(PointClass c) noexcept {
  switch (c) {
    case PointClass::Negative: return "negative";
    case PointClass::Null: return "null";
    case PointClass::Positive: return "positive";
  }
  return "?";
}

Complex herm_product(const HermitianVector& z, const HermitianVector& w) {
  if (!(z.form() == w.form())) {
    throw InvalidInput("Hermitian product of vectors from C^{" + std::to_string(z.n()) +
                       ",1} and C^{" + std::to_string(w.n()) + ",1}");
  }
  const int n = z.n();
  // Eigen's dot() conjugates its first argument: a.dot(b) = sum conj(a_i) b_i.
  const Complex spatial = w.coords().head(n).dot(z.coords().head(n));
  return spatial - z[n] * std::conj(w[n]);
}

HermitianVector standard_lift(const BallPoint& p) {
  CVector v(p.n() + 1);
  v.head(p.n()) = p.coords();
  v(p.n()) = 1.0;
  return HermitianVector(std::move(v));
}

BallPoint project_to_ball(const HermitianVector& v) {
  const int n = v.n();
  const Complex last = v[n];
  if (last == Complex(0.0, 0.0)) {
    throw NotInBall("vector with vanishing last coordinate has no ball representative");
  }
  if (!(herm_product(v, v).real() < 0.0)) {
    throw NotInBall("vector is not negative for the Hermitian form");
  }
  return BallPoint(v.coords().head(n) / last);
}

PointClass point_class(const HermitianVector& v, double tol) {
  const double scale = v.coords().squaredNorm();
  if (scale == 0.0) throw InvalidInput("point_class of the zero vector");
  const double self = herm_product(v, v).real();
  if (self < -tol * scale) return PointClass::Negative;
  if (std::abs(self) <= tol * scale) return PointClass::Null;
  return PointClass::Positive;
}

double bergman_distance(const BallPoint& x, const BallPoint& y) {
  if (x.n() != y.n()) throw InvalidInput("distance between points of different dimension");
  const int n = x.n();
  const CVector d = y.coords() - x.coords();
  const CVector& a = x.coords();

  // |x|^2|y|^2 - |<x,y>|^2 = |x ^ d|^2 (Lagrange identity with y = x + d).
  double wedge = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) wedge += std::norm(a(i) * d(j) - a(j) * d(i));
  }
  const double numerator = std::max(0.0, d.squaredNorm() - wedge);
  const double denominator = (1.0 - x.norm_squared()) * (1.0 - y.norm_squared());
  return 2.0 * std::asinh(std::sqrt(numerator / denominator));
}

double bergman_distance(const HermitianVector& x, const HermitianVector& y) {
  const double xx = herm_product(x, x).real();
  const double yy = herm_product(y, y).real();
  if (!(xx < 0.0) || !(yy < 0.0)) throw NotInBall("distance needs negative lifts");
  const double cross = std::norm(herm_product(x, y));
  const double q = std::max(cross / (xx * yy), 1.0);
  return 2.0 * std::acosh(std::sqrt(q));
}

}  // namespace chball
