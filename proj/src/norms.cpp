#include "chball/norms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "chball/errors.hpp"

namespace chball {

CMatrix matrix_power(const CMatrix& m, std::int64_t k) {
  if (m.rows() != m.cols()) throw InvalidInput("matrix_power of a non-square matrix");
  if (k < 0) throw InvalidInput("matrix_power needs k >= 0");
  CMatrix result = CMatrix::Identity(m.rows(), m.cols());
  CMatrix base = m;
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

double unitarity_defect(const CMatrix& m) {
  return operator_norm(m.adjoint() * m - CMatrix::Identity(m.cols(), m.cols()));
}

double spectral_radius(const CMatrix& m) {
  if (m.rows() != m.cols()) throw InvalidInput("spectral_radius of a non-square matrix");
  if (m.size() == 0) return 0.0;
  Eigen::ComplexEigenSolver<CMatrix> es(m, false);
  if (es.info() != Eigen::Success) {
    throw NumericalError("eigenvalue solver did not converge on a " + std::to_string(m.rows()) +
                         "x" + std::to_string(m.cols()) + " matrix (||M||_F = " +
                         std::to_string(m.norm()) + ")");
  }
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double operator_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  const CMatrix gram = m.adjoint() * m;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(gram, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NumericalError("self-adjoint eigenvalue solver did not converge on M*M (||M||_F = " +
                         std::to_string(m.norm()) + ")");
  }
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

double displacement_parameter(const ComplexIsometry& a) {
  const BallPoint origin = BallPoint::origin(a.n());
  return std::exp(bergman_distance(origin, apply(a, origin)) / 2.0);
}

UnitaryDistanceCertificate dist_to_unitary(const ComplexIsometry& a) {
  const int n = a.n();
  const BallPoint origin = BallPoint::origin(n);
  const BallPoint image = apply(a, origin);
  const double r = std::exp(bergman_distance(origin, image) / 2.0);

  CMatrix b_inverse = CMatrix::Identity(n + 1, n + 1);
  const double t = image.coords().norm();
  if (t > 0.0) {
    const CMatrix j = a.form().matrix();
    b_inverse = j * detail::boost_matrix(r, image.coords() / t).adjoint() * j;
  }

  CMatrix witness = b_inverse * a.mat();
  const double off_block = std::max(witness.col(n).head(n).cwiseAbs().maxCoeff(),
                                    witness.row(n).head(n).cwiseAbs().maxCoeff());
  if (off_block > 1e-8 * std::max(1.0, operator_norm(a.mat()))) {
    throw ValidationError("origin-stabilization", off_block,
                          "B^-1 A does not fix the origin (off-block entry " +
                              std::to_string(off_block) + ")");
  }
  witness.col(n).head(n).setZero();
  witness.row(n).head(n).setZero();

  return {witness, operator_norm(a.mat() - witness), r * (r - 1.0), r};
}

double geometric_sum(double r, std::int64_t q) {
  if (q < 1) throw InvalidInput("geometric_sum needs q >= 1");
  if (std::abs(r - 1.0) < 1e-12) return static_cast<double>(q);
  return std::expm1(static_cast<double>(q) * std::log1p(r - 1.0)) / (r - 1.0);
}

PowerBoundCheck power_difference_bound_check(const ComplexIsometry& a, const CMatrix& b,
                                             std::int64_t q) {
  if (q < 1) throw InvalidInput("power_difference_bound_check needs q >= 1, got " + std::to_string(q));
  const int n = a.n();
  CMatrix full;
  if (b.rows() == n && b.cols() == n) {
    full = embed_block(b);
  } else if (b.rows() == n + 1 && b.cols() == n + 1) {
    full = b;
  } else {
    throw InvalidInput("unitary B has the wrong size for an SU(" + std::to_string(n) + ",1) element");
  }
  if (unitarity_defect(full) > 1e-10) throw InvalidInput("B is not unitary");
  const double off_block = std::max(full.col(n).head(n).cwiseAbs().maxCoeff(),
                                    full.row(n).head(n).cwiseAbs().maxCoeff());
  if (off_block > 1e-12) throw InvalidInput("B does not fix the origin");

  const double r = displacement_parameter(a);
  const double lhs = operator_norm(matrix_power(a.mat(), q) - matrix_power(full, q));
  const double rhs = geometric_sum(r, q) * operator_norm(a.mat() - full);
  return {lhs, rhs, lhs <= rhs + kPowerBoundSlack};
}

double jorgensen_quantity(const ComplexIsometry& a) {
  const CMatrix& m = a.mat();
  return operator_norm(m) * operator_norm(m - CMatrix::Identity(m.rows(), m.cols()));
}

}  // namespace chball
