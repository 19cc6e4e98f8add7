#pragma once

// Holomorphic isometries of the ball as SU(n,1) matrices.

#include <cstdint>
#include <random>

#include "chball/hermitian.hpp"
#include "chball/linalg.hpp"

namespace chball {

inline constexpr double kSuTolerance = 1e-10;
inline constexpr double kDeterminantTolerance = 1e-8;

// An (n+1)x(n+1) matrix with A* J A = J and det A = 1, within tolerance.
// Only verify_su (and the constructors in this header that call it) produce
// instances.
class ComplexIsometry {
 public:
  const CMatrix& mat() const noexcept { return mat_; }
  const SignatureForm& form() const noexcept { return form_; }
  int n() const noexcept { return form_.n(); }

  // J A* J, exact for J-unitary matrices.
  ComplexIsometry inverse() const;

  // Residuals measured at validation time.
  double unitarity_residual() const noexcept { return unitarity_residual_; }
  double determinant_residual() const noexcept { return determinant_residual_; }

 private:
  friend ComplexIsometry verify_su(const CMatrix&, double);
  ComplexIsometry(CMatrix mat, SignatureForm form, double unitarity, double det)
      : mat_(std::move(mat)), form_(form), unitarity_residual_(unitarity),
        determinant_residual_(det) {}

  CMatrix mat_;
  SignatureForm form_;
  double unitarity_residual_;
  double determinant_residual_;
};

// Residuals of the two SU(n,1) invariants without throwing.
struct SuResiduals {
  double unitarity;    // ||A* J A - J|| / ||J||
  double determinant;  // |det A - 1|
};

SuResiduals su_residuals(const CMatrix& mat);

// Throws InvalidInput for a non-square or too-small matrix, ValidationError
// naming the failing invariant otherwise. The determinant check uses the
// fixed kDeterminantTolerance.
ComplexIsometry verify_su(const CMatrix& mat, double tol = kSuTolerance);

// Product of validated isometries, revalidated at 10x tolerance.
ComplexIsometry compose(const ComplexIsometry& a, const ComplexIsometry& b);

BallPoint apply(const ComplexIsometry& a, const BallPoint& p);

// Translation parameter r = exp(rho/2) > 1 and a unit direction in C^n.
struct BoostParams {
  double r;
  CVector direction;
};

// The axis-aligned boost: identity on the first n-1 coordinates and the
// hyperbolic block [[c, s], [s, c]], c = (r^2+1)/2r, s = (r^2-1)/2r, on the
// last two. Moves the origin to (0, ..., 0, (r^2-1)/(r^2+1)).
CMatrix axis_boost_matrix(int n, double r);

// U B0(r) U^-1 with U unitary, U e_n = direction. Maps the origin to the point
// at Bergman distance 2 ln r along direction. Throws InvalidInput for r <= 1
// (to within machine precision) or a non-unit direction.
ComplexIsometry boost(const BoostParams& params);
ComplexIsometry boost(double r, const CVector& direction);

// U in U(n) with U e_1 = w: a phase times a complex Householder reflection.
CMatrix rotation_to_axis(const CVector& w);

// diag(U, 1) for an n x n block U.
CMatrix embed_block(const CMatrix& block, Complex last = Complex(1.0, 0.0));

enum class IsometryClass { Loxodromic, Parabolic, Elliptic, Identity, NumericallyAmbiguous };

const char* to_string(IsometryClass c) noexcept;

inline constexpr double kClassifyTolerance = 1e-8;
inline constexpr double kEigenbasisConditionLimit = 1e8;

struct Classification {
  IsometryClass kind;
  CVector eigenvalues;
  double eigenbasis_condition;  // condition number of the normalized eigenvector matrix
  double growth_ratio;          // ||A^(2k)|| / ||A^k|| at the largest k tried
};

Classification classify_detailed(const ComplexIsometry& a, double tol = kClassifyTolerance);
IsometryClass classify(const ComplexIsometry& a, double tol = kClassifyTolerance);

// Haar-random unitary from the QR factorization of a complex Gaussian matrix,
// with R's diagonal phases moved into Q.
CMatrix random_unitary(int n, std::mt19937_64& rng);
CMatrix random_unitary(int n, std::uint64_t seed);

struct SampledIsometry {
  ComplexIsometry isometry;
  double s;  // boost log-parameter; ||isometry|| = e^s
};

// det-normalized diag(U1,1) B0(e^s) diag(U2,1) with s uniform in [0, s_max].
SampledIsometry sample_isometry(int n, double s_max, std::mt19937_64& rng);
ComplexIsometry random_isometry(int n, double s_max, std::uint64_t seed);

namespace detail {
// boost() without the r > 1 guard; r = 1 gives the identity.
CMatrix boost_matrix(double r, const CVector& direction);
}  // namespace detail

}  // namespace chball
