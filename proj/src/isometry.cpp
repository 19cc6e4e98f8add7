#include "chball/isometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "chball/errors.hpp"
#include "chball/norms.hpp"

namespace chball {

SuResiduals su_residuals(const CMatrix& mat) {
  const SignatureForm form(static_cast<int>(mat.rows()) - 1);
  const CMatrix j = form.matrix();
  return {operator_norm(mat.adjoint() * j * mat - j),
          std::abs(mat.determinant() - Complex(1.0, 0.0))};
}

ComplexIsometry verify_su(const CMatrix& mat, double tol) {
  if (mat.rows() != mat.cols()) {
    throw InvalidInput("isometry matrix must be square, got " + std::to_string(mat.rows()) + "x" +
                       std::to_string(mat.cols()));
  }
  if (mat.rows() < 2) throw InvalidInput("isometry matrix must be at least 2x2");
  if (!mat.allFinite()) throw InvalidInput("isometry matrix has non-finite entries");

  const SuResiduals res = su_residuals(mat);
  const bool unitary_ok = res.unitarity <= tol;
  const bool det_ok = res.determinant <= kDeterminantTolerance;
  if (!unitary_ok || !det_ok) {
    std::ostringstream msg;
    msg.precision(3);
    msg << "not in SU(" << mat.rows() - 1 << ",1):";
    if (!unitary_ok) msg << " ||A*JA - J|| = " << res.unitarity << " > " << tol << ";";
    if (!det_ok) msg << " |det A - 1| = " << res.determinant << " > " << kDeterminantTolerance << ";";
    if (!unitary_ok) throw ValidationError("j-unitarity", res.unitarity, msg.str());
    throw ValidationError("determinant", res.determinant, msg.str());
  }
  return ComplexIsometry(mat, SignatureForm(static_cast<int>(mat.rows()) - 1), res.unitarity,
                         res.determinant);
}

ComplexIsometry ComplexIsometry::inverse() const {
  const CMatrix j = form_.matrix();
  return verify_su(j * mat_.adjoint() * j, 10.0 * kSuTolerance);
}

ComplexIsometry compose(const ComplexIsometry& a, const ComplexIsometry& b) {
  if (a.n() != b.n()) throw InvalidInput("composing isometries of different dimension");
  return verify_su(a.mat() * b.mat(), 10.0 * kSuTolerance);
}

BallPoint apply(const ComplexIsometry& a, const BallPoint& p) {
  if (a.n() != p.n()) throw InvalidInput("isometry and point have different dimension");
  try {
    return project_to_ball(HermitianVector(a.mat() * standard_lift(p).coords()));
  } catch (const NotInBall& e) {
    throw ValidationError("action", std::numeric_limits<double>::quiet_NaN(),
                          std::string("matrix does not preserve the ball: ") + e.what());
  }
}

CMatrix axis_boost_matrix(int n, double r) {
  if (n < 1) throw InvalidInput("boost dimension must be >= 1");
  if (!(r > 0.0)) throw InvalidInput("boost parameter must be positive");
  CMatrix b = CMatrix::Identity(n + 1, n + 1);
  const double c = (r * r + 1.0) / (2.0 * r);
  const double s = (r * r - 1.0) / (2.0 * r);
  b(n - 1, n - 1) = c;
  b(n - 1, n) = s;
  b(n, n - 1) = s;
  b(n, n) = c;
  return b;
}

CMatrix embed_block(const CMatrix& block, Complex last) {
  const Eigen::Index n = block.rows();
  CMatrix m = CMatrix::Zero(n + 1, n + 1);
  m.topLeftCorner(n, n) = block;
  m(n, n) = last;
  return m;
}

CMatrix rotation_to_axis(const CVector& w) {
  const double len = w.norm();
  if (w.size() < 1 || len == 0.0) throw InvalidInput("rotation_to_axis of the zero vector");
  const CVector unit = w / len;
  const Eigen::Index n = unit.size();

  const Complex phase = std::abs(unit(0)) > 0.0 ? unit(0) / std::abs(unit(0)) : Complex(1.0, 0.0);
  CVector u = unit;
  u(0) -= phase;
  const double u2 = u.squaredNorm();
  CMatrix h = CMatrix::Identity(n, n);
  if (u2 > 1e-30) h -= (2.0 / u2) * u * u.adjoint();
  // h swaps unit and phase * e_1, so (phase * h) e_1 = unit.
  return phase * h;
}

namespace {

void check_boost_params(double r, const CVector& direction) {
  if (!(r - 1.0 > 1e-14) || !std::isfinite(r)) {
    throw InvalidInput("boost needs r > 1, got r - 1 = " + std::to_string(r - 1.0));
  }
  if (direction.size() < 1) throw InvalidInput("boost direction must be non-empty");
  if (std::abs(direction.norm() - 1.0) > 1e-12) {
    throw InvalidInput("boost direction must be a unit vector");
  }
}

// Unitary U with U e_n = direction.
CMatrix direction_frame(const CVector& direction) {
  const Eigen::Index n = direction.size();
  CMatrix swap = CMatrix::Identity(n, n);
  if (n > 1) {
    swap(0, 0) = 0.0;
    swap(n - 1, n - 1) = 0.0;
    swap(0, n - 1) = 1.0;
    swap(n - 1, 0) = 1.0;
  }
  return rotation_to_axis(direction) * swap;
}

}  // namespace

namespace detail {

CMatrix boost_matrix(double r, const CVector& direction) {
  const int n = static_cast<int>(direction.size());
  const CMatrix frame = embed_block(direction_frame(direction));
  return frame * axis_boost_matrix(n, r) * frame.adjoint();
}

}  // namespace detail

ComplexIsometry boost(const BoostParams& params) {
  check_boost_params(params.r, params.direction);
  return verify_su(detail::boost_matrix(params.r, params.direction));
}

ComplexIsometry boost(double r, const CVector& direction) { return boost(BoostParams{r, direction}); }

const char* to_string(IsometryClass c) noexcept {
  switch (c) {
    case IsometryClass::Loxodromic: return "loxodromic";
    case IsometryClass::Parabolic: return "parabolic";
    case IsometryClass::Elliptic: return "elliptic";
    case IsometryClass::Identity: return "identity";
    case IsometryClass::NumericallyAmbiguous: return "numerically-ambiguous";
  }
  return "?";
}

namespace {

constexpr double kPolynomialGrowth = 1.5;
constexpr double kSensitivityFactor = 100.0;
constexpr double kGrowthCeiling = 1e8;

struct PowerGrowth {
  double ratio = 1.0;       // ||A^(2k)|| / ||A^k|| at the last k
  double final_norm = 1.0;  // ||A^(2k)||
};

// Repeated squaring up to k = 2^squarings, stopping once the norm passes `ceiling`.
// Bounded powers give a ratio near 1; a unipotent part gives 2 or 4. Past
// ~1e8 the squares of a unipotent lose their cancellation, hence the cap.
PowerGrowth power_growth(const CMatrix& a, int squarings, double ceiling) {
  CMatrix p = a;
  PowerGrowth g;
  double previous = operator_norm(p);
  for (int j = 0; j < squarings; ++j) {
    p = p * p;
    const double current = operator_norm(p);
    g.ratio = current / previous;
    g.final_norm = current;
    previous = current;
    if (!(current < ceiling)) break;
  }
  return g;
}

// Does some eigenspace contain a vector with negative self-pairing? Eigenvalues
// are clustered; each cluster's eigenvectors are orthonormalized, keeping only
// numerically independent directions, and the form is restricted to that span.
bool has_negative_eigendirection(const CVector& values, const CMatrix& vectors, const CMatrix& j) {
  const Eigen::Index size = values.size();
  std::vector<bool> used(size, false);
  for (Eigen::Index i = 0; i < size; ++i) {
    if (used[i]) continue;
    std::vector<Eigen::Index> cluster;
    for (Eigen::Index k = i; k < size; ++k) {
      if (!used[k] && std::abs(values(k) - values(i)) <= 1e-6) {
        used[k] = true;
        cluster.push_back(k);
      }
    }
    CMatrix span(size, static_cast<Eigen::Index>(cluster.size()));
    for (std::size_t c = 0; c < cluster.size(); ++c) span.col(c) = vectors.col(cluster[c]).normalized();

    Eigen::JacobiSVD<CMatrix> svd(span, Eigen::ComputeThinU);
    const auto& sigma = svd.singularValues();
    Eigen::Index rank = 0;
    while (rank < sigma.size() && sigma(rank) > 1e-6 * sigma(0)) ++rank;
    const CMatrix basis = svd.matrixU().leftCols(rank);
    const CMatrix gram = basis.adjoint() * j * basis;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(gram, Eigen::EigenvaluesOnly);
    if (es.eigenvalues()(0) < -1e-8) return true;
  }
  return false;
}

}  // namespace

Classification classify_detailed(const ComplexIsometry& a, double tol) {
  const CMatrix& m = a.mat();
  const Eigen::Index size = m.rows();
  Classification out{IsometryClass::NumericallyAmbiguous, CVector(), 0.0, 1.0};

  Eigen::ComplexEigenSolver<CMatrix> es(m, true);
  if (es.info() != Eigen::Success) throw NumericalError("eigen-decomposition failed in classify");
  out.eigenvalues = es.eigenvalues();

  CMatrix v = es.eigenvectors();
  for (Eigen::Index c = 0; c < size; ++c) v.col(c).normalize();
  Eigen::JacobiSVD<CMatrix> svd(v);
  const auto& sigma = svd.singularValues();
  out.eigenbasis_condition =
      sigma(size - 1) > 0.0 ? sigma(0) / sigma(size - 1) : std::numeric_limits<double>::infinity();

  if (operator_norm(m - CMatrix::Identity(size, size)) <= tol) {
    out.kind = IsometryClass::Identity;
    return out;
  }
  // An eigenvalue off the unit circle counts only if the excess beats its own
  // perturbation bound kappa(lambda) eps ||A||; a split Jordan block does not.
  const Eigen::FullPivLU<CMatrix> lu(v);
  const CMatrix left = lu.isInvertible() ? CMatrix(lu.inverse()) : CMatrix();
  const double scale = operator_norm(m) * std::numeric_limits<double>::epsilon();
  bool off_circle = false;
  bool trusted = false;
  for (Eigen::Index i = 0; i < size; ++i) {
    const double excess = std::abs(out.eigenvalues(i)) - 1.0;
    if (excess <= tol) continue;
    off_circle = true;
    const double kappa = left.size() > 0 ? left.row(i).norm() : std::numeric_limits<double>::infinity();
    if (excess > kSensitivityFactor * kappa * scale) trusted = true;
  }
  // A diagonalizable A has ||A^k|| <= cond(V) for all k, so growth only
  // counts once the powers leave that bound.
  const double cond = out.eigenbasis_condition;
  // Rounding moves unit eigenvalues by about cond eps ||A||, which k-th powers
  // amplify, so k is capped where that drift stays below 1e-3.
  const double drift = cond * scale;
  const int squarings =
      std::clamp(drift > 0.0 ? static_cast<int>(std::log2(1e-3 / drift)) : 40, 20, 40);
  const PowerGrowth growth = power_growth(m, squarings, std::min(kGrowthCeiling, 4.0 * cond));
  out.growth_ratio = growth.ratio;
  const bool unbounded = growth.ratio >= kPolynomialGrowth &&
                         (cond > kGrowthCeiling / 10.0 ||
                          growth.final_norm > 2.0 * out.eigenbasis_condition);
  if (trusted) {
    out.kind = IsometryClass::Loxodromic;
    return out;
  }
  if (off_circle) {
    if (unbounded) out.kind = IsometryClass::Parabolic;
    return out;
  }

  if (unbounded) {
    out.kind = IsometryClass::Parabolic;
  } else if (out.eigenbasis_condition <= kEigenbasisConditionLimit &&
             has_negative_eigendirection(out.eigenvalues, es.eigenvectors(), a.form().matrix())) {
    out.kind = IsometryClass::Elliptic;
  }
  return out;
}

IsometryClass classify(const ComplexIsometry& a, double tol) { return classify_detailed(a, tol).kind; }

CMatrix random_unitary(int n, std::mt19937_64& rng) {
  if (n < 1) throw InvalidInput("random_unitary needs n >= 1");
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMatrix z(n, n);
  for (int c = 0; c < n; ++c) {
    for (int r = 0; r < n; ++r) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      z(r, c) = Complex(re, im);
    }
  }
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ();
  const CMatrix rmat = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < n; ++c) {
    const Complex d = rmat(c, c);
    if (std::abs(d) > 0.0) q.col(c) *= d / std::abs(d);
  }
  return q;
}

CMatrix random_unitary(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_unitary(n, rng);
}

SampledIsometry sample_isometry(int n, double s_max, std::mt19937_64& rng) {
  if (n < 1) throw InvalidInput("random_isometry needs n >= 1");
  if (!(s_max > 0.0)) throw InvalidInput("random_isometry needs s_max > 0");
  const CMatrix u1 = embed_block(random_unitary(n, rng));
  const CMatrix u2 = embed_block(random_unitary(n, rng));
  std::uniform_real_distribution<double> uniform(0.0, s_max);
  const double s = uniform(rng);

  CMatrix m = u1 * axis_boost_matrix(n, std::exp(s)) * u2;
  // Principal (n+1)-th root of det: the root of smallest argument.
  const Complex det = m.determinant();
  const Complex root = std::polar(std::pow(std::abs(det), 1.0 / (n + 1)), std::arg(det) / (n + 1));
  m /= root;
  return {verify_su(m), s};
}

ComplexIsometry random_isometry(int n, double s_max, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sample_isometry(n, s_max, rng).isometry;
}

}  // namespace chball
