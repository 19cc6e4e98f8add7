#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "chball/errors.hpp"
#include "chball/isometry.hpp"
#include "chball/norms.hpp"
#include "generators.hpp"

using namespace chball;
using chball::testing::random_ball_point;
using chball::testing::random_complex_vector;

namespace {

CVector unit(int n, int k) {
  CVector v = CVector::Zero(n);
  v(k) = 1.0;
  return v;
}

// Scales a unitary block into SU(n,1) form diag(U, 1) / det^(1/(n+1)).
CMatrix su_elliptic(const CMatrix& u) {
  const CMatrix m = embed_block(u);
  const Complex root = std::pow(m.determinant(), 1.0 / static_cast<double>(m.rows()));
  return m / root;
}

// I + i t xi xi* J with xi null: unipotent, J-unitary, det 1.
CMatrix unipotent(int n, double t) {
  CVector xi = CVector::Zero(n + 1);
  xi(0) = 1.0;
  xi(n) = 1.0;
  const CMatrix j = SignatureForm(n).matrix();
  return CMatrix::Identity(n + 1, n + 1) + Complex(0.0, t) * xi * xi.adjoint() * j;
}

}  // namespace

TEST_CASE("verify_su accepts the identity and classifies it") {
  for (int n = 1; n <= 5; ++n) {
    const ComplexIsometry id = verify_su(CMatrix::Identity(n + 1, n + 1));
    CHECK(id.n() == n);
    CHECK(id.unitarity_residual() == 0.0);
    CHECK(classify(id) == IsometryClass::Identity);
  }
}

TEST_CASE("verify_su rejects broken matrices") {
  CMatrix m = CMatrix::Identity(3, 3);
  m(0, 0) = 1.1;
  try {
    verify_su(m);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.invariant()) == "j-unitarity");
    CHECK(e.residual() > 0.1);
  }

  // J-unitary but det = i.
  CMatrix phase = CMatrix::Identity(3, 3);
  phase(0, 0) = Complex(0.0, 1.0);
  try {
    verify_su(phase);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.invariant()) == "determinant");
  }

  CHECK_THROWS_AS(verify_su(CMatrix::Identity(3, 2)), InvalidInput);
  CHECK_THROWS_AS(verify_su(CMatrix::Identity(1, 1)), InvalidInput);
  CMatrix nan = CMatrix::Identity(3, 3);
  nan(1, 1) = std::nan("");
  CHECK_THROWS_AS(verify_su(nan), InvalidInput);
}

TEST_CASE("boost(2, e_n) is the block matrix with 5/4 and 3/4") {
  const ComplexIsometry b = boost(2.0, unit(2, 1));
  CMatrix expected(3, 3);
  expected << 1.0, 0.0, 0.0, 0.0, 1.25, 0.75, 0.0, 0.75, 1.25;
  CHECK((b.mat() - expected).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK((axis_boost_matrix(2, 2.0) - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("boost along e_1 moves the origin along e_1") {
  for (int n = 1; n <= 5; ++n) {
    for (const double r : {1.001, 1.5, 2.0, 10.0}) {
      const ComplexIsometry b = boost(r, unit(n, 0));
      const BallPoint image = apply(b, BallPoint::origin(n));
      CVector expected = CVector::Zero(n);
      expected(0) = (r * r - 1.0) / (r * r + 1.0);
      REQUIRE((image.coords() - expected).norm() <= 1e-14);
      REQUIRE(bergman_distance(BallPoint::origin(n), image) == doctest::Approx(2.0 * std::log(r)).epsilon(1e-12));
    }
  }
}

TEST_CASE("boost norms and eigenvalues") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = chball::testing::random_dimension(rng, 1, 6);
    const double r = 1.0 + std::uniform_real_distribution<double>(1e-3, 5.0)(rng);
    const CVector dir = random_complex_vector(n, rng).normalized();
    const ComplexIsometry b = boost(r, dir);

    REQUIRE(operator_norm(b.mat()) == doctest::Approx(r).epsilon(1e-12));
    const CMatrix id = CMatrix::Identity(n + 1, n + 1);
    REQUIRE(operator_norm(b.inverse().mat() - id) == doctest::Approx(r - 1.0).epsilon(1e-10));

    const BallPoint image = apply(b, BallPoint::origin(n));
    REQUIRE((image.coords() - dir * ((r * r - 1.0) / (r * r + 1.0))).norm() <= 1e-13);

    // Eigenvalues {1 (n-1 times), r, 1/r}; B is Hermitian.
    Eigen::SelfAdjointEigenSolver<CMatrix> es(b.mat());
    std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + n + 1);
    std::vector<double> expected(n - 1, 1.0);
    expected.push_back(r);
    expected.push_back(1.0 / r);
    std::sort(expected.begin(), expected.end());
    for (int i = 0; i <= n; ++i) REQUIRE(ev[i] == doctest::Approx(expected[i]).epsilon(1e-10));
  }
}

TEST_CASE("boost rejects bad parameters") {
  CHECK_THROWS_AS(boost(1.0 + 1e-15, unit(2, 0)), InvalidInput);
  CHECK_THROWS_AS(boost(1.0, unit(2, 0)), InvalidInput);
  CHECK_THROWS_AS(boost(0.5, unit(2, 0)), InvalidInput);
  CVector longer = unit(2, 0) * (1.0 + 1e-9);
  CHECK_THROWS_AS(boost(2.0, longer), InvalidInput);
  CHECK_NOTHROW(boost(BoostParams{2.0, unit(3, 2)}));
}

TEST_CASE("rotation_to_axis") {
  CHECK(rotation_to_axis(unit(3, 0)).isApprox(CMatrix::Identity(3, 3), 1e-15));

  const CMatrix u = rotation_to_axis(unit(3, 1));
  CHECK((u.col(0) - unit(3, 1)).norm() <= 1e-15);
  CHECK((u.adjoint() * u - CMatrix::Identity(3, 3)).norm() <= 1e-12);
  // Permutation-phase: every entry has modulus 0 or 1.
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double a = std::abs(u(i, j));
      CHECK((a <= 1e-15 || std::abs(a - 1.0) <= 1e-15));
    }
  }

  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = chball::testing::random_dimension(rng, 1, 7);
    const CVector w = random_complex_vector(n, rng).normalized();
    const CMatrix v = rotation_to_axis(w);
    REQUIRE((v.col(0) - w).norm() <= 1e-12);
    REQUIRE((v.adjoint() * v - CMatrix::Identity(n, n)).norm() <= 1e-12);
  }
  CHECK_THROWS_AS(rotation_to_axis(CVector::Zero(3)), InvalidInput);
}

TEST_CASE("apply preserves Bergman distance") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = chball::testing::random_dimension(rng, 1, 4);
    const SampledIsometry a = sample_isometry(n, 1.5, rng);
    const BallPoint p = random_ball_point(n, rng, 0.9);
    const BallPoint q = random_ball_point(n, rng, 0.9);
    const double before = bergman_distance(p, q);
    const double after = bergman_distance(apply(a.isometry, p), apply(a.isometry, q));
    REQUIRE(std::abs(after - before) <= 1e-9);
  }
}

TEST_CASE("identity acts trivially") {
  std::mt19937_64 rng(24);
  const ComplexIsometry id = verify_su(CMatrix::Identity(4, 4));
  for (int trial = 0; trial < 50; ++trial) {
    const BallPoint p = random_ball_point(3, rng);
    REQUIRE((apply(id, p).coords() - p.coords()).norm() <= 1e-15);
  }
}

TEST_CASE("group closure and inverse") {
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = chball::testing::random_dimension(rng, 1, 5);
    const ComplexIsometry a = sample_isometry(n, 1.0, rng).isometry;
    const ComplexIsometry b = sample_isometry(n, 1.0, rng).isometry;
    const ComplexIsometry ab = compose(a, b);
    REQUIRE(ab.unitarity_residual() <= 10.0 * kSuTolerance);
    const CMatrix id = CMatrix::Identity(n + 1, n + 1);
    REQUIRE((compose(a, a.inverse()).mat() - id).norm() <= 1e-10);
  }
}

TEST_CASE("classify") {
  SUBCASE("boost is loxodromic with eigenvalues 2 and 1/2") {
    const Classification c = classify_detailed(boost(2.0, unit(2, 0)));
    CHECK(c.kind == IsometryClass::Loxodromic);
    std::vector<double> moduli;
    for (int i = 0; i < c.eigenvalues.size(); ++i) moduli.push_back(std::abs(c.eigenvalues(i)));
    std::sort(moduli.begin(), moduli.end());
    CHECK(moduli[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(moduli[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(moduli[2] == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("short translations stay loxodromic") {
    for (const double r : {1.0 + 1e-6, 1.0 + 1e-4, 1.01}) {
      CHECK(classify(boost(r, unit(3, 1))) == IsometryClass::Loxodromic);
    }
  }
  SUBCASE("origin stabilizers are elliptic") {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
      const int n = 1 + static_cast<int>(seed % 4);
      REQUIRE(classify(verify_su(su_elliptic(random_unitary(n, seed)))) == IsometryClass::Elliptic);
    }
  }
  SUBCASE("unipotent is parabolic") {
    for (int n = 1; n <= 4; ++n) {
      for (const double t : {0.1, 1.0, 3.0}) {
        REQUIRE(classify(verify_su(unipotent(n, t))) == IsometryClass::Parabolic);
      }
    }
  }
  SUBCASE("classification survives conjugation") {
    std::mt19937_64 rng(26);
    int compared = 0;
    for (int trial = 0; trial < 200; ++trial) {
      const int n = chball::testing::random_dimension(rng, 1, 4);
      const ComplexIsometry w = sample_isometry(n, 0.7, rng).isometry;
      ComplexIsometry a = verify_su(CMatrix::Identity(n + 1, n + 1));
      switch (trial % 3) {
        case 0: a = sample_isometry(n, 2.0, rng).isometry; break;
        case 1: a = verify_su(su_elliptic(random_unitary(n, rng))); break;
        default: a = verify_su(unipotent(n, 0.5)); break;
      }
      const IsometryClass before = classify(a);
      const Classification detail = classify_detailed(compose(compose(w, a), w.inverse()));
      const IsometryClass after = detail.kind;
      INFO("trial " << trial << " cond " << detail.eigenbasis_condition << " growth " << detail.growth_ratio
                    << " max|lambda| - 1 " << detail.eigenvalues.cwiseAbs().maxCoeff() - 1.0);
      if (before == IsometryClass::NumericallyAmbiguous || after == IsometryClass::NumericallyAmbiguous) continue;
      ++compared;
      REQUIRE(before == after);
    }
    CHECK(compared >= 150);
  }
}

TEST_CASE("random_unitary") {
  const CMatrix one = random_unitary(1, 7);
  CHECK(std::abs(std::abs(one(0, 0)) - 1.0) <= 1e-12);

  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const int n = 1 + static_cast<int>(seed % 6);
    const CMatrix u = random_unitary(n, seed);
    REQUIRE((u.adjoint() * u - CMatrix::Identity(n, n)).norm() <= 1e-12);
    REQUIRE(std::abs(std::abs(u.determinant()) - 1.0) <= 1e-12);
    REQUIRE(u == random_unitary(n, seed));
  }
  CHECK(random_unitary(3, 1) != random_unitary(3, 2));
}

TEST_CASE("Haar sampling: first-column modulus has the right mean") {
  // For Haar U(n), |U_11|^2 ~ Beta(1, n - 1) with mean 1/n.
  std::mt19937_64 rng(27);
  const int n = 4;
  double sum = 0.0;
  const int count = 4000;
  for (int i = 0; i < count; ++i) sum += std::norm(random_unitary(n, rng)(0, 0));
  CHECK(sum / count == doctest::Approx(1.0 / n).epsilon(0.05));
}

TEST_CASE("sample_isometry has norm e^s") {
  std::mt19937_64 rng(28);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = chball::testing::random_dimension(rng, 1, 5);
    const SampledIsometry a = sample_isometry(n, 2.0, rng);
    REQUIRE(a.s >= 0.0);
    REQUIRE(a.s <= 2.0);
    REQUIRE(operator_norm(a.isometry.mat()) == doctest::Approx(std::exp(a.s)).epsilon(1e-10));
    REQUIRE(std::abs(a.isometry.mat().determinant() - 1.0) <= kDeterminantTolerance);
  }
  const ComplexIsometry x = random_isometry(3, 1.0, 99);
  const ComplexIsometry y = random_isometry(3, 1.0, 99);
  CHECK(x.mat() == y.mat());
}
