#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "chball/approx.hpp"
#include "chball/errors.hpp"
#include "chball/isometry.hpp"
#include "chball/norms.hpp"
#include "oracles.hpp"

using namespace chball;
using oracle::brute_force_denominator;

namespace {

std::vector<double> random_angles(int m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> out(m);
  for (double& t : out) t = u(rng);
  return out;
}

}  // namespace

TEST_CASE("dirichlet_approx exact cases") {
  const RationalApprox half = dirichlet_approx({0.5}, 2.0);
  CHECK((half.q == 1 || half.q == 2));
  CHECK(half.certificate_holds());
  if (half.q == 2) {
    CHECK(half.p[0] == 1);
    CHECK(half.max_err == 0.0);
  }

  const RationalApprox third = dirichlet_approx({1.0 / 3.0}, 3.0);
  CHECK(third.q == 3);
  CHECK(third.p[0] == 1);
  CHECK(third.max_err <= 1e-16);
  // q = 1 meets the bound with equality (|1/3 - 0| = 1/3); q = 3 is the first exact one.
  CHECK(brute_force_denominator({1.0 / 3.0}, 3.0) == 1);
  for (std::int64_t q = 1; q <= 9; ++q) {
    const bool exact = std::abs(q / 3.0 - std::round(q / 3.0)) <= 1e-15;
    CHECK(exact == (q % 3 == 0));
  }

  const RationalApprox ends = dirichlet_approx({0.0, 1.0}, 5.0);
  CHECK(ends.q == 1);
  CHECK(ends.max_err == 0.0);
}

TEST_CASE("dirichlet_approx argument checks") {
  CHECK_THROWS_AS(dirichlet_approx({}, 2.0), InvalidInput);
  CHECK_THROWS_AS(dirichlet_approx({0.5}, 1.0), InvalidInput);
  CHECK_THROWS_AS(dirichlet_approx({1.5}, 2.0), InvalidInput);
  CHECK_THROWS_AS(dirichlet_approx({-0.1}, 2.0), InvalidInput);
  CHECK_THROWS_AS(dirichlet_approx({0.1, 0.2, 0.3, 0.4, 0.5, 0.6}, 17.0), ResourceLimit);
  CHECK_NOTHROW(dirichlet_approx({0.1, 0.2, 0.3, 0.4}, 17.0));
}

TEST_CASE("pigeonhole certificate against brute force") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> qdist(1.05, 10.0);
  int scans = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int m = 1 + trial % 4;
    const double Q = trial % 2 == 0 ? std::ceil(qdist(rng)) : qdist(rng);
    const std::vector<double> thetas = random_angles(m, rng);
    const RationalApprox ra = dirichlet_approx(thetas, Q);
    REQUIRE(ra.certificate_holds());
    REQUIRE(ra.q >= 1);
    REQUIRE(static_cast<double>(ra.q) <= std::pow(Q, m));
    REQUIRE(ra.max_err <= 1.0 / (static_cast<double>(ra.q) * Q) + 1e-15);
    for (std::size_t i = 0; i < thetas.size(); ++i) {
      REQUIRE(ra.p[i] >= 0);
      REQUIRE(ra.p[i] <= ra.q);
    }
    const std::int64_t oracle = brute_force_denominator(thetas, Q);
    REQUIRE(oracle >= 1);
    REQUIRE(oracle <= ra.q);
    if (ra.route == ApproxRoute::Scan) {
      ++scans;
      REQUIRE(ra.q == oracle);
    }
  }
  MESSAGE("scan fallbacks: " << scans);
}

TEST_CASE("finite_order_approx trivial and exact cases") {
  for (const SpectrumMode mode : {SpectrumMode::Projective, SpectrumMode::FullSpectrum}) {
    const FiniteOrderApprox id = finite_order_approx(CMatrix::Identity(3, 3), 17.0, mode);
    CHECK(id.q == 1);
    CHECK(id.err <= 1e-15);
    CHECK((id.B - CMatrix::Identity(3, 3)).norm() <= 1e-15);
  }

  CMatrix a = CMatrix::Identity(2, 2);
  a(0, 0) = std::polar(1.0, 2.0 * kPi / 3.0);
  const FiniteOrderApprox fo = finite_order_approx(a, 3.0, SpectrumMode::FullSpectrum);
  CHECK(fo.q == 3);
  CHECK(fo.err <= 1e-14);
  CHECK((fo.B - a).norm() <= 1e-14);

  CHECK_THROWS_AS(finite_order_approx(2.0 * CMatrix::Identity(2, 2), 17.0), InvalidInput);
  CHECK_THROWS_AS(finite_order_approx(CMatrix::Identity(2, 2), 1.0), InvalidInput);
}

TEST_CASE("finite_order_approx on Haar unitaries") {
  std::mt19937_64 rng(42);
  const double Q = 17.0;
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + trial % 5;
    const SpectrumMode mode = trial % 4 == 3 && n <= 4 ? SpectrumMode::FullSpectrum : SpectrumMode::Projective;
    const CMatrix a = random_unitary(n, rng);
    const FiniteOrderApprox fo = finite_order_approx(a, Q, mode);
    const int m = mode == SpectrumMode::Projective ? n - 1 : n;
    REQUIRE(fo.m == m);
    REQUIRE(static_cast<double>(fo.q) <= std::pow(Q, m));
    REQUIRE(fo.err <= 2.0 * kPi / (static_cast<double>(fo.q) * Q) + 1e-12);
    REQUIRE(std::abs(fo.err - fo.predicted_err) <= 1e-10);
    REQUIRE(unitarity_defect(fo.B) <= 1e-12);
    const CMatrix id = CMatrix::Identity(n, n);
    REQUIRE(operator_norm(matrix_power(fo.B, fo.q) - id) <= 1e-9);
    REQUIRE(std::abs(std::abs(fo.phase) - 1.0) <= 1e-12);
    REQUIRE(std::is_sorted(fo.angles.begin(), fo.angles.end()));
  }
}

TEST_CASE("finite order survives repeated multiplication at q near 17^4") {
  std::mt19937_64 rng(43);
  const CMatrix a = random_unitary(5, rng);
  const FiniteOrderApprox fo = finite_order_approx(a, 17.0, SpectrumMode::Projective);
  CMatrix power = CMatrix::Identity(5, 5);
  for (std::int64_t k = 0; k < fo.q; ++k) power = power * fo.B;
  CHECK(operator_norm(power - CMatrix::Identity(5, 5)) <= 1e-9);
}

TEST_CASE("repeated eigenvalues share a numerator") {
  CMatrix d = CMatrix::Identity(4, 4);
  d(0, 0) = d(1, 1) = std::polar(1.0, 2.0 * kPi * 0.2345);
  d(2, 2) = std::polar(1.0, 2.0 * kPi * 0.71);
  const CMatrix w = random_unitary(4, 44);
  const CMatrix a = w * d * w.adjoint();
  const FiniteOrderApprox fo = finite_order_approx(a, 17.0, SpectrumMode::FullSpectrum);
  REQUIRE(fo.m == 3);
  // B commutes with A when it is built on A's spectral projections.
  CHECK(operator_norm(fo.B * a - a * fo.B) <= 1e-10);
}

TEST_CASE("conjugation covariance") {
  std::mt19937_64 rng(45);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 3;
    const CMatrix a = random_unitary(n, rng);
    const CMatrix w = random_unitary(n, rng);
    const FiniteOrderApprox base = finite_order_approx(a, 17.0, SpectrumMode::Projective);
    const FiniteOrderApprox moved = finite_order_approx(w * a * w.adjoint(), 17.0, SpectrumMode::Projective);
    REQUIRE(moved.q == base.q);
    REQUIRE(operator_norm(moved.B - w * base.B * w.adjoint()) <= 1e-8);
  }
}
