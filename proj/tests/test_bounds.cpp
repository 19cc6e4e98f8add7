#include <doctest.h>

#include <chrono>
#include <cmath>
#include <random>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "chball/bounds.hpp"
#include "chball/errors.hpp"
#include "chball/isometry.hpp"

using namespace chball;

namespace {

using Wide = boost::multiprecision::cpp_bin_float_100;

double fixed_point(double (*step)(double), double start) {
  double x = start;
  for (int i = 0; i < 10000; ++i) {
    const double next = step(x);
    if (next == x) break;
    x = next;
  }
  return x;
}

double tau_step(double t) { return 1.0 / (2.0 * (t + 1.0) * (t + 1.0)); }
double omega_step(double w) { return 1.0 / (2.0 * (2.0 * w * w + 1.0)); }

// The bound product in 100-digit binary floating point, term by term.
double wide_bound(double delta, double Q, int n) {
  const Wide d(delta);
  const Wide q(Q);
  const Wide x = d / 2 * pow(q, n - 1);
  const Wide g = (exp(x) - 1) * exp(d / 2);
  return static_cast<double>((g + 1) * (g + 2 * boost::math::constants::pi<Wide>() / q));
}

}  // namespace

TEST_CASE("tau and omega") {
  const double tau = tau_constant(1e-12);
  const double omega = omega_constant(1e-12);
  // The quoted 0.2971 and 0.3854 are truncations; nearest rounding gives 0.2972 and 0.3855.
  CHECK(std::floor(tau * 1e4) == 2971.0);
  CHECK(std::floor(omega * 1e4) == 3854.0);
  CHECK(std::round(tau * 1e4) == 2972.0);
  CHECK(std::round(omega * 1e4) == 3855.0);
  CHECK(std::abs(2.0 * tau * (tau + 1.0) * (tau + 1.0) - 1.0) <= 1e-12);
  CHECK(std::abs(2.0 * omega * (2.0 * omega * omega + 1.0) - 1.0) <= 1e-12);
  CHECK(tau == doctest::Approx(fixed_point(tau_step, 0.5)).epsilon(1e-10));
  CHECK(omega == doctest::Approx(fixed_point(omega_step, 0.5)).epsilon(1e-10));
  // Reference roots to 17 digits.
  CHECK(tau_constant(1e-15) == doctest::Approx(0.29715650817742437).epsilon(1e-14));
  CHECK(omega_constant(1e-15) == doctest::Approx(0.38545849852962405).epsilon(1e-14));
  CHECK_THROWS_AS(tau_constant(0.0), InvalidInput);

  const BoundConstants c = bound_constants();
  CHECK(c.tau == tau);
  CHECK(c.omega == omega);
}

TEST_CASE("omega choices") {
  CHECK(omega_value(OmegaChoice::FriedlandHersonsky) == doctest::Approx(0.38545849852962405));
  CHECK(omega_value(OmegaChoice::MartinSqrt) == doctest::Approx(0.35355339059327373));
  CHECK(omega_value(OmegaChoice::MartinTwoMinusSqrt3) == doctest::Approx(0.2679491924311227));
  CHECK(std::string(to_string(OmegaChoice::MartinSqrt)) == "martin-sqrt");
}

TEST_CASE("theorem_bound at n = 2, Q = 17") {
  const double value = theorem_bound(0.02 / 17.0, 17.0, 2);
  CHECK(value == doctest::Approx(0.38347305989184329).epsilon(1e-14));
  CHECK(value >= 0.3824);
  CHECK(value <= 0.3844);
  CHECK(value <= omega_constant(1e-12));
  CHECK(value == doctest::Approx(wide_bound(0.02 / 17.0, 17.0, 2)).epsilon(1e-14));
  CHECK(theorem_bound(0.02 / 17.0, 17.0, 2, Precision::Extended) == doctest::Approx(value).epsilon(1e-15));
}

TEST_CASE("theorem_bound small-delta limit") {
  const double limit = 2.0 * kPi / 17.0;
  CHECK(limit == doctest::Approx(0.36959913571644626).epsilon(1e-15));
  CHECK(theorem_bound(1e-12, 17.0, 2) == doctest::Approx(limit).epsilon(1e-9));
  CHECK(theorem_bound(1e-12, 17.0, 2) > limit);
}

TEST_CASE("theorem_bound against a 100-digit oracle") {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> logd(-14.0, -1.0);
  std::uniform_real_distribution<double> qd(1.5, 60.0);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + trial % 9;
    const double Q = qd(rng);
    const double delta = std::pow(10.0, logd(rng)) / std::pow(Q, n - 1);
    REQUIRE(theorem_bound(delta, Q, n) == doctest::Approx(wide_bound(delta, Q, n)).epsilon(1e-13));
  }
}

TEST_CASE("theorem_bound is increasing in delta") {
  std::mt19937_64 rng(52);
  std::uniform_real_distribution<double> logd(-12.0, 0.0);
  std::uniform_real_distribution<double> qd(1.1, 64.0);
  for (int trial = 0; trial < 10000; ++trial) {
    const int n = 2 + trial % 7;
    const double Q = qd(rng);
    const double delta = std::pow(10.0, logd(rng)) / std::pow(Q, n - 1);
    REQUIRE(theorem_bound(2.0 * delta, Q, n) > theorem_bound(delta, Q, n));
  }
}

TEST_CASE("theorem_bound guards") {
  CHECK(std::isinf(theorem_bound(10.0, 17.0, 4)));
  CHECK_THROWS_AS(theorem_bound(0.0, 17.0, 2), InvalidInput);
  CHECK_THROWS_AS(theorem_bound(0.01, 1.0, 2), InvalidInput);
  CHECK_THROWS_AS(theorem_bound(0.01, 17.0, 1), InvalidInput);
}

TEST_CASE("verify_paper_constant") {
  double previous = 1.0;
  for (int n = 2; n <= 10; ++n) {
    const MargulisResult r = verify_paper_constant(n);
    REQUIRE(r.feasible);
    REQUIRE(r.bound_value <= r.omega);
    REQUIRE(r.Q == 17.0);
    REQUIRE(r.delta == doctest::Approx(0.02 / std::pow(17.0, n - 1)).epsilon(1e-15));
    REQUIRE(r.ball_radius == r.delta / 2.0);
    REQUIRE(r.ball_radius * std::pow(17.0, n - 1) == doctest::Approx(0.01).epsilon(1e-15));
    REQUIRE(r.bound_value <= previous);
    previous = r.bound_value;
  }
  CHECK(verify_paper_constant(2).ball_radius == doctest::Approx(0.01 / 17.0).epsilon(1e-15));
  CHECK(verify_paper_constant(5).bound_value <= 0.3835);
  CHECK_FALSE(verify_paper_constant(2, OmegaChoice::MartinTwoMinusSqrt3).feasible);
}

TEST_CASE("delta_for_q") {
  CHECK_FALSE(delta_for_q(2, 16.0, 1e-9).has_value());
  const auto r = delta_for_q(2, 17.0, 1e-9);
  REQUIRE(r.has_value());
  CHECK(r->delta >= 0.02 / 17.0);
  CHECK(r->feasible);
  CHECK(r->omega - r->bound_value <= 1e-9);
  CHECK(theorem_bound(r->delta * (1.0 + 1e-6), 17.0, 2) > r->omega);
}

TEST_CASE("max_delta dominance and values") {
  const auto start = std::chrono::steady_clock::now();
  for (int n = 2; n <= 6; ++n) {
    const auto r = max_delta(n, 2.0, 64.0, 1e-9);
    REQUIRE(r.has_value());
    REQUIRE(r->delta >= 0.02 / std::pow(17.0, n - 1));
    REQUIRE(r->feasible);
    REQUIRE(theorem_bound(r->delta * (1.0 + 1e-6), r->Q, n) > r->omega);
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(seconds < 60.0);

  const auto two = max_delta(2, 2.0, 64.0, 1e-9);
  CHECK(two->delta == doctest::Approx(0.0082323597).epsilon(1e-6));
  const auto three = max_delta(3, 2.0, 64.0, 1e-9);
  CHECK(three->delta == doctest::Approx(3.0359e-4).epsilon(1e-3));

  const auto fixed = max_delta(2, 17.0, 17.0, 1e-9);
  REQUIRE(fixed.has_value());
  CHECK(fixed->Q == 17.0);
  CHECK(fixed->delta >= 0.02 / 17.0);

  CHECK_FALSE(max_delta(2, 2.0, 10.0, 1e-9).has_value());
  CHECK_THROWS_AS(max_delta(2, 1.0, 10.0, 1e-9), InvalidInput);
}

TEST_CASE("max_delta is deterministic") {
  const auto a = max_delta(3, 2.0, 40.0, 1e-9);
  const auto b = max_delta(3, 2.0, 40.0, 1e-9);
  REQUIRE(a.has_value());
  CHECK(a->delta == b->delta);
  CHECK(a->Q == b->Q);
}

TEST_CASE("proof chain on small-displacement isometries") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + trial % 2;
    const double delta = paper_delta(n);
    std::uniform_real_distribution<double> s(0.0, delta / 2.0);
    const CMatrix u1 = embed_block(random_unitary(n, rng));
    const CMatrix u2 = embed_block(random_unitary(n, rng));
    CMatrix m = u1 * axis_boost_matrix(n, std::exp(s(rng))) * u2;
    m /= std::pow(m.determinant(), 1.0 / (n + 1));
    const ProofChainResult chain = proof_chain(verify_su(m), delta, 17.0);
    REQUIRE(chain.r < std::exp(delta / 2.0));
    REQUIRE(chain.witness_distance <= chain.r * (chain.r - 1.0) + 1e-9);
    REQUIRE(chain.lhs <= chain.theorem_value + 1e-6);
  }
}
