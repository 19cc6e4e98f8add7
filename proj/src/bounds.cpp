#include "chball/bounds.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <boost/math/constants/constants.hpp>

#include "chball/approx.hpp"
#include "chball/errors.hpp"
#include "chball/norms.hpp"

namespace chball {

namespace {

// Bisection on (0, 1) for f increasing with f(0) < 0 < f(1); stops at the
// first midpoint with |f| <= tol or when the bracket is one ulp wide.
template <typename F>
double bisect_unit_interval(F f, double tol) {
  if (!(tol > 0.0)) throw InvalidInput("root tolerance must be positive");
  double lo = 0.0;
  double hi = 1.0;
  while (true) {
    const double mid = 0.5 * (lo + hi);
    const double value = f(mid);
    if (std::abs(value) <= tol || mid <= lo || mid >= hi) return mid;
    (value < 0.0 ? lo : hi) = mid;
  }
}

void check_bound_args(double delta, double Q, int n) {
  if (n < 2) throw InvalidInput("theorem_bound needs n >= 2, got " + std::to_string(n));
  if (!(delta > 0.0)) throw InvalidInput("theorem_bound needs delta > 0");
  if (!(Q > 1.0)) throw InvalidInput("theorem_bound needs Q > 1");
}

constexpr double kOverflowExponent = 700.0;

}  // namespace

double tau_constant(double tol) {
  return bisect_unit_interval([](double t) { return 2.0 * t * (t + 1.0) * (t + 1.0) - 1.0; }, tol);
}

double omega_constant(double tol) {
  return bisect_unit_interval([](double w) { return 2.0 * w * (2.0 * w * w + 1.0) - 1.0; }, tol);
}

BoundConstants bound_constants(double tol) { return {tau_constant(tol), omega_constant(tol), tol}; }

double omega_value(OmegaChoice choice) {
  switch (choice) {
    case OmegaChoice::FriedlandHersonsky: return omega_constant(1e-15);
    case OmegaChoice::MartinSqrt: return 1.0 / (2.0 * std::sqrt(2.0));
    case OmegaChoice::MartinTwoMinusSqrt3: return 2.0 - std::sqrt(3.0);
  }
  throw InvalidInput("unknown omega choice");
}

const char* to_string(OmegaChoice choice) noexcept {
  switch (choice) {
    case OmegaChoice::FriedlandHersonsky: return "fh";
    case OmegaChoice::MartinSqrt: return "martin-sqrt";
    case OmegaChoice::MartinTwoMinusSqrt3: return "martin-2s3";
  }
  return "?";
}

ExtendedReal theorem_bound_extended(const ExtendedReal& delta, const ExtendedReal& Q, int n) {
  const ExtendedReal half = delta / 2;
  const ExtendedReal exponent = half * boost::multiprecision::pow(Q, n - 1);
  if (exponent > kOverflowExponent) return std::numeric_limits<ExtendedReal>::infinity();
  // 50 digits leave ~40 correct digits in exp(x) - 1 even for x ~ 1e-10.
  const ExtendedReal growth = (boost::multiprecision::exp(exponent) - 1) * boost::multiprecision::exp(half);
  const ExtendedReal two_pi = 2 * boost::math::constants::pi<ExtendedReal>();
  return (growth + 1) * (growth + two_pi / Q);
}

double theorem_bound(double delta, double Q, int n, Precision precision) {
  check_bound_args(delta, Q, n);
  if (precision == Precision::Extended) {
    return static_cast<double>(theorem_bound_extended(ExtendedReal(delta), ExtendedReal(Q), n));
  }
  const double half = delta / 2.0;
  const double exponent = half * std::pow(Q, n - 1);
  if (exponent > kOverflowExponent) return std::numeric_limits<double>::infinity();
  const double growth = std::expm1(exponent) * std::exp(half);
  return (growth + 1.0) * (growth + 2.0 * kPi / Q);
}

double theorem_bound(double delta, double Q, int n) {
  check_bound_args(delta, Q, n);
  const bool extended = n >= 6 || delta * std::pow(Q, n - 1) < 1e-6;
  return theorem_bound(delta, Q, n, extended ? Precision::Extended : Precision::Double);
}

double paper_delta(int n) {
  if (n < 2) throw InvalidInput("paper_delta needs n >= 2");
  return 0.02 / std::pow(17.0, n - 1);
}

MargulisResult evaluate_margulis(int n, double Q, double delta, OmegaChoice omega) {
  MargulisResult out;
  out.n = n;
  out.Q = Q;
  out.delta = delta;
  out.bound_value = theorem_bound(delta, Q, n);
  out.omega = omega_value(omega);
  out.feasible = out.bound_value <= out.omega;
  out.ball_radius = delta / 2.0;
  return out;
}

MargulisResult verify_paper_constant(int n, OmegaChoice omega) {
  return evaluate_margulis(n, 17.0, paper_delta(n), omega);
}

std::optional<MargulisResult> delta_for_q(int n, double Q, double tol, OmegaChoice omega) {
  if (n < 2) throw InvalidInput("delta search needs n >= 2");
  if (!(Q > 1.0)) throw InvalidInput("delta search needs Q > 1");
  if (!(tol > 0.0)) throw InvalidInput("delta search needs tol > 0");
  const double w = omega_value(omega);
  // theorem_bound -> 2 pi / Q as delta -> 0, so small Q never closes the chain.
  if (2.0 * kPi / Q >= w) return std::nullopt;

  double lo = 0.0;
  double hi = 1.0 / std::pow(Q, n - 1);
  while (theorem_bound(hi, Q, n) <= w) {
    lo = hi;
    hi *= 2.0;
  }
  for (int it = 0; it < 400 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (theorem_bound(mid, Q, n) <= w) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (!(lo > 0.0)) return std::nullopt;
  MargulisResult out = evaluate_margulis(n, Q, lo, omega);
  if (!out.feasible || w - out.bound_value > tol) {
    throw NumericalError("delta bisection did not reach omega within tol at Q = " + std::to_string(Q));
  }
  return out;
}

namespace {

bool better(const MargulisResult& a, const std::optional<MargulisResult>& b) {
  if (!b) return true;
  if (a.delta != b->delta) return a.delta > b->delta;
  return a.Q < b->Q;
}

}  // namespace

std::optional<MargulisResult> max_delta(int n, double Q_min, double Q_max, double tol, OmegaChoice omega) {
  if (!(Q_min > 1.0) || !(Q_max >= Q_min)) {
    throw InvalidInput("max_delta needs 1 < Q_min <= Q_max");
  }
  std::vector<double> grid{Q_min};
  for (double q = std::ceil(Q_min); q <= Q_max; q += 1.0) {
    if (q > Q_min) grid.push_back(q);
  }
  if (Q_max > grid.back()) grid.push_back(Q_max);

  std::optional<MargulisResult> best;
  for (const double q : grid) {
    const auto candidate = delta_for_q(n, q, tol, omega);
    if (candidate && better(*candidate, best)) best = candidate;
  }
  if (!best) return std::nullopt;

  // Golden-section search for the maximizing Q between the grid neighbours.
  auto delta_at = [&](double q) {
    const auto r = delta_for_q(n, q, tol, omega);
    return r ? r->delta : 0.0;
  };
  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = std::max(Q_min, best->Q - 1.0);
  double b = std::min(Q_max, best->Q + 1.0);
  double x1 = b - golden * (b - a);
  double x2 = a + golden * (b - a);
  double f1 = delta_at(x1);
  double f2 = delta_at(x2);
  for (int it = 0; it < 80 && b - a > 1e-10 * b; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + golden * (b - a);
      f2 = delta_at(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - golden * (b - a);
      f1 = delta_at(x1);
    }
  }
  const auto refined = delta_for_q(n, 0.5 * (a + b), tol, omega);
  if (refined && better(*refined, best)) best = refined;
  return best;
}

ProofChainResult proof_chain(const ComplexIsometry& a, double delta, double Q) {
  const int n = a.n();
  ProofChainResult out;
  const UnitaryDistanceCertificate cert = dist_to_unitary(a);
  out.r = cert.r;
  out.witness_distance = cert.actual;

  // Approximating the whole witness diag(O_1, e^{i theta}) keeps its U(1) slot
  // inside the finite-order approximant, at the price of n free angles.
  const FiniteOrderApprox fo = finite_order_approx(cert.witness, Q, SpectrumMode::Projective);
  out.q = fo.q;
  out.approx_err = fo.err;
  out.phase = fo.phase;
  out.q_within_exponent = static_cast<double>(fo.q) <= std::pow(Q, n - 1);

  // A / phase is the same point of PU(n,1); its witness is O / phase, which
  // B approximates, so ||(O / phase)^q - Id|| <= q ||O / phase - B|| <= 2 pi / Q.
  const CMatrix rescaled = a.mat() / fo.phase;
  const CMatrix power = matrix_power(rescaled, fo.q);
  const CMatrix id = CMatrix::Identity(n + 1, n + 1);
  out.lhs = operator_norm(power) * operator_norm(power - id);

  const double rq = std::pow(out.r, static_cast<double>(fo.q));
  const double grown = (rq - 1.0) * out.r;
  out.chain_bound = (grown + 1.0) * (grown + 2.0 * kPi / Q);
  out.theorem_value = theorem_bound(delta, Q, n);
  return out;
}

}  // namespace chball
