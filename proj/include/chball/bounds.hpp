#pragma once

// Jorgensen-type constants, the Margulis-type displacement bound for
// torsion-free discrete subgroups of SU(n,1), and a search over its free
// parameters.
//
// For an isometry A with r = exp(rho(o, A o) / 2) < exp(delta / 2), write O for
// its nearest-origin-stabilizer witness and B for a finite-order approximation
// of O with B^q = Id, 1 <= q <= Q^(n-1). Then
//     ||A^q|| ||A^q - Id|| <= [(r^q - 1) r + 1] [(r^q - 1) r + 2 pi / Q]
//                          <= [(e^(delta/2 Q^(n-1)) - 1) e^(delta/2) + 1]
//                             [(e^(delta/2 Q^(n-1)) - 1) e^(delta/2) + 2 pi / Q].
// When the right side is below omega, A^q contradicts ||C|| ||C - Id|| >= omega,
// so every nontrivial element moves o by at least delta.

#include <cstdint>
#include <optional>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include "chball/isometry.hpp"

namespace chball {

using ExtendedReal = boost::multiprecision::cpp_dec_float_50;

enum class Precision { Double, Extended };

// Unique positive root of 2 tau (tau + 1)^2 = 1, by bisection on (0, 1).
double tau_constant(double tol = 1e-12);

// Unique positive root of 2 omega (2 omega^2 + 1) = 1, by bisection on (0, 1).
double omega_constant(double tol = 1e-12);

struct BoundConstants {
  double tau;
  double omega;
  double tol;
};

BoundConstants bound_constants(double tol = 1e-12);

// Which lower bound for ||A|| ||A - Id|| to use.
enum class OmegaChoice {
  FriedlandHersonsky,   // omega ~ 0.3854
  MartinSqrt,           // 1 / (2 sqrt 2)
  MartinTwoMinusSqrt3,  // 2 - sqrt 3
};

double omega_value(OmegaChoice choice);
const char* to_string(OmegaChoice choice) noexcept;

// The product above as a function of (delta, Q, n). Evaluated in 50-digit
// arithmetic when n >= 6 or delta Q^(n-1) < 1e-6; returns +inf once
// delta/2 Q^(n-1) exceeds 700. Throws InvalidInput for delta <= 0, Q <= 1 or
// n < 2.
double theorem_bound(double delta, double Q, int n);
double theorem_bound(double delta, double Q, int n, Precision precision);
ExtendedReal theorem_bound_extended(const ExtendedReal& delta, const ExtendedReal& Q, int n);

// 0.02 / 17^(n-1): the displacement bound at Q = 17.
double paper_delta(int n);

struct MargulisResult {
  int n = 2;
  double Q = 17.0;
  double delta = 0.0;
  double bound_value = 0.0;
  double omega = 0.0;
  bool feasible = false;
  double ball_radius = 0.0;  // delta / 2
};

MargulisResult evaluate_margulis(int n, double Q, double delta,
                                 OmegaChoice omega = OmegaChoice::FriedlandHersonsky);

// Q = 17, delta = 0.02 / 17^(n-1).
MargulisResult verify_paper_constant(int n, OmegaChoice omega = OmegaChoice::FriedlandHersonsky);

// Largest delta with theorem_bound(delta, Q, n) <= omega for a fixed Q;
// nullopt when 2 pi / Q >= omega (no delta works).
std::optional<MargulisResult> delta_for_q(int n, double Q, double tol,
                                          OmegaChoice omega = OmegaChoice::FriedlandHersonsky);

// Maximizes delta over Q in [Q_min, Q_max]: integer grid plus golden-section
// refinement around the best grid point. Ties prefer the smaller Q. nullopt
// when no Q in range is feasible.
std::optional<MargulisResult> max_delta(int n, double Q_min, double Q_max, double tol,
                                        OmegaChoice omega = OmegaChoice::FriedlandHersonsky);

// One pass through the chain for a concrete isometry: witness, finite-order
// approximation of the full (n+1)x(n+1) witness in Projective mode, then the
// Jorgensen quantity of A^q for the projectively rescaled A.
struct ProofChainResult {
  double r = 1.0;
  std::int64_t q = 1;
  double witness_distance = 0.0;  // ||A - O||
  double approx_err = 0.0;        // ||O / phase - B||
  Complex phase{1.0, 0.0};        // scalar dividing A; A / phase is the lift measured
  double lhs = 0.0;               // ||A^q|| ||A^q - Id|| for the lift A / phase
  double chain_bound = 0.0;       // [(r^q - 1) r + 1][(r^q - 1) r + 2 pi / Q]
  double theorem_value = 0.0;     // theorem_bound(delta, Q, n)
  bool q_within_exponent = true;  // q <= Q^(n-1)
};

ProofChainResult proof_chain(const ComplexIsometry& a, double delta, double Q);

}  // namespace chball
