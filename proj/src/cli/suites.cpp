#include "suites.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <json.hpp>

#include "chball/approx.hpp"
#include "chball/bounds.hpp"
#include "chball/errors.hpp"
#include "chball/hermitian.hpp"
#include "chball/isometry.hpp"
#include "chball/norms.hpp"
#include "chball/volume.hpp"

namespace chball::cli {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int uniform_int(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

CVector gaussian_vector(int size, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CVector v(size);
  for (int i = 0; i < size; ++i) {
    const double re = g(rng);
    const double im = g(rng);
    v(i) = Complex(re, im);
  }
  return v;
}

CMatrix gaussian_matrix(int size, std::mt19937_64& rng) {
  CMatrix m(size, size);
  for (int c = 0; c < size; ++c) m.col(c) = gaussian_vector(size, rng);
  return m;
}

BallPoint ball_point(int n, std::mt19937_64& rng) {
  const CVector dir = gaussian_vector(n, rng).normalized();
  return BallPoint(dir * (0.95 * std::pow(uniform(rng, 0.0, 1.0), 1.0 / (2 * n))));
}

CMatrix origin_stabilizer(int n, std::mt19937_64& rng) {
  const CMatrix m = embed_block(random_unitary(n, rng));
  return m / std::pow(m.determinant(), 1.0 / static_cast<double>(n + 1));
}

Outcome relative(double a, double b, double limit) {
  return {std::abs(a - b) / std::max(1.0, std::abs(b)), limit};
}

// ---- hermitian ----

std::vector<Check> hermitian_checks(int samples) {
  return {
      {"hermitian", "conjugate_symmetry", samples, 1e-12, true,
       [](std::mt19937_64& rng, double limit) {
         const int n = uniform_int(rng, 1, 6);
         const HermitianVector z(gaussian_vector(n + 1, rng));
         const HermitianVector w(gaussian_vector(n + 1, rng));
         const Complex zw = herm_product(z, w);
         return Outcome{std::abs(zw - std::conj(herm_product(w, z))) / std::max(1.0, std::abs(zw)), limit};
       }},
      {"hermitian", "lift_roundtrip", samples, 1e-12, true,
       [](std::mt19937_64& rng, double limit) {
         const BallPoint p = ball_point(uniform_int(rng, 1, 6), rng);
         return Outcome{(project_to_ball(standard_lift(p)).coords() - p.coords()).norm(), limit};
       }},
      {"hermitian", "distance_symmetry", samples, 1e-10, true,
       [](std::mt19937_64& rng, double limit) {
         const int n = uniform_int(rng, 1, 6);
         const BallPoint x = ball_point(n, rng);
         const BallPoint y = ball_point(n, rng);
         return Outcome{std::abs(bergman_distance(x, y) - bergman_distance(y, x)), limit};
       }},
      {"hermitian", "triangle_inequality", samples, 1e-9, true,
       [](std::mt19937_64& rng, double limit) {
         const int n = uniform_int(rng, 1, 6);
         const BallPoint x = ball_point(n, rng);
         const BallPoint y = ball_point(n, rng);
         const BallPoint z = ball_point(n, rng);
         return Outcome{bergman_distance(x, z) - bergman_distance(x, y) - bergman_distance(y, z), limit};
       }},
      {"hermitian", "lift_formula_agreement", samples, 1e-9, true,
       [](std::mt19937_64& rng, double limit) {
         const int n = uniform_int(rng, 1, 5);
         const BallPoint x = ball_point(n, rng);
         const BallPoint y = ball_point(n, rng);
         return relative(bergman_distance(standard_lift(x), standard_lift(y)), bergman_distance(x, y), limit);
       }},
  };
}

// ---- isometry ----

std::vector<Check> isometry_checks(int samples) {
  return {
      {"isometry", "distance_preserved", samples, 1e-9, true,
       [](std::mt19937_64& rng, double limit) {
         const int n = uniform_int(rng, 1, 4);
         const ComplexIsometry a = sample_isometry(n, 1.5, rng).isometry;
         const BallPoint p = ball_point(n, rng);
         const BallPoint q = ball_point(n, rng);
         return Outcome{std::abs(bergman_distance(apply(a, p), apply(a, q)) - bergman_distance(p, q)), limit};
       }},
      {"isometry", "group_closure", samples, 10.0 * kSuTolerance, true,
       [](std::mt19937_64& rng, double limit) {
         const int n = uniform_int(rng, 1, 5);
         const ComplexIsometry a = sample_isometry(n, 1.0, rng).isometry;
         const ComplexIsometry b = sample_isometry(n, 1.0, rng).isometry;
         return Outcome{su_residuals(a.mat() * b.mat()).unitarity, limit};
       }},
      {"isometry", "boost_eigenvalues", samples, 1e-10, true,
       [](std::mt19937_64& rng, double limit) {
         const int n = uniform_int(rng, 1, 6);
         const double r = 1.0 + uniform(rng, 1e-3, 4.0);
         const ComplexIsometry b = boost(r, gaussian_vector(n, rng).normalized());
         Eigen::SelfAdjointEigenSolver<CMatrix> es(b.mat(), Eigen::EigenvaluesOnly);
         std::vector<double> expected(n - 1, 1.0);
         expected.push_back(r);
         expected.push_back(1.0 / r);
         std::sort(expected.begin(), expected.end());
         double worst = 0.0;
         for (int i = 0; i <= n; ++i) worst = std::max(worst, std::abs(es.eigenvalues()(i) - expected[i]) / expected[i]);
         return Outcome{worst, limit};
       }},
      {"isometry", "sampled_norm", samples, 1e-10, true,
       [](std::mt19937_64& rng, double limit) {
         const SampledIsometry a = sample_isometry(uniform_int(rng, 1, 5), 2.0, rng);
         return relative(operator_norm(a.isometry.mat()), std::exp(a.s), limit);
       }},
      {"isometry", "classify_conjugation", samples, 0.0, false,
       [](std::mt19937_64& rng, double limit) {
         const int n = uniform_int(rng, 1, 4);
         const ComplexIsometry w = sample_isometry(n, 0.7, rng).isometry;
         const int kind = uniform_int(rng, 0, 1);
         const ComplexIsometry a =
             kind == 0 ? sample_isometry(n, 2.0, rng).isometry : verify_su(origin_stabilizer(n, rng));
         const IsometryClass before = classify(a);
         const IsometryClass after = classify(compose(compose(w, a), w.inverse()));
         const bool ambiguous =
             before == IsometryClass::NumericallyAmbiguous || after == IsometryClass::NumericallyAmbiguous;
         return Outcome{ambiguous || before == after ? 0.0 : 1.0, limit};
       }},
  };
}

// ---- norms ----

std::vector<Check> norms_checks(int samples) {
  return {
      {"norms", "conjugation_invariance", samples, 1e-10, true,
       [](std::mt19937_64& rng, double limit) {
         const int n = uniform_int(rng, 1, 5);
         const ComplexIsometry a = sample_isometry(n, 2.0, rng).isometry;
         const CMatrix w = embed_block(random_unitary(n, rng));
         return relative(operator_norm(w * a.mat() * w.adjoint()), operator_norm(a.mat()), limit);
       }},
      {"norms", "norm_at_least_one", samples, 1e-12, true,
       [](std::mt19937_64& rng, double limit) {
         const ComplexIsometry a = sample_isometry(uniform_int(rng, 1, 5), 2.0, rng).isometry;
         return Outcome{1.0 - operator_norm(a.mat()), limit};
       }},
      {"norms", "submultiplicative", samples, 1e-10, true,
       [](std::mt19937_64& rng, double limit) {
         const int size = uniform_int(rng, 1, 6);
         const CMatrix m = gaussian_matrix(size, rng);
         const CMatrix k = gaussian_matrix(size, rng);
         return Outcome{operator_norm(m * k) - operator_norm(m) * operator_norm(k), limit};
       }},
      {"norms", "adjoint_norm", samples, 1e-10, true,
       [](std::mt19937_64& rng, double limit) {
         const CMatrix m = gaussian_matrix(uniform_int(rng, 1, 6), rng);
         return relative(operator_norm(m.adjoint()), operator_norm(m), limit);
       }},
      {"norms", "dist_to_unitary", std::max(1, samples / 2), 1e-9, true,
       [](std::mt19937_64& rng, double limit) {
         const ComplexIsometry a = sample_isometry(uniform_int(rng, 1, 4), 1.0, rng).isometry;
         const UnitaryDistanceCertificate cert = dist_to_unitary(a);
         return Outcome{std::max(cert.actual - cert.bound, operator_norm(a.mat()) - cert.r), limit};
       }},
      {"norms", "power_difference_bound", samples, kPowerBoundSlack, true,
       [](std::mt19937_64& rng, double limit) {
         const int n = uniform_int(rng, 1, 4);
         const ComplexIsometry a = sample_isometry(n, 0.5, rng).isometry;
         const CMatrix b = random_unitary(n, rng);
         const auto q = static_cast<std::int64_t>(uniform_int(rng, 1, 20));
         const PowerBoundCheck c = power_difference_bound_check(a, b, q);
         return Outcome{c.lhs - c.rhs, limit};
       }},
  };
}

// ---- approx ----

std::vector<Check> approx_checks(int samples) {
  return {
      {"approx", "dirichlet_certificate", samples, 1e-15, true,
       [](std::mt19937_64& rng, double limit) {
         const int m = uniform_int(rng, 1, 4);
         const double Q = uniform(rng, 1.05, 10.0);
         std::vector<double> thetas(m);
         for (double& t : thetas) t = uniform(rng, 0.0, 1.0);
         const RationalApprox ra = dirichlet_approx(thetas, Q);
         if (static_cast<double>(ra.q) > std::pow(Q, m)) return Outcome{kInf, limit};
         return Outcome{ra.max_err - 1.0 / (static_cast<double>(ra.q) * Q), limit};
       }},
      {"approx", "finite_order_error", samples, 1e-12, true,
       [](std::mt19937_64& rng, double limit) {
         const FiniteOrderApprox fo = finite_order_approx(random_unitary(uniform_int(rng, 1, 5), rng), 17.0);
         return Outcome{fo.err - 2.0 * kPi / (static_cast<double>(fo.q) * 17.0), limit};
       }},
      {"approx", "finite_order_power", samples, 1e-9, true,
       [](std::mt19937_64& rng, double limit) {
         const int n = uniform_int(rng, 1, 5);
         const FiniteOrderApprox fo = finite_order_approx(random_unitary(n, rng), 17.0);
         return Outcome{operator_norm(matrix_power(fo.B, fo.q) - CMatrix::Identity(n, n)), limit};
       }},
      {"approx", "sine_identity", samples, 1e-10, true,
       [](std::mt19937_64& rng, double limit) {
         const int n = uniform_int(rng, 1, 4);
         const SpectrumMode mode = uniform_int(rng, 0, 1) ? SpectrumMode::FullSpectrum : SpectrumMode::Projective;
         const FiniteOrderApprox fo = finite_order_approx(random_unitary(n, rng), 17.0, mode);
         return Outcome{std::abs(fo.err - fo.predicted_err), limit};
       }},
  };
}

// ---- bounds ----

std::vector<Check> bounds_checks(int samples) {
  return {
      {"bounds", "monotone_in_delta", samples, 0.0, false,
       [](std::mt19937_64& rng, double limit) {
         const int n = uniform_int(rng, 2, 8);
         const double Q = uniform(rng, 1.1, 64.0);
         const double delta = std::pow(10.0, uniform(rng, -12.0, 0.0)) / std::pow(Q, n - 1);
         return Outcome{theorem_bound(2.0 * delta, Q, n) > theorem_bound(delta, Q, n) ? 0.0 : 1.0, limit};
       }},
      {"bounds", "paper_constant", 9, 0.0, false,
       [](std::mt19937_64& rng, double limit) {
         const MargulisResult r = verify_paper_constant(uniform_int(rng, 2, 10));
         return Outcome{r.bound_value - r.omega, limit};
       }},
      {"bounds", "root_residuals", 1, 1e-12, true,
       [](std::mt19937_64&, double limit) {
         const double t = tau_constant(1e-12);
         const double w = omega_constant(1e-12);
         return Outcome{std::max(std::abs(2.0 * t * (t + 1.0) * (t + 1.0) - 1.0),
                                 std::abs(2.0 * w * (2.0 * w * w + 1.0) - 1.0)),
                        limit};
       }},
      {"bounds", "proof_chain", samples, 1e-6, true,
       [](std::mt19937_64& rng, double limit) {
         const int n = uniform_int(rng, 2, 3);
         const double delta = paper_delta(n);
         const CMatrix u1 = embed_block(random_unitary(n, rng));
         const CMatrix u2 = embed_block(random_unitary(n, rng));
         CMatrix m = u1 * axis_boost_matrix(n, std::exp(uniform(rng, 0.0, delta / 2.0))) * u2;
         m /= std::pow(m.determinant(), 1.0 / static_cast<double>(n + 1));
         const ProofChainResult chain = proof_chain(verify_su(m), delta, 17.0);
         return Outcome{chain.lhs - chain.theorem_value, limit};
       }},
  };
}

// ---- volume ----

double shell_integral(int n, double r0) {
  const double coefficient = std::pow(4.0, n) * sphere_volume(n) / 2.0;
  auto density = [&](double t) {
    return coefficient * std::pow(std::sinh(t / 2.0), 2 * n - 1) * std::cosh(t / 2.0);
  };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(density, 0.0, r0, 15, 1e-14);
}

std::vector<Check> volume_checks(int samples) {
  return {
      {"volume", "shell_quadrature", samples, 1e-9, true,
       [](std::mt19937_64& rng, double limit) {
         const int n = uniform_int(rng, 1, 4);
         const double r0 = uniform(rng, 0.01, 2.0);
         const double quad = shell_integral(n, r0);
         return Outcome{std::abs(ball_volume(n, r0) - quad) / quad, limit};
       }},
      {"volume", "monotone_in_radius", samples, 0.0, false,
       [](std::mt19937_64& rng, double limit) {
         const int n = uniform_int(rng, 1, 8);
         const double r0 = uniform(rng, 0.01, 5.0);
         return Outcome{ball_volume(n, r0 * 1.01) > ball_volume(n, r0) ? 0.0 : 1.0, limit};
       }},
      {"volume", "euclidean_limit", 8, 1e-6, true,
       [](std::mt19937_64& rng, double limit) {
         const int n = uniform_int(rng, 1, 8);
         const double euclid = sphere_volume(n) / (2.0 * n) * std::pow(1e-4, 2 * n);
         return Outcome{std::abs(ball_volume(n, 1e-4) / euclid - 1.0), limit};
       }},
  };
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"hermitian", "isometry", "norms", "approx", "bounds", "volume"};
  return names;
}

std::vector<Check> suite_checks(const std::string& suite, int samples) {
  if (samples < 1) throw InvalidInput("--samples must be >= 1");
  if (suite == "all") {
    std::vector<Check> all;
    for (const auto& name : suite_names()) {
      auto part = suite_checks(name, samples);
      all.insert(all.end(), part.begin(), part.end());
    }
    return all;
  }
  if (suite == "hermitian") return hermitian_checks(samples);
  if (suite == "isometry") return isometry_checks(samples);
  if (suite == "norms") return norms_checks(samples);
  if (suite == "approx") return approx_checks(samples);
  if (suite == "bounds") return bounds_checks(samples);
  if (suite == "volume") return volume_checks(samples);
  throw InvalidInput("unknown suite " + suite);
}

std::mt19937_64 instance_rng(std::uint64_t seed, const std::string& suite, const std::string& check, int index) {
  const std::uint64_t h = fnv1a(suite + "/" + check);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32),
                    static_cast<std::uint32_t>(index)};
  return std::mt19937_64(seq);
}

namespace {

Outcome run_instance(const Check& check, std::uint64_t seed, int index, double limit) {
  std::mt19937_64 rng = instance_rng(seed, check.suite, check.name, index);
  try {
    const Outcome o = check.run(rng, limit);
    // NaN never passes.
    if (std::isnan(o.value)) return {kInf, limit};
    return o;
  } catch (const Error&) {
    return {kInf, limit};
  }
}

}  // namespace

CheckSummary run_check(const Check& check, std::uint64_t seed, std::optional<double> tol) {
  CheckSummary s;
  s.suite = check.suite;
  s.name = check.name;
  s.instances = check.instances;
  s.limit = tol && check.tolerance_applies ? *tol : check.limit;
  s.worst_margin = kInf;
  for (int i = 0; i < check.instances; ++i) {
    const Outcome o = run_instance(check, seed, i, s.limit);
    if (o.margin() < s.worst_margin || s.worst_index < 0) {
      s.worst_margin = o.margin();
      s.worst_index = i;
    }
    if (o.passed()) {
      ++s.passed;
    } else {
      s.failures.push_back({check.suite, check.name, seed, i, tol});
    }
  }
  return s;
}

Outcome replay(const FailingInstance& instance, double* limit_used) {
  for (const Check& check : suite_checks(instance.suite, 1)) {
    if (check.name != instance.check) continue;
    const double limit = instance.tol && check.tolerance_applies ? *instance.tol : check.limit;
    if (limit_used) *limit_used = limit;
    return run_instance(check, instance.seed, instance.index, limit);
  }
  throw InvalidInput("unknown check " + instance.suite + "/" + instance.check);
}

std::string FailingInstance::to_json() const {
  nlohmann::ordered_json j;
  j["suite"] = suite;
  j["check"] = check;
  j["seed"] = seed;
  j["index"] = index;
  if (tol) j["tol"] = *tol;
  return j.dump();
}

FailingInstance FailingInstance::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("replay record is not valid JSON: ") + e.what());
  }
  try {
    FailingInstance f{j.at("suite").get<std::string>(), j.at("check").get<std::string>(),
                      j.at("seed").get<std::uint64_t>(), j.at("index").get<int>(), std::nullopt};
    if (j.contains("tol") && !j["tol"].is_null()) f.tol = j["tol"].get<double>();
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("replay record needs suite, check, seed and index: ") + e.what());
  }
}

}  // namespace chball::cli
