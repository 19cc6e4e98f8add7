#include "chball/approx.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include "chball/errors.hpp"
#include "chball/norms.hpp"

namespace chball {

namespace {

constexpr double kCertificateSlack = 1e-15;

double max_error(const std::vector<double>& thetas, std::int64_t q,
                 const std::vector<std::int64_t>& p) {
  double worst = 0.0;
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    worst = std::max(worst, std::abs(thetas[i] - static_cast<double>(p[i]) / static_cast<double>(q)));
  }
  return worst;
}

std::vector<std::int64_t> nearest_numerators(const std::vector<double>& thetas, std::int64_t q) {
  std::vector<std::int64_t> p(thetas.size());
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    p[i] = std::llround(static_cast<double>(q) * thetas[i]);
  }
  return p;
}

bool certificate(double Q, int m, std::int64_t q, double err) {
  return q >= 1 && static_cast<double>(q) <= std::pow(Q, m) &&
         err <= 1.0 / (static_cast<double>(q) * Q) + kCertificateSlack;
}

// First box collision among the fractional parts of q' * theta, q' = 0, 1, ...
std::int64_t pigeonhole_denominator(const std::vector<double>& thetas, std::int64_t cells,
                                    std::int64_t boxes) {
  std::vector<std::int32_t> first_visit(static_cast<std::size_t>(boxes), -1);
  for (std::int64_t step = 0; step <= boxes; ++step) {
    std::int64_t key = 0;
    for (const double theta : thetas) {
      const double x = static_cast<double>(step) * theta;
      const double frac = x - std::floor(x);
      const auto cell = std::min<std::int64_t>(cells - 1, static_cast<std::int64_t>(frac * cells));
      key = key * cells + cell;
    }
    auto& seen = first_visit[static_cast<std::size_t>(key)];
    if (seen >= 0) return step - seen;
    seen = static_cast<std::int32_t>(step);
  }
  // boxes + 1 visits into boxes cells always collide.
  throw NumericalError("pigeonhole walk finished without a collision");
}

}  // namespace

bool RationalApprox::certificate_holds() const {
  return static_cast<int>(thetas.size()) == m && p.size() == thetas.size() &&
         certificate(Q, m, q, max_error(thetas, q, p));
}

RationalApprox dirichlet_approx(const std::vector<double>& thetas, double Q) {
  if (thetas.empty()) throw InvalidInput("dirichlet_approx needs at least one angle");
  if (!(Q > 1.0) || !std::isfinite(Q)) throw InvalidInput("dirichlet_approx needs Q > 1");
  for (const double t : thetas) {
    if (!(t >= 0.0 && t <= 1.0)) {
      throw InvalidInput("angle " + std::to_string(t) + " is outside [0, 1]");
    }
  }
  const int m = static_cast<int>(thetas.size());
  const auto cells = static_cast<std::int64_t>(std::ceil(Q));
  const double work = std::pow(static_cast<double>(cells), m);
  if (work > kPigeonholeGuard) {
    throw ResourceLimit("pigeonhole grid has ceil(Q)^m = " + std::to_string(work) +
                        " boxes, above the limit of 1e7; use a smaller Q or fewer angles");
  }

  RationalApprox out;
  out.thetas = thetas;
  out.Q = Q;
  out.m = m;
  out.q = pigeonhole_denominator(thetas, cells, static_cast<std::int64_t>(work));
  out.p = nearest_numerators(thetas, out.q);
  out.max_err = max_error(thetas, out.q, out.p);
  if (certificate(Q, m, out.q, out.max_err)) return out;

  // Non-integer Q: the walk may overshoot Q^m. A solution with q <= Q^m exists
  // by Minkowski's linear forms theorem.
  const auto limit = static_cast<std::int64_t>(std::floor(std::pow(Q, m)));
  for (std::int64_t q = 1; q <= limit; ++q) {
    auto p = nearest_numerators(thetas, q);
    const double err = max_error(thetas, q, p);
    if (certificate(Q, m, q, err)) {
      out.q = q;
      out.p = std::move(p);
      out.max_err = err;
      out.route = ApproxRoute::Scan;
      return out;
    }
  }
  throw NumericalError("no rational approximation met the certificate for Q = " + std::to_string(Q));
}

const char* to_string(SpectrumMode mode) noexcept {
  return mode == SpectrumMode::FullSpectrum ? "full-spectrum" : "projective";
}

FiniteOrderApprox finite_order_approx(const CMatrix& a, double Q, SpectrumMode mode) {
  if (a.rows() != a.cols() || a.rows() < 1) throw InvalidInput("finite_order_approx needs a square matrix");
  if (!(Q > 1.0)) throw InvalidInput("finite_order_approx needs Q > 1");
  const double defect = unitarity_defect(a);
  if (defect > 1e-10) {
    throw InvalidInput("finite_order_approx needs a unitary matrix (||A*A - Id|| = " +
                       std::to_string(defect) + ")");
  }
  const Eigen::Index n = a.rows();

  // A is normal, so its Schur form is diagonal up to rounding.
  Eigen::ComplexSchur<CMatrix> schur(a);
  if (schur.info() != Eigen::Success) throw NumericalError("Schur decomposition failed");
  const CVector lambda = schur.matrixT().diagonal();
  const CMatrix& basis = schur.matrixU();

  auto angle_of = [](Complex z) {
    double t = std::arg(z) / (2.0 * kPi);
    if (t < 0.0) t += 1.0;
    // Angles within rounding of a full turn wrap to 0.
    return t >= 1.0 - 1e-12 ? 0.0 : t;
  };

  FiniteOrderApprox out;
  out.mode = mode;
  out.Q = Q;
  if (mode == SpectrumMode::Projective) {
    Eigen::Index top = 0;
    for (Eigen::Index j = 1; j < n; ++j) {
      if (angle_of(lambda(j)) > angle_of(lambda(top))) top = j;
    }
    out.phase = lambda(top) / std::abs(lambda(top));
  }

  std::vector<double> raw(n);
  for (Eigen::Index j = 0; j < n; ++j) raw[j] = angle_of(lambda(j) / out.phase);
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return raw[x] < raw[y]; });

  // Cluster repeated angles; in Projective mode the cluster at 0 is pinned.
  std::vector<double> sorted(n);
  std::vector<int> cluster(n);
  std::vector<double> representatives;
  for (Eigen::Index k = 0; k < n; ++k) {
    sorted[k] = raw[order[k]];
    if (k > 0 && sorted[k] - representatives.back() <= 1e-12) {
      cluster[k] = static_cast<int>(representatives.size()) - 1;
    } else {
      representatives.push_back(sorted[k]);
      cluster[k] = static_cast<int>(representatives.size()) - 1;
    }
  }
  if (mode == SpectrumMode::Projective) {
    representatives[0] = 0.0;
    for (Eigen::Index k = 0; k < n && cluster[k] == 0; ++k) sorted[k] = 0.0;
  }

  const std::size_t skip = mode == SpectrumMode::Projective ? 1 : 0;
  std::vector<double> free_angles(representatives.begin() + static_cast<std::ptrdiff_t>(skip),
                                  representatives.end());
  std::vector<std::int64_t> cluster_p(representatives.size(), 0);
  out.m = static_cast<int>(free_angles.size());
  if (!free_angles.empty()) {
    const RationalApprox ra = dirichlet_approx(free_angles, Q);
    out.q = ra.q;
    std::copy(ra.p.begin(), ra.p.end(), cluster_p.begin() + static_cast<std::ptrdiff_t>(skip));
  }

  CMatrix v(n, n);
  CVector target(n);
  out.angles = sorted;
  out.numerators.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    v.col(k) = basis.col(order[k]);
    const std::int64_t p = cluster_p[cluster[k]];
    out.numerators[k] = p;
    const double reduced = static_cast<double>(((p % out.q) + out.q) % out.q) / static_cast<double>(out.q);
    target(k) = std::polar(1.0, 2.0 * kPi * reduced);
    out.predicted_err = std::max(
        out.predicted_err,
        2.0 * std::abs(std::sin(kPi * (sorted[k] - static_cast<double>(p) / static_cast<double>(out.q)))));
  }
  out.B = v * target.asDiagonal() * v.adjoint();
  out.err = operator_norm(a / out.phase - out.B);
  return out;
}

}  // namespace chball
