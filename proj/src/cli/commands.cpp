#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chball/approx.hpp"
#include "chball/bounds.hpp"
#include "chball/cli.hpp"
#include "chball/errors.hpp"
#include "chball/hermitian.hpp"
#include "chball/isometry.hpp"
#include "chball/matrix_io.hpp"
#include "chball/norms.hpp"
#include "chball/volume.hpp"
#include "format.hpp"
#include "suites.hpp"

namespace chball {

namespace {

using cli::Column;
using cli::Extended;
using cli::FlagList;
using cli::OutputFormat;
using cli::Report;

constexpr std::uint64_t kDefaultSeed = 20240917;
constexpr int kMaxTableDimension = 12;

// Thrown for a computed failure (exit 1) as opposed to bad input (exit 2).
struct CommandFailure : Error {
  using Error::Error;
};

struct Options {
  int n = 2;
  std::optional<int> n_max;
  double Q = 17.0;
  double Q_min = 2.0;
  double Q_max = 64.0;
  std::uint64_t seed = kDefaultSeed;
  std::optional<int> samples;
  std::optional<double> tol;
  std::string precision = "double";
  std::string format = "table";
  bool no_header = false;
  std::string mode = "projective";
  std::string omega = "fh";
  std::string suite = "all";
  std::string replay;
  std::string matrix;
  std::string x;
  std::string y;
  bool n_given = false;
};

OmegaChoice parse_omega(const std::string& s) {
  if (s == "fh") return OmegaChoice::FriedlandHersonsky;
  if (s == "martin-sqrt") return OmegaChoice::MartinSqrt;
  if (s == "martin-2s3") return OmegaChoice::MartinTwoMinusSqrt3;
  throw InvalidInput("unknown --omega " + s);
}

SpectrumMode parse_mode(const std::string& s) {
  if (s == "projective") return SpectrumMode::Projective;
  if (s == "full-spectrum") return SpectrumMode::FullSpectrum;
  throw InvalidInput("unknown --mode " + s);
}

std::string num(double v) { return cli::format_number(v); }

class Session {
 public:
  Session(const Options& opt, std::ostream& out, std::ostream& err)
      : opt_(opt), out_(out), err_(err), format_(cli::parse_format(opt.format)) {}

  int bounds();
  int verify();
  int approx();
  int classify();
  int distance();
  int optimize();

 private:
  void header(const std::string& command, const FlagList& flags) {
    if (!opt_.no_header) cli::write_run_header(out_, format_, command, flags);
  }
  void emit(const Report& r) { r.write(out_, format_); }
  void emit_record(const Report& r) {
    if (format_ == OutputFormat::Table) {
      r.write_vertical(out_);
    } else {
      r.write(out_, format_);
    }
  }
  std::pair<int, int> dimension_range() const {
    const int lo = opt_.n;
    const int hi = opt_.n_max.value_or(opt_.n_given ? opt_.n : 8);
    if (lo < 2 || hi < lo || hi > kMaxTableDimension) {
      throw InvalidInput("need 2 <= n <= n-max <= " + std::to_string(kMaxTableDimension) + ", got n = " +
                         std::to_string(lo) + ", n-max = " + std::to_string(hi));
    }
    return {lo, hi};
  }

  const Options& opt_;
  std::ostream& out_;
  std::ostream& err_;
  OutputFormat format_;
};

int Session::bounds() {
  const auto [lo, hi] = dimension_range();
  if (!(opt_.Q > 1.0)) throw InvalidInput("--Q must be > 1");
  const OmegaChoice omega = parse_omega(opt_.omega);
  const bool extended = opt_.precision == "extended";
  if (!extended && opt_.precision != "double") throw InvalidInput("unknown --precision " + opt_.precision);

  header("bounds", {{"n", std::to_string(lo)}, {"n_max", std::to_string(hi)}, {"Q", num(opt_.Q)},
                    {"omega", opt_.omega}, {"precision", opt_.precision}, {"format", opt_.format}});
  Report report({{"n"}, {"r_n"}, {"delta_n"}, {"theorem_bound", extended}, {"omega"}, {"feasible"},
                 {"vol_printed", true}, {"vol_full_radius", true}});
  for (int n = lo; n <= hi; ++n) {
    const double delta = 0.02 / std::pow(opt_.Q, n - 1);
    const MargulisResult m = evaluate_margulis(n, opt_.Q, delta, omega);
    cli::Cell bound = m.bound_value;
    if (extended) bound = Extended{theorem_bound_extended(ExtendedReal(delta), ExtendedReal(opt_.Q), n)};
    const VolumeResult printed = manifold_volume_bound(n, m.ball_radius, RadiusConvention::Printed);
    const VolumeResult full = manifold_volume_bound(n, m.ball_radius, RadiusConvention::FullRadius);
    report.add_row({std::int64_t{n}, m.ball_radius, delta, bound, m.omega, m.feasible,
                    Extended{printed.manifold_bound_extended}, Extended{full.manifold_bound_extended}});
  }
  emit(report);
  if (format_ == OutputFormat::Table) {
    out_ << "reference volumes: compact surface 8 pi^2 = " << num(kCompactSurfaceMinVolume)
         << ", cusped surface 8 pi^2 / 3 = " << num(kCuspedSurfaceMinVolume) << '\n';
  }
  return 0;
}

std::string read_replay_source(const std::string& source) {
  const auto first = source.find_first_not_of(" \t\n");
  if (first != std::string::npos && source[first] == '{') return source;
  std::ifstream in(source);
  if (!in) throw ParseError("cannot open replay file " + source);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

int Session::verify() {
  if (!opt_.replay.empty()) {
    const cli::FailingInstance instance = cli::FailingInstance::from_json(read_replay_source(opt_.replay));
    double limit = 0.0;
    const cli::Outcome o = cli::replay(instance, &limit);
    header("verify", {{"replay", instance.to_json()}, {"format", opt_.format}});
    Report report({{"suite"}, {"check"}, {"seed"}, {"index"}, {"value"}, {"limit"}, {"margin"}, {"passed"}});
    report.add_row({instance.suite, instance.check, std::to_string(instance.seed), std::int64_t{instance.index},
                    o.value, limit, o.margin(), o.passed()});
    emit(report);
    return o.passed() ? 0 : 1;
  }

  const int samples = opt_.samples.value_or(1000);
  const std::vector<cli::Check> checks = cli::suite_checks(opt_.suite, samples);
  FlagList flags{{"suite", opt_.suite}, {"samples", std::to_string(samples)}, {"seed", std::to_string(opt_.seed)}};
  flags.emplace_back("tol", opt_.tol ? num(*opt_.tol) : "default");
  flags.emplace_back("format", opt_.format);
  header("verify", flags);

  Report report({{"suite"}, {"check"}, {"instances"}, {"passed"}, {"failed"}, {"limit"}, {"worst_margin"},
                 {"worst_index"}});
  std::vector<cli::FailingInstance> failures;
  int failed_checks = 0;
  for (const cli::Check& check : checks) {
    const cli::CheckSummary s = cli::run_check(check, opt_.seed, opt_.tol);
    report.add_row({s.suite, s.name, std::int64_t{s.instances}, std::int64_t{s.passed},
                    std::int64_t{s.instances - s.passed}, s.limit, s.worst_margin, std::int64_t{s.worst_index}});
    if (!s.failures.empty()) ++failed_checks;
    failures.insert(failures.end(), s.failures.begin(), s.failures.end());
  }
  emit(report);
  if (format_ == OutputFormat::Table) {
    out_ << "checks: " << checks.size() << ", failed: " << failed_checks << '\n';
  }
  constexpr std::size_t kMaxListed = 20;
  for (std::size_t i = 0; i < failures.size() && i < kMaxListed; ++i) {
    err_ << "replay: " << failures[i].to_json() << '\n';
  }
  if (failures.size() > kMaxListed) err_ << "(" << failures.size() - kMaxListed << " more failing instances)\n";
  return failures.empty() ? 0 : 1;
}

int Session::approx() {
  if (opt_.n < 1) throw InvalidInput("--n must be >= 1");
  if (!(opt_.Q > 1.0)) throw InvalidInput("--Q must be > 1");
  const SpectrumMode mode = parse_mode(opt_.mode);
  const int samples = opt_.samples.value_or(5);
  if (samples < 1) throw InvalidInput("--samples must be >= 1");

  header("approx", {{"n", std::to_string(opt_.n)}, {"Q", num(opt_.Q)}, {"mode", opt_.mode},
                    {"samples", std::to_string(samples)}, {"seed", std::to_string(opt_.seed)},
                    {"format", opt_.format}});
  Report report({{"sample"}, {"n"}, {"mode"}, {"m"}, {"q"}, {"q_limit"}, {"err"}, {"err_bound"},
                 {"power_defect"}, {"holds"}, {"angles"}});
  std::mt19937_64 rng(opt_.seed);
  bool all_hold = true;
  for (int i = 0; i < samples; ++i) {
    const CMatrix a = random_unitary(opt_.n, rng);
    const FiniteOrderApprox fo = finite_order_approx(a, opt_.Q, mode);
    const double bound = 2.0 * kPi / (static_cast<double>(fo.q) * opt_.Q);
    const double defect = operator_norm(matrix_power(fo.B, fo.q) - CMatrix::Identity(opt_.n, opt_.n));
    const double q_limit = std::pow(opt_.Q, fo.m);
    const bool holds = fo.err <= bound + 1e-12 && defect <= 1e-9 && static_cast<double>(fo.q) <= q_limit;
    all_hold = all_hold && holds;
    report.add_row({std::int64_t{i}, std::int64_t{opt_.n}, std::string(to_string(mode)), std::int64_t{fo.m},
                    std::int64_t{fo.q}, q_limit, fo.err, bound, defect, holds, fo.angles});
  }
  emit(report);
  return all_hold ? 0 : 1;
}

int Session::classify() {
  if (opt_.matrix.empty()) throw InvalidInput("classify needs --matrix <file>");
  const double tol = opt_.tol.value_or(kClassifyTolerance);
  const CMatrix mat = read_matrix_file(opt_.matrix);
  header("classify", {{"matrix", opt_.matrix}, {"tol", num(tol)}, {"format", opt_.format}});

  const SuResiduals residuals = su_residuals(mat);
  std::optional<ComplexIsometry> a;
  try {
    a = verify_su(mat);
  } catch (const ValidationError& e) {
    Report report({{"valid"}, {"failed_invariant"}, {"residual"}, {"unitarity_residual"}, {"determinant_residual"}});
    report.add_row({false, e.invariant(), e.residual(), residuals.unitarity, residuals.determinant});
    emit_record(report);
    err_ << "validation failed: " << e.what() << '\n';
    return 1;
  }

  const Classification c = classify_detailed(*a, tol);
  std::vector<double> moduli;
  for (Eigen::Index i = 0; i < c.eigenvalues.size(); ++i) moduli.push_back(std::abs(c.eigenvalues(i)));
  std::sort(moduli.rbegin(), moduli.rend());
  const BallPoint origin = BallPoint::origin(a->n());
  const double rho = bergman_distance(origin, apply(*a, origin));
  const UnitaryDistanceCertificate cert = dist_to_unitary(*a);

  Report report({{"valid"}, {"n"}, {"unitarity_residual"}, {"determinant_residual"}, {"class"},
                 {"eigenvalue_moduli"}, {"eigenbasis_condition"}, {"operator_norm"}, {"jorgensen_quantity"},
                 {"rho_origin"}, {"cert_r"}, {"cert_actual"}, {"cert_bound"}, {"cert_holds"}});
  report.add_row({true, std::int64_t{a->n()}, residuals.unitarity, residuals.determinant,
                  std::string(to_string(c.kind)), moduli, c.eigenbasis_condition, operator_norm(a->mat()),
                  jorgensen_quantity(*a), rho, cert.r, cert.actual, cert.bound, cert.actual <= cert.bound + 1e-9});
  emit_record(report);
  return 0;
}

int Session::distance() {
  if (opt_.x.empty() || opt_.y.empty()) throw InvalidInput("distance needs --x and --y");
  const BallPoint x(parse_complex_list(opt_.x));
  const BallPoint y(parse_complex_list(opt_.y));
  if (x.n() != y.n()) throw InvalidInput("--x and --y have different dimensions");
  header("distance", {{"x", opt_.x}, {"y", opt_.y}, {"format", opt_.format}});
  Report report({{"n"}, {"rho"}, {"rho_cross_ratio"}});
  report.add_row({std::int64_t{x.n()}, bergman_distance(x, y), bergman_distance(standard_lift(x), standard_lift(y))});
  emit(report);
  return 0;
}

int Session::optimize() {
  const int lo = opt_.n;
  const int hi = opt_.n_max.value_or(opt_.n);
  if (lo < 2 || hi < lo || hi > kMaxTableDimension) throw InvalidInput("need 2 <= n <= n-max <= 12");
  if (!(opt_.Q_min > 1.0) || !(opt_.Q_max >= opt_.Q_min)) throw InvalidInput("need 1 < Q-min <= Q-max");
  const double tol = opt_.tol.value_or(1e-9);
  if (!(tol > 0.0)) throw InvalidInput("--tol must be > 0");
  const OmegaChoice omega = parse_omega(opt_.omega);

  header("optimize", {{"n", std::to_string(lo)}, {"n_max", std::to_string(hi)}, {"Q_min", num(opt_.Q_min)},
                      {"Q_max", num(opt_.Q_max)}, {"tol", num(tol)}, {"omega", opt_.omega},
                      {"format", opt_.format}});
  Report report({{"point"}, {"n"}, {"Q"}, {"delta"}, {"bound_value"}, {"omega"}, {"ball_radius"},
                 {"vol_printed", true}, {"vol_full_radius", true}, {"delta_ratio"}, {"tol"}});
  bool found_all = true;
  for (int n = lo; n <= hi; ++n) {
    const MargulisResult paper = evaluate_margulis(n, 17.0, paper_delta(n), omega);
    const auto best = max_delta(n, opt_.Q_min, opt_.Q_max, tol, omega);
    auto add = [&](const std::string& label, const MargulisResult& m) {
      report.add_row({label, std::int64_t{n}, m.Q, m.delta, m.bound_value, m.omega, m.ball_radius,
                      Extended{manifold_volume_bound(n, m.ball_radius).manifold_bound_extended},
                      Extended{manifold_volume_bound(n, m.ball_radius, RadiusConvention::FullRadius)
                                   .manifold_bound_extended},
                      m.delta / paper.delta, tol});
    };
    if (best) {
      add("optimal", *best);
    } else {
      found_all = false;
      err_ << "no feasible Q in [" << num(opt_.Q_min) << ", " << num(opt_.Q_max) << "] for n = " << n << '\n';
    }
    add("paper", paper);
  }
  emit(report);
  return found_all ? 0 : 1;
}

void add_output_flags(CLI::App* sub, Options& o) {
  sub->add_option("--format", o.format, "table | csv | json-lines")
      ->check(CLI::IsMember({"table", "csv", "json-lines"}))
      ->capture_default_str();
  sub->add_flag("--no-header", o.no_header, "omit the run header line");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Complex hyperbolic ball geometry, Margulis-type constants and volume bounds", "chball-cli"};
  app.require_subcommand(1);

  auto* bounds = app.add_subcommand("bounds", "radius, delta, bound and volume table over n");
  auto* n_opt = bounds->add_option("--n", o.n, "first dimension (default 2)");
  bounds->add_option("--n-max", o.n_max, "last dimension (default 8, or --n when given)");
  bounds->add_option("--Q", o.Q, "pigeonhole parameter")->capture_default_str();
  bounds->add_option("--omega", o.omega, "fh | martin-sqrt | martin-2s3")->capture_default_str();
  bounds->add_option("--precision", o.precision, "double | extended")
      ->check(CLI::IsMember({"double", "extended"}))
      ->capture_default_str();
  add_output_flags(bounds, o);

  auto* verify = app.add_subcommand("verify", "run invariant suites");
  verify->add_option("--suite", o.suite, "hermitian | isometry | norms | approx | bounds | volume | all")
      ->capture_default_str();
  verify->add_option("--samples", o.samples, "instances per check (default 1000)");
  verify->add_option("--seed", o.seed)->capture_default_str();
  verify->add_option("--tol", o.tol, "override every check's slack");
  verify->add_option("--replay", o.replay, "failing-instance JSON, inline or in a file");
  add_output_flags(verify, o);

  auto* approx = app.add_subcommand("approx", "finite-order approximation of Haar-random unitaries");
  approx->add_option("--n", o.n, "matrix size")->capture_default_str();
  approx->add_option("--Q", o.Q)->capture_default_str();
  approx->add_option("--mode", o.mode, "projective | full-spectrum")->capture_default_str();
  approx->add_option("--samples", o.samples, "number of unitaries (default 5)");
  approx->add_option("--seed", o.seed)->capture_default_str();
  add_output_flags(approx, o);

  auto* classify = app.add_subcommand("classify", "validate and classify a matrix file");
  classify->add_option("--matrix", o.matrix, "JSON matrix document")->required();
  classify->add_option("--tol", o.tol, "classification tolerance (default 1e-8)");
  add_output_flags(classify, o);

  auto* distance = app.add_subcommand("distance", "Bergman distance between two ball points");
  distance->add_option("--x", o.x, "point as [[re, im], ...]")->required();
  distance->add_option("--y", o.y, "point as [[re, im], ...]")->required();
  add_output_flags(distance, o);

  auto* optimize = app.add_subcommand("optimize", "maximize delta over Q");
  optimize->add_option("--n", o.n)->capture_default_str();
  optimize->add_option("--n-max", o.n_max, "last dimension (default --n)");
  optimize->add_option("--Q-min", o.Q_min)->capture_default_str();
  optimize->add_option("--Q-max", o.Q_max)->capture_default_str();
  optimize->add_option("--tol", o.tol, "bisection tolerance on omega (default 1e-9)");
  optimize->add_option("--omega", o.omega, "fh | martin-sqrt | martin-2s3")->capture_default_str();
  add_output_flags(optimize, o);

  std::vector<std::string> argv_store{"chball-cli"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }
  o.n_given = n_opt->count() > 0;

  try {
    Session session(o, out, err);
    if (*bounds) return session.bounds();
    if (*verify) return session.verify();
    if (*approx) return session.approx();
    if (*classify) return session.classify();
    if (*distance) return session.distance();
    if (*optimize) return session.optimize();
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const NotInBall& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ResourceLimit& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "failure: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace chball
