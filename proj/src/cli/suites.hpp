#pragma once

// Property suites behind `chball-cli verify`. Every instance draws its inputs
// from an RNG seeded by (seed, suite, check, index), so a single failing
// instance can be rerun on its own.

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace chball::cli {

// value <= limit passes; margin = limit - value.
struct Outcome {
  double value;
  double limit;

  bool passed() const { return value <= limit; }
  double margin() const { return limit - value; }
};

struct Check {
  std::string suite;
  std::string name;
  int instances;
  double limit;
  bool tolerance_applies;  // false for exact (0/1) comparisons
  std::function<Outcome(std::mt19937_64&, double limit)> run;
};

const std::vector<std::string>& suite_names();

// Throws InvalidInput for an unknown suite ("all" selects every suite).
std::vector<Check> suite_checks(const std::string& suite, int samples);

struct FailingInstance {
  std::string suite;
  std::string check;
  std::uint64_t seed;
  int index;
  std::optional<double> tol;

  std::string to_json() const;
  static FailingInstance from_json(const std::string& text);
};

struct CheckSummary {
  std::string suite;
  std::string name;
  int instances = 0;
  int passed = 0;
  double limit = 0.0;
  double worst_margin = 0.0;
  int worst_index = -1;
  std::vector<FailingInstance> failures;
};

std::mt19937_64 instance_rng(std::uint64_t seed, const std::string& suite, const std::string& check, int index);

CheckSummary run_check(const Check& check, std::uint64_t seed, std::optional<double> tol);

// Reruns one instance; throws InvalidInput if the suite or check is unknown.
Outcome replay(const FailingInstance& instance, double* limit_used = nullptr);

}  // namespace chball::cli
