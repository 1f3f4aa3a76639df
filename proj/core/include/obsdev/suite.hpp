#pragma once

// Seeded property suites. Each suite owns a set of metrics; a case evaluates
// every metric of its check group once, and a metric passes when its largest
// defect over all cases is within tolerance.
//
// Seeds: group g with name s uses base = config.seed ^ fnv1a64(s); case i draws
// from case_rng(base, i). Cases run on a thread pool and are reduced in case
// order, so reports do not depend on the thread count.

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "obsdev/hermitian.hpp"
#include "obsdev/json_io.hpp"

namespace obsdev {

struct SuiteConfig {
  std::vector<int> dims;
  int samples_per_case = 500;
  std::uint64_t seed = 20130101;
  // Overrides keyed by metric name, e.g. {"lemma1.variational_gap", 1e-7}.
  std::map<std::string, double> tolerances;
  std::vector<std::string> suites;
  // 0 = hardware concurrency. Not part of the report.
  int threads = 0;

  // dims 2..16, every suite.
  static SuiteConfig defaults();
  // InvalidArgument on dims outside [1, 64], samples_per_case < 1 or an
  // unknown suite name.
  void validate() const;
};

struct CheckResult {
  std::string suite;
  std::string name;
  int cases = 0;
  double max_defect = 0.0;
  double tolerance = 0.0;
  int errors = 0;  // cases that threw
  bool pass = false;
};

struct SuiteReport {
  std::vector<CheckResult> checks;
  bool overall = false;
  double wall_time = 0.0;
};

// Substitutable primitives, for mutation testing of the suites themselves.
struct SuiteHooks {
  std::function<double(const HermitianMatrix&)> max_deviation;
};

const std::vector<std::string>& suite_names();

// One row per invariant of the deviation, factor-space and preservers
// modules: which suite runs it and under which metric names.
struct InvariantEntry {
  std::string module;
  std::string invariant;
  std::string suite;
  std::vector<std::string> metrics;
};

const std::vector<InvariantEntry>& invariant_registry();

// Metric names a suite reports, in report order.
std::vector<std::string> suite_metrics(const std::string& suite);

SuiteReport run_suite(const SuiteConfig& config, const SuiteHooks& hooks = {});

SuiteConfig config_from_json(const Json& j);
Json to_json(const SuiteConfig& config);
// wall_time is the only field that varies between identical runs.
Json to_json(const SuiteReport& report);

}  // namespace obsdev
