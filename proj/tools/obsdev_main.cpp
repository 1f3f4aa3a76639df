// obsdev: command-line front end. Results go to stdout as JSON (or to --out).
// Exit status: 0 pass, 1 failed check or decomposition, 2 input error.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#if __has_include(<CLI/CLI.hpp>)
#include <CLI/CLI.hpp>
#else
#include "CLI11.hpp"
#endif

#include "obsdev/deviation.hpp"
#include "obsdev/factor_space.hpp"
#include "obsdev/json_io.hpp"
#include "obsdev/preservers.hpp"
#include "obsdev/random.hpp"
#include "obsdev/suite.hpp"

namespace {

using namespace obsdev;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kInputError = 2;

bool is_input_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::InputError:
    case ErrorCode::InvalidArgument:
    case ErrorCode::NotSquare:
    case ErrorCode::DefectTooLarge:
    case ErrorCode::NotNormalized:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::NotProjection:
    case ErrorCode::OutsideBall:
    case ErrorCode::BadRank:
    case ErrorCode::RankMismatch:
    case ErrorCode::ScalarOperator:
      return true;
    default:
      return false;
  }
}

void emit(const Json& j, const std::string& out) {
  if (out.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    write_json_file(out, j);
  }
}

struct Options {
  std::optional<double> tol;
  std::string out;

  std::string input;
  std::string route = "spectral";
  int restarts = 8;
  std::uint64_t seed = 0;

  std::string a;
  std::string b;
  std::string kind = "dm";

  std::string map;
  std::string property = "norm";
  int samples = 64;

  std::string config;

  std::string gen_kind;
  int dim = 2;
  int rank = 1;
};

int cmd_deviation(const Options& o) {
  const HermitianMatrix a =
      hermitian_from_json(read_json_file(o.input), o.tol.value_or(tol::kHermitian));
  const auto route = parse_route(o.route);
  if (!route) throw Error(ErrorCode::InputError, "unknown route \"" + o.route + "\"");
  VariationalOptions vopt;
  vopt.restarts = o.restarts;
  vopt.seed = o.seed;
  emit(to_json(deviation_report(a, *route, vopt)), o.out);
  return kPass;
}

int cmd_metric(const Options& o) {
  const double t = o.tol.value_or(tol::kHermitian);
  const HermitianMatrix a = hermitian_from_json(read_json_file(o.a), t);
  const HermitianMatrix b = hermitian_from_json(read_json_file(o.b), t);
  double value = 0.0;
  if (o.kind == "dm") {
    value = d_m(a, b);
  } else if (o.kind == "dv") {
    value = d_v(a, b);
  } else {
    throw Error(ErrorCode::InputError, "--kind must be dm or dv");
  }
  emit(Json{{"kind", o.kind}, {"value", value}}, o.out);
  return kPass;
}

int cmd_extreme(const Options& o) {
  const double t = o.tol.value_or(tol::kProjection);
  const HermitianMatrix a = hermitian_from_json(read_json_file(o.input));
  const FactorClass cls = canonicalize(a);
  Json j{{"class_norm", max_deviation(a)},
         {"representative", to_json(cls.representative)},
         {"shift", cls.original_shift},
         {"extreme", is_extreme_half_ball(a, t)}};
  if (const auto p = projection_in_class(a, t)) {
    j["projection"] = to_json(p->projection);
    j["projection_shift"] = p->shift;
    j["trivial"] = p->trivial;
  }
  emit(j, o.out);
  return kPass;
}

int cmd_distinguish(const Options& o) {
  const double t = o.tol.value_or(tol::kProjection);
  const HermitianMatrix p = hermitian_from_json(read_json_file(o.a));
  const HermitianMatrix q = hermitian_from_json(read_json_file(o.b));
  const auto w = distinguish_projections(p, q, t);
  Json j{{"distinct", w.has_value()}};
  if (w) j["witness"] = to_json(*w);
  emit(j, o.out);
  return kPass;
}

PreservedQuantity quantity_flag(const std::string& name) {
  const auto q = parse_quantity(name);
  if (!q || (*q != PreservedQuantity::OperatorNorm && *q != PreservedQuantity::MaxDeviation)) {
    throw Error(ErrorCode::InputError, "--property must be norm or deviation");
  }
  return *q;
}

int cmd_check(const Options& o) {
  const LinearMapOnHermitians map = map_from_json(read_json_file(o.map));
  const CheckReport r =
      check_preserver(map, quantity_flag(o.property), o.samples, o.seed, o.tol.value_or(1e-8));
  emit(to_json(r), o.out);
  return r.verdict ? kPass : kFail;
}

int cmd_decompose(const Options& o) {
  const LinearMapOnHermitians map = map_from_json(read_json_file(o.map));
  DecomposeOptions options;
  options.seed = o.seed;
  if (o.tol) options.check_tol = *o.tol;
  const PreserverForm form = quantity_flag(o.property) == PreservedQuantity::OperatorNorm
                                 ? decompose_norm_preserver(map, options)
                                 : decompose_deviation_preserver(map, options);
  emit(to_json(form), o.out);
  return kPass;
}

int cmd_suite(const Options& o) {
  const SuiteConfig config =
      o.config.empty() ? SuiteConfig::defaults() : config_from_json(read_json_file(o.config));
  const SuiteReport report = run_suite(config);
  for (const CheckResult& r : report.checks) {
    std::cerr << (r.pass ? "PASS " : "FAIL ") << r.name << "  cases=" << r.cases
              << "  max_defect=" << r.max_defect << "  tol=" << r.tolerance;
    if (r.errors > 0) std::cerr << "  errors=" << r.errors;
    std::cerr << '\n';
  }
  std::cerr << (report.overall ? "overall PASS" : "overall FAIL") << " in " << report.wall_time
            << " s\n";
  emit(to_json(report), o.out);
  return report.overall ? kPass : kFail;
}

int cmd_gen(const Options& o) {
  Json j;
  if (o.gen_kind == "hermitian") {
    j = to_json(gen_hermitian(o.dim, o.seed));
  } else if (o.gen_kind == "unitary") {
    j = matrix_to_json(gen_haar_unitary(o.dim, o.seed));
  } else if (o.gen_kind == "projection") {
    j = to_json(gen_projection(o.dim, o.rank, o.seed));
  } else {
    throw Error(ErrorCode::InputError, "gen kind must be hermitian, unitary or projection");
  }
  emit(j, o.out);
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maximal deviation of observables and its preservers"};
  app.require_subcommand(1);
  Options o;
  double tol_value = 0.0;

  auto common = [&](CLI::App* cmd) {
    cmd->add_option("--tol", tol_value, "Tolerance override");
    cmd->add_option("--out", o.out, "Write the JSON result here instead of stdout");
  };

  CLI::App* deviation = app.add_subcommand("deviation", "Maximal deviation of an observable");
  deviation->add_option("--input", o.input, "Matrix JSON")->required();
  deviation->add_option("--route", o.route, "spectral | factor | variational")
      ->check(CLI::IsMember({"spectral", "factor", "variational"}));
  deviation->add_option("--restarts", o.restarts, "Variational restarts")
      ->check(CLI::PositiveNumber);
  deviation->add_option("--seed", o.seed, "Variational seed");
  common(deviation);

  CLI::App* metric = app.add_subcommand("metric", "d_m or d_v between two observables");
  metric->add_option("--a", o.a, "Matrix JSON")->required();
  metric->add_option("--b", o.b, "Matrix JSON")->required();
  metric->add_option("--kind", o.kind, "dm | dv")->check(CLI::IsMember({"dm", "dv"}));
  common(metric);

  CLI::App* extreme = app.add_subcommand("extreme", "Classify a class of the 1/2-ball");
  extreme->add_option("--input", o.input, "Matrix JSON")->required();
  common(extreme);

  CLI::App* distinguish =
      app.add_subcommand("distinguish", "Rank-one witness separating two projections");
  distinguish->add_option("--p", o.a, "Projection JSON")->required();
  distinguish->add_option("--q", o.b, "Projection JSON")->required();
  common(distinguish);

  CLI::App* check = app.add_subcommand("check", "Randomized preserver check");
  check->add_option("--map", o.map, "Linear map JSON")->required();
  check->add_option("--property", o.property, "norm | deviation")->required();
  check->add_option("--samples", o.samples, "Random samples")->check(CLI::PositiveNumber);
  check->add_option("--seed", o.seed, "Sampling seed");
  common(check);

  CLI::App* decompose = app.add_subcommand("decompose", "Decompose a verified preserver");
  decompose->add_option("--map", o.map, "Linear map JSON")->required();
  decompose->add_option("--property", o.property, "norm | deviation")->required();
  decompose->add_option("--seed", o.seed, "Verification seed");
  common(decompose);

  CLI::App* suite = app.add_subcommand("suite", "Run the property suites");
  suite->add_option("--config", o.config, "Suite config JSON (defaults if omitted)");
  common(suite);

  CLI::App* gen = app.add_subcommand("gen", "Seeded random matrices");
  gen->add_option("kind", o.gen_kind, "hermitian | unitary | projection")
      ->required()
      ->check(CLI::IsMember({"hermitian", "unitary", "projection"}));
  gen->add_option("--dim", o.dim, "Dimension")->required();
  gen->add_option("--rank", o.rank, "Projection rank");
  gen->add_option("--seed", o.seed, "Seed")->required();
  common(gen);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  for (CLI::App* cmd : app.get_subcommands()) {
    if (cmd->count("--tol") > 0) o.tol = tol_value;
  }

  try {
    if (deviation->parsed()) return cmd_deviation(o);
    if (metric->parsed()) return cmd_metric(o);
    if (extreme->parsed()) return cmd_extreme(o);
    if (distinguish->parsed()) return cmd_distinguish(o);
    if (check->parsed()) return cmd_check(o);
    if (decompose->parsed()) return cmd_decompose(o);
    if (suite->parsed()) return cmd_suite(o);
    if (gen->parsed()) return cmd_gen(o);
  } catch (const Error& e) {
    std::cerr << "obsdev: " << e.what() << '\n';
    return is_input_error(e.code()) ? kInputError : kFail;
  } catch (const std::exception& e) {
    std::cerr << "obsdev: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}
