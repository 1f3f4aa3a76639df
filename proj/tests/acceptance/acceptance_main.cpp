// Acceptance gate: one line per criterion, exit status 1 if any criterion fails.
// Reference values come from the independent oracles in oracles.hpp wherever
// the library's own eigensolver would otherwise be checking itself.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "obsdev/deviation.hpp"
#include "obsdev/factor_space.hpp"
#include "obsdev/preservers.hpp"
#include "obsdev/random.hpp"
#include "obsdev/suite.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace obsdev;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> run;
};

// Running maximum of a named defect against its pinned tolerance.
class Ledger {
 public:
  void add(const std::string& name, double value, double tol) {
    for (Entry& e : entries_) {
      if (e.name == name) {
        e.worst = std::max(e.worst, value);
        return;
      }
    }
    entries_.push_back({name, value, tol});
  }
  void fail(const std::string& why) { failures_.push_back(why); }
  void note(const std::string& text) { notes_.push_back(text); }

  Outcome outcome() const {
    Outcome o;
    char buf[160];
    for (const Entry& e : entries_) {
      const bool ok = e.worst <= e.tol;
      o.pass = o.pass && ok;
      std::snprintf(buf, sizeof buf, "%s%s=%.2e/%.0e", o.detail.empty() ? "" : " ",
                    e.name.c_str(), e.worst, e.tol);
      o.detail += buf;
      if (!ok) o.detail += "(!)";
    }
    for (const std::string& f : failures_) {
      o.pass = false;
      o.detail += " FAILED:" + f;
    }
    for (const std::string& n : notes_) o.detail += " " + n;
    return o;
  }

 private:
  struct Entry {
    std::string name;
    double worst;
    double tol;
  };
  std::vector<Entry> entries_;
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

HermitianMatrix conjugate(const CMatrix& u, const HermitianMatrix& a) {
  return HermitianMatrix::symmetrize(u * a.matrix() * u.adjoint());
}

int oracle_rank(const HermitianMatrix& p) {
  return static_cast<int>(std::lround(p.matrix().trace().real()));
}

// ---------------------------------------------------------------- 1

Outcome three_routes() {
  Ledger l;
  const auto t0 = Clock::now();
  Rng rng(0xA1);
  for (int i = 0; i < 500; ++i) {
    const int n = 2 + i % 15;
    const HermitianMatrix a = gen_hermitian(n, rng);
    const double spectral = max_deviation(a);
    const double variational = max_deviation_variational(a, 8, rng.next_u64()).value;
    const double reference = oracle::half_diameter(a.matrix());
    const StateVector w = witness_state(a);
    l.add("|var-spec|", std::abs(variational - spectral), 1e-6);
    l.add("|spec-oracle|", std::abs(spectral - reference), 1e-9);
    l.add("|var(w)-dev^2|",
          std::abs(testutil::direct_variance(a.matrix(), w.amplitudes()) - reference * reference),
          1e-9);
  }
  const double elapsed = seconds_since(t0);
  l.add("time_s", elapsed, 10.0);
  return l.outcome();
}

// ---------------------------------------------------------------- 2

Outcome overlap_law() {
  Ledger l;
  Rng rng(0xA2);
  for (int i = 0; i < 500; ++i) {
    const int n = 2 + i % 15;
    const HermitianMatrix p = HermitianMatrix::outer(gen_state(n, rng).amplitudes());
    const HermitianMatrix q = HermitianMatrix::outer(gen_state(n, rng).amplitudes());
    const double overlap = (p.matrix() * q.matrix()).trace().real();
    l.add("rank_one", std::abs(d_v(p, q) - std::sqrt(std::max(0.0, 1.0 - overlap))), 1e-9);
  }
  const HermitianMatrix p = HermitianMatrix::diagonal({1.0, 0.0});
  for (double a : {0.0, 0.25, 0.5, 0.9, 1.0}) {
    for (int k = 0; k < 8; ++k) {
      const HermitianMatrix q = testutil::overlap_family(a, rng.uniform(0.0, 2.0 * std::numbers::pi));
      l.add("family", std::abs(d_v(p, q) - std::sqrt(1.0 - a)), 1e-9);
    }
  }
  return l.outcome();
}

// ---------------------------------------------------------------- 3

Outcome seminorm() {
  Ledger l;
  Rng rng(0xA3);
  for (int i = 0; i < 500; ++i) {
    const int n = 1 + i % 16;
    const HermitianMatrix a = gen_hermitian(n, rng);
    const HermitianMatrix b = gen_hermitian(n, rng);
    const double t = rng.uniform(-4.0, 4.0);
    const double mu = rng.uniform(-10.0, 10.0);
    const CMatrix u = gen_haar_unitary(n, rng);
    const double da = max_deviation(a);
    l.add("homogeneity", std::abs(max_deviation(t * a) - std::abs(t) * da), 1e-9);
    l.add("subadditivity", std::max(0.0, max_deviation(a + b) - da - max_deviation(b)), 1e-9);
    l.add("shift", std::abs(max_deviation(a.shifted(mu)) - da), 1e-9);
    l.add("+UAU*+mu", std::abs(max_deviation(conjugate(u, a).shifted(mu)) - da), 1e-9);
    l.add("-UAU*+mu", std::abs(max_deviation((-conjugate(u, a)).shifted(mu)) - da), 1e-9);
  }
  int mismatches = 0;
  for (int i = 0; i < 200; ++i) {
    const int n = 2 + i % 15;
    double top = 1.0;
    if (i % 4 != 0) {
      do {
        top = rng.uniform(0.2, 1.8);
      } while (std::abs(top - 1.0) < 1e-6);
    }
    RVector d(n);
    d(0) = 0.0;
    d(n - 1) = top;
    for (int k = 1; k + 1 < n; ++k) d(k) = rng.uniform(0.0, top);
    const HermitianMatrix a = conjugate(gen_haar_unitary(n, rng), HermitianMatrix::diagonal(d));
    const auto ev = oracle::eigenvalues(a.matrix());
    const bool in_half_ball = max_deviation(a) <= 0.5 + 1e-12;
    const bool below_identity = ev.back() <= 1.0 + 1e-12;
    if (in_half_ball != below_identity) ++mismatches;
  }
  l.add("normalized_mismatches", mismatches, 0.0);
  return l.outcome();
}

// ---------------------------------------------------------------- 4

PreserverForm random_form(Rng& rng, int n) {
  PreserverForm form = PreserverForm::identity(n);
  form.sign = rng.uniform() < 0.5 ? -1 : 1;
  form.antiunitary = rng.uniform() < 0.5;
  form.u = gen_haar_unitary(n, rng);
  form.f = 0.5 * gen_hermitian(n, rng);
  return form;
}

Outcome round_trip() {
  Ledger l;
  const auto t0 = Clock::now();
  Rng rng(0xA4);
  int sign_errors = 0;
  int signs_checked = 0;
  for (int i = 0; i < 200; ++i) {
    const int n = 2 + i % 9;
    const PreserverForm truth = random_form(rng, n);
    const LinearMapOnHermitians map = to_map(truth).linear;
    try {
      DecomposeOptions opt;
      opt.seed = rng.next_u64();
      const PreserverForm rec = decompose_deviation_preserver(map, opt);
      l.add("residual", (to_map(rec).linear.matrix - map.matrix).cwiseAbs().maxCoeff(), 1e-7);
      if (n >= 3) {
        ++signs_checked;
        if (rec.sign != truth.sign) ++sign_errors;
        l.add("action", rank_one_action_distance(rec, truth, 16, opt.seed), 1e-7);
        l.add("|F-F0|", oracle::operator_norm(rec.f.matrix() - truth.f.matrix()), 1e-6);
      }
    } catch (const Error& e) {
      l.fail(std::string("n=") + std::to_string(n) + " " + e.what());
    }
  }
  l.add("sign_errors", sign_errors, 0.0);
  l.note("signs_checked=" + std::to_string(signs_checked));
  l.add("time_s", seconds_since(t0), 30.0);
  return l.outcome();
}

// ---------------------------------------------------------------- 5

// Random symmetric perturbations B +- t D; a hit puts both in the closed 1/2-ball.
bool midpoint_found(const HermitianMatrix& b, Rng& rng, int attempts) {
  const int n = b.dim();
  for (int k = 0; k < attempts; ++k) {
    HermitianMatrix d = gen_hermitian(n, rng);
    d = (1.0 / std::max(oracle::operator_norm(d.matrix()), 1e-300)) * d;
    const double t = 0.5 * std::pow(10.0, rng.uniform(-3.0, 0.0));
    const HermitianMatrix plus = b + t * d;
    const HermitianMatrix minus = b - t * d;
    if (oracle::half_diameter(plus.matrix()) <= 0.5 + 1e-12 &&
        oracle::half_diameter(minus.matrix()) <= 0.5 + 1e-12 &&
        max_deviation(d) > 1e-9) {
      return true;
    }
  }
  return false;
}

Outcome classifier() {
  Ledger l;
  Rng rng(0xA5);
  int misclassified = 0;
  int decompositions = 0;
  for (int i = 0; i < 50; ++i) {
    const int n = 2 + i % 2;
    const HermitianMatrix p = gen_projection(n, rng.uniform_int(1, n - 1), rng);
    const HermitianMatrix b = p.shifted(rng.uniform(-3.0, 3.0));
    if (!is_extreme_half_ball(b)) ++misclassified;
    if (midpoint_found(b, rng, 1000)) ++decompositions;
  }
  l.add("extreme_misclassified", misclassified, 0.0);
  l.add("extreme_decompositions", decompositions, 0.0);

  int non_extreme_misclassified = 0;
  int split_failures = 0;
  for (int i = 0; i < 50; ++i) {
    const int n = 3;
    const double mid = rng.uniform(0.01, 0.99);
    const HermitianMatrix b =
        conjugate(gen_haar_unitary(n, rng), HermitianMatrix::diagonal({0.0, mid, 1.0}))
            .shifted(rng.uniform(-3.0, 3.0));
    if (is_extreme_half_ball(b)) ++non_extreme_misclassified;
    try {
      const HalfBallSplit s = split_non_extreme(b);
      const CMatrix m = 0.5 * (s.first.matrix() + s.second.matrix());
      l.add("split_midpoint", max_abs_diff(m, s.representative.matrix()), 1e-10);
      l.add("split_norms",
            std::max(std::abs(oracle::half_diameter(s.first.matrix()) - 0.5),
                     std::abs(oracle::half_diameter(s.second.matrix()) - 0.5)),
            1e-9);
      if (oracle::half_diameter(s.first.matrix() - s.second.matrix()) <= 1e-6) ++split_failures;
    } catch (const Error&) {
      ++split_failures;
    }
  }
  l.add("non_extreme_misclassified", non_extreme_misclassified, 0.0);
  l.add("split_failures", split_failures, 0.0);
  return l.outcome();
}

// ---------------------------------------------------------------- 6

Outcome close_pairs_and_paths() {
  Ledger l;
  Rng rng(0xA6);
  int close = 0;
  int unequal_close = 0;
  int unequal_seen = 0;
  int draws = 0;
  std::vector<std::pair<HermitianMatrix, HermitianMatrix>> equal_rank;
  while (close < 500 && draws < 200000) {
    ++draws;
    const int n = rng.uniform_int(2, 16);
    const HermitianMatrix p = gen_projection(n, rng.uniform_int(1, n - 1), rng);
    // Q: spectral cut at 1/2 of a perturbation of P; larger kicks change the rank.
    const double scale = std::pow(10.0, rng.uniform(-2.0, 0.0)) / std::sqrt(n);
    const HermitianMatrix kicked = p + scale * gen_hermitian(n, rng);
    const HermitianMatrix q =
        functional_calculus(kicked, [](double t) { return t > 0.5 ? 1.0 : 0.0; });
    const bool same_rank = oracle_rank(p) == oracle_rank(q);
    if (!same_rank) ++unequal_seen;
    if (oracle::half_diameter(p.matrix() - q.matrix()) < 0.5 - 1e-6) {
      ++close;
      if (!same_rank) ++unequal_close;
      if (same_rank && equal_rank.size() < 250) equal_rank.emplace_back(p, q);
    }
  }
  l.add("close_pairs_short", 500 - close, 0.0);
  l.add("close_unequal_rank", unequal_close, 0.0);
  l.note("unequal_rank_draws=" + std::to_string(unequal_seen));

  for (int i = 0; i < 250; ++i) {
    const int n = rng.uniform_int(2, 16);
    const int k = rng.uniform_int(1, n - 1);
    equal_rank.emplace_back(gen_projection(n, k, rng), gen_projection(n, k, rng));
  }
  for (const auto& [p, q] : equal_rank) {
    try {
      const int steps = minimal_path_steps(p, q);
      const auto path = projection_path(p, q, steps);
      double link = 0.0;
      for (std::size_t j = 1; j < path.size(); ++j) {
        link = std::max(link, oracle::half_diameter(path[j - 1].matrix() - path[j].matrix()));
      }
      l.add("max_link", link, 0.5 - 1e-12);
      l.add("endpoint", max_abs_diff(path.back().matrix(), q.matrix()), 1e-8);
    } catch (const Error& e) {
      l.fail(e.what());
    }
  }
  return l.outcome();
}

// ---------------------------------------------------------------- 7

Outcome distinguisher() {
  Ledger l;
  Rng rng(0xA7);
  int missing = 0;
  int spurious = 0;
  for (int i = 0; i < 200; ++i) {
    const int n = 2 + i % 11;
    const HermitianMatrix p = gen_projection(n, rng.uniform_int(1, n - 1), rng);
    HermitianMatrix q = gen_projection(n, rng.uniform_int(1, n - 1), rng);
    if (i % 5 == 0) {
      // Nested pair: range(Q) inside range(P) when rank(P) > 1.
      const auto sd = spectral_decompose(p);
      q = HermitianMatrix::outer(sd.eigenvectors.col(n - 1));
    }
    if (max_abs_diff(p.matrix(), q.matrix()) <= 1e-6) continue;
    const auto w = distinguish_projections(p, q);
    if (!w) {
      ++missing;
      continue;
    }
    const CMatrix& r = w->r.matrix();
    const auto rev = oracle::eigenvalues(r);
    l.add("rank_one", std::max(std::abs(rev.back() - 1.0), std::abs(rev[rev.size() - 2])), 1e-8);
    const double gap =
        std::abs(oracle::half_diameter(p.matrix() + r) - oracle::half_diameter(q.matrix() + r));
    l.add("gap_shortfall", std::max(0.0, 1e-6 - gap), 0.0);
    if (distinguish_projections(p, p)) ++spurious;
  }
  l.add("witness_missing", missing, 0.0);
  l.add("equal_pair_witness", spurious, 0.0);
  return l.outcome();
}

// ---------------------------------------------------------------- 8

bool rejects(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code() == ErrorCode::NotAnIsometry;
  }
  return false;
}

Outcome nonlinear_isometries() {
  Ledger l;
  Rng rng(0xA8);
  int accepted_non_isometries = 0;
  for (int i = 0; i < 36; ++i) {
    const int n = 2 + i % 5;
    const int kind = (i / 5) % 3;
    PreserverForm form = PreserverForm::identity(n);
    form.sign = rng.uniform() < 0.5 ? -1 : 1;
    form.antiunitary = rng.uniform() < 0.5;
    form.u = gen_haar_unitary(n, rng);
    form.x = gen_hermitian(n, rng);
    const auto g = [kind](const HermitianMatrix& a) {
      if (kind == 1) return std::sin(a.trace());
      if (kind == 2) return oracle::operator_norm(a.matrix());
      return 0.0;
    };
    const MapOracle phi = [&](const HermitianMatrix& a) {
      return apply_form(form, a).shifted(g(a));
    };
    const std::uint64_t seed = rng.next_u64();
    try {
      const LinearizedIsometry r = linearize_dv_isometry(phi, n, 200, seed);
      l.add("dv.X", oracle::operator_norm(r.form.x.matrix() - form.x.matrix()), 1e-7);
      l.add("dv.model", r.model_defect, 1e-7);
      if (n >= 3) {
        l.add("dv.sign", r.form.sign != form.sign ? 1.0 : 0.0, 0.0);
        l.add("dv.action", rank_one_action_distance(r.form, form, 16, seed), 1e-7);
      }
      l.add("dv.additivity", r.additivity_defect, 1e-8);
      if (kind == 0) {
        const AffinizedIsometry t = affinize_dm_isometry(phi, n, 200, seed);
        l.add("dm.sign", t.form.sign != form.sign ? 1.0 : 0.0, 0.0);
        l.add("dm.action", rank_one_action_distance(t.form, form, 16, seed), 1e-7);
        l.add("dm.X", oracle::operator_norm(t.translation.matrix() - form.x.matrix()), 1e-7);
        l.add("dm.additivity", t.additivity_defect, 1e-8);
      }
    } catch (const Error& e) {
      l.fail(std::string("n=") + std::to_string(n) + " " + e.what());
    }
    const MapOracle bent = [](const HermitianMatrix& a) {
      return a + 0.01 * HermitianMatrix::symmetrize(a.matrix() * a.matrix());
    };
    if (!rejects([&] { affinize_dm_isometry(bent, n, 200, seed); })) ++accepted_non_isometries;
    if (!rejects([&] { linearize_dv_isometry(bent, n, 200, seed); })) ++accepted_non_isometries;
  }
  l.add("non_isometry_accepted", accepted_non_isometries, 0.0);
  return l.outcome();
}

// ---------------------------------------------------------------- 9

Outcome full_suite() {
  Ledger l;
  const SuiteConfig config = SuiteConfig::defaults();
  const auto t0 = Clock::now();
  const SuiteReport first = run_suite(config);
  const double elapsed = seconds_since(t0);
  const SuiteReport second = run_suite(config);
  Json a = to_json(first);
  Json b = to_json(second);
  a.erase("wall_time");
  b.erase("wall_time");
  int failing = 0;
  for (const CheckResult& c : first.checks) {
    if (!c.pass) {
      ++failing;
      l.fail(c.name);
    }
  }
  l.add("failing_checks", failing, 0.0);
  l.add("time_s", elapsed, 60.0);
  l.add("report_bytes_differ", a.dump() == b.dump() ? 0.0 : 1.0, 0.0);
  l.note("checks=" + std::to_string(first.checks.size()) + fmt(" wall=%.2fs", first.wall_time));
  if (!first.overall) l.fail("overall");
  return l.outcome();
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "deviation routes agree and the witness attains the maximum", three_routes},
      {2, "rank-one distance law and explicit 2x2 family", overlap_law},
      {3, "seminorm axioms, invariances and normalized equivalence", seminorm},
      {4, "deviation-preserver round trip", round_trip},
      {5, "extreme-point classifier against midpoint search", classifier},
      {6, "close projection classes share rank; rotation paths", close_pairs_and_paths},
      {7, "rank-one distinguishing witnesses", distinguisher},
      {8, "nonlinear d_m and d_v isometries", nonlinear_isometries},
      {9, "full default suite run", full_suite},
  };
  bool all = true;
  for (const Criterion& c : criteria) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.pass;
    std::printf("[%s] criterion %d: %s (%.2fs) %s\n", o.pass ? "PASS" : "FAIL", c.id, c.title,
                seconds_since(t0), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%s\n", all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL");
  return all ? 0 : 1;
}
