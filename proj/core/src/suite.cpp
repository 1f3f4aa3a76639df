#include "obsdev/suite.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <set>
#include <thread>

#include "obsdev/deviation.hpp"
#include "obsdev/factor_space.hpp"
#include "obsdev/preservers.hpp"
#include "obsdev/random.hpp"

namespace obsdev {

namespace {

constexpr double kNotApplicable = std::numeric_limits<double>::quiet_NaN();

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

struct Metric {
  std::string name;
  double tol;
};

struct CaseContext {
  Rng rng;
  int n;
  int index;
  const SuiteHooks& hooks;

  double dev(const HermitianMatrix& a) const {
    return hooks.max_deviation ? hooks.max_deviation(a) : max_deviation(a);
  }
};

using CaseFn = std::function<std::vector<double>(CaseContext&)>;

struct Group {
  std::string suite;
  std::string key;
  std::vector<Metric> metrics;
  int nominal;
  int lo;
  int hi;
  CaseFn run;
};

double flag(bool failed) { return failed ? 1.0 : 0.0; }

int random_sign(Rng& rng) { return rng.uniform() < 0.5 ? 1 : -1; }

PreserverForm random_form(Rng& rng, int n, bool with_f) {
  PreserverForm form = PreserverForm::identity(n);
  form.sign = random_sign(rng);
  form.u = gen_haar_unitary(n, rng);
  form.antiunitary = rng.uniform() < 0.5;
  if (with_f) form.f = gen_hermitian(n, rng);
  return form;
}

HermitianMatrix conjugate(const CMatrix& u, const HermitianMatrix& a) {
  return HermitianMatrix::symmetrize(u * a.matrix() * u.adjoint());
}

// Spectral projection of a onto eigenvalues above theta.
HermitianMatrix spectral_cut(const HermitianMatrix& a, double theta) {
  const SpectralDecomposition sd = spectral_decompose(a);
  CMatrix p = CMatrix::Zero(a.dim(), a.dim());
  for (int k = 0; k < sd.dim(); ++k) {
    if (sd.eigenvalues(k) > theta) p += sd.eigenvectors.col(k) * sd.eigenvectors.col(k).adjoint();
  }
  return HermitianMatrix::symmetrize(p);
}

// A projection obtained by perturbing p and cutting the spectrum; the rank
// may change when the perturbation is large.
HermitianMatrix perturbed_projection(Rng& rng, const HermitianMatrix& p, double size) {
  const HermitianMatrix g = gen_hermitian(p.dim(), rng);
  const double norm = std::max(operator_norm(g), 1e-300);
  return spectral_cut(p + (size / norm) * g, rng.uniform(0.25, 0.75));
}

int rank_of(const HermitianMatrix& p) { return static_cast<int>(std::lround(p.trace())); }

double metric_defect_max(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

// ---------------------------------------------------------------- lemma1

std::vector<double> lemma1_case(CaseContext& c) {
  const HermitianMatrix a = gen_hermitian(c.n, c.rng);
  const double spectral = c.dev(a);
  const FactorNorm factor = factor_norm(a);
  const DeviationReport var = max_deviation_variational(a, 8, c.rng.next_u64());
  double witness_defect = 0.0;
  if (!is_scalar(a)) {
    witness_defect = std::abs(variance(a, witness_state(a)) - spectral * spectral);
  }
  return {std::abs(spectral - factor.value), std::max(spectral - var.value, 0.0),
          std::max(var.value - spectral, 0.0), witness_defect,
          std::max(spectral - operator_norm(a), 0.0)};
}

// -------------------------------------------------------------- seminorm

std::vector<double> seminorm_case(CaseContext& c) {
  const int n = c.n;
  const HermitianMatrix a = gen_hermitian(n, c.rng);
  const HermitianMatrix b = gen_hermitian(n, c.rng);
  const double t = c.rng.uniform(-5.0, 5.0);
  const double lambda = c.rng.uniform(-10.0, 10.0);
  const int s = random_sign(c.rng);
  const CMatrix u = gen_haar_unitary(n, c.rng);
  const HermitianMatrix scalar = HermitianMatrix::scalar(n, lambda);
  const double da = c.dev(a);
  return {std::abs(c.dev(t * a) - std::abs(t) * da),
          std::max(c.dev(a + b) - da - c.dev(b), 0.0),
          c.dev(scalar),
          std::abs(c.dev(a + scalar) - da),
          std::abs(c.dev(static_cast<double>(s) * conjugate(u, a) + scalar) - da)};
}

// --------------------------------------------------------------- remark1

std::vector<double> remark1_case(CaseContext& c) {
  const int n = c.n;
  double top = 1.0;
  if (c.index % 4 != 0) {
    do {
      top = c.rng.uniform(0.2, 1.8);
    } while (std::abs(top - 1.0) < 1e-6);
  }
  RVector d(n);
  d(0) = 0.0;
  d(n - 1) = top;
  for (int k = 1; k < n - 1; ++k) d(k) = c.rng.uniform(0.0, top);
  const CMatrix u = gen_haar_unitary(n, c.rng);
  const HermitianMatrix rep =
      canonicalize(conjugate(u, HermitianMatrix::diagonal(d))).representative;
  const SpectralDecomposition sd = spectral_decompose(rep);
  const bool small = c.dev(rep) <= 0.5 + 1e-12;
  const bool below_identity =
      sd.min() >= -1e-12 && spectral_decompose(HermitianMatrix::identity(n) - rep).min() >= -1e-12;
  return {flag(small != below_identity), std::abs(sd.min())};
}

// ----------------------------------------------------------------- var33

std::vector<double> var33_case(CaseContext& c) {
  const HermitianMatrix p = HermitianMatrix::outer(gen_state(c.n, c.rng).amplitudes());
  const HermitianMatrix q = HermitianMatrix::outer(gen_state(c.n, c.rng).amplitudes());
  const double overlap = (p.matrix() * q.matrix()).trace().real();
  return {std::abs(c.dev(p - q) - std::sqrt(std::max(0.0, 1.0 - overlap)))};
}

std::vector<double> var33_family_case(CaseContext& c) {
  static constexpr double kA[] = {0.0, 0.25, 0.5, 0.9, 1.0};
  const double a = kA[c.index % 5];
  const double theta = c.rng.uniform(0.0, 2.0 * std::numbers::pi);
  const Complex off = std::sqrt(a * (1.0 - a)) * std::polar(1.0, theta);
  CMatrix q(2, 2);
  q << a, off, std::conj(off), 1.0 - a;
  const HermitianMatrix p = HermitianMatrix::diagonal({1.0, 0.0});
  return {std::abs(c.dev(p - HermitianMatrix::symmetrize(q)) - std::sqrt(1.0 - a))};
}

// ---------------------------------------------------------------- lemma2

std::vector<double> lemma2_extreme_case(CaseContext& c) {
  const int n = c.n;
  const int k = c.rng.uniform_int(1, n - 1);
  const HermitianMatrix a = gen_projection(n, k, c.rng).shifted(c.rng.uniform(-3.0, 3.0));
  int found = 0;
  for (int attempt = 0; attempt < 1000; ++attempt) {
    HermitianMatrix d = gen_hermitian(n, c.rng);
    const double dv = c.dev(d);
    if (dv < 1e-9) continue;
    const double t = 0.5 * std::pow(10.0, -c.rng.uniform(0.0, 3.0)) / dv;
    if (c.dev(a + t * d) <= 0.5 + 1e-12 && c.dev(a - t * d) <= 0.5 + 1e-12) ++found;
  }
  return {flag(!is_extreme_half_ball(a)), static_cast<double>(found)};
}

std::vector<double> lemma2_split_case(CaseContext& c) {
  const int n = c.n;
  RVector d = RVector::Zero(n);
  d(n - 1) = 1.0;
  for (int k = 1; k < n - 1; ++k) d(k) = c.rng.uniform(0.05, 0.95);
  const CMatrix u = gen_haar_unitary(n, c.rng);
  const HermitianMatrix b =
      conjugate(u, HermitianMatrix::diagonal(d)).shifted(c.rng.uniform(-3.0, 3.0));
  const bool classified_extreme = is_extreme_half_ball(b);
  const HalfBallSplit split = split_non_extreme(b);
  const HermitianMatrix mid = 0.5 * (split.first + split.second);
  const double midpoint = max_abs_diff(mid.matrix(), split.representative.matrix());
  const double norms = std::max(std::abs(c.dev(split.first) - 0.5),
                                std::abs(c.dev(split.second) - 0.5));
  int invalid = 0;
  for (const HermitianMatrix* half : {&split.first, &split.second}) {
    const SpectralDecomposition sd = spectral_decompose(*half);
    if (sd.min() < -1e-10 || sd.max() > 1.0 + 1e-10) ++invalid;
    if (d_v(*half, split.representative) <= 1e-6) ++invalid;
  }
  return {flag(classified_extreme), midpoint, norms, static_cast<double>(invalid)};
}

// ---------------------------------------------------------------- lemma3

std::vector<double> lemma3_close_case(CaseContext& c) {
  const int n = c.n;
  const HermitianMatrix p = gen_projection(n, c.rng.uniform_int(1, n - 1), c.rng);
  double size = c.rng.uniform(0.0, 0.8);
  for (int attempt = 0; attempt < 64; ++attempt, size *= 0.8) {
    const HermitianMatrix q = perturbed_projection(c.rng, p, size);
    if (class_distance(p, q) < 0.5 - 1e-6) return {flag(rank_of(p) != rank_of(q))};
  }
  return {kNotApplicable};
}

std::vector<double> lemma3_unequal_case(CaseContext& c) {
  const int n = c.n;
  const int k = c.rng.uniform_int(1, n - 1);
  int l = c.rng.uniform_int(0, n - 1);
  if (l >= k) ++l;
  const HermitianMatrix p = gen_projection(n, k, c.rng);
  const HermitianMatrix q = gen_projection(n, l, c.rng);
  return {std::max(0.0, (0.5 - 1e-9) - class_distance(p, q))};
}

std::vector<double> lemma3_weyl_case(CaseContext& c) {
  const int n = c.n;
  const HermitianMatrix p = gen_projection(n, c.rng.uniform_int(1, n - 1), c.rng);
  HermitianMatrix q = perturbed_projection(c.rng, p, c.rng.uniform(0.0, 0.4));
  const ProjectionInfo iq = classify_projection(q);
  if (iq.is_trivial) q = p;
  const double mu = c.rng.uniform(-0.2, 0.2);
  const WeylGapReport r = weyl_gap_check(p, q, mu, weyl_compression(p, q));
  return {flag(!r.chain_holds || (r.premise_holds && !(r.pq_distance < 1.0)))};
}

// ---------------------------------------------------------------- lemma4

std::vector<double> lemma4_case(CaseContext& c) {
  const int n = c.n;
  const int k = c.rng.uniform_int(1, n - 1);
  const HermitianMatrix p = gen_projection(n, k, c.rng);
  HermitianMatrix q = gen_projection(n, k, c.rng);
  if (c.index % 2 == 1) {
    const HermitianMatrix g = gen_hermitian(n, c.rng);
    const double t = c.rng.uniform(0.0, 1.0) / std::max(operator_norm(g), 1e-300);
    const HermitianMatrix small = t * g;
    const SpectralDecomposition sd = spectral_decompose(small);
    CVector phases(n);
    for (int i = 0; i < n; ++i) phases(i) = std::polar(1.0, sd.eigenvalues(i));
    q = conjugate(sd.eigenvectors * phases.asDiagonal() * sd.eigenvectors.adjoint(), p);
  }
  const int steps = minimal_path_steps(p, q);
  const std::vector<HermitianMatrix> chain = projection_path(p, q, steps);
  double max_link = 0.0;
  int bad_rank = 0;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const ProjectionInfo info = classify_projection(chain[i]);
    if (!info.is_projection || info.rank != k) ++bad_rank;
    if (i + 1 < chain.size()) max_link = std::max(max_link, class_distance(chain[i], chain[i + 1]));
  }
  return {max_link, operator_norm(chain.back() - q), static_cast<double>(bad_rank)};
}

// ---------------------------------------------------------------- lemma5

std::vector<double> lemma5_case(CaseContext& c) {
  const int n = c.n;
  const int k = c.rng.uniform_int(1, n - 1);
  const int l = c.index % 2 == 0 ? k : c.rng.uniform_int(1, n - 1);
  const HermitianMatrix p = gen_projection(n, k, c.rng);
  const HermitianMatrix q = gen_projection(n, l, c.rng);
  const auto w = distinguish_projections(p, q);
  double missing = 1.0;
  double malformed = 0.0;
  if (w) {
    missing = flag(std::abs(w->deviation_p - w->deviation_q) < 1e-6);
    const ProjectionInfo info = classify_projection(w->r);
    const HermitianMatrix& dominant = w->under_p ? p : q;
    malformed = flag(!info.is_projection || info.rank != 1 ||
                     max_abs_diff(dominant.matrix() * w->r.matrix(), w->r.matrix()) > 1e-8);
  }
  return {missing, malformed, flag(distinguish_projections(p, p).has_value())};
}

// -------------------------------------------------------------- theorem1

std::vector<double> theorem1_case(CaseContext& c) {
  const int n = c.n;
  const PreserverForm form = random_form(c.rng, n, false);
  const AffineMap map = to_map(form);
  const double forward =
      check_preserver(map.linear, PreservedQuantity::OperatorNorm, 8, c.rng.next_u64(), 1e-10)
          .max_defect;
  DecomposeOptions options;
  options.seed = c.rng.next_u64();
  const PreserverForm rec = decompose_norm_preserver(map.linear, options);
  const double action = rank_one_action_distance(form, rec, 16, c.rng.next_u64());

  PreserverForm shifted = form;
  shifted.f = gen_hermitian(n, c.rng);
  bool rejected = false;
  try {
    decompose_norm_preserver(to_map(shifted).linear, options);
  } catch (const Error& e) {
    rejected = e.code() == ErrorCode::NotAPreserver;
  }
  return {forward, flag(rec.sign != form.sign), action, flag(!rejected)};
}

// -------------------------------------------------------------- theorem2

std::vector<double> theorem2_case(CaseContext& c) {
  const int n = c.n;
  const PreserverForm form = random_form(c.rng, n, true);
  const LinearMapOnHermitians l = to_map(form).linear;
  const double forward =
      check_preserver(l, PreservedQuantity::MaxDeviation, 8, c.rng.next_u64(), 1e-10).max_defect;
  DecomposeOptions options;
  options.seed = c.rng.next_u64();
  const PreserverForm rec = decompose_deviation_preserver(l, options);

  double sign = kNotApplicable;
  double action = kNotApplicable;
  double functional = kNotApplicable;
  if (n >= 3) {
    sign = flag(rec.sign != form.sign);
    action = rank_one_action_distance(form, rec, 16, c.rng.next_u64());
    functional = operator_norm(rec.f - form.f);
  }
  double residual = 0.0;
  for (const HermitianMatrix& b : build_basis(n).elements()) {
    residual = std::max(residual, operator_norm(apply_map(l, b) - apply_form(rec, b)));
  }
  for (int s = 0; s < 8; ++s) {
    const HermitianMatrix a = gen_hermitian(n, c.rng);
    residual = std::max(residual, operator_norm(apply_map(l, a) - apply_form(rec, a)));
  }

  static constexpr double kLambdas[] = {-1.0, 0.37, 10.0};
  double scalar = 0.0;
  for (double lambda : kLambdas) {
    scalar = std::max(scalar, c.dev(apply_map(l, HermitianMatrix::scalar(n, lambda))));
  }
  const HermitianMatrix p = gen_projection(n, c.rng.uniform_int(1, n - 1), c.rng);
  const HermitianMatrix base = canonicalize(apply_map(l, p)).representative;
  double quotient = 0.0;
  for (double lambda : kLambdas) {
    const HermitianMatrix rep = canonicalize(apply_map(l, p.shifted(lambda))).representative;
    quotient = std::max(quotient, max_abs_diff(rep.matrix(), base.matrix()));
  }

  const CMatrix w = gen_haar_unitary(n, c.rng);
  RVector d1(n);
  RVector d2(n);
  for (int i = 0; i < n; ++i) {
    d1(i) = c.rng.normal();
    d2(i) = c.rng.normal();
  }
  const CMatrix la = apply_map(l, conjugate(w, HermitianMatrix::diagonal(d1))).matrix();
  const CMatrix lb = apply_map(l, conjugate(w, HermitianMatrix::diagonal(d2))).matrix();
  const double commutator = spectral_norm(la * lb - lb * la);

  return {forward, sign, action, functional, residual, scalar, quotient, commutator};
}

// -------------------------------------------------------------- theorem3

bool rejects_non_isometry(int n, std::uint64_t seed, bool deviation) {
  const MapOracle bent = [](const HermitianMatrix& a) {
    return a + 0.01 * HermitianMatrix::symmetrize(a.matrix() * a.matrix());
  };
  try {
    if (deviation) {
      linearize_dv_isometry(bent, n, 200, seed);
    } else {
      affinize_dm_isometry(bent, n, 200, seed);
    }
  } catch (const Error& e) {
    return e.code() == ErrorCode::NotAnIsometry;
  }
  return false;
}

std::vector<double> theorem3_case(CaseContext& c) {
  const int n = c.n;
  PreserverForm form = random_form(c.rng, n, false);
  form.x = gen_hermitian(n, c.rng);
  const MapOracle phi = [&form](const HermitianMatrix& a) { return apply_form(form, a); };
  const std::uint64_t seed = c.rng.next_u64();
  const AffinizedIsometry r = affinize_dm_isometry(phi, n, 200, seed);
  const double form_defect =
      std::max({flag(r.form.sign != form.sign), rank_one_action_distance(form, r.form, 16, seed),
                operator_norm(r.form.x - form.x)});
  return {form_defect, r.additivity_defect, flag(!rejects_non_isometry(n, seed, false))};
}

// -------------------------------------------------------------- theorem4

std::vector<double> theorem4_case(CaseContext& c) {
  const int n = c.n;
  PreserverForm form = random_form(c.rng, n, false);
  form.x = gen_hermitian(n, c.rng);
  const int kind = c.index % 3;
  const auto g = [kind](const HermitianMatrix& a) {
    if (kind == 1) return std::sin(a.trace());
    if (kind == 2) return operator_norm(a);
    return 0.0;
  };
  const MapOracle phi = [&form, &g, n](const HermitianMatrix& a) {
    return apply_form(form, a) + HermitianMatrix::scalar(n, g(a));
  };
  const std::uint64_t seed = c.rng.next_u64();
  const LinearizedIsometry r = linearize_dv_isometry(phi, n, 200, seed);
  const LinearizedIsometry r2 = linearize_dv_isometry(
      phi, n, 200, seed, 1e-8, [](const HermitianMatrix& a) { return a(0, 0).real(); });

  double form_defect = std::max(operator_norm(r.form.x - form.x), r.model_defect);
  if (n >= 3) {
    form_defect = std::max({form_defect, flag(r.form.sign != form.sign),
                            rank_one_action_distance(form, r.form, 16, seed)});
  }
  // In dimension 2 a negative sign is reported as +1 with an antiunitary,
  // which moves tr(A) into the scalar part.
  const bool folded = n == 2 && form.sign == -1;
  double scalar_part = 0.0;
  double independence =
      std::max({flag(r.form.sign != r2.form.sign), rank_one_action_distance(r.form, r2.form, 16, seed),
                operator_norm(r.form.x - r2.form.x)});
  for (int s = 0; s < 8; ++s) {
    const HermitianMatrix a = gen_hermitian(n, c.rng);
    const double expected = g(a) - (folded ? a.trace() : 0.0);
    const double g1 = scalar_discrepancy(phi, r.form, a);
    scalar_part = std::max(scalar_part, std::abs(g1 - expected));
    independence = std::max(independence, std::abs(g1 - scalar_discrepancy(phi, r2.form, a)));
  }
  return {form_defect, scalar_part, r.additivity_defect, independence,
          flag(!rejects_non_isometry(n, seed, true))};
}

// -------------------------------------------------------------- registry

const std::vector<Group>& groups() {
  static const std::vector<Group> all = {
      {"lemma1", "lemma1.routes",
       {{"lemma1.factor_agreement", 1e-10},
        {"lemma1.variational_gap", 1e-6},
        {"lemma1.variational_excess", 1e-12},
        {"lemma1.witness_variance", 1e-9},
        {"lemma1.domination", 1e-12}},
       500, 1, 16, lemma1_case},
      {"seminorm", "seminorm.axioms",
       {{"seminorm.homogeneity", 1e-9},
        {"seminorm.subadditivity", 1e-9},
        {"seminorm.scalar_null", 1e-12},
        {"seminorm.shift_invariance", 1e-9},
        {"seminorm.unitary_invariance", 1e-9}},
       500, 1, 64, seminorm_case},
      {"remark1", "remark1.normalized",
       {{"remark1.equivalence", 0.0}, {"remark1.normalization", 1e-12}},
       200, 2, 64, remark1_case},
      {"var33", "var33.rank_one",
       {{"var33.overlap_law", 1e-9}},
       500, 2, 16, var33_case},
      {"var33", "var33.family",
       {{"var33.explicit_family", 1e-9}},
       50, 2, 2, var33_family_case},
      {"lemma2", "lemma2.extreme",
       {{"lemma2.classifier_extreme", 0.0}, {"lemma2.midpoint_search", 0.0}},
       50, 2, 3, lemma2_extreme_case},
      {"lemma2", "lemma2.non_extreme",
       {{"lemma2.classifier_non_extreme", 0.0},
        {"lemma2.split_midpoint", 1e-10},
        {"lemma2.split_norms", 1e-9},
        {"lemma2.split_validity", 0.0}},
       50, 3, 3, lemma2_split_case},
      {"lemma3", "lemma3.close_pairs",
       {{"lemma3.close_equal_rank", 0.0}},
       500, 2, 16, lemma3_close_case},
      {"lemma3", "lemma3.unequal_rank",
       {{"lemma3.unequal_rank_far", 0.0}},
       500, 2, 16, lemma3_unequal_case},
      {"lemma3", "lemma3.weyl",
       {{"lemma3.weyl_chain", 0.0}},
       200, 2, 16, lemma3_weyl_case},
      {"lemma4", "lemma4.paths",
       {{"lemma4.max_link", 0.5 - 1e-12},
        {"lemma4.endpoint", 1e-8},
        {"lemma4.rank_preserved", 0.0}},
       200, 2, 16, lemma4_case},
      {"lemma5", "lemma5.distinguisher",
       {{"lemma5.witness_found", 0.0},
        {"lemma5.witness_rank_one", 0.0},
        {"lemma5.equal_pair_silent", 0.0}},
       200, 2, 12, lemma5_case},
      {"theorem1", "theorem1.norm_preservers",
       {{"theorem1.forward", 1e-10},
        {"theorem1.sign", 0.0},
        {"theorem1.action", 1e-7},
        {"theorem1.rejects_functional", 0.0}},
       100, 1, 10, theorem1_case},
      {"theorem2", "theorem2.deviation_preservers",
       {{"theorem2.forward", 1e-10},
        {"theorem2.sign", 0.0},
        {"theorem2.action", 1e-7},
        {"theorem2.functional", 1e-6},
        {"theorem2.residual", 1e-7},
        {"theorem2.scalar_fixing", 1e-9},
        {"theorem2.quotient_well_defined", 1e-10},
        {"theorem2.commutativity", 1e-8}},
       200, 2, 10, theorem2_case},
      {"theorem3", "theorem3.dm_isometries",
       {{"theorem3.form", 1e-7},
        {"theorem3.additivity", 1e-8},
        {"theorem3.rejects_non_isometry", 0.0}},
       24, 1, 6, theorem3_case},
      {"theorem4", "theorem4.dv_isometries",
       {{"theorem4.form", 1e-7},
        {"theorem4.scalar_part", 1e-7},
        {"theorem4.additivity", 1e-8},
        {"theorem4.functional_independence", 1e-7},
        {"theorem4.rejects_non_isometry", 0.0}},
       24, 2, 6, theorem4_case},
  };
  return all;
}

struct CaseOutcome {
  std::vector<double> defects;
  bool threw = false;
};

std::vector<CaseOutcome> run_cases(const Group& g, const std::vector<int>& dims, int cases,
                                   std::uint64_t base, const SuiteHooks& hooks, int threads) {
  std::vector<CaseOutcome> out(static_cast<std::size_t>(cases));
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (int i = next++; i < cases; i = next++) {
      CaseContext ctx{case_rng(base, static_cast<std::uint64_t>(i)), 0, i, hooks};
      ctx.n = dims[static_cast<std::size_t>(
          ctx.rng.uniform_int(0, static_cast<int>(dims.size()) - 1))];
      try {
        out[static_cast<std::size_t>(i)].defects = g.run(ctx);
      } catch (const std::exception&) {
        out[static_cast<std::size_t>(i)].threw = true;
      }
    }
  };
  const int pool = std::max(1, std::min(threads, cases));
  std::vector<std::thread> workers;
  for (int t = 1; t < pool; ++t) workers.emplace_back(worker);
  worker();
  for (std::thread& t : workers) t.join();
  return out;
}

}  // namespace

SuiteConfig SuiteConfig::defaults() {
  SuiteConfig c;
  for (int n = 2; n <= 16; ++n) c.dims.push_back(n);
  c.suites = suite_names();
  return c;
}

void SuiteConfig::validate() const {
  if (dims.empty()) throw Error(ErrorCode::InvalidArgument, "dims must not be empty");
  for (int n : dims) {
    if (n < 1 || n > kMaxDim) {
      throw Error(ErrorCode::InvalidArgument, "dimension " + std::to_string(n) + " out of range");
    }
  }
  if (samples_per_case < 1) {
    throw Error(ErrorCode::InvalidArgument, "samples_per_case must be >= 1");
  }
  const std::vector<std::string>& known = suite_names();
  for (const std::string& s : suites) {
    if (std::find(known.begin(), known.end(), s) == known.end()) {
      throw Error(ErrorCode::InvalidArgument, "unknown suite \"" + s + "\"");
    }
  }
  std::set<std::string> metrics;
  for (const Group& g : groups()) {
    for (const Metric& m : g.metrics) metrics.insert(m.name);
  }
  for (const auto& [name, value] : tolerances) {
    if (!metrics.count(name)) {
      throw Error(ErrorCode::InvalidArgument, "tolerance for unknown metric \"" + name + "\"");
    }
    if (!(value >= 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "tolerance for \"" + name + "\" must be >= 0");
    }
  }
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "lemma1", "seminorm", "remark1", "var33",    "lemma2",   "lemma3",
      "lemma4", "lemma5",   "theorem1", "theorem2", "theorem3", "theorem4"};
  return names;
}

const std::vector<InvariantEntry>& invariant_registry() {
  static const std::vector<InvariantEntry> registry = {
      {"deviation", "three-route agreement", "lemma1",
       {"lemma1.factor_agreement", "lemma1.variational_gap", "lemma1.variational_excess",
        "lemma1.witness_variance"}},
      {"deviation", "seminorm axioms", "seminorm",
       {"seminorm.homogeneity", "seminorm.subadditivity", "seminorm.scalar_null"}},
      {"deviation", "unitary and shift invariance", "seminorm",
       {"seminorm.shift_invariance", "seminorm.unitary_invariance"}},
      {"deviation", "domination by the operator norm", "lemma1", {"lemma1.domination"}},
      {"deviation", "normalized half-ball equivalence", "remark1",
       {"remark1.equivalence", "remark1.normalization"}},
      {"deviation", "rank-one overlap law", "var33",
       {"var33.overlap_law", "var33.explicit_family"}},
      {"factor-space", "extreme-point soundness", "lemma2",
       {"lemma2.classifier_extreme", "lemma2.midpoint_search", "lemma2.classifier_non_extreme",
        "lemma2.split_midpoint", "lemma2.split_norms", "lemma2.split_validity"}},
      {"factor-space", "close classes have equal rank", "lemma3",
       {"lemma3.close_equal_rank", "lemma3.unequal_rank_far", "lemma3.weyl_chain"}},
      {"factor-space", "path validity", "lemma4",
       {"lemma4.max_link", "lemma4.endpoint", "lemma4.rank_preserved"}},
      {"factor-space", "distinguisher completeness", "lemma5",
       {"lemma5.witness_found", "lemma5.witness_rank_one", "lemma5.equal_pair_silent"}},
      {"preservers", "deviation-preserver forward direction", "theorem2", {"theorem2.forward"}},
      {"preservers", "norm-preserver forward direction", "theorem1",
       {"theorem1.forward", "theorem1.sign", "theorem1.action", "theorem1.rejects_functional"}},
      {"preservers", "deviation-preserver round trip", "theorem2",
       {"theorem2.sign", "theorem2.action", "theorem2.functional", "theorem2.residual"}},
      {"preservers", "quotient map well-defined", "theorem2", {"theorem2.quotient_well_defined"}},
      {"preservers", "scalar fixing", "theorem2", {"theorem2.scalar_fixing"}},
      {"preservers", "commutativity preservation", "theorem2", {"theorem2.commutativity"}},
      {"preservers", "d_m isometries are affine", "theorem3",
       {"theorem3.form", "theorem3.additivity", "theorem3.rejects_non_isometry"}},
      {"preservers", "d_v isometries linearize", "theorem4",
       {"theorem4.form", "theorem4.scalar_part", "theorem4.additivity",
        "theorem4.functional_independence", "theorem4.rejects_non_isometry"}},
  };
  return registry;
}

std::vector<std::string> suite_metrics(const std::string& suite) {
  std::vector<std::string> out;
  for (const Group& g : groups()) {
    if (g.suite != suite) continue;
    for (const Metric& m : g.metrics) out.push_back(m.name);
  }
  return out;
}

SuiteReport run_suite(const SuiteConfig& config, const SuiteHooks& hooks) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const int threads = config.threads > 0
                          ? config.threads
                          : std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
  SuiteReport report;
  report.overall = true;
  std::set<std::string> seen;
  for (const std::string& suite : config.suites) {
    if (!seen.insert(suite).second) continue;
    for (const Group& g : groups()) {
      if (g.suite != suite) continue;
      std::vector<int> dims;
      for (int n : config.dims) {
        if (n >= g.lo && n <= g.hi && std::find(dims.begin(), dims.end(), n) == dims.end()) {
          dims.push_back(n);
        }
      }
      const int cases = dims.empty() ? 0 : std::min(config.samples_per_case, g.nominal);
      const std::vector<CaseOutcome> outcomes =
          run_cases(g, dims, cases, config.seed ^ fnv1a64(g.key), hooks, threads);
      for (std::size_t m = 0; m < g.metrics.size(); ++m) {
        CheckResult r;
        r.suite = suite;
        r.name = g.metrics[m].name;
        const auto tol = config.tolerances.find(r.name);
        r.tolerance = tol != config.tolerances.end() ? tol->second : g.metrics[m].tol;
        std::vector<double> values;
        for (const CaseOutcome& o : outcomes) {
          if (o.threw) {
            ++r.errors;
            ++r.cases;
            continue;
          }
          const double v = m < o.defects.size() ? o.defects[m] : kNotApplicable;
          if (std::isnan(v)) continue;
          values.push_back(v);
          ++r.cases;
        }
        r.max_defect = metric_defect_max(values);
        r.pass = r.errors == 0 && r.max_defect <= r.tolerance;
        report.overall = report.overall && r.pass;
        report.checks.push_back(std::move(r));
      }
    }
  }
  report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

SuiteConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InputError, "suite config must be a JSON object");
  SuiteConfig c = SuiteConfig::defaults();
  try {
    if (j.contains("dims")) c.dims = j.at("dims").get<std::vector<int>>();
    if (j.contains("samples_per_case")) c.samples_per_case = j.at("samples_per_case").get<int>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("tolerances")) {
      c.tolerances = j.at("tolerances").get<std::map<std::string, double>>();
    }
    if (j.contains("suites")) c.suites = j.at("suites").get<std::vector<std::string>>();
    if (j.contains("threads")) c.threads = j.at("threads").get<int>();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InputError, std::string("suite config: ") + e.what());
  }
  try {
    c.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::InputError, e.what());
  }
  return c;
}

Json to_json(const SuiteConfig& config) {
  return Json{{"dims", config.dims},
              {"samples_per_case", config.samples_per_case},
              {"seed", config.seed},
              {"tolerances", config.tolerances},
              {"suites", config.suites}};
}

Json to_json(const SuiteReport& report) {
  Json checks = Json::array();
  for (const CheckResult& r : report.checks) {
    checks.push_back(Json{{"suite", r.suite},
                          {"name", r.name},
                          {"cases", r.cases},
                          {"max_defect", r.max_defect},
                          {"tolerance", r.tolerance},
                          {"errors", r.errors},
                          {"pass", r.pass}});
  }
  return Json{{"checks", checks}, {"overall", report.overall}, {"wall_time", report.wall_time}};
}

}  // namespace obsdev
