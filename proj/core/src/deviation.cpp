#include "obsdev/deviation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "obsdev/random.hpp"

namespace obsdev {

std::string_view to_string(DeviationRoute route) noexcept {
  switch (route) {
    case DeviationRoute::Spectral: return "spectral";
    case DeviationRoute::Factor: return "factor";
    case DeviationRoute::Variational: return "variational";
  }
  return "spectral";
}

std::optional<DeviationRoute> parse_route(std::string_view name) noexcept {
  if (name == "spectral") return DeviationRoute::Spectral;
  if (name == "factor") return DeviationRoute::Factor;
  if (name == "variational") return DeviationRoute::Variational;
  return std::nullopt;
}

double max_deviation(const HermitianMatrix& a) {
  const Interval r = mean_value_range(a);
  return (r.hi - r.lo) / 2.0;
}

bool is_scalar(const HermitianMatrix& a) {
  const Interval r = mean_value_range(a);
  const double norm = std::max(std::abs(r.lo), std::abs(r.hi));
  return (r.hi - r.lo) / 2.0 <= 1e-10 * (1.0 + norm);
}

FactorNorm factor_norm(const HermitianMatrix& a) {
  const Interval r = mean_value_range(a);
  FactorNorm out;
  out.lambda_star = -(r.hi + r.lo) / 2.0;
  out.value = operator_norm(a.shifted(out.lambda_star));
  const double expected = (r.hi - r.lo) / 2.0;
  const double slack = tol::kSpectral * (1.0 + std::max(std::abs(r.lo), std::abs(r.hi)));
  if (std::abs(out.value - expected) > slack) {
    throw Error(ErrorCode::SolverFailure,
                "shifted norm " + std::to_string(out.value) +
                    " disagrees with half spectral diameter " + std::to_string(expected));
  }
  return out;
}

namespace {

struct AscentState {
  CVector phi;
  double value = 0.0;  // variance
};

// var(phi) for a unit vector, and the Riemannian gradient of var at phi.
double variance_and_gradient(const CMatrix& a, const CVector& phi, CVector* grad) {
  const CVector a_phi = a * phi;
  const double m = phi.dot(a_phi).real();
  const CVector centred = a_phi - m * phi;
  if (grad != nullptr) {
    // d var = 2 Re <h, A^2 phi - 2 m A phi>; project out the radial part.
    const CVector g = 2.0 * (a * a_phi - 2.0 * m * a_phi);
    *grad = g - phi.dot(g).real() * phi;
  }
  return centred.squaredNorm();
}

AscentState ascend(const CMatrix& a, CVector phi, int max_iterations) {
  phi.normalize();
  CVector grad;
  double value = variance_and_gradient(a, phi, &grad);
  // First trial step ~ 1 / (Lipschitz scale of the gradient); later trials use
  // the Barzilai-Borwein estimate from the previous accepted move.
  const double scale = std::max(a.cwiseAbs2().sum(), 1e-300);
  double step = 0.5 / scale;
  int stalled = 0;
  for (int it = 0; it < max_iterations && stalled < 3; ++it) {
    const double gnorm2 = grad.squaredNorm();
    if (gnorm2 <= 1e-28 * scale * scale) break;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      CVector trial = phi + step * grad;
      trial.normalize();
      CVector trial_grad;
      const double trial_value = variance_and_gradient(a, trial, &trial_grad);
      if (trial_value >= value + 1e-4 * step * gnorm2) {
        const CVector s = trial - phi;
        const CVector y = trial_grad - grad;
        const double sy = std::abs(s.dot(y).real());
        stalled = trial_value - value <= 1e-15 * value ? stalled + 1 : 0;
        phi = std::move(trial);
        grad = std::move(trial_grad);
        value = trial_value;
        accepted = true;
        step = sy > 0.0 ? s.squaredNorm() / sy : 2.0 * step;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
  }
  return AscentState{std::move(phi), value};
}

}  // namespace

DeviationReport max_deviation_variational(const HermitianMatrix& a,
                                          const VariationalOptions& options) {
  if (options.restarts < 1) {
    throw Error(ErrorCode::InvalidArgument, "restarts must be >= 1");
  }
  if (options.max_iterations < 0) {
    throw Error(ErrorCode::InvalidArgument, "max_iterations must be >= 0");
  }
  const int n = a.dim();
  Rng rng(options.seed);
  AscentState best;
  best.value = -1.0;
  for (int r = 0; r < options.restarts; ++r) {
    CVector start(n);
    for (int i = 0; i < n; ++i) start(i) = rng.complex_normal();
    if (start.norm() == 0.0) start(0) = 1.0;
    AscentState candidate = ascend(a.matrix(), std::move(start), options.max_iterations);
    if (candidate.value > best.value) best = std::move(candidate);
  }
  const StateVector witness = StateVector::normalized(best.phi);
  DeviationReport report;
  report.route = DeviationRoute::Variational;
  report.value = std::sqrt(variance(a, witness));
  report.witness = witness;
  report.gap_to_spectral = max_deviation(a) - report.value;
  return report;
}

DeviationReport max_deviation_variational(const HermitianMatrix& a, int restarts,
                                          std::uint64_t seed) {
  VariationalOptions options;
  options.restarts = restarts;
  options.seed = seed;
  return max_deviation_variational(a, options);
}

DeviationReport deviation_report(const HermitianMatrix& a, DeviationRoute route,
                                 const VariationalOptions& options) {
  switch (route) {
    case DeviationRoute::Spectral: {
      DeviationReport report;
      report.route = route;
      report.value = max_deviation(a);
      if (!is_scalar(a)) report.witness = witness_state(a);
      return report;
    }
    case DeviationRoute::Factor: {
      const FactorNorm f = factor_norm(a);
      DeviationReport report;
      report.route = route;
      report.value = f.value;
      report.minimizer_lambda = f.lambda_star;
      return report;
    }
    case DeviationRoute::Variational:
      return max_deviation_variational(a, options);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown deviation route");
}

StateVector witness_state(const HermitianMatrix& a) {
  if (is_scalar(a)) {
    throw Error(ErrorCode::ScalarOperator, "scalar operators have no deviation witness");
  }
  const SpectralDecomposition sd = spectral_decompose(a);
  const int n = sd.dim();
  const double cluster = tol::kSpectral * (1.0 + std::max(std::abs(sd.min()), std::abs(sd.max())));
  int top = n - 1;
  while (top > 0 && sd.eigenvalues(top - 1) >= sd.max() - cluster) --top;
  const CVector x = sd.eigenvectors.col(0);
  const CVector y = sd.eigenvectors.col(top);
  return StateVector::normalized((x + y) / std::sqrt(2.0));
}

double delta_lower_bound(double delta) {
  const double radicand =
      (1.0 - 2.0 * delta) * (1.0 - 2.0 * delta) / 2.0 - (1.0 + 2.0 * delta) * (1.0 + 2.0 * delta) / 4.0;
  if (radicand < 0.0) {
    throw Error(ErrorCode::RadicandNegative,
                "delta " + std::to_string(delta) + " gives a negative radicand");
  }
  return std::sqrt(radicand);
}

DeltaBoundResult deviation_lower_bound_delta(const HermitianMatrix& a, double delta,
                                             double tol) {
  if (!(delta > 0.0 && delta <= 0.5)) {
    throw Error(ErrorCode::InvalidArgument, "delta must lie in (0, 1/2]");
  }
  const double bound = delta_lower_bound(delta);
  const SpectralDecomposition sd = spectral_decompose(a);
  if (sd.min() < -tol || sd.max() > 1.0 + tol || std::abs(sd.min()) > tol ||
      std::abs(sd.max() - 1.0) > tol) {
    throw Error(ErrorCode::BadNormalization,
                "expected 0 <= A <= I with 0 and 1 in the spectrum, got [" +
                    std::to_string(sd.min()) + ", " + std::to_string(sd.max()) + "]");
  }
  int low = -1;
  int high = -1;
  for (int k = 0; k < sd.dim(); ++k) {
    const double l = sd.eigenvalues(k);
    if (low < 0 && std::abs(l) < delta) low = k;
    if (high < 0 && std::abs(l - 1.0) < delta) high = k;
  }
  // Both clusters are nonempty because 0 and 1 are eigenvalues, and disjoint
  // because delta <= 1/2 keeps (-delta, delta) and (1-delta, 1+delta) apart.
  const CVector x = sd.eigenvectors.col(low);
  const CVector y = sd.eigenvectors.col(high);
  DeltaBoundResult out;
  out.state = StateVector::normalized((x + y) / std::sqrt(2.0));
  out.value = std::sqrt(variance(a, out.state));
  out.bound = bound;
  if (out.value + tol < bound) {
    throw Error(ErrorCode::SolverFailure,
                "constructed state has deviation " + std::to_string(out.value) +
                    " below the guaranteed bound " + std::to_string(bound));
  }
  return out;
}

double d_m(const HermitianMatrix& a, const HermitianMatrix& b) {
  require_same_dim(a, b);
  return operator_norm(a - b);
}

double d_v(const HermitianMatrix& a, const HermitianMatrix& b) {
  require_same_dim(a, b);
  return max_deviation(a - b);
}

}  // namespace obsdev
