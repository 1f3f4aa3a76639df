#pragma once

// Maximal deviation ||A||_v = sup_phi var(A, phi)^(1/2), computed three ways
// (half spectral diameter, quotient norm inf_l ||A + l I||, and a direct
// variational search over states), together with the stochastic distances
// d_m and d_v.

#include <cstdint>
#include <optional>
#include <string_view>

#include "obsdev/hermitian.hpp"

namespace obsdev {

enum class DeviationRoute { Spectral, Factor, Variational };

std::string_view to_string(DeviationRoute route) noexcept;
std::optional<DeviationRoute> parse_route(std::string_view name) noexcept;

struct DeviationReport {
  double value = 0.0;
  DeviationRoute route = DeviationRoute::Spectral;
  std::optional<StateVector> witness;
  std::optional<double> minimizer_lambda;
  // Variational route only: spectral value minus the value found.
  std::optional<double> gap_to_spectral;
};

// (lambda_max - lambda_min) / 2.
double max_deviation(const HermitianMatrix& a);

// A is scalar iff its half spectral diameter is <= 1e-10 (1 + ||A||).
bool is_scalar(const HermitianMatrix& a);

struct FactorNorm {
  double value = 0.0;        // ||A + lambda_star I||
  double lambda_star = 0.0;  // -(lambda_max + lambda_min) / 2
};

// The quotient norm inf_l ||A + l I||. The value is the operator norm of the
// shifted matrix, evaluated by a second eigensolve, so it is an independent
// measurement of the centred spectrum rather than a copy of max_deviation.
FactorNorm factor_norm(const HermitianMatrix& a);

struct VariationalOptions {
  int restarts = 8;
  int max_iterations = 500;
  std::uint64_t seed = 0;
};

// Maximizes var(A, phi) over unit phi by Riemannian gradient ascent on the
// sphere (Armijo backtracking, restarted from random states). Never uses an
// eigensolver for the search; the spectral value is only consulted afterwards
// to fill gap_to_spectral.
DeviationReport max_deviation_variational(const HermitianMatrix& a,
                                          const VariationalOptions& options);
DeviationReport max_deviation_variational(const HermitianMatrix& a, int restarts,
                                          std::uint64_t seed);

// One report for any route: the spectral route attaches witness_state (when A
// is not scalar), the factor route attaches the minimizing shift.
DeviationReport deviation_report(const HermitianMatrix& a, DeviationRoute route,
                                 const VariationalOptions& options = {});

// (x + y)/sqrt(2) for unit eigenvectors x, y of lambda_min and lambda_max
// (lowest-index choice inside each extreme eigenvalue cluster). Its variance
// is exactly max_deviation(A)^2. ScalarOperator if A is scalar.
StateVector witness_state(const HermitianMatrix& a);

// sqrt((1 - 2 delta)^2 / 2 - (1 + 2 delta)^2 / 4); RadicandNegative if the
// radicand is negative.
double delta_lower_bound(double delta);

struct DeltaBoundResult {
  double value = 0.0;  // sqrt(var(A, phi)) on the constructed state
  double bound = 0.0;  // delta_lower_bound(delta)
  StateVector state;
};

// For A normalized to 0 <= A <= I with 0 and 1 in its spectrum: builds phi
// from unit vectors in the eigenvalue clusters (-delta, delta) and
// (1 - delta, 1 + delta) and evaluates its deviation, which is guaranteed to
// be at least delta_lower_bound(delta).
DeltaBoundResult deviation_lower_bound_delta(const HermitianMatrix& a, double delta,
                                             double tol = tol::kSpectral);

// ||A - B||.
double d_m(const HermitianMatrix& a, const HermitianMatrix& b);
// ||A - B||_v.
double d_v(const HermitianMatrix& a, const HermitianMatrix& b);

}  // namespace obsdev
