#pragma once

// The quotient of Hermitian matrices by the real multiples of I. A class is
// represented by the member with lambda_min = 0; its quotient norm equals the
// maximal deviation of any member.

#include <optional>
#include <vector>

#include "obsdev/hermitian.hpp"

namespace obsdev {

struct FactorClass {
  HermitianMatrix representative;  // A - lambda_min(A) I
  double original_shift = 0.0;     // lambda_min(A)
};

FactorClass canonicalize(const HermitianMatrix& a);

// Quotient-space distance between the classes of A and B (= d_v(A, B)).
double class_distance(const HermitianMatrix& a, const HermitianMatrix& b);

// Extreme points of the closed 1/2-ball of the quotient are exactly the
// classes of nontrivial projections. OutsideBall if the class norm exceeds
// 1/2 + tol.
bool is_extreme_half_ball(const HermitianMatrix& a, double tol = tol::kProjection);

struct HalfBallSplit {
  HermitianMatrix representative;  // canonical member of the input class
  HermitianMatrix first;           // f1(rep), f1(t) = t + g(t)
  HermitianMatrix second;          // f2(rep), f2(t) = t - g(t)
};

// Writes a non-extreme class on the 1/2-sphere as the midpoint of two other
// classes of the ball, using g(t) = min(t, 1 - t) on the spectrum of the
// canonical representative. NotOnSphere if the class norm is not 1/2 (within
// tol); IsProjection if the class is extreme.
HalfBallSplit split_non_extreme(const HermitianMatrix& b, double tol = tol::kProjection);

struct ProjectionInClass {
  HermitianMatrix projection;
  double shift = 0.0;    // input = projection + shift * I
  bool trivial = false;  // scalar class; both 0 and I qualify, 0 is returned
};

// The unique projection P with A = P + mu I, if any.
std::optional<ProjectionInClass> projection_in_class(const HermitianMatrix& a,
                                                     double tol = tol::kProjection);

// Finite-dimensional unitary equivalence of projections: equal rank.
// NotProjection if either input is not a projection.
bool unitary_equivalent(const HermitianMatrix& p, const HermitianMatrix& q,
                        double tol = tol::kProjection);

struct WeylGapReport {
  double abs_mu = 0.0;
  // ||R P R - R (Q + mu I) R|| evaluated on the range of R.
  double compressed_gap = 0.0;
  // ||R|| ||P - (Q + mu I)|| ||R||.
  double norm_bound = 0.0;
  // |mu| <= compressed_gap <= norm_bound (within tol).
  bool chain_holds = false;
  // ||P - (Q + mu I)|| < 1/2, the hypothesis of the rank argument.
  bool premise_holds = false;
  // ||P - Q|| and its triangle-inequality bound ||P - (Q + mu I)|| + |mu|.
  double pq_distance = 0.0;
  double pq_bound = 0.0;
};

// Evaluates the Weyl-perturbation inequality chain for concrete projections.
// R must be a projection of rank <= 2 whose range meets both range(P) and
// range(Q) (BadCompression otherwise).
WeylGapReport weyl_gap_check(const HermitianMatrix& p, const HermitianMatrix& q, double mu,
                             const HermitianMatrix& r, double tol = tol::kProjection);

// Projection onto span{x, y} for the top eigenvectors x of P and y of Q;
// a valid compression for weyl_gap_check.
HermitianMatrix weyl_compression(const HermitianMatrix& p, const HermitianMatrix& q);

// Largest principal angle between the ranges of two equal-rank projections.
double max_principal_angle(const HermitianMatrix& p, const HermitianMatrix& q,
                           double tol = tol::kProjection);

// P = P_0, ..., P_steps = Q along V_t P V_t^*, V_t = exp(t G) with G the
// principal-angle rotation generator taking range(P) onto range(Q).
// Consecutive classes are closer than 1/2 (StepsTooFew otherwise).
std::vector<HermitianMatrix> projection_path(const HermitianMatrix& p, const HermitianMatrix& q,
                                             int steps, double tol = tol::kProjection);

// Smallest step count for which every link of the chain is shorter than 1/2.
int minimal_path_steps(const HermitianMatrix& p, const HermitianMatrix& q,
                       double tol = tol::kProjection);

struct DistinguishingWitness {
  HermitianMatrix r;      // rank-one subprojection of P (or of Q)
  bool under_p = true;    // which of the two projections dominates R
  double deviation_p = 0.0;  // ||P + R||_v
  double deviation_q = 0.0;  // ||Q + R||_v
};

// For distinct nontrivial projections, a rank-one R under one of them with
// ||P + R||_v != ||Q + R||_v. Empty iff P = Q within tol.
std::optional<DistinguishingWitness> distinguish_projections(const HermitianMatrix& p,
                                                             const HermitianMatrix& q,
                                                             double tol = tol::kProjection);

}  // namespace obsdev
