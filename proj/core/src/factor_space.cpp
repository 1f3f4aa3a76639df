#include "obsdev/factor_space.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/SVD>

#include "obsdev/deviation.hpp"

namespace obsdev {

namespace {

// Orthonormal basis of range(P) for a Hermitian P with spectrum near {0, 1}.
CMatrix range_basis(const HermitianMatrix& p) {
  const SpectralDecomposition sd = spectral_decompose(p);
  int first = 0;
  while (first < sd.dim() && sd.eigenvalues(first) <= 0.5) ++first;
  return sd.eigenvectors.rightCols(sd.dim() - first);
}

ProjectionInfo require_projection(const HermitianMatrix& p, double tol, const char* name) {
  const ProjectionInfo info = classify_projection(p, tol);
  if (!info.is_projection) {
    throw Error(ErrorCode::NotProjection, std::string(name) + " is not a projection");
  }
  return info;
}

ProjectionInfo require_nontrivial_projection(const HermitianMatrix& p, double tol,
                                             const char* name) {
  const ProjectionInfo info = require_projection(p, tol, name);
  if (info.is_trivial) {
    throw Error(ErrorCode::NotProjection, std::string(name) + " is a trivial projection");
  }
  return info;
}

double top_eigenvalue(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(solver.eigenvalues().size() - 1);
}

double hermitian_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

FactorClass canonicalize(const HermitianMatrix& a) {
  const Interval r = mean_value_range(a);
  return FactorClass{a.shifted(-r.lo), r.lo};
}

double class_distance(const HermitianMatrix& a, const HermitianMatrix& b) {
  return d_v(a, b);
}

bool is_extreme_half_ball(const HermitianMatrix& a, double tol) {
  const double norm = max_deviation(a);
  if (norm > 0.5 + tol) {
    throw Error(ErrorCode::OutsideBall,
                "class norm " + std::to_string(norm) + " exceeds 1/2");
  }
  const ProjectionInfo info = classify_projection(canonicalize(a).representative, tol);
  return info.is_projection && !info.is_trivial;
}

HalfBallSplit split_non_extreme(const HermitianMatrix& b, double tol) {
  const double norm = max_deviation(b);
  if (std::abs(norm - 0.5) > tol) {
    throw Error(ErrorCode::NotOnSphere,
                "class norm " + std::to_string(norm) + " is not 1/2");
  }
  HermitianMatrix rep = canonicalize(b).representative;
  const ProjectionInfo info = classify_projection(rep, tol);
  if (info.is_projection) {
    throw Error(ErrorCode::IsProjection,
                "class of a nontrivial projection is extreme and cannot be split");
  }
  const auto clamp01 = [](double t) { return std::clamp(t, 0.0, 1.0); };
  const auto g = [](double t) { return std::min(t, 1.0 - t); };
  HermitianMatrix first = functional_calculus(rep, [&](double t) {
    t = clamp01(t);
    return t + g(t);
  });
  HermitianMatrix second = functional_calculus(rep, [&](double t) {
    t = clamp01(t);
    return t - g(t);
  });
  return HalfBallSplit{std::move(rep), std::move(first), std::move(second)};
}

std::optional<ProjectionInClass> projection_in_class(const HermitianMatrix& a, double tol) {
  const int n = a.dim();
  if (is_scalar(a)) {
    return ProjectionInClass{HermitianMatrix::zero(n), a.trace() / n, true};
  }
  const SpectralDecomposition sd = spectral_decompose(a);
  const double candidates[2] = {sd.min(), sd.max() - 1.0};
  std::optional<double> found;
  for (double mu : candidates) {
    bool ok = true;
    for (int k = 0; k < n && ok; ++k) {
      const double l = sd.eigenvalues(k) - mu;
      ok = std::abs(l) <= tol || std::abs(l - 1.0) <= tol;
    }
    if (!ok) continue;
    if (found && std::abs(*found - mu) > tol) {
      throw Error(ErrorCode::AmbiguousClass,
                  "shifts " + std::to_string(*found) + " and " + std::to_string(mu) +
                      " both yield projections");
    }
    if (!found) found = mu;
  }
  if (!found) return std::nullopt;
  // Spectral projection onto the upper eigenvalue cluster.
  int first = 0;
  while (first < n && sd.eigenvalues(first) - *found <= 0.5) ++first;
  const CMatrix cols = sd.eigenvectors.rightCols(n - first);
  return ProjectionInClass{HermitianMatrix::symmetrize(cols * cols.adjoint()), *found, false};
}

bool unitary_equivalent(const HermitianMatrix& p, const HermitianMatrix& q, double tol) {
  require_same_dim(p, q);
  const ProjectionInfo ip = require_projection(p, tol, "P");
  const ProjectionInfo iq = require_projection(q, tol, "Q");
  return ip.rank == iq.rank;
}

WeylGapReport weyl_gap_check(const HermitianMatrix& p, const HermitianMatrix& q, double mu,
                             const HermitianMatrix& r, double tol) {
  require_same_dim(p, q);
  require_same_dim(p, r);
  require_nontrivial_projection(p, tol, "P");
  require_nontrivial_projection(q, tol, "Q");
  const ProjectionInfo ir = classify_projection(r, tol);
  if (!ir.is_projection || ir.rank < 1 || ir.rank > 2) {
    throw Error(ErrorCode::BadCompression, "R must be a projection of rank 1 or 2");
  }
  const CMatrix w = range_basis(r);
  const CMatrix pc = w.adjoint() * p.matrix() * w;
  const CMatrix qc = w.adjoint() * q.matrix() * w;
  if (top_eigenvalue(pc) < 1.0 - tol) {
    throw Error(ErrorCode::BadCompression, "range of R misses range of P");
  }
  if (top_eigenvalue(qc) < 1.0 - tol) {
    throw Error(ErrorCode::BadCompression, "range of R misses range of Q");
  }
  const CMatrix shifted_qc = qc + mu * CMatrix::Identity(w.cols(), w.cols());

  WeylGapReport out;
  out.abs_mu = std::abs(mu);
  out.compressed_gap = hermitian_norm(pc - shifted_qc);
  const double r_norm = operator_norm(r);
  const double shifted_distance = operator_norm(p - q.shifted(mu));
  out.norm_bound = r_norm * shifted_distance * r_norm;
  out.chain_holds = out.abs_mu <= out.compressed_gap + tol &&
                    out.compressed_gap <= out.norm_bound + tol;
  out.premise_holds = shifted_distance < 0.5;
  out.pq_distance = operator_norm(p - q);
  out.pq_bound = shifted_distance + out.abs_mu;
  return out;
}

HermitianMatrix weyl_compression(const HermitianMatrix& p, const HermitianMatrix& q) {
  require_same_dim(p, q);
  const int n = p.dim();
  CMatrix pair(n, 2);
  pair.col(0) = spectral_decompose(p).eigenvectors.col(n - 1);
  pair.col(1) = spectral_decompose(q).eigenvectors.col(n - 1);
  // Gram-Schmidt; a parallel pair gives a rank-one compression.
  CVector second = pair.col(1) - pair.col(0) * pair.col(0).dot(pair.col(1));
  CMatrix basis = pair.col(0);
  if (second.norm() > 1e-12) {
    basis.conservativeResize(n, 2);
    basis.col(1) = second.normalized();
  }
  return HermitianMatrix::symmetrize(basis * basis.adjoint());
}

namespace {

struct RotationGenerator {
  CMatrix generator;  // anti-Hermitian G with exp(G) range(P) = range(Q)
  double max_angle = 0.0;
};

RotationGenerator principal_rotation(const HermitianMatrix& p, const HermitianMatrix& q,
                                     double tol) {
  require_same_dim(p, q);
  const ProjectionInfo ip = require_nontrivial_projection(p, tol, "P");
  const ProjectionInfo iq = require_nontrivial_projection(q, tol, "Q");
  if (ip.rank != iq.rank) {
    throw Error(ErrorCode::RankMismatch, "ranks " + std::to_string(ip.rank) + " and " +
                                             std::to_string(iq.rank) + " differ");
  }
  const int n = p.dim();
  const CMatrix x = range_basis(p);
  const CMatrix y = range_basis(q);
  Eigen::JacobiSVD<CMatrix> svd(x.adjoint() * y, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const CMatrix xs = x * svd.matrixU();
  const CMatrix ys = y * svd.matrixV();

  RotationGenerator out;
  out.generator = CMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < xs.cols(); ++i) {
    // Component of y_i orthogonal to all of range(P); atan2 keeps small
    // angles accurate where acos of a singular value near 1 does not.
    const CVector residual = ys.col(i) - xs * (xs.adjoint() * ys.col(i));
    const double s = residual.norm();
    if (s <= 1e-10) continue;
    const double angle = std::atan2(s, std::clamp(svd.singularValues()(i), 0.0, 1.0));
    const CVector u = residual / s;
    out.generator += angle * (u * xs.col(i).adjoint() - xs.col(i) * u.adjoint());
    out.max_angle = std::max(out.max_angle, angle);
  }
  return out;
}

}  // namespace

double max_principal_angle(const HermitianMatrix& p, const HermitianMatrix& q, double tol) {
  return principal_rotation(p, q, tol).max_angle;
}

int minimal_path_steps(const HermitianMatrix& p, const HermitianMatrix& q, double tol) {
  const double angle = max_principal_angle(p, q, tol);
  // A link rotating every principal angle by d has class length sin(d), so
  // d < pi/6 is needed.
  return std::max(1, static_cast<int>(std::floor(angle * 6.0 / std::numbers::pi)) + 1);
}

std::vector<HermitianMatrix> projection_path(const HermitianMatrix& p, const HermitianMatrix& q,
                                             int steps, double tol) {
  if (steps < 1) throw Error(ErrorCode::InvalidArgument, "steps must be >= 1");
  const RotationGenerator rot = principal_rotation(p, q, tol);
  const int n = p.dim();
  // exp(t G) = exp(-i t H) with H = i G Hermitian.
  const HermitianMatrix h = HermitianMatrix::symmetrize(Complex(0.0, 1.0) * rot.generator);
  const SpectralDecomposition sd = spectral_decompose(h);

  std::vector<HermitianMatrix> chain;
  chain.reserve(steps + 1);
  chain.push_back(p);
  for (int k = 1; k <= steps; ++k) {
    const double t = static_cast<double>(k) / steps;
    CVector phases(n);
    for (int i = 0; i < n; ++i) phases(i) = std::polar(1.0, -t * sd.eigenvalues(i));
    const CMatrix v = sd.eigenvectors * phases.asDiagonal() * sd.eigenvectors.adjoint();
    chain.push_back(HermitianMatrix::symmetrize(v * p.matrix() * v.adjoint()));
  }
  if (operator_norm(chain.back() - q) > 1e-8) {
    throw Error(ErrorCode::SolverFailure, "rotation path does not end at Q");
  }
  for (int k = 0; k < steps; ++k) {
    const double link = class_distance(chain[k], chain[k + 1]);
    if (!(link < 0.5)) {
      throw Error(ErrorCode::StepsTooFew,
                  "link " + std::to_string(k) + " has class distance " + std::to_string(link));
    }
  }
  return chain;
}

std::optional<DistinguishingWitness> distinguish_projections(const HermitianMatrix& p,
                                                             const HermitianMatrix& q,
                                                             double tol) {
  require_same_dim(p, q);
  require_nontrivial_projection(p, tol, "P");
  require_nontrivial_projection(q, tol, "Q");
  if (operator_norm(p - q) <= tol) return std::nullopt;

  const int n = p.dim();
  const CMatrix id = CMatrix::Identity(n, n);
  // A rank-one R = v v* under P with v outside range(Q) separates the two:
  // ||P + R||_v = 1 while Q + R has top eigenvalue 1 + sqrt(1 - ||(I-Q)v||^2).
  auto search = [&](const HermitianMatrix& dom,
                    const HermitianMatrix& other) -> std::optional<HermitianMatrix> {
    const HermitianMatrix m =
        HermitianMatrix::symmetrize(dom.matrix() * (id - other.matrix()) * dom.matrix());
    const SpectralDecomposition sd = spectral_decompose(m);
    if (sd.max() <= tol) return std::nullopt;
    return HermitianMatrix::outer(sd.eigenvectors.col(n - 1));
  };

  std::optional<HermitianMatrix> r = search(p, q);
  bool under_p = true;
  if (!r) {
    r = search(q, p);
    under_p = false;
  }
  if (!r) return std::nullopt;
  DistinguishingWitness out{*r, under_p, max_deviation(p + *r), max_deviation(q + *r)};
  return out;
}

}  // namespace obsdev
