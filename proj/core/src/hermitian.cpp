#include "obsdev/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

namespace obsdev {

namespace {

void check_dim(Eigen::Index n) {
  if (n < 1 || n > kMaxDim) {
    throw Error(ErrorCode::InvalidArgument,
                "dimension " + std::to_string(n) + " outside [1, " +
                    std::to_string(kMaxDim) + "]");
  }
}

CMatrix symmetrized(const CMatrix& m) {
  CMatrix out = (m + m.adjoint()) * 0.5;
  // Diagonal is exactly real after this, off-diagonal pairs are exact
  // conjugates because complex addition commutes bitwise.
  return out;
}

double hermiticity_defect(const CMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace

HermitianMatrix::HermitianMatrix() : m_(CMatrix::Zero(1, 1)) {}

HermitianMatrix::HermitianMatrix(CMatrix m, double defect)
    : m_(std::move(m)), defect_(defect) {}

HermitianMatrix HermitianMatrix::validate(const CMatrix& raw, double tol) {
  if (raw.rows() != raw.cols()) {
    throw Error(ErrorCode::NotSquare, "matrix is " + std::to_string(raw.rows()) +
                                          "x" + std::to_string(raw.cols()));
  }
  check_dim(raw.rows());
  if (!raw.allFinite()) {
    throw Error(ErrorCode::InvalidArgument, "matrix has non-finite entries");
  }
  const double defect = hermiticity_defect(raw);
  if (defect > tol) {
    throw Error(ErrorCode::DefectTooLarge,
                "hermiticity defect " + std::to_string(defect) +
                    " exceeds tolerance " + std::to_string(tol));
  }
  return HermitianMatrix(symmetrized(raw), defect);
}

HermitianMatrix HermitianMatrix::symmetrize(const CMatrix& m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::NotSquare, "cannot symmetrize a non-square matrix");
  }
  check_dim(m.rows());
  return HermitianMatrix(symmetrized(m));
}

HermitianMatrix HermitianMatrix::zero(int n) {
  check_dim(n);
  return HermitianMatrix(CMatrix::Zero(n, n));
}

HermitianMatrix HermitianMatrix::identity(int n) {
  check_dim(n);
  return HermitianMatrix(CMatrix::Identity(n, n));
}

HermitianMatrix HermitianMatrix::scalar(int n, double lambda) {
  check_dim(n);
  return HermitianMatrix(CMatrix::Identity(n, n) * lambda);
}

HermitianMatrix HermitianMatrix::diagonal(const RVector& d) {
  check_dim(d.size());
  CMatrix m = CMatrix::Zero(d.size(), d.size());
  m.diagonal() = d.cast<Complex>();
  return HermitianMatrix(std::move(m));
}

HermitianMatrix HermitianMatrix::diagonal(std::initializer_list<double> d) {
  RVector v(static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double x : d) v(i++) = x;
  return diagonal(v);
}

HermitianMatrix HermitianMatrix::outer(const CVector& v) {
  check_dim(v.size());
  return HermitianMatrix(symmetrized(v * v.adjoint()));
}

HermitianMatrix HermitianMatrix::shifted(double lambda) const {
  CMatrix m = m_;
  m.diagonal().array() += lambda;
  return HermitianMatrix(std::move(m));
}

HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b) {
  require_same_dim(a, b);
  return HermitianMatrix(a.m_ + b.m_);
}

HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b) {
  require_same_dim(a, b);
  return HermitianMatrix(a.m_ - b.m_);
}

HermitianMatrix operator-(const HermitianMatrix& a) { return HermitianMatrix(-a.m_); }

HermitianMatrix operator*(double s, const HermitianMatrix& a) {
  return HermitianMatrix(a.m_ * s);
}

StateVector::StateVector() : v_(CVector::Zero(1)) { v_(0) = 1.0; }

StateVector StateVector::make(const CVector& v, double tol) {
  check_dim(v.size());
  const double norm = v.norm();
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > tol) {
    throw Error(ErrorCode::NotNormalized,
                "state norm " + std::to_string(norm) + " is not 1");
  }
  return StateVector(v);
}

StateVector StateVector::normalized(const CVector& v) {
  check_dim(v.size());
  const double norm = v.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw Error(ErrorCode::InvalidArgument, "cannot normalize a zero vector");
  }
  return StateVector(v / norm);
}

StateVector StateVector::basis(int n, int k) {
  check_dim(n);
  if (k < 0 || k >= n) throw Error(ErrorCode::InvalidArgument, "basis index out of range");
  CVector v = CVector::Zero(n);
  v(k) = 1.0;
  return StateVector(std::move(v));
}

StateVector SpectralDecomposition::eigenvector(int k) const {
  return StateVector::normalized(eigenvectors.col(k));
}

HermitianMatrix SpectralDecomposition::reconstruct() const {
  return HermitianMatrix::symmetrize(eigenvectors *
                                     eigenvalues.cast<Complex>().asDiagonal() *
                                     eigenvectors.adjoint());
}

void require_same_dim(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
  }
}

HermitianMatrix validate_hermitian(const CMatrix& raw, double tol) {
  return HermitianMatrix::validate(raw, tol);
}

SpectralDecomposition spectral_decompose(const HermitianMatrix& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(a.matrix(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::SolverFailure, "Hermitian eigensolver did not converge");
  }
  return SpectralDecomposition{solver.eigenvalues(), solver.eigenvectors()};
}

namespace {

RVector eigenvalues_only(const HermitianMatrix& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(a.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::SolverFailure, "Hermitian eigensolver did not converge");
  }
  return solver.eigenvalues();
}

void require_state_dim(const HermitianMatrix& a, const StateVector& phi) {
  if (a.dim() != phi.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "operator is " + std::to_string(a.dim()) + "-dimensional, state is " +
                    std::to_string(phi.dim()) + "-dimensional");
  }
}

}  // namespace

double mean_value(const HermitianMatrix& a, const StateVector& phi, double tol) {
  require_state_dim(a, phi);
  const Complex m = phi.amplitudes().dot(a.matrix() * phi.amplitudes());
  if (std::abs(m.imag()) > tol * (1.0 + a.matrix().norm())) {
    throw Error(ErrorCode::NonRealResult,
                "imaginary part " + std::to_string(m.imag()) + " of <A phi, phi>");
  }
  return m.real();
}

double moment(const HermitianMatrix& a, int k, const StateVector& phi, double tol) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "moment order must be >= 1");
  if (k == 1) return mean_value(a, phi, tol);
  require_state_dim(a, phi);
  const SpectralDecomposition sd = spectral_decompose(a);
  const CVector coeffs = sd.eigenvectors.adjoint() * phi.amplitudes();
  double sum = 0.0;
  for (int i = 0; i < sd.dim(); ++i) {
    sum += std::pow(sd.eigenvalues(i), k) * std::norm(coeffs(i));
  }
  return sum;
}

double variance(const HermitianMatrix& a, const StateVector& phi, double tol) {
  const double m = mean_value(a, phi, tol);
  const CVector centred = a.matrix() * phi.amplitudes() - m * phi.amplitudes();
  const double v = centred.squaredNorm();
  // The centred form is a squared norm; the guard only matters if a caller
  // swaps in a different evaluation.
  if (v < -tol) throw Error(ErrorCode::NegativeVariance, std::to_string(v));
  return std::max(v, 0.0);
}

Interval mean_value_range(const HermitianMatrix& a) {
  const RVector ev = eigenvalues_only(a);
  return Interval{ev(0), ev(ev.size() - 1)};
}

double numerical_radius(const HermitianMatrix& a) {
  const Interval r = mean_value_range(a);
  return std::max(std::abs(r.lo), std::abs(r.hi));
}

double operator_norm(const HermitianMatrix& a) { return numerical_radius(a); }

double spectral_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

ProjectionInfo classify_projection(const HermitianMatrix& a, double tol) {
  const RVector ev = eigenvalues_only(a);
  ProjectionInfo info;
  info.is_projection = true;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i) - 1.0) <= tol) {
      ++info.rank;
    } else if (std::abs(ev(i)) > tol) {
      info.is_projection = false;
    }
  }
  if (!info.is_projection) {
    info.rank = 0;
    return info;
  }
  info.is_trivial = info.rank == 0 || info.rank == a.dim();
  return info;
}

bool is_symmetry(const HermitianMatrix& a, double tol) {
  const RVector ev = eigenvalues_only(a);
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (std::abs(std::abs(ev(i)) - 1.0) > tol) return false;
  }
  return true;
}

HermitianMatrix functional_calculus(const HermitianMatrix& a,
                                    const std::function<double(double)>& f) {
  const SpectralDecomposition sd = spectral_decompose(a);
  RVector fv(sd.dim());
  for (int i = 0; i < sd.dim(); ++i) {
    fv(i) = f(sd.eigenvalues(i));
    if (!std::isfinite(fv(i))) {
      throw Error(ErrorCode::DomainError,
                  "function undefined at eigenvalue " + std::to_string(sd.eigenvalues(i)));
    }
  }
  return HermitianMatrix::symmetrize(sd.eigenvectors * fv.cast<Complex>().asDiagonal() *
                                     sd.eigenvectors.adjoint());
}

bool commutes(const HermitianMatrix& a, const HermitianMatrix& b, double tol) {
  require_same_dim(a, b);
  const CMatrix c = a.matrix() * b.matrix() - b.matrix() * a.matrix();
  // i[A,B] is Hermitian, so its norm is its spectral radius.
  const double norm = operator_norm(HermitianMatrix::symmetrize(Complex(0.0, 1.0) * c));
  return norm <= tol * (1.0 + operator_norm(a)) * (1.0 + operator_norm(b));
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "matrix shapes differ");
  }
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace obsdev
