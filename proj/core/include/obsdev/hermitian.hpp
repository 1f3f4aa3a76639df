#pragma once

// Finite-dimensional bounded observables: Hermitian matrices, pure states and
// the spectral/statistical primitives built on top of them.

#include <complex>
#include <functional>
#include <initializer_list>

#include <Eigen/Dense>

#include "obsdev/error.hpp"

namespace obsdev {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

namespace tol {
// Absolute tolerances.
inline constexpr double kHermitian = 1e-10;
inline constexpr double kState = 1e-10;
// Relative tolerances (scaled by 1 + ||A||).
inline constexpr double kSpectral = 1e-8;
inline constexpr double kProjection = 1e-8;
}  // namespace tol

inline constexpr int kMaxDim = 64;

// An n x n complex Hermitian matrix, 1 <= n <= kMaxDim. Entries are stored
// exactly Hermitian: every constructor symmetrizes, so A(i,j) == conj(A(j,i))
// holds bitwise.
class HermitianMatrix {
 public:
  // 1x1 zero.
  HermitianMatrix();

  // Rejects non-square input (NotSquare) and hermiticity defect above tol
  // (DefectTooLarge); otherwise stores (M + M*)/2 and remembers the defect.
  static HermitianMatrix validate(const CMatrix& raw, double tol = tol::kHermitian);

  // Trusted path for values that are Hermitian up to rounding (sums,
  // products of the form U A U*, ...). No defect check.
  static HermitianMatrix symmetrize(const CMatrix& m);

  static HermitianMatrix zero(int n);
  static HermitianMatrix identity(int n);
  static HermitianMatrix scalar(int n, double lambda);
  static HermitianMatrix diagonal(const RVector& d);
  static HermitianMatrix diagonal(std::initializer_list<double> d);
  // |v><v| for a (not necessarily normalized) vector.
  static HermitianMatrix outer(const CVector& v);

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  const CMatrix& matrix() const noexcept { return m_; }
  Complex operator()(int i, int j) const { return m_(i, j); }
  // Hermiticity defect of the raw input this value was built from.
  double input_defect() const noexcept { return defect_; }

  double trace() const { return m_.trace().real(); }

  HermitianMatrix shifted(double lambda) const;

  friend HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b);
  friend HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b);
  friend HermitianMatrix operator-(const HermitianMatrix& a);
  friend HermitianMatrix operator*(double s, const HermitianMatrix& a);

 private:
  explicit HermitianMatrix(CMatrix m, double defect = 0.0);

  CMatrix m_;
  double defect_ = 0.0;
};

// A unit vector of C^n.
class StateVector {
 public:
  StateVector();

  // NotNormalized unless | ||v|| - 1 | <= tol.
  static StateVector make(const CVector& v, double tol = tol::kState);
  // Rescales v to unit length; InvalidArgument for the zero vector.
  static StateVector normalized(const CVector& v);
  static StateVector basis(int n, int k);

  int dim() const noexcept { return static_cast<int>(v_.size()); }
  const CVector& amplitudes() const noexcept { return v_; }
  Complex operator[](int i) const { return v_(i); }

 private:
  explicit StateVector(CVector v) : v_(std::move(v)) {}
  CVector v_;
};

struct SpectralDecomposition {
  RVector eigenvalues;   // ascending
  CMatrix eigenvectors;  // column k belongs to eigenvalues(k)

  int dim() const { return static_cast<int>(eigenvalues.size()); }
  double min() const { return eigenvalues(0); }
  double max() const { return eigenvalues(eigenvalues.size() - 1); }
  StateVector eigenvector(int k) const;
  HermitianMatrix reconstruct() const;
};

struct ProjectionInfo {
  bool is_projection = false;
  int rank = 0;
  bool is_trivial = false;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

HermitianMatrix validate_hermitian(const CMatrix& raw, double tol = tol::kHermitian);

SpectralDecomposition spectral_decompose(const HermitianMatrix& a);

// <A phi, phi>. NonRealResult if the imaginary part exceeds tol (scaled by
// 1 + ||A||_F).
double mean_value(const HermitianMatrix& a, const StateVector& phi,
                  double tol = tol::kHermitian);

// <A^k phi, phi>. k == 1 goes through mean_value; higher powers use the
// spectral decomposition.
double moment(const HermitianMatrix& a, int k, const StateVector& phi,
              double tol = tol::kHermitian);

// <A^2 phi, phi> - <A phi, phi>^2, evaluated in the centred form
// ||(A - m) phi||^2.
double variance(const HermitianMatrix& a, const StateVector& phi,
                double tol = tol::kHermitian);

Interval mean_value_range(const HermitianMatrix& a);

double numerical_radius(const HermitianMatrix& a);
// Same value as numerical_radius: for Hermitian A, w(A) = ||A||.
double operator_norm(const HermitianMatrix& a);
// Largest singular value of an arbitrary complex matrix.
double spectral_norm(const CMatrix& m);

ProjectionInfo classify_projection(const HermitianMatrix& a,
                                   double tol = tol::kProjection);

// True iff every eigenvalue is within tol of -1 or +1, i.e. A = 2P - I.
bool is_symmetry(const HermitianMatrix& a, double tol = tol::kProjection);

// sum_k f(lambda_k) v_k v_k^*. DomainError if f yields a non-finite value at
// an eigenvalue.
HermitianMatrix functional_calculus(const HermitianMatrix& a,
                                    const std::function<double(double)>& f);

// ||AB - BA|| <= tol (1 + ||A||)(1 + ||B||).
bool commutes(const HermitianMatrix& a, const HermitianMatrix& b,
              double tol = tol::kSpectral);

// Largest absolute entrywise difference.
double max_abs_diff(const CMatrix& a, const CMatrix& b);

void require_same_dim(const HermitianMatrix& a, const HermitianMatrix& b);

}  // namespace obsdev
