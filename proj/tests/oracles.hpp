#pragma once

// Reference computations that share no code path with the library: Householder
// tridiagonalization followed by Sturm-sequence bisection for Hermitian
// eigenvalues, and a lambda-grid plus ternary search for inf_l ||A + l I||
// using singular values.

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;

struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;  // |subdiagonal|, size n - 1
};

inline Tridiagonal tridiagonalize(Mat a) {
  const int n = static_cast<int>(a.rows());
  for (int k = 0; k + 2 < n; ++k) {
    const int m = n - k - 1;
    Eigen::VectorXcd x = a.block(k + 1, k, m, 1);
    const double xnorm = x.norm();
    if (xnorm == 0.0) continue;
    const cd phase = std::abs(x(0)) > 0.0 ? x(0) / std::abs(x(0)) : cd(1.0);
    Eigen::VectorXcd v = x;
    v(0) += phase * xnorm;
    const double vnorm = v.norm();
    if (vnorm == 0.0) continue;
    v /= vnorm;
    // A <- H A H with H = I - 2 v v^* acting on rows/cols k+1..n-1.
    Mat rows = a.bottomRows(m);
    rows -= 2.0 * v * (v.adjoint() * rows);
    a.bottomRows(m) = rows;
    Mat cols = a.rightCols(m);
    cols -= 2.0 * (cols * v) * v.adjoint();
    a.rightCols(m) = cols;
  }
  Tridiagonal t;
  for (int i = 0; i < n; ++i) t.diag.push_back(a(i, i).real());
  for (int i = 0; i + 1 < n; ++i) t.off.push_back(std::abs(a(i + 1, i)));
  return t;
}

// Number of eigenvalues strictly below x.
inline int sturm_count(const Tridiagonal& t, double x) {
  int count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < t.diag.size(); ++i) {
    const double e2 = i == 0 ? 0.0 : t.off[i - 1] * t.off[i - 1];
    q = t.diag[i] - x - (i == 0 ? 0.0 : e2 / q);
    if (q == 0.0) q = -1e-300;
    if (q < 0.0) ++count;
  }
  return count;
}

// Ascending eigenvalues of a Hermitian matrix.
inline std::vector<double> eigenvalues(const Mat& a) {
  const Tridiagonal t = tridiagonalize(a);
  const int n = static_cast<int>(t.diag.size());
  double lo = 0.0;
  double hi = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = (i > 0 ? t.off[i - 1] : 0.0) + (i + 1 < n ? t.off[i] : 0.0);
    lo = std::min(lo, t.diag[i] - r);
    hi = std::max(hi, t.diag[i] + r);
  }
  lo -= 1e-12 * (1.0 + std::abs(lo));
  hi += 1e-12 * (1.0 + std::abs(hi));
  std::vector<double> out;
  for (int k = 0; k < n; ++k) {
    double a_lo = lo;
    double a_hi = hi;
    for (int it = 0; it < 200 && a_hi - a_lo > 1e-16 * (1.0 + std::abs(a_hi)); ++it) {
      const double mid = 0.5 * (a_lo + a_hi);
      if (sturm_count(t, mid) > k) {
        a_hi = mid;
      } else {
        a_lo = mid;
      }
    }
    out.push_back(0.5 * (a_lo + a_hi));
  }
  return out;
}

inline double half_diameter(const Mat& a) {
  const std::vector<double> ev = eigenvalues(a);
  return (ev.back() - ev.front()) / 2.0;
}

inline double operator_norm(const Mat& a) {
  const std::vector<double> ev = eigenvalues(a);
  return std::max(std::abs(ev.front()), std::abs(ev.back()));
}

inline double shifted_norm(const Mat& a, double lambda) {
  const Mat s = a + lambda * Mat::Identity(a.rows(), a.cols());
  return Eigen::JacobiSVD<Mat>(s).singularValues()(0);
}

struct FactorMin {
  double value;
  double lambda;
};

// Grid over [-2||A||, 2||A||] with the given step, refined by ternary search
// on the bracketing cell (the objective is convex in lambda).
inline FactorMin factor_norm(const Mat& a, double step = 1e-4) {
  const double bound = 2.0 * std::max(Eigen::JacobiSVD<Mat>(a).singularValues()(0), 1e-12);
  double best = shifted_norm(a, -bound);
  double best_l = -bound;
  for (double l = -bound; l <= bound; l += step) {
    const double v = shifted_norm(a, l);
    if (v < best) {
      best = v;
      best_l = l;
    }
  }
  double lo = best_l - step;
  double hi = best_l + step;
  for (int it = 0; it < 200; ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (shifted_norm(a, m1) < shifted_norm(a, m2)) {
      hi = m2;
    } else {
      lo = m1;
    }
  }
  const double l = 0.5 * (lo + hi);
  return {shifted_norm(a, l), l};
}

}  // namespace oracle
