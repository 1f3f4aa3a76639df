#include "obsdev/random.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/QR>

namespace obsdev {

std::uint64_t Rng::next_u64() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

int Rng::uniform_int(int lo, int hi) {
  if (hi < lo) throw Error(ErrorCode::InvalidArgument, "empty integer range");
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(next_u64() % span);
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // 1 - u keeps the logarithm argument in (0, 1].
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Complex Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

namespace {

CMatrix gaussian_matrix(int n, Rng& rng) {
  if (n < 1 || n > kMaxDim) {
    throw Error(ErrorCode::InvalidArgument, "dimension " + std::to_string(n) + " out of range");
  }
  CMatrix g(n, n);
  // Row-major fill order is part of the reproducibility contract.
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) g(i, j) = rng.complex_normal();
  }
  return g;
}

}  // namespace

HermitianMatrix gen_hermitian(int n, Rng& rng) {
  return HermitianMatrix::symmetrize(gaussian_matrix(n, rng));
}

HermitianMatrix gen_hermitian(int n, std::uint64_t seed) {
  Rng rng(seed);
  return gen_hermitian(n, rng);
}

CMatrix gen_haar_unitary(int n, Rng& rng) {
  const CMatrix g = gaussian_matrix(n, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(j) *= d / mag;
  }
  return q;
}

CMatrix gen_haar_unitary(int n, std::uint64_t seed) {
  Rng rng(seed);
  return gen_haar_unitary(n, rng);
}

HermitianMatrix gen_projection(int n, int k, Rng& rng) {
  if (k < 0 || k > n) {
    throw Error(ErrorCode::BadRank,
                "rank " + std::to_string(k) + " outside [0, " + std::to_string(n) + "]");
  }
  const CMatrix u = gen_haar_unitary(n, rng);
  const CMatrix cols = u.leftCols(k);
  return HermitianMatrix::symmetrize(cols * cols.adjoint());
}

HermitianMatrix gen_projection(int n, int k, std::uint64_t seed) {
  Rng rng(seed);
  return gen_projection(n, k, rng);
}

StateVector gen_state(int n, Rng& rng) {
  CVector v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.complex_normal();
  return StateVector::normalized(v);
}

}  // namespace obsdev
