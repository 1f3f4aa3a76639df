#pragma once

// Seeded random generators for observables, states, unitaries and
// projections.
//
// The stream is SplitMix64: state advances by 0x9E3779B97F4A7C15 per draw and
// each output is the state passed through the mixer
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   z =  z ^ (z >> 31)
// Uniforms take the top 53 bits; normals use Box-Muller with both outputs
// consumed in order. Every step is integer or IEEE arithmetic, so another
// implementation following these constants reproduces the same samples.

#include <cstdint>

#include "obsdev/hermitian.hpp"

namespace obsdev {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();
  // Uniform on [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Integer uniform on [lo, hi].
  int uniform_int(int lo, int hi);
  double normal();
  // Real and imaginary parts are independent N(0, 1/2), so E|z|^2 = 1.
  Complex complex_normal();

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Derived stream for case `index` of a batch run with master seed `seed`.
inline Rng case_rng(std::uint64_t seed, std::uint64_t index) { return Rng(seed ^ index); }

// (G + G*)/2 with G iid standard complex Gaussian.
HermitianMatrix gen_hermitian(int n, Rng& rng);
HermitianMatrix gen_hermitian(int n, std::uint64_t seed);

// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases of
// diag(R) moved into Q.
CMatrix gen_haar_unitary(int n, Rng& rng);
CMatrix gen_haar_unitary(int n, std::uint64_t seed);

// U diag(1^k, 0^(n-k)) U* with U Haar. BadRank unless 0 <= k <= n.
HermitianMatrix gen_projection(int n, int k, Rng& rng);
HermitianMatrix gen_projection(int n, int k, std::uint64_t seed);

// Uniformly distributed pure state.
StateVector gen_state(int n, Rng& rng);

}  // namespace obsdev
