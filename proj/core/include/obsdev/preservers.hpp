#pragma once

// Real-linear maps on Hermitian matrices that preserve the operator norm or
// the maximal deviation: construction from (sign, U, antiunitary flag, F, X),
// randomized property checks, and decomposition of a verified preserver back
// into that form. Also the affine/linear reduction of nonlinear d_m and d_v
// isometries.

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "obsdev/hermitian.hpp"

namespace obsdev {

// Orthonormal basis of the real space of n x n Hermitian matrices under
// <A, B> = tr(AB): I/sqrt(n), the normalized diagonal Gell-Mann matrices, then
// for each pair j < k the symmetric (E_jk + E_kj)/sqrt(2) and antisymmetric
// (-i E_jk + i E_kj)/sqrt(2) elements.
class HermitianBasis {
 public:
  static HermitianBasis gell_mann(int n);

  int dim() const noexcept { return dim_; }
  int size() const noexcept { return dim_ * dim_; }
  HermitianMatrix operator[](int k) const;
  std::vector<HermitianMatrix> elements() const;

  // c_k = tr(B_k A).
  RVector coordinates(const HermitianMatrix& a) const;
  HermitianMatrix assemble(const RVector& coords) const;
  RMatrix gram() const;

 private:
  int dim_ = 0;
};

HermitianBasis build_basis(int n);

// A real-linear map in Gell-Mann coordinates (n^2 x n^2).
struct LinearMapOnHermitians {
  int dim = 1;
  RMatrix matrix;

  static LinearMapOnHermitians identity(int n);
  static LinearMapOnHermitians zero(int n);
  // Samples an arbitrary (assumed linear) map on the basis.
  static LinearMapOnHermitians from_function(
      int n, const std::function<HermitianMatrix(const HermitianMatrix&)>& f);
};

struct AffineMap {
  LinearMapOnHermitians linear;
  HermitianMatrix offset;
};

// A -> sign * U tau(A) U^* + tr(F A) I + X, with tau the identity or (for an
// antiunitary) entrywise conjugation in the standard basis.
struct PreserverForm {
  int dim = 1;
  int sign = 1;
  CMatrix u = CMatrix::Identity(1, 1);
  bool antiunitary = false;
  HermitianMatrix f;
  HermitianMatrix x;

  static PreserverForm identity(int n);
};

// sign * U tau(A) U^*.
HermitianMatrix unitary_action(const PreserverForm& form, const HermitianMatrix& a);
HermitianMatrix apply_form(const PreserverForm& form, const HermitianMatrix& a);

AffineMap to_map(const PreserverForm& form);

HermitianMatrix apply_map(const LinearMapOnHermitians& map, const HermitianMatrix& a);
HermitianMatrix apply_map(const AffineMap& map, const HermitianMatrix& a);

// Smallest singular value > 1e-8 * largest.
bool is_bijective(const LinearMapOnHermitians& map);

enum class PreservedQuantity { OperatorNorm, MaxDeviation, DmIsometry, DvIsometry };

std::string_view to_string(PreservedQuantity q) noexcept;
// Accepts the report names above and the CLI shorthands "norm"/"deviation".
std::optional<PreservedQuantity> parse_quantity(std::string_view name) noexcept;

struct CheckReport {
  PreservedQuantity property = PreservedQuantity::OperatorNorm;
  int samples = 0;  // evaluated cases, deterministic probes included
  double max_defect = 0.0;
  double tolerance = 0.0;
  bool verdict = false;
};

using MapOracle = std::function<HermitianMatrix(const HermitianMatrix&)>;

// Largest |q(L A) - q(A)| (or |q(LA - LB) - q(A - B)| for the metric forms)
// over `samples` random GUE inputs plus deterministic probes (I, E_11 and the
// basis elements). A pass is evidence, not proof.
CheckReport check_preserver(const LinearMapOnHermitians& map, PreservedQuantity property,
                            int samples, std::uint64_t seed, double tol);
CheckReport check_oracle(const MapOracle& map, int n, PreservedQuantity property, int samples,
                         std::uint64_t seed, double tol);

struct DecomposeOptions {
  int check_samples = 32;
  std::uint64_t seed = 0x6f627364ULL;
  double check_tol = 1e-8;
  double residual_tol = 1e-7;
  int verify_samples = 16;
};

// L(A) = +-U tau(A) U^* for a norm preserver. NotAPreserver (with a
// stage name) if L fails the norm check, the sign test on L(I) or the final
// residual.
PreserverForm decompose_norm_preserver(const LinearMapOnHermitians& map,
                                       const DecomposeOptions& options = {});

// L(A) = +-U tau(A) U^* + tr(F A) I. Requires n >= 2. In dimension 2 the two
// signs describe the same maps, and the decomposition always reports +1.
PreserverForm decompose_deviation_preserver(const LinearMapOnHermitians& map,
                                            const DecomposeOptions& options = {});

// E_jj (j = 1..n), then the projections onto (e_1 + e_j)/sqrt(2) and
// (e_1 + i e_j)/sqrt(2) for j = 2..n.
std::vector<HermitianMatrix> wigner_probes(int n);

struct WignerResult {
  CMatrix u;
  bool antiunitary = false;
  double max_probe_defect = 0.0;
};

// Recovers the (anti)unitary implementing an overlap-preserving map on
// rank-one projections from its values on wigner_probes(n). U is normalized
// so the first nonzero entry of its first column is real positive.
WignerResult wigner_reconstruct(const MapOracle& psi, int n, double overlap_tol = 1e-8,
                                double defect_tol = 1e-7);

// max over random rank-one P of ||a-action(P) - b-action(P)|| with the actions
// P -> U tau(P) U^* (signs ignored). Zero iff the two (anti)unitaries agree up
// to a global phase.
double rank_one_action_distance(const PreserverForm& a, const PreserverForm& b, int samples,
                                std::uint64_t seed);

struct AffinizedIsometry {
  LinearMapOnHermitians linear;
  HermitianMatrix translation;
  PreserverForm form;  // x == translation, f == 0
  double isometry_defect = 0.0;
  double additivity_defect = 0.0;
};

// phi(A) = L(A) + phi(0) for a d_m isometry, with L decomposed as a norm
// preserver. NotAnIsometry / NotLinearizable on sampled failures.
AffinizedIsometry affinize_dm_isometry(const MapOracle& phi, int n, int samples,
                                       std::uint64_t seed, double tol = 1e-8);

using ScalarFunctional = std::function<double(const HermitianMatrix&)>;

struct LinearizedIsometry {
  // Matrix of phi_1(A) = phi_0(A) - l(phi_0(A)) I + l(A) I, phi_0 = phi - phi(0).
  LinearMapOnHermitians linear;
  // phi(A) = sign U tau(A) U^* + x + g(A) I; f is left zero and the scalar
  // part is reported pointwise by scalar_discrepancy.
  PreserverForm form;
  // The trace-form functional of phi_1's own decomposition (depends on l).
  HermitianMatrix linear_functional;
  double isometry_defect = 0.0;
  double additivity_defect = 0.0;
  // max over samples of d_v(phi(A) - x, sign U tau(A) U^*).
  double model_defect = 0.0;
};

// Reduces a d_v isometry to a linear deviation preserver. `l` must satisfy
// l(c I) = c; defaults to the normalized trace.
LinearizedIsometry linearize_dv_isometry(const MapOracle& phi, int n, int samples,
                                         std::uint64_t seed, double tol = 1e-8,
                                         const ScalarFunctional& l = {});

// g(A) = tr(phi(A) - x - sign U tau(A) U^*) / n.
double scalar_discrepancy(const MapOracle& phi, const PreserverForm& form,
                          const HermitianMatrix& a);

}  // namespace obsdev
