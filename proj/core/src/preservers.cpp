#include "obsdev/preservers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "obsdev/deviation.hpp"
#include "obsdev/factor_space.hpp"
#include "obsdev/random.hpp"

namespace obsdev {

namespace {

const Complex kI(0.0, 1.0);

HermitianMatrix outer_unit(const CVector& v) { return HermitianMatrix::outer(v / v.norm()); }

CVector basis_vector(int n, int k) {
  CVector v = CVector::Zero(n);
  v(k) = 1.0;
  return v;
}

[[noreturn]] void fail(ErrorCode code, const std::string& message, const std::string& stage) {
  throw Error(code, message, stage);
}

double quantity(PreservedQuantity q, const HermitianMatrix& a) {
  switch (q) {
    case PreservedQuantity::OperatorNorm:
    case PreservedQuantity::DmIsometry:
      return operator_norm(a);
    case PreservedQuantity::MaxDeviation:
    case PreservedQuantity::DvIsometry:
      return max_deviation(a);
  }
  return 0.0;
}

bool is_metric(PreservedQuantity q) {
  return q == PreservedQuantity::DmIsometry || q == PreservedQuantity::DvIsometry;
}

CheckReport run_check(const MapOracle& map, int n, PreservedQuantity property, int samples,
                      std::uint64_t seed, double tol) {
  if (samples < 0) throw Error(ErrorCode::InvalidArgument, "samples must be >= 0");
  CheckReport report;
  report.property = property;
  report.tolerance = tol;

  std::vector<HermitianMatrix> probes{HermitianMatrix::identity(n),
                                      HermitianMatrix::outer(basis_vector(n, 0))};
  const std::vector<HermitianMatrix> elements = HermitianBasis::gell_mann(n).elements();
  probes.insert(probes.end(), elements.begin(), elements.end());

  auto record = [&](double defect) {
    report.max_defect = std::max(report.max_defect, defect);
    ++report.samples;
  };

  Rng rng(seed);
  if (is_metric(property)) {
    const HermitianMatrix zero = HermitianMatrix::zero(n);
    const HermitianMatrix image_zero = map(zero);
    for (const HermitianMatrix& p : probes) {
      record(std::abs(quantity(property, map(p) - image_zero) - quantity(property, p)));
    }
    for (int s = 0; s < samples; ++s) {
      const HermitianMatrix a = gen_hermitian(n, rng);
      const HermitianMatrix b = gen_hermitian(n, rng);
      record(std::abs(quantity(property, map(a) - map(b)) - quantity(property, a - b)));
    }
  } else {
    for (const HermitianMatrix& p : probes) {
      record(std::abs(quantity(property, map(p)) - quantity(property, p)));
    }
    for (int s = 0; s < samples; ++s) {
      const HermitianMatrix a = gen_hermitian(n, rng);
      record(std::abs(quantity(property, map(a)) - quantity(property, a)));
    }
  }
  report.verdict = report.max_defect <= tol;
  return report;
}

void require_dim(int n) {
  if (n < 1 || n > kMaxDim) {
    throw Error(ErrorCode::InvalidArgument,
                "dimension must lie in [1, " + std::to_string(kMaxDim) + "]");
  }
}

void require_well_formed(const LinearMapOnHermitians& map) {
  require_dim(map.dim);
  const Eigen::Index m = static_cast<Eigen::Index>(map.dim) * map.dim;
  if (map.matrix.rows() != m || map.matrix.cols() != m) {
    throw Error(ErrorCode::DimensionMismatch,
                "map matrix must be " + std::to_string(m) + "x" + std::to_string(m));
  }
}

double residual_against(const LinearMapOnHermitians& map, const PreserverForm& form,
                        int samples, std::uint64_t seed) {
  Rng rng(seed ^ 0x7265736964ULL);
  const HermitianBasis basis = HermitianBasis::gell_mann(map.dim);
  double worst = 0.0;
  auto probe = [&](const HermitianMatrix& a) {
    worst = std::max(worst, operator_norm(apply_map(map, a) - apply_form(form, a)));
  };
  for (const HermitianMatrix& b : basis.elements()) probe(b);
  for (int s = 0; s < samples; ++s) probe(gen_hermitian(map.dim, rng));
  return worst;
}

// Polar factor of an almost unitary matrix.
CMatrix nearest_unitary(const CMatrix& m) {
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

}  // namespace

HermitianBasis HermitianBasis::gell_mann(int n) {
  require_dim(n);
  HermitianBasis b;
  b.dim_ = n;
  return b;
}

HermitianMatrix HermitianBasis::operator[](int k) const {
  const int n = dim_;
  if (k < 0 || k >= size()) throw Error(ErrorCode::InvalidArgument, "basis index out of range");
  if (k == 0) return HermitianMatrix::scalar(n, 1.0 / std::sqrt(static_cast<double>(n)));
  if (k < n) {
    RVector d = RVector::Zero(n);
    d.head(k).setOnes();
    d(k) = -static_cast<double>(k);
    d /= std::sqrt(static_cast<double>(k) * (k + 1));
    return HermitianMatrix::diagonal(d);
  }
  const int pair = (k - n) / 2;
  int j = 0;
  int rest = pair;
  while (rest >= n - 1 - j) {
    rest -= n - 1 - j;
    ++j;
  }
  const int l = j + 1 + rest;
  const double r = 1.0 / std::sqrt(2.0);
  CMatrix m = CMatrix::Zero(n, n);
  if ((k - n) % 2 == 0) {
    m(j, l) = r;
    m(l, j) = r;
  } else {
    m(j, l) = -kI * r;
    m(l, j) = kI * r;
  }
  return HermitianMatrix::symmetrize(m);
}

std::vector<HermitianMatrix> HermitianBasis::elements() const {
  std::vector<HermitianMatrix> out;
  out.reserve(static_cast<std::size_t>(size()));
  for (int k = 0; k < size(); ++k) out.push_back((*this)[k]);
  return out;
}

RVector HermitianBasis::coordinates(const HermitianMatrix& a) const {
  if (a.dim() != dim_) {
    throw Error(ErrorCode::DimensionMismatch, "basis and matrix dimensions differ");
  }
  const int n = dim_;
  const CMatrix& m = a.matrix();
  RVector c(size());
  c(0) = a.trace() / std::sqrt(static_cast<double>(n));
  double partial = 0.0;
  for (int k = 1; k < n; ++k) {
    partial += m(k - 1, k - 1).real();
    c(k) = (partial - k * m(k, k).real()) / std::sqrt(static_cast<double>(k) * (k + 1));
  }
  const double s = std::sqrt(2.0);
  int idx = n;
  for (int j = 0; j < n; ++j) {
    for (int l = j + 1; l < n; ++l) {
      c(idx++) = s * m(j, l).real();
      c(idx++) = -s * m(j, l).imag();
    }
  }
  return c;
}

HermitianMatrix HermitianBasis::assemble(const RVector& coords) const {
  if (coords.size() != size()) {
    throw Error(ErrorCode::DimensionMismatch, "coordinate vector has the wrong length");
  }
  const int n = dim_;
  CMatrix m = CMatrix::Zero(n, n);
  const double c0 = coords(0) / std::sqrt(static_cast<double>(n));
  for (int i = 0; i < n; ++i) m(i, i) = c0;
  for (int k = 1; k < n; ++k) {
    const double w = coords(k) / std::sqrt(static_cast<double>(k) * (k + 1));
    for (int i = 0; i < k; ++i) m(i, i) += w;
    m(k, k) -= k * w;
  }
  const double r = 1.0 / std::sqrt(2.0);
  int idx = n;
  for (int j = 0; j < n; ++j) {
    for (int l = j + 1; l < n; ++l) {
      const Complex z(coords(idx) * r, -coords(idx + 1) * r);
      idx += 2;
      m(j, l) = z;
      m(l, j) = std::conj(z);
    }
  }
  return HermitianMatrix::symmetrize(m);
}

RMatrix HermitianBasis::gram() const {
  RMatrix g(size(), size());
  for (int j = 0; j < size(); ++j) g.col(j) = coordinates((*this)[j]);
  return g;
}

HermitianBasis build_basis(int n) { return HermitianBasis::gell_mann(n); }

LinearMapOnHermitians LinearMapOnHermitians::identity(int n) {
  require_dim(n);
  return {n, RMatrix::Identity(n * n, n * n)};
}

LinearMapOnHermitians LinearMapOnHermitians::zero(int n) {
  require_dim(n);
  return {n, RMatrix::Zero(n * n, n * n)};
}

LinearMapOnHermitians LinearMapOnHermitians::from_function(
    int n, const std::function<HermitianMatrix(const HermitianMatrix&)>& f) {
  const HermitianBasis basis = HermitianBasis::gell_mann(n);
  LinearMapOnHermitians out{n, RMatrix(n * n, n * n)};
  for (int k = 0; k < basis.size(); ++k) out.matrix.col(k) = basis.coordinates(f(basis[k]));
  return out;
}

PreserverForm PreserverForm::identity(int n) {
  require_dim(n);
  PreserverForm form;
  form.dim = n;
  form.u = CMatrix::Identity(n, n);
  form.f = HermitianMatrix::zero(n);
  form.x = HermitianMatrix::zero(n);
  return form;
}

HermitianMatrix unitary_action(const PreserverForm& form, const HermitianMatrix& a) {
  const CMatrix t = form.antiunitary ? CMatrix(a.matrix().conjugate()) : a.matrix();
  return HermitianMatrix::symmetrize(static_cast<double>(form.sign) * form.u * t *
                                     form.u.adjoint());
}

HermitianMatrix apply_form(const PreserverForm& form, const HermitianMatrix& a) {
  const double fa = (form.f.matrix() * a.matrix()).trace().real();
  return unitary_action(form, a) + HermitianMatrix::scalar(a.dim(), fa) + form.x;
}

AffineMap to_map(const PreserverForm& form) {
  require_dim(form.dim);
  if (form.u.rows() != form.dim || form.u.cols() != form.dim || form.f.dim() != form.dim ||
      form.x.dim() != form.dim) {
    throw Error(ErrorCode::DimensionMismatch, "form components have inconsistent dimensions");
  }
  if (form.sign != 1 && form.sign != -1) {
    throw Error(ErrorCode::InvalidArgument, "sign must be +1 or -1");
  }
  if (max_abs_diff(form.u.adjoint() * form.u, CMatrix::Identity(form.dim, form.dim)) > 1e-10) {
    throw Error(ErrorCode::InvalidArgument, "U is not unitary within 1e-10");
  }
  PreserverForm linear_part = form;
  linear_part.x = HermitianMatrix::zero(form.dim);
  AffineMap out;
  out.linear = LinearMapOnHermitians::from_function(
      form.dim, [&](const HermitianMatrix& a) { return apply_form(linear_part, a); });
  out.offset = form.x;
  return out;
}

HermitianMatrix apply_map(const LinearMapOnHermitians& map, const HermitianMatrix& a) {
  require_well_formed(map);
  const HermitianBasis basis = HermitianBasis::gell_mann(map.dim);
  return basis.assemble(map.matrix * basis.coordinates(a));
}

HermitianMatrix apply_map(const AffineMap& map, const HermitianMatrix& a) {
  return apply_map(map.linear, a) + map.offset;
}

bool is_bijective(const LinearMapOnHermitians& map) {
  require_well_formed(map);
  const RVector sv = Eigen::JacobiSVD<RMatrix>(map.matrix).singularValues();
  return sv.size() > 0 && sv(sv.size() - 1) > 1e-8 * sv(0);
}

std::string_view to_string(PreservedQuantity q) noexcept {
  switch (q) {
    case PreservedQuantity::OperatorNorm: return "operator_norm";
    case PreservedQuantity::MaxDeviation: return "max_deviation";
    case PreservedQuantity::DmIsometry: return "d_m_isometry";
    case PreservedQuantity::DvIsometry: return "d_v_isometry";
  }
  return "operator_norm";
}

std::optional<PreservedQuantity> parse_quantity(std::string_view name) noexcept {
  if (name == "operator_norm" || name == "norm") return PreservedQuantity::OperatorNorm;
  if (name == "max_deviation" || name == "deviation") return PreservedQuantity::MaxDeviation;
  if (name == "d_m_isometry") return PreservedQuantity::DmIsometry;
  if (name == "d_v_isometry") return PreservedQuantity::DvIsometry;
  return std::nullopt;
}

CheckReport check_preserver(const LinearMapOnHermitians& map, PreservedQuantity property,
                            int samples, std::uint64_t seed, double tol) {
  require_well_formed(map);
  const HermitianBasis basis = HermitianBasis::gell_mann(map.dim);
  const MapOracle oracle = [&](const HermitianMatrix& a) {
    return basis.assemble(map.matrix * basis.coordinates(a));
  };
  return run_check(oracle, map.dim, property, samples, seed, tol);
}

CheckReport check_oracle(const MapOracle& map, int n, PreservedQuantity property, int samples,
                         std::uint64_t seed, double tol) {
  require_dim(n);
  return run_check(map, n, property, samples, seed, tol);
}

std::vector<HermitianMatrix> wigner_probes(int n) {
  require_dim(n);
  std::vector<HermitianMatrix> probes;
  for (int j = 0; j < n; ++j) probes.push_back(HermitianMatrix::outer(basis_vector(n, j)));
  for (int j = 1; j < n; ++j) {
    probes.push_back(outer_unit(basis_vector(n, 0) + basis_vector(n, j)));
  }
  for (int j = 1; j < n; ++j) {
    probes.push_back(outer_unit(basis_vector(n, 0) + kI * basis_vector(n, j)));
  }
  return probes;
}

WignerResult wigner_reconstruct(const MapOracle& psi, int n, double overlap_tol,
                                double defect_tol) {
  const std::vector<HermitianMatrix> probes = wigner_probes(n);
  std::vector<HermitianMatrix> images;
  images.reserve(probes.size());
  for (const HermitianMatrix& p : probes) {
    HermitianMatrix img = psi(p);
    if (img.dim() != n) {
      fail(ErrorCode::DimensionMismatch, "probe image has the wrong dimension", "wigner");
    }
    const ProjectionInfo info = classify_projection(img, overlap_tol);
    if (!info.is_projection || info.rank != 1) {
      fail(ErrorCode::OverlapViolation, "probe image is not a rank-one projection", "wigner");
    }
    images.push_back(std::move(img));
  }
  for (std::size_t a = 0; a < probes.size(); ++a) {
    for (std::size_t b = a + 1; b < probes.size(); ++b) {
      const double before = (probes[a].matrix() * probes[b].matrix()).trace().real();
      const double after = (images[a].matrix() * images[b].matrix()).trace().real();
      if (std::abs(before - after) > overlap_tol) {
        fail(ErrorCode::OverlapViolation,
             "transition probability changed by " + std::to_string(std::abs(before - after)),
             "wigner");
      }
    }
  }

  CMatrix u(n, n);
  for (int j = 0; j < n; ++j) {
    const SpectralDecomposition sd = spectral_decompose(images[j]);
    u.col(j) = sd.eigenvectors.col(n - 1);
  }
  std::optional<bool> anti;
  for (int j = 1; j < n; ++j) {
    const HermitianMatrix& plus = images[n + j - 1];
    const Complex z = u.col(j).dot(plus.matrix() * u.col(0));
    if (std::abs(z) < 1e-10) {
      fail(ErrorCode::PhaseDegeneracy, "vanishing phase overlap for column " + std::to_string(j),
           "wigner");
    }
    u.col(j) *= z / std::abs(z);
    const HermitianMatrix& imag = images[2 * n + j - 2];
    const double w = u.col(j).dot(imag.matrix() * u.col(0)).imag();
    if (std::abs(w) < 1e-10) {
      fail(ErrorCode::PhaseDegeneracy, "cannot decide linearity from column " + std::to_string(j),
           "wigner");
    }
    const bool this_anti = w < 0.0;
    if (anti && *anti != this_anti) {
      fail(ErrorCode::OverlapViolation, "columns disagree on unitary versus antiunitary",
           "wigner");
    }
    anti = this_anti;
  }

  WignerResult out;
  out.antiunitary = anti.value_or(false);
  out.u = nearest_unitary(u);
  for (int i = 0; i < n; ++i) {
    const Complex c = out.u(i, 0);
    if (std::abs(c) > 1e-10) {
      out.u *= std::conj(c) / std::abs(c);
      break;
    }
  }
  PreserverForm form = PreserverForm::identity(n);
  form.u = out.u;
  form.antiunitary = out.antiunitary;
  for (std::size_t k = 0; k < probes.size(); ++k) {
    out.max_probe_defect = std::max(
        out.max_probe_defect, max_abs_diff(unitary_action(form, probes[k]).matrix(),
                                           images[k].matrix()));
  }
  if (out.max_probe_defect > defect_tol) {
    fail(ErrorCode::OverlapViolation,
         "reconstructed action misses a probe by " + std::to_string(out.max_probe_defect),
         "wigner");
  }
  return out;
}

PreserverForm decompose_norm_preserver(const LinearMapOnHermitians& map,
                                       const DecomposeOptions& options) {
  require_well_formed(map);
  const int n = map.dim;
  if (!is_bijective(map)) fail(ErrorCode::NotAPreserver, "map is singular", "bijectivity");
  const CheckReport pre = check_preserver(map, PreservedQuantity::OperatorNorm,
                                          options.check_samples, options.seed, options.check_tol);
  if (!pre.verdict) {
    fail(ErrorCode::NotAPreserver,
         "norm defect " + std::to_string(pre.max_defect) + " exceeds tolerance", "precondition");
  }
  const HermitianMatrix image_id = apply_map(map, HermitianMatrix::identity(n));
  const CMatrix id = CMatrix::Identity(n, n);
  int sign = 0;
  if (max_abs_diff(image_id.matrix(), id) <= options.check_tol) {
    sign = 1;
  } else if (max_abs_diff(image_id.matrix(), -id) <= options.check_tol) {
    sign = -1;
  } else {
    fail(ErrorCode::NotAPreserver, "L(I) is neither I nor -I", "sign");
  }
  const WignerResult w = wigner_reconstruct(
      [&](const HermitianMatrix& p) { return static_cast<double>(sign) * apply_map(map, p); }, n);
  PreserverForm form = PreserverForm::identity(n);
  form.sign = sign;
  form.u = w.u;
  form.antiunitary = w.antiunitary;
  const double residual = residual_against(map, form, options.verify_samples, options.seed);
  if (residual > options.residual_tol) {
    fail(ErrorCode::NotAPreserver, "residual " + std::to_string(residual), "residual");
  }
  return form;
}

PreserverForm decompose_deviation_preserver(const LinearMapOnHermitians& map,
                                            const DecomposeOptions& options) {
  require_well_formed(map);
  const int n = map.dim;
  if (n < 2) {
    throw Error(ErrorCode::InvalidArgument, "deviation preservers need n >= 2");
  }
  if (!is_bijective(map)) fail(ErrorCode::NotAPreserver, "map is singular", "bijectivity");
  const CheckReport pre = check_preserver(map, PreservedQuantity::MaxDeviation,
                                          options.check_samples, options.seed, options.check_tol);
  if (!pre.verdict) {
    fail(ErrorCode::NotAPreserver,
         "deviation defect " + std::to_string(pre.max_defect) + " exceeds tolerance",
         "precondition");
  }
  const HermitianMatrix image_id = apply_map(map, HermitianMatrix::identity(n));
  if (max_deviation(image_id) > options.check_tol * (1.0 + operator_norm(image_id))) {
    fail(ErrorCode::NotAPreserver, "L(I) is not scalar", "scalars");
  }

  // Each probe P maps into the class of a nontrivial projection. Rank one
  // images mean sign +1, rank n - 1 images mean sign -1 (indistinguishable
  // when n == 2).
  auto class_projection = [&](const HermitianMatrix& p) {
    const auto pic = projection_in_class(apply_map(map, p), options.check_tol);
    if (!pic || pic->trivial) {
      fail(ErrorCode::NotAPreserver, "probe image is not in a projection class",
           "projection-class");
    }
    return pic->projection;
  };
  int sign = 1;
  if (n >= 3) {
    std::optional<int> seen;
    for (const HermitianMatrix& p : wigner_probes(n)) {
      const int rank = static_cast<int>(std::lround(class_projection(p).trace()));
      int s = 0;
      if (rank == 1) {
        s = 1;
      } else if (rank == n - 1) {
        s = -1;
      } else {
        fail(ErrorCode::NotAPreserver, "probe image has rank " + std::to_string(rank), "sign");
      }
      if (seen && *seen != s) {
        fail(ErrorCode::MixedSignature, "probes disagree on the sign", "sign");
      }
      seen = s;
    }
    sign = *seen;
  }
  const HermitianMatrix id = HermitianMatrix::identity(n);
  const WignerResult w = wigner_reconstruct(
      [&](const HermitianMatrix& p) {
        const HermitianMatrix q = class_projection(p);
        return sign == 1 ? q : id - q;
      },
      n);

  PreserverForm form = PreserverForm::identity(n);
  form.sign = sign;
  form.u = w.u;
  form.antiunitary = w.antiunitary;
  const HermitianBasis basis = HermitianBasis::gell_mann(n);
  RVector f(basis.size());
  for (int k = 0; k < basis.size(); ++k) {
    f(k) = (apply_map(map, basis[k]) - unitary_action(form, basis[k])).trace() / n;
  }
  form.f = basis.assemble(f);
  const double residual = residual_against(map, form, options.verify_samples, options.seed);
  if (residual > options.residual_tol) {
    fail(ErrorCode::NotAPreserver, "residual " + std::to_string(residual), "residual");
  }
  return form;
}

double rank_one_action_distance(const PreserverForm& a, const PreserverForm& b, int samples,
                                std::uint64_t seed) {
  if (a.dim != b.dim) throw Error(ErrorCode::DimensionMismatch, "forms differ in dimension");
  PreserverForm ua = PreserverForm::identity(a.dim);
  ua.u = a.u;
  ua.antiunitary = a.antiunitary;
  PreserverForm ub = ua;
  ub.u = b.u;
  ub.antiunitary = b.antiunitary;
  double worst = 0.0;
  auto probe = [&](const HermitianMatrix& p) {
    worst = std::max(worst, operator_norm(unitary_action(ua, p) - unitary_action(ub, p)));
  };
  for (const HermitianMatrix& p : wigner_probes(a.dim)) probe(p);
  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    probe(HermitianMatrix::outer(gen_state(a.dim, rng).amplitudes()));
  }
  return worst;
}

namespace {

// Additivity, real homogeneity and agreement with the assembled matrix for a
// map expected to be linear.
double linearity_defect(const MapOracle& f, const LinearMapOnHermitians& l, int samples,
                        std::uint64_t seed) {
  Rng rng(seed ^ 0x6c696e6561ULL);
  const int n = l.dim;
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const HermitianMatrix a = gen_hermitian(n, rng);
    const HermitianMatrix b = gen_hermitian(n, rng);
    const double t = rng.uniform(-2.0, 2.0);
    const HermitianMatrix fa = f(a);
    worst = std::max(worst, operator_norm(f(a + b) - fa - f(b)));
    worst = std::max(worst, operator_norm(f(t * a) - t * fa));
    worst = std::max(worst, operator_norm(apply_map(l, a) - fa));
  }
  return worst;
}

}  // namespace

AffinizedIsometry affinize_dm_isometry(const MapOracle& phi, int n, int samples,
                                       std::uint64_t seed, double tol) {
  const CheckReport iso = check_oracle(phi, n, PreservedQuantity::DmIsometry, samples, seed, tol);
  if (!iso.verdict) {
    fail(ErrorCode::NotAnIsometry, "d_m defect " + std::to_string(iso.max_defect), "isometry");
  }
  AffinizedIsometry out;
  out.isometry_defect = iso.max_defect;
  out.translation = phi(HermitianMatrix::zero(n));
  const MapOracle phi0 = [&](const HermitianMatrix& a) { return phi(a) - out.translation; };
  out.linear = LinearMapOnHermitians::from_function(n, phi0);
  out.additivity_defect = linearity_defect(phi0, out.linear, samples, seed);
  if (out.additivity_defect > tol) {
    fail(ErrorCode::NotLinearizable,
         "phi - phi(0) is not linear (defect " + std::to_string(out.additivity_defect) + ")",
         "linearity");
  }
  DecomposeOptions options;
  options.seed = seed;
  out.form = decompose_norm_preserver(out.linear, options);
  out.form.x = out.translation;
  return out;
}

LinearizedIsometry linearize_dv_isometry(const MapOracle& phi, int n, int samples,
                                         std::uint64_t seed, double tol,
                                         const ScalarFunctional& l) {
  const ScalarFunctional ell =
      l ? l : ScalarFunctional([](const HermitianMatrix& a) { return a.trace() / a.dim(); });
  if (std::abs(ell(HermitianMatrix::identity(n)) - 1.0) > 1e-12) {
    throw Error(ErrorCode::InvalidArgument, "functional must satisfy l(I) = 1");
  }
  const CheckReport iso = check_oracle(phi, n, PreservedQuantity::DvIsometry, samples, seed, tol);
  if (!iso.verdict) {
    fail(ErrorCode::NotAnIsometry, "d_v defect " + std::to_string(iso.max_defect), "isometry");
  }
  LinearizedIsometry out;
  out.isometry_defect = iso.max_defect;
  const HermitianMatrix x = phi(HermitianMatrix::zero(n));
  const MapOracle phi1 = [&](const HermitianMatrix& a) {
    const HermitianMatrix p0 = phi(a) - x;
    return p0 + HermitianMatrix::scalar(n, ell(a) - ell(p0));
  };
  out.linear = LinearMapOnHermitians::from_function(n, phi1);
  out.additivity_defect = linearity_defect(phi1, out.linear, samples, seed);
  if (out.additivity_defect > tol) {
    fail(ErrorCode::NotLinearizable,
         "phi_1 is not linear (defect " + std::to_string(out.additivity_defect) + ")",
         "linearity");
  }
  if (!is_bijective(out.linear)) {
    fail(ErrorCode::NotLinearizable, "phi_1 is singular", "bijectivity");
  }
  DecomposeOptions options;
  options.seed = seed;
  const PreserverForm inner = decompose_deviation_preserver(out.linear, options);
  out.linear_functional = inner.f;
  out.form = inner;
  out.form.f = HermitianMatrix::zero(n);
  out.form.x = x;
  Rng rng(seed ^ 0x6d6f64656cULL);
  for (int s = 0; s < samples; ++s) {
    const HermitianMatrix a = gen_hermitian(n, rng);
    out.model_defect =
        std::max(out.model_defect, d_v(phi(a) - x, unitary_action(out.form, a)));
  }
  return out;
}

double scalar_discrepancy(const MapOracle& phi, const PreserverForm& form,
                          const HermitianMatrix& a) {
  return (phi(a) - form.x - unitary_action(form, a)).trace() / a.dim();
}

}  // namespace obsdev
