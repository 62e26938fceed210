#include "biherm/admissible.hpp"

#include <cmath>
#include <vector>

namespace biherm {

namespace {

double rel(double residual, double scale) { return scale > 0.0 ? residual / scale : residual; }

double anti_hermitian_residual(const RealMatrix& g, const RealMatrix& j) {
  return rel(norm_inf(j.transpose() * g + g * j), norm_inf(g));
}

void require_positive_metric(const RealForm& g, const Tolerances& tol) {
  if (g.symmetry() != Symmetry::Symmetric) {
    throw Error(ErrorCode::NotSymmetric, "metric must be tagged symmetric");
  }
  const auto report = validate_positive(g, tol);
  if (!report.passed()) {
    throw Error(ErrorCode::NotPositive, "metric is not positive-definite (min eigenvalue " +
                                            std::to_string(report.min_eigenvalue) + ")");
  }
}

RealMatrix symmetric_part(const RealMatrix& a) { return (a + a.transpose()) / 2.0; }
RealMatrix antisymmetric_part(const RealMatrix& a) { return (a - a.transpose()) / 2.0; }

}  // namespace

AdmissibleTriple::AdmissibleTriple(RealForm g, ComplexStructureJ j, RealForm omega, const Tolerances& tol)
    : g_(std::move(g)), j_(std::move(j)), omega_(std::move(omega)) {
  if (g_.dim() != j_.dim() || g_.dim() != omega_.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "triple components have different dimensions");
  }
  require_positive_metric(g_, tol);
  if (omega_.symmetry() != Symmetry::Antisymmetric) {
    throw Error(ErrorCode::NotAntisymmetric, "symplectic form must be tagged antisymmetric");
  }
  const auto r = residuals();
  if (r.j_square > tol.tol_J) {
    throw Error(ErrorCode::NotAdmissible, "J² ≠ −1 (residual " + std::to_string(r.j_square) + ")");
  }
  if (r.anti_hermitian > tol.tol_resid) {
    throw Error(ErrorCode::NotAdmissible,
                "J is not g-anti-Hermitian (residual " + std::to_string(r.anti_hermitian) + ")");
  }
  if (r.omega > tol.tol_resid) {
    throw Error(ErrorCode::NotAdmissible,
                "ω ≠ g∘J (residual " + std::to_string(r.omega) + ")");
  }
}

TripleResiduals AdmissibleTriple::residuals() const {
  const RealMatrix& g = g_.gram();
  const RealMatrix& j = j_.mat();
  TripleResiduals r;
  r.j_square = norm_inf(j * j + RealMatrix::Identity(j.rows(), j.cols()));
  r.anti_hermitian = anti_hermitian_residual(g, j);
  r.omega = rel(norm_inf(omega_.gram() - j.transpose() * g), norm_inf(g));
  return r;
}

RealForm symmetrize_metric(const RealForm& g, const ComplexStructureJ& j, const Tolerances& tol) {
  if (g.dim() != j.dim()) throw Error(ErrorCode::DimensionMismatch, "metric and J dimensions differ");
  require_positive_metric(g, tol);
  const RealMatrix& jm = j.mat();
  const RealMatrix gs = 0.5 * (jm.transpose() * g.gram() * jm + g.gram());
  return RealForm(symmetric_part(gs), Symmetry::Symmetric, tol);
}

RealForm omega_from_g_J(const RealForm& g, const ComplexStructureJ& j, const Tolerances& tol) {
  if (g.dim() != j.dim()) throw Error(ErrorCode::DimensionMismatch, "metric and J dimensions differ");
  require_positive_metric(g, tol);
  const double resid = anti_hermitian_residual(g.gram(), j.mat());
  if (resid > tol.tol_resid) {
    throw Error(ErrorCode::NotAdmissible, "J is not g-anti-Hermitian (residual " +
                                              std::to_string(resid) + "); symmetrize the metric first");
  }
  return RealForm(antisymmetric_part(j.mat().transpose() * g.gram()), Symmetry::Antisymmetric, tol);
}

SymplecticPolar symplectic_polar(const RealForm& g, const RealForm& omega, const Tolerances& tol) {
  if (g.dim() != omega.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "metric and symplectic form dimensions differ");
  }
  require_positive_metric(g, tol);
  if (omega.symmetry() != Symmetry::Antisymmetric) {
    throw Error(ErrorCode::NotAntisymmetric, "symplectic form must be tagged antisymmetric");
  }
  const Index m = g.dim();
  if (m % 2 != 0) {
    throw Error(ErrorCode::DegenerateSymplectic, "antisymmetric form on an odd-dimensional space is singular");
  }
  const RealMatrix& gram = g.gram();
  // Bᵀ·gram_g = gram_ω  ⇒  B = gram_g⁻ᵀ·gram_ωᵀ
  const RealMatrix b = gram.transpose().llt().solve(omega.gram().transpose());

  Eigen::JacobiSVD<RealMatrix> svd(b);
  const auto& sv = svd.singularValues();
  if (sv(0) == 0.0 || sv(m - 1) <= tol.tol_eig * sv(0)) {
    throw Error(ErrorCode::DegenerateSymplectic, "ω is degenerate (B is singular)");
  }
  const double skew = rel(norm_inf(b.transpose() * gram + gram * b), norm_inf(b.transpose() * gram));
  if (skew > tol.tol_resid) {
    throw Error(ErrorCode::NotSkew, "B is not g-skew (residual " + std::to_string(skew) + ")");
  }

  const RealMatrix minus_b2 = -(b * b);
  RealMatrix r = sqrt_positive(minus_b2, gram, tol);
  // J = B·R⁻¹ via Rᵀ·Jᵀ = Bᵀ
  RealMatrix j = r.transpose().partialPivLu().solve(b.transpose()).transpose();
  RealForm g_omega(symmetric_part(r.transpose() * gram), Symmetry::Symmetric, tol);
  RealForm omega_copy = omega;
  AdmissibleTriple triple(std::move(g_omega), ComplexStructureJ(std::move(j), tol), std::move(omega_copy),
                          tol);
  return SymplecticPolar{b, std::move(r), std::move(triple)};
}

AdmissibleTriple triple_from_g_omega(const RealForm& g, const RealForm& omega, const Tolerances& tol) {
  return symplectic_polar(g, omega, tol).triple;
}

ComplexificationMap::ComplexificationMap(RealMatrix basis, const ComplexStructureJ& j,
                                         const Tolerances& tol)
    : basis_(std::move(basis)), j_(j.mat()) {
  const Index m = j_.rows();
  if (basis_.rows() != m || basis_.cols() != m) {
    throw Error(ErrorCode::DimensionMismatch, "complexification basis must be square of the J dimension");
  }
  if (!basis_.allFinite()) throw Error(ErrorCode::NonFinite, "complexification basis has non-finite entries");
  const Index n = m / 2;
  const auto first = basis_.leftCols(n);
  const double adapted = norm_inf(basis_.rightCols(n) - j_ * first);
  if (adapted > tol.tol_resid * std::max(1.0, norm_inf(j_)) * std::max(1.0, norm_inf(first))) {
    throw Error(ErrorCode::NotAdmissible, "basis is not J-adapted (second block ≠ J·first block)");
  }
  lu_.compute(basis_);
  Eigen::JacobiSVD<RealMatrix> svd(basis_);
  const auto& sv = svd.singularValues();
  if (sv(m - 1) <= tol.tol_eig * sv(0)) {
    throw Error(ErrorCode::NotAdmissible, "complexification basis is singular");
  }
}

ComplexVector ComplexificationMap::to_complex(const RealVector& x) const {
  if (x.size() != real_dim()) throw Error(ErrorCode::DimensionMismatch, "real vector has the wrong length");
  const RealVector c = lu_.solve(x);
  const Index n = complex_dim();
  ComplexVector z(n);
  for (Index k = 0; k < n; ++k) z(k) = Complex(c(k), c(n + k));
  return z;
}

RealVector ComplexificationMap::to_real(const ComplexVector& z) const {
  const Index n = complex_dim();
  if (z.size() != n) throw Error(ErrorCode::DimensionMismatch, "complex vector has the wrong length");
  return basis_.leftCols(n) * z.real() + basis_.rightCols(n) * z.imag();
}

ComplexificationMap build_complexification(const ComplexStructureJ& j, const RealForm& reference,
                                           const Tolerances& tol) {
  if (j.dim() != reference.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "reference metric and J dimensions differ");
  }
  require_positive_metric(reference, tol);
  const RealMatrix& gram = reference.gram();
  const RealMatrix& jm = j.mat();
  const double anti = anti_hermitian_residual(gram, jm);
  if (anti > tol.tol_resid) {
    throw Error(ErrorCode::NotAdmissible, "J is not anti-Hermitian for the reference metric (residual " +
                                              std::to_string(anti) + ")");
  }
  const Index m = j.dim();
  const Index n = m / 2;
  std::vector<RealVector> spanned;
  RealMatrix first(m, n);
  RealMatrix second(m, n);
  Index found = 0;
  for (Index i = 0; i < m && found < n; ++i) {
    RealVector v = RealVector::Unit(m, i);
    const double start = std::sqrt(gram(i, i));
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& s : spanned) v -= s * s.dot(gram * v);
    }
    const double norm = std::sqrt(std::max(0.0, v.dot(gram * v)));
    if (norm <= tol.tol_eig * start) continue;
    RealVector u = v / norm;
    RealVector ju = jm * u;
    first.col(found) = u;
    second.col(found) = ju;
    spanned.push_back(std::move(u));
    spanned.push_back(std::move(ju));
    ++found;
  }
  if (found != n) throw Error(ErrorCode::NotAdmissible, "could not complete a J-adapted basis");
  RealMatrix basis(m, m);
  basis << first, second;
  return ComplexificationMap(std::move(basis), j, tol);
}

ComplexificationMap build_complexification(const AdmissibleTriple& triple, const Tolerances& tol) {
  return build_complexification(triple.j(), triple.g(), tol);
}

HermitianForm hermitian_from_triple(const AdmissibleTriple& triple, const ComplexificationMap& cmap,
                                    const Tolerances& tol) {
  if (cmap.real_dim() != triple.real_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "complexification and triple dimensions differ");
  }
  const RealMatrix& jm = triple.j().mat();
  if (norm_inf(cmap.j() - jm) > tol.tol_J * std::max(1.0, norm_inf(jm))) {
    throw Error(ErrorCode::NotAdmissible, "complexification uses a different complex structure");
  }
  const Index n = cmap.complex_dim();
  const RealMatrix u = cmap.basis().leftCols(n);
  const RealMatrix re = u.transpose() * triple.g().gram() * u;
  const RealMatrix im = u.transpose() * triple.omega().gram() * u;
  ComplexMatrix h(n, n);
  h.real() = symmetric_part(re);
  h.imag() = antisymmetric_part(im);
  try {
    return HermitianForm(std::move(h), tol);
  } catch (const Error& e) {
    throw Error(ErrorCode::NotAdmissible, std::string("Hermitian structure invalid: ") + e.what());
  }
}

}  // namespace biherm
