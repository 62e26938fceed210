#pragma once

#include "biherm/forms.hpp"

namespace biherm {

// Matrix conventions used throughout: for a real form b, b(x, y) = xᵀ·gram·y,
// so g(Ax, y) = xᵀ·Aᵀ·gram_g·y. The symplectic form of an admissible triple
// is ω(x, y) = g(Jx, y), i.e. gram_ω = Jᵀ·gram_g (= −gram_g·J once J is
// g-anti-Hermitian), and the Hermitian structure is h = g + i·ω.

struct TripleResiduals {
  double j_square = 0.0;        // ‖J² + 1‖∞
  double anti_hermitian = 0.0;  // ‖Jᵀ·g + g·J‖∞ / ‖g‖∞
  double omega = 0.0;           // ‖ω − Jᵀ·g‖∞ / ‖g‖∞
};

/// Metric g, complex structure J and symplectic form ω with ω(x, y) = g(Jx, y)
/// and J anti-Hermitian with respect to g. Invariants are verified on
/// construction; violations throw NotAdmissible.
class AdmissibleTriple {
 public:
  AdmissibleTriple(RealForm g, ComplexStructureJ j, RealForm omega, const Tolerances& tol = {});

  const RealForm& g() const { return g_; }
  const ComplexStructureJ& j() const { return j_; }
  const RealForm& omega() const { return omega_; }
  Index real_dim() const { return g_.dim(); }

  TripleResiduals residuals() const;

 private:
  RealForm g_;
  ComplexStructureJ j_;
  RealForm omega_;
};

/// g_s = ½(g(J·, J·) + g): the averaged metric for which J is anti-Hermitian.
RealForm symmetrize_metric(const RealForm& g, const ComplexStructureJ& j, const Tolerances& tol = {});

/// ω = g∘J. Throws NotAdmissible unless J is already g-anti-Hermitian.
RealForm omega_from_g_J(const RealForm& g, const ComplexStructureJ& j, const Tolerances& tol = {});

/// Intermediate operators of the (g, ω) → (g_ω, J, ω) construction.
struct SymplecticPolar {
  RealMatrix b;  // ω(x, y) = g(Bx, y)
  RealMatrix r;  // positive square root of −B², g-self-adjoint
  AdmissibleTriple triple;
};

/// Builds the admissible triple (g_ω, J, ω) from a metric and a symplectic
/// form through the polar decomposition B = J·R with R = √(−B²).
SymplecticPolar symplectic_polar(const RealForm& g, const RealForm& omega, const Tolerances& tol = {});

AdmissibleTriple triple_from_g_omega(const RealForm& g, const RealForm& omega,
                                     const Tolerances& tol = {});

/// Identification of (R^{2n}, J) with C^n through a J-adapted real basis
/// (u_1 … u_n, J·u_1 … J·u_n): z ↦ Σ (Re z_k·u_k + Im z_k·J·u_k).
class ComplexificationMap {
 public:
  /// basis holds the u_k in its first n columns and J·u_k in the last n.
  ComplexificationMap(RealMatrix basis, const ComplexStructureJ& j, const Tolerances& tol = {});

  Index real_dim() const { return basis_.rows(); }
  Index complex_dim() const { return basis_.rows() / 2; }
  const RealMatrix& basis() const { return basis_; }
  const RealMatrix& j() const { return j_; }

  ComplexVector to_complex(const RealVector& x) const;
  RealVector to_real(const ComplexVector& z) const;

 private:
  RealMatrix basis_;
  RealMatrix j_;
  Eigen::PartialPivLU<RealMatrix> lu_;
};

/// Greedy J-adapted basis, orthonormal with respect to `reference`: each
/// standard basis vector not yet in the span is projected, normalized to u_k
/// and adjoined together with J·u_k. Requires J to be reference-anti-Hermitian.
ComplexificationMap build_complexification(const ComplexStructureJ& j, const RealForm& reference,
                                           const Tolerances& tol = {});

/// Same construction with the triple's own metric as reference.
ComplexificationMap build_complexification(const AdmissibleTriple& triple, const Tolerances& tol = {});

/// Gram matrix of h(x, y) = g(x, y) + i·g(Jx, y) in the complex coordinates
/// of `cmap`, whose complex structure must match the triple's.
HermitianForm hermitian_from_triple(const AdmissibleTriple& triple, const ComplexificationMap& cmap,
                                    const Tolerances& tol = {});

}  // namespace biherm
