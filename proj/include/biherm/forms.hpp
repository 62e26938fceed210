#pragma once

#include <vector>

#include "biherm/types.hpp"

namespace biherm {

enum class Symmetry { Symmetric, Antisymmetric, General };

std::string_view to_string(Symmetry s);

/// Real bilinear form b(x, y) = xᵀ·gram·y on R^m. The symmetry tag is
/// checked on construction against tol_sym.
class RealForm {
 public:
  RealForm(RealMatrix gram, Symmetry symmetry, const Tolerances& tol = {});

  Index dim() const { return gram_.rows(); }
  const RealMatrix& gram() const { return gram_; }
  Symmetry symmetry() const { return symmetry_; }

  double operator()(const RealVector& x, const RealVector& y) const { return x.dot(gram_ * y); }

 private:
  RealMatrix gram_;
  Symmetry symmetry_;
};

/// Real linear operator with J² = −1 on an even-dimensional space.
class ComplexStructureJ {
 public:
  explicit ComplexStructureJ(RealMatrix mat, const Tolerances& tol = {});

  Index dim() const { return mat_.rows(); }
  const RealMatrix& mat() const { return mat_; }

  /// [[0, −1], [1, 0]] repeated along the diagonal; dim must be even.
  static ComplexStructureJ canonical(Index dim);

 private:
  RealMatrix mat_;
};

/// Positive-definite Hermitian form h(x, y) = x†·gram·y, antilinear in the
/// first argument and linear in the second.
class HermitianForm {
 public:
  explicit HermitianForm(ComplexMatrix gram, const Tolerances& tol = {});

  static HermitianForm identity(Index n) { return HermitianForm(ComplexMatrix::Identity(n, n)); }

  Index dim() const { return gram_.rows(); }
  const ComplexMatrix& gram() const { return gram_; }

  Complex operator()(const ComplexVector& x, const ComplexVector& y) const {
    return x.dot(gram_ * y);  // Eigen's dot conjugates its left operand
  }

 private:
  ComplexMatrix gram_;
};

struct ValidationReport {
  double min_eigenvalue = 0.0;
  double symmetry_residual = 0.0;  // ‖A − A†‖∞ / ‖A‖∞
  bool symmetric = false;
  bool positive = false;

  bool passed() const { return symmetric && positive; }
};

ValidationReport validate_positive(const RealMatrix& gram, const Tolerances& tol = {});
ValidationReport validate_positive(const ComplexMatrix& gram, const Tolerances& tol = {});
ValidationReport validate_positive(const RealForm& form, const Tolerances& tol = {});
ValidationReport validate_positive(const HermitianForm& form, const Tolerances& tol = {});

template <typename Matrix>
struct EigenPairs {
  RealVector values;  // ascending
  Matrix vectors;     // columns, orthonormal with respect to the metric
};

/// Solves K v = λ M v for Hermitian K and positive-definite M by Cholesky
/// congruence M = L L†: the standard problem L⁻¹ K L⁻† w = λ w gives
/// v = L⁻† w, so V† M V = 1 holds by construction.
EigenPairs<ComplexMatrix> hermitian_pencil_eig(const ComplexMatrix& k, const ComplexMatrix& m,
                                               const Tolerances& tol = {});
EigenPairs<RealMatrix> hermitian_pencil_eig(const RealMatrix& k, const RealMatrix& m,
                                            const Tolerances& tol = {});

/// Eigen-decomposition of an M-self-adjoint operator A (M·A Hermitian).
/// Throws NotSelfAdjoint when ‖MA − A†M‖ > tol_resid·‖MA‖ and SingularMetric
/// when M is not positive-definite.
EigenPairs<ComplexMatrix> generalized_eig(const ComplexMatrix& a, const ComplexMatrix& m,
                                          const Tolerances& tol = {});
EigenPairs<RealMatrix> generalized_eig(const RealMatrix& a, const RealMatrix& m,
                                       const Tolerances& tol = {});

/// Non-negative square root of a metric-self-adjoint operator with spectrum
/// ≥ 0, computed spectrally: R = V·diag(√λ)·V†·M. Eigenvalues in
/// [−tol_eig·ρ, 0) are clamped to zero; anything below throws NegativeSpectrum.
ComplexMatrix sqrt_positive(const ComplexMatrix& a, const ComplexMatrix& metric,
                            const Tolerances& tol = {});
RealMatrix sqrt_positive(const RealMatrix& a, const RealMatrix& metric, const Tolerances& tol = {});

/// Gram–Schmidt (with one reorthogonalization pass) in input order under the
/// form h. A vector whose h-norm after projection falls to
/// tol_eig·(largest input h-norm) or below is dropped.
std::vector<ComplexVector> orthonormalize(const std::vector<ComplexVector>& vectors,
                                          const HermitianForm& form, const Tolerances& tol = {});

/// Column version of orthonormalize against an arbitrary positive Gram matrix.
ComplexMatrix orthonormalize_columns(const ComplexMatrix& vectors, const ComplexMatrix& gram,
                                     const Tolerances& tol = {});

/// Dimension of span{x0, G x0, …, G^{n−1} x0}.
///
/// The power columns themselves are Vandermonde-conditioned and lose rank in
/// double precision long before n = 32, so the Krylov matrix is factored in
/// its Arnoldi form: each new column G·q_k is orthogonalized (twice) against
/// the accumulated orthonormal basis, and the sequence stops when the
/// remainder drops to tol_eig·‖G‖₂ or below. The count of accepted columns
/// is the numerical rank.
Index krylov_rank(const ComplexMatrix& g, const ComplexVector& x0, const Tolerances& tol = {});

/// Largest singular value.
double spectral_norm(const ComplexMatrix& a);

}  // namespace biherm
