#include "biherm/forms.hpp"

#include <algorithm>
#include <cmath>

namespace biherm {

void Tolerances::validate() const {
  if (!(tol_sym > 0.0) || !(tol_J > 0.0) || !(tol_eig > 0.0) || !(tol_resid > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "tolerances must be strictly positive");
  }
}

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NotAntisymmetric: return "NotAntisymmetric";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::InvalidComplexStructure: return "InvalidComplexStructure";
    case ErrorCode::NotSelfAdjoint: return "NotSelfAdjoint";
    case ErrorCode::SingularMetric: return "SingularMetric";
    case ErrorCode::NegativeSpectrum: return "NegativeSpectrum";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::NotAdmissible: return "NotAdmissible";
    case ErrorCode::DegenerateSymplectic: return "DegenerateSymplectic";
    case ErrorCode::NotSkew: return "NotSkew";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::Degenerate: return "Degenerate";
    case ErrorCode::ZeroCoefficient: return "ZeroCoefficient";
    case ErrorCode::NotInCommutant: return "NotInCommutant";
    case ErrorCode::NotGeneric: return "NotGeneric";
    case ErrorCode::InternalInconsistency: return "InternalInconsistency";
  }
  return "Unknown";
}

std::string_view to_string(Symmetry s) {
  switch (s) {
    case Symmetry::Symmetric: return "symmetric";
    case Symmetry::Antisymmetric: return "antisymmetric";
    case Symmetry::General: return "general";
  }
  return "general";
}

namespace {

template <typename Matrix>
void require_square_finite(const Matrix& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + " must be a non-empty square matrix");
  }
  if (!a.allFinite()) {
    throw Error(ErrorCode::NonFinite, std::string(what) + " has NaN or infinite entries");
  }
}

template <typename Matrix>
double relative(double residual, const Matrix& reference) {
  const double scale = norm_inf(reference);
  return scale > 0.0 ? residual / scale : residual;
}

template <typename Matrix>
ValidationReport validate_impl(const Matrix& gram, const Tolerances& tol) {
  require_square_finite(gram, "form");
  ValidationReport report;
  report.symmetry_residual = relative(norm_inf(gram - gram.adjoint()), gram);
  report.symmetric = report.symmetry_residual <= tol.tol_sym;
  const Matrix herm = (gram + gram.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
  report.min_eigenvalue = solver.eigenvalues()(0);
  report.positive = report.min_eigenvalue > 0.0;
  return report;
}

template <typename Matrix>
EigenPairs<Matrix> pencil_impl(const Matrix& k, const Matrix& m, const Tolerances& tol) {
  require_square_finite(k, "operator");
  require_square_finite(m, "metric");
  if (k.rows() != m.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "operator and metric dimensions differ");
  }
  if (relative(norm_inf(k - k.adjoint()), k) > tol.tol_sym) {
    throw Error(ErrorCode::NotSelfAdjoint, "pencil matrix is not Hermitian");
  }
  const Matrix m_h = (m + m.adjoint()) / 2.0;
  Eigen::LLT<Matrix> chol(m_h);
  if (chol.info() != Eigen::Success || relative(norm_inf(m - m.adjoint()), m) > tol.tol_sym) {
    throw Error(ErrorCode::SingularMetric, "metric is not Hermitian positive-definite");
  }
  const Matrix k_h = (k + k.adjoint()) / 2.0;
  const auto l = chol.matrixL();
  // C = L⁻¹ K L⁻†
  Matrix c = l.solve(k_h);
  c = l.solve(c.adjoint().eval()).adjoint();
  c = (c + c.adjoint()).eval() / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(c);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NotSelfAdjoint, "eigensolver failed to converge");
  }
  EigenPairs<Matrix> out;
  out.values = solver.eigenvalues();
  out.vectors = chol.matrixU().solve(solver.eigenvectors());
  return out;
}

template <typename Matrix>
EigenPairs<Matrix> generalized_impl(const Matrix& a, const Matrix& m, const Tolerances& tol) {
  require_square_finite(a, "operator");
  require_square_finite(m, "metric");
  if (a.rows() != m.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "operator and metric dimensions differ");
  }
  const auto metric_report = validate_impl(m, tol);
  if (!metric_report.passed()) {
    throw Error(ErrorCode::SingularMetric, "metric is not Hermitian positive-definite");
  }
  const Matrix ma = m * a;
  const double resid = norm_inf(ma - ma.adjoint());
  if (resid > tol.tol_resid * norm_inf(ma)) {
    throw Error(ErrorCode::NotSelfAdjoint,
                "operator is not self-adjoint with respect to the metric (residual " +
                    std::to_string(resid) + ")");
  }
  Tolerances relaxed = tol;
  relaxed.tol_sym = std::max(tol.tol_sym, tol.tol_resid);
  return pencil_impl<Matrix>(ma, m, relaxed);
}

template <typename Matrix>
Matrix sqrt_impl(const Matrix& a, const Matrix& metric, const Tolerances& tol) {
  const auto eig = generalized_impl(a, metric, tol);
  const double radius = eig.values.cwiseAbs().maxCoeff();
  RealVector roots(eig.values.size());
  for (Index i = 0; i < eig.values.size(); ++i) {
    const double lambda = eig.values(i);
    if (lambda < -tol.tol_eig * radius) {
      throw Error(ErrorCode::NegativeSpectrum,
                  "eigenvalue " + std::to_string(lambda) + " is negative");
    }
    roots(i) = std::sqrt(std::max(lambda, 0.0));
  }
  return eig.vectors * roots.asDiagonal() * eig.vectors.adjoint() * metric;
}

}  // namespace

RealForm::RealForm(RealMatrix gram, Symmetry symmetry, const Tolerances& tol)
    : gram_(std::move(gram)), symmetry_(symmetry) {
  require_square_finite(gram_, "real form");
  const double scale = norm_inf(gram_);
  if (symmetry_ == Symmetry::Symmetric &&
      norm_inf(gram_ - gram_.transpose()) > tol.tol_sym * scale) {
    throw Error(ErrorCode::NotSymmetric, "real form tagged symmetric is not symmetric");
  }
  if (symmetry_ == Symmetry::Antisymmetric &&
      norm_inf(gram_ + gram_.transpose()) > tol.tol_sym * scale) {
    throw Error(ErrorCode::NotAntisymmetric, "real form tagged antisymmetric is not antisymmetric");
  }
}

ComplexStructureJ::ComplexStructureJ(RealMatrix mat, const Tolerances& tol) : mat_(std::move(mat)) {
  require_square_finite(mat_, "complex structure");
  if (mat_.rows() % 2 != 0) {
    throw Error(ErrorCode::InvalidComplexStructure, "complex structure needs an even dimension");
  }
  const RealMatrix sq = mat_ * mat_ + RealMatrix::Identity(mat_.rows(), mat_.cols());
  if (norm_inf(sq) > tol.tol_J) {
    throw Error(ErrorCode::InvalidComplexStructure,
                "J² + 1 residual " + std::to_string(norm_inf(sq)) + " exceeds tol_J");
  }
}

ComplexStructureJ ComplexStructureJ::canonical(Index dim) {
  if (dim <= 0 || dim % 2 != 0) {
    throw Error(ErrorCode::InvalidComplexStructure, "complex structure needs an even dimension");
  }
  RealMatrix j = RealMatrix::Zero(dim, dim);
  for (Index b = 0; b < dim; b += 2) {
    j(b, b + 1) = -1.0;
    j(b + 1, b) = 1.0;
  }
  return ComplexStructureJ(std::move(j));
}

HermitianForm::HermitianForm(ComplexMatrix gram, const Tolerances& tol) : gram_(std::move(gram)) {
  const auto report = validate_impl(gram_, tol);
  if (!report.symmetric) {
    throw Error(ErrorCode::NotSymmetric, "Hermitian form gram matrix is not Hermitian");
  }
  if (!report.positive) {
    throw Error(ErrorCode::NotPositive, "Hermitian form is not positive-definite (min eigenvalue " +
                                            std::to_string(report.min_eigenvalue) + ")");
  }
}

ValidationReport validate_positive(const RealMatrix& gram, const Tolerances& tol) {
  return validate_impl(gram, tol);
}
ValidationReport validate_positive(const ComplexMatrix& gram, const Tolerances& tol) {
  return validate_impl(gram, tol);
}
ValidationReport validate_positive(const RealForm& form, const Tolerances& tol) {
  return validate_impl(form.gram(), tol);
}
ValidationReport validate_positive(const HermitianForm& form, const Tolerances& tol) {
  return validate_impl(form.gram(), tol);
}

EigenPairs<ComplexMatrix> hermitian_pencil_eig(const ComplexMatrix& k, const ComplexMatrix& m,
                                               const Tolerances& tol) {
  return pencil_impl(k, m, tol);
}
EigenPairs<RealMatrix> hermitian_pencil_eig(const RealMatrix& k, const RealMatrix& m,
                                            const Tolerances& tol) {
  return pencil_impl(k, m, tol);
}

EigenPairs<ComplexMatrix> generalized_eig(const ComplexMatrix& a, const ComplexMatrix& m,
                                          const Tolerances& tol) {
  return generalized_impl(a, m, tol);
}
EigenPairs<RealMatrix> generalized_eig(const RealMatrix& a, const RealMatrix& m,
                                       const Tolerances& tol) {
  return generalized_impl(a, m, tol);
}

ComplexMatrix sqrt_positive(const ComplexMatrix& a, const ComplexMatrix& metric,
                            const Tolerances& tol) {
  return sqrt_impl(a, metric, tol);
}
RealMatrix sqrt_positive(const RealMatrix& a, const RealMatrix& metric, const Tolerances& tol) {
  return sqrt_impl(a, metric, tol);
}

ComplexMatrix orthonormalize_columns(const ComplexMatrix& vectors, const ComplexMatrix& gram,
                                     const Tolerances& tol) {
  if (vectors.rows() != gram.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "vector length does not match the form");
  }
  if (!vectors.allFinite()) {
    throw Error(ErrorCode::NonFinite, "vectors have NaN or infinite entries");
  }
  auto h_norm = [&](const ComplexVector& v) {
    return std::sqrt(std::max(0.0, v.dot(gram * v).real()));
  };
  double max_norm = 0.0;
  for (Index c = 0; c < vectors.cols(); ++c) {
    max_norm = std::max(max_norm, h_norm(vectors.col(c)));
  }
  const double drop = tol.tol_eig * max_norm;

  ComplexMatrix basis(vectors.rows(), vectors.cols());
  Index kept = 0;
  for (Index c = 0; c < vectors.cols(); ++c) {
    ComplexVector v = vectors.col(c);
    for (int pass = 0; pass < 2; ++pass) {
      for (Index b = 0; b < kept; ++b) {
        const ComplexVector hb = gram * basis.col(b);
        v -= basis.col(b) * hb.dot(v);
      }
    }
    const double norm = h_norm(v);
    if (norm <= drop || norm == 0.0) continue;
    basis.col(kept++) = v / norm;
  }
  return basis.leftCols(kept);
}

std::vector<ComplexVector> orthonormalize(const std::vector<ComplexVector>& vectors,
                                          const HermitianForm& form, const Tolerances& tol) {
  ComplexMatrix cols(form.dim(), static_cast<Index>(vectors.size()));
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != form.dim()) {
      throw Error(ErrorCode::DimensionMismatch, "vector length does not match the form");
    }
    cols.col(static_cast<Index>(i)) = vectors[i];
  }
  const ComplexMatrix basis = orthonormalize_columns(cols, form.gram(), tol);
  std::vector<ComplexVector> out;
  out.reserve(static_cast<std::size_t>(basis.cols()));
  for (Index c = 0; c < basis.cols(); ++c) out.emplace_back(basis.col(c));
  return out;
}

double spectral_norm(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::BDCSVD<ComplexMatrix> svd(a);
  return svd.singularValues()(0);
}

Index krylov_rank(const ComplexMatrix& g, const ComplexVector& x0, const Tolerances& tol) {
  require_square_finite(g, "operator");
  if (x0.size() != g.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "start vector length does not match the operator");
  }
  if (!x0.allFinite()) throw Error(ErrorCode::NonFinite, "start vector has NaN or infinite entries");
  const double x_norm = x0.norm();
  if (x_norm == 0.0) throw Error(ErrorCode::ZeroVector, "Krylov start vector is zero");

  const Index n = g.rows();
  const double threshold = tol.tol_eig * spectral_norm(g);
  ComplexMatrix q(n, n);
  q.col(0) = x0 / x_norm;
  Index rank = 1;
  while (rank < n) {
    ComplexVector w = g * q.col(rank - 1);
    for (int pass = 0; pass < 2; ++pass) {
      const auto basis = q.leftCols(rank);
      w -= basis * (basis.adjoint() * w);
    }
    const double r = w.norm();
    if (r <= threshold || r == 0.0) break;
    q.col(rank++) = w / r;
  }
  return rank;
}

}  // namespace biherm
