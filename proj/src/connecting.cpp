#include "biherm/connecting.hpp"

namespace biherm {

namespace {

double rel(double residual, double scale) { return scale > 0.0 ? residual / scale : residual; }

double hermitian_defect(const ComplexMatrix& a) { return rel(norm_inf(a - a.adjoint()), norm_inf(a)); }

}  // namespace

ConnectingOperator connecting_operator(const HermitianForm& h1, const HermitianForm& h2,
                                       const Tolerances& tol) {
  if (h1.dim() != h2.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "Hermitian forms have different dimensions");
  }
  const ComplexMatrix& a = h1.gram();
  const ComplexMatrix& b = h2.gram();
  Eigen::LLT<ComplexMatrix> chol(a);
  if (chol.info() != Eigen::Success) {
    throw Error(ErrorCode::SingularMetric, "h1 is not positive-definite");
  }
  ComplexMatrix g = chol.solve(b);

  ConnectingChecks c;
  c.identity = rel(norm_inf(b - a * g), norm_inf(b));
  c.h1_self_adjoint = hermitian_defect(a * g);
  c.h2_self_adjoint = hermitian_defect(b * g);

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> h1_eigs(a, Eigen::EigenvaluesOnly);
  const auto& ev = h1_eigs.eigenvalues();
  c.h1_condition = ev(ev.size() - 1) / ev(0);
  c.ill_conditioned = c.h1_condition > 1.0 / tol.tol_eig;

  // Spectrum of G = spectrum of the pencil (H2, H1), which is Hermitian exactly.
  const auto pencil = hermitian_pencil_eig(b, a, tol);
  c.min_eigenvalue = pencil.values(0);

  c.identity_ok = c.identity <= tol.tol_resid;
  c.h1_self_adjoint_ok = c.h1_self_adjoint <= tol.tol_resid;
  c.h2_self_adjoint_ok = c.h2_self_adjoint <= tol.tol_resid;
  c.positive = c.min_eigenvalue > 0.0;
  return ConnectingOperator(std::move(g), h1, h2, c);
}

BiUnitaryReport verify_biunitary(const ComplexMatrix& u, const ConnectingOperator& g, const Tolerances& tol) {
  if (u.rows() != u.cols() || u.rows() != g.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "U must be square with the forms' dimension");
  }
  if (!u.allFinite()) throw Error(ErrorCode::NonFinite, "U has NaN or infinite entries");
  const ComplexMatrix& a = g.h1().gram();
  const ComplexMatrix& b = g.h2().gram();
  const ComplexMatrix& gm = g.mat();
  BiUnitaryReport r;
  r.h1_residual = rel(norm_inf(u.adjoint() * a * u - a), norm_inf(a));
  r.h2_residual = rel(norm_inf(u.adjoint() * b * u - b), norm_inf(b));
  r.commutator = rel(norm_inf(gm * u - u * gm), norm_inf(gm) * norm_inf(u));
  r.h1_unitary = r.h1_residual <= tol.tol_resid;
  r.h2_unitary = r.h2_residual <= tol.tol_resid;
  r.commutes = r.commutator <= tol.tol_resid;
  // Roundoff in the chain U†GU = G is amplified by at most cond(H1); allow
  // one order of magnitude before calling the implication violated.
  r.implication_holds = !(r.h1_unitary && r.h2_unitary) || r.commutator <= 10.0 * tol.tol_resid *
                                                                               std::max(1.0, g.checks().h1_condition);
  return r;
}

BiUnitaryReport verify_biunitary(const ComplexMatrix& u, const HermitianForm& h1, const HermitianForm& h2,
                                 const Tolerances& tol) {
  if (h1.dim() != h2.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "Hermitian forms have different dimensions");
  }
  return verify_biunitary(u, connecting_operator(h1, h2, tol), tol);
}

}  // namespace biherm
