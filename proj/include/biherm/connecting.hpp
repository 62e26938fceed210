#pragma once

#include "biherm/forms.hpp"

namespace biherm {

/// Relative residuals of the connecting-operator invariants.
struct ConnectingChecks {
  double identity = 0.0;         // ‖H2 − H1·G‖∞ / ‖H2‖∞
  double h1_self_adjoint = 0.0;  // ‖H1·G − (H1·G)†‖∞ / ‖H1·G‖∞
  double h2_self_adjoint = 0.0;  // ‖H2·G − (H2·G)†‖∞ / ‖H2·G‖∞
  double min_eigenvalue = 0.0;
  double h1_condition = 0.0;     // λ_max(H1) / λ_min(H1)
  bool ill_conditioned = false;  // h1_condition > 1 / tol_eig

  bool identity_ok = false;
  bool h1_self_adjoint_ok = false;
  bool h2_self_adjoint_ok = false;
  bool positive = false;

  bool passed() const { return identity_ok && h1_self_adjoint_ok && h2_self_adjoint_ok && positive; }
};

/// G with h2(x, y) = h1(Gx, y), i.e. H2 = H1·G in Gram-matrix form.
class ConnectingOperator {
 public:
  ConnectingOperator(ComplexMatrix mat, HermitianForm h1, HermitianForm h2, ConnectingChecks checks)
      : mat_(std::move(mat)), h1_(std::move(h1)), h2_(std::move(h2)), checks_(checks) {}

  Index dim() const { return mat_.rows(); }
  const ComplexMatrix& mat() const { return mat_; }
  const HermitianForm& h1() const { return h1_; }
  const HermitianForm& h2() const { return h2_; }
  const ConnectingChecks& checks() const { return checks_; }

 private:
  ComplexMatrix mat_;
  HermitianForm h1_;
  HermitianForm h2_;
  ConnectingChecks checks_;
};

/// Solves H1·G = H2 by Cholesky and verifies the defining identity, double
/// self-adjointness and positivity. An ill-conditioned h1 does not throw; it
/// sets checks().ill_conditioned.
ConnectingOperator connecting_operator(const HermitianForm& h1, const HermitianForm& h2,
                                       const Tolerances& tol = {});

struct BiUnitaryReport {
  double h1_residual = 0.0;  // ‖U†H1U − H1‖∞ / ‖H1‖∞
  double h2_residual = 0.0;  // ‖U†H2U − H2‖∞ / ‖H2‖∞
  double commutator = 0.0;   // ‖GU − UG‖∞ / (‖G‖∞·‖U‖∞)
  bool h1_unitary = false;
  bool h2_unitary = false;
  bool commutes = false;
  /// h1- and h2-unitarity together force [G, U] = 0; false only if the
  /// numerics contradict that implication.
  bool implication_holds = true;

  bool passed() const { return h1_unitary && h2_unitary && commutes; }
};

BiUnitaryReport verify_biunitary(const ComplexMatrix& u, const HermitianForm& h1, const HermitianForm& h2,
                                 const Tolerances& tol = {});

/// Same report against an already computed connecting operator.
BiUnitaryReport verify_biunitary(const ComplexMatrix& u, const ConnectingOperator& g,
                                 const Tolerances& tol = {});

}  // namespace biherm
