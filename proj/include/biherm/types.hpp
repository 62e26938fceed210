#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace biherm {

using Complex = std::complex<double>;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Numerical tolerances shared by every analysis. All entries are relative
/// except tol_J, which bounds ‖J² + 1‖∞ directly.
struct Tolerances {
  double tol_sym = 1e-10;   // symmetry / Hermiticity, relative to ‖A‖∞
  double tol_J = 1e-9;      // complex-structure residual ‖J² + 1‖∞
  double tol_eig = 1e-8;    // eigenvalue cluster gap and rank threshold
  double tol_resid = 1e-10; // operator identities, relative to input norm

  /// Throws InvalidArgument unless every tolerance is strictly positive.
  void validate() const;
};

enum class ErrorCode {
  InvalidArgument,
  NonFinite,
  NotSymmetric,
  NotAntisymmetric,
  NotPositive,
  InvalidComplexStructure,
  NotSelfAdjoint,
  SingularMetric,
  NegativeSpectrum,
  ZeroVector,
  NotAdmissible,
  DegenerateSymplectic,
  NotSkew,
  DimensionMismatch,
  Degenerate,
  ZeroCoefficient,
  NotInCommutant,
  NotGeneric,
  InternalInconsistency,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Max absolute row sum (induced ∞-norm). Used for every relative residual.
template <typename Derived>
double norm_inf(const Eigen::MatrixBase<Derived>& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().rowwise().sum().maxCoeff();
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& a) {
  return a.allFinite();
}

}  // namespace biherm
