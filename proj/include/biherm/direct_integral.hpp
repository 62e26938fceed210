#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "biherm/spectral.hpp"

namespace biherm {

/// One component space H_λ of the discrete direct integral.
struct Fiber {
  double eigenvalue = 0.0;
  double weight = 0.0;  // σ_j = k_j / n
  Index dim = 0;        // k_j
  ComplexMatrix basis;  // h1-orthonormal columns
};

/// Finite stand-in for ∫ H_λ dσ(λ): eigenvalue-indexed fibers with a
/// normalized counting measure, grouped into segments of constant fiber
/// dimension.
class DiscreteDirectIntegral {
 public:
  DiscreteDirectIntegral(ConnectingOperator g, std::vector<Fiber> fibers, const Tolerances& tol = {});

  const ConnectingOperator& connecting() const { return g_; }
  const std::vector<Fiber>& fibers() const { return fibers_; }
  /// fiber dimension k ↦ indices of fibers with that dimension
  const std::map<Index, std::vector<std::size_t>>& segments() const { return segments_; }

  Index dim() const { return g_.dim(); }
  /// n×n matrix whose columns are all fiber bases in fiber order.
  const ComplexMatrix& basis() const { return basis_; }
  /// Inverse of basis(): basis()† · H1.
  ComplexMatrix basis_inverse() const;
  /// Offset of fiber j's columns inside basis().
  Index offset(std::size_t fiber) const { return offsets_[fiber]; }

  bool all_unidimensional() const;

 private:
  ConnectingOperator g_;
  std::vector<Fiber> fibers_;
  std::map<Index, std::vector<std::size_t>> segments_;
  std::vector<Index> offsets_;
  ComplexMatrix basis_;
};

/// Per-fiber blocks A(λ_j) of an operator in the commutant.
struct DecomposableOperator {
  std::vector<ComplexMatrix> blocks;
  double cross_fiber_residual = 0.0;  // max |off-diagonal block entry| / ‖Â‖∞
};

DiscreteDirectIntegral build_decomposition(const ConnectingOperator& g, const Tolerances& tol = {});

struct ProportionalityReport {
  std::vector<double> max_violation;  // per fiber, relative to ‖h2‖
  double scale = 0.0;                 // ‖h2‖ measured as λ_max(G)
  bool passed = false;
};

/// Checks h2 = λ_j·h1 on each fiber's basis pairs. ‖h2‖ is taken as the norm
/// of h2 on the h1-unit ball, which is the largest eigenvalue of G.
ProportionalityReport check_proportionality(const DiscreteDirectIntegral& dec, const HermitianForm& h1,
                                            const HermitianForm& h2, const Tolerances& tol = {});

/// Block form of a commuting operator. Throws NotInCommutant when
/// ‖GA − AG‖ > tol_resid·‖G‖·‖A‖ or when the cross-fiber blocks do not vanish.
DecomposableOperator project_to_commutant_blocks(const ComplexMatrix& a, const DiscreteDirectIntegral& dec,
                                                 const Tolerances& tol = {});

struct BicommutantReport {
  bool in_commutant = false;
  bool fiber_scalar = false;
  double commutator = 0.0;             // relative ‖GB − BG‖
  double max_scalar_defect = 0.0;      // max_j ‖B_j − b_j·1‖∞ / ‖B̂‖∞
  std::vector<Complex> scalars;        // b_j, empty unless in_commutant

  bool passed() const { return in_commutant && fiber_scalar; }
};

/// B lies in the bicommutant iff it commutes with G and acts on every fiber
/// as multiplication by a number b_j.
BicommutantReport check_bicommutant_scalar(const ComplexMatrix& b, const DiscreteDirectIntegral& dec,
                                           const Tolerances& tol = {});

/// (all fibers one-dimensional), cross-checked against is_generic_def2.
/// Disagreement throws InternalInconsistency.
bool check_prop2(const DiscreteDirectIntegral& dec, const ConnectingOperator& g, const Tolerances& tol = {});

/// Bi-unitary element with an independent Haar-random U(k_j) block per fiber.
/// Fiber j draws from its own engine seeded by (seed, j).
ComplexMatrix sample_biunitary(const DiscreteDirectIntegral& dec, std::uint64_t seed);

/// Haar-distributed k×k unitary: QR of a complex Gaussian matrix with the
/// phases of R's diagonal moved into Q.
ComplexMatrix haar_unitary(Index k, std::uint64_t seed, std::uint64_t stream = 0);

/// U = Σ_j e^{i·φ_j}·P_j. Requires all fibers to be one-dimensional.
ComplexMatrix phase_biunitary(const DiscreteDirectIntegral& dec, const std::vector<double>& phases);

/// Assembles an ambient operator from per-fiber blocks: V·blockdiag(A_j)·V⁻¹.
ComplexMatrix assemble(const DiscreteDirectIntegral& dec, const std::vector<ComplexMatrix>& blocks);

}  // namespace biherm
