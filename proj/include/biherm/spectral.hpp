#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "biherm/connecting.hpp"

namespace biherm {

struct EigenCluster {
  double eigenvalue = 0.0;  // mean of the merged eigenvalues
  Index multiplicity = 0;
  ComplexMatrix basis;      // h1-orthonormal columns spanning the eigenspace
};

/// Discrete spectral family of G: clusters ascending by eigenvalue.
struct SpectralResolution {
  std::vector<EigenCluster> clusters;
  RealVector raw_eigenvalues;      // before clustering, ascending
  double gap_threshold = 0.0;      // tol_eig · spectral radius
  double reconstruction = 0.0;     // ‖G − Σ λ_k P_k‖∞ / ‖G‖∞
  double cross_orthogonality = 0.0;  // max |h1(e_a, e_b)| across clusters

  Index dim() const;
  Index cluster_count() const { return static_cast<Index>(clusters.size()); }
};

struct GroupSignature {
  std::vector<Index> multiplicities;

  /// "U(n₁)×U(n₂)×…" with ASCII digits, e.g. "U(2)×U(1)".
  std::string to_string() const;
};

/// h1-orthonormal eigen-decomposition of G with adjacent eigenvalues merged
/// whenever their gap is at most tol_eig·ρ(G). Merging is chained, so a run
/// of small gaps collapses into one cluster.
SpectralResolution spectral_resolution(const ConnectingOperator& g, const Tolerances& tol = {});

/// h1-orthogonal projector onto one cluster: P = E·E†·H1.
ComplexMatrix cluster_projector(const EigenCluster& cluster, const HermitianForm& h1);

GroupSignature group_signature(const SpectralResolution& res);

/// All eigenvalues simple.
bool is_generic_def1(const SpectralResolution& res);

/// x₀ = Σ μ_k·e_k over the (one-dimensional) clusters. Throws Degenerate if
/// some cluster has multiplicity > 1 and ZeroCoefficient if some μ_k = 0.
ComplexVector cyclic_vector(const SpectralResolution& res, const ComplexVector& mu);

/// True if one of `trials` seeded random unit vectors has full Krylov rank.
bool is_cyclic(const ConnectingOperator& g, int trials = 3, std::uint64_t seed = 0,
               const Tolerances& tol = {});

/// Complex dimension of {X : GX = XG}: the null space of X ↦ GX − XG on n²
/// unknowns, with relative threshold tol_eig·ρ(G).
Index commutant_dimension(const ConnectingOperator& g, const Tolerances& tol = {});

/// Number of eigenvalue clusters: the bicommutant of a diagonalizable
/// self-adjoint G is spanned by its spectral projectors.
Index bicommutant_dimension(const SpectralResolution& res);

/// G′′ = G′, i.e. commutant and bicommutant dimensions agree.
bool is_generic_def2(const ConnectingOperator& g, const Tolerances& tol = {});

}  // namespace biherm
