#include "biherm/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace biherm {

namespace {

// Above this dimension the n²×n² commutation map is not formed explicitly;
// its spectrum {λ_i − λ_j} is read off the Hermitian form of G instead.
constexpr Index kDirectCommutantMaxDim = 16;

/// Ĝ = L⁻¹·H2·L⁻† with H1 = L·L†. Similar to G (Ĝ = L†·G·L⁻†) and Hermitian.
ComplexMatrix hermitian_model(const ConnectingOperator& g) {
  Eigen::LLT<ComplexMatrix> chol(g.h1().gram());
  const auto l = chol.matrixL();
  ComplexMatrix c = l.solve(g.h2().gram());
  c = l.solve(c.adjoint().eval()).adjoint();
  return (c + c.adjoint()) / 2.0;
}

}  // namespace

Index SpectralResolution::dim() const {
  Index n = 0;
  for (const auto& c : clusters) n += c.multiplicity;
  return n;
}

std::string GroupSignature::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < multiplicities.size(); ++i) {
    if (i > 0) out += "×";
    out += "U(" + std::to_string(multiplicities[i]) + ")";
  }
  return out;
}

SpectralResolution spectral_resolution(const ConnectingOperator& g, const Tolerances& tol) {
  const ComplexMatrix& h1 = g.h1().gram();
  // H1·G = H2, so the pencil (H2, H1) is the h1-self-adjoint eigenproblem of G
  // without the roundoff of forming H1·G.
  const auto eig = hermitian_pencil_eig(g.h2().gram(), h1, tol);
  const Index n = eig.values.size();

  SpectralResolution res;
  res.raw_eigenvalues = eig.values;
  const double radius = eig.values.cwiseAbs().maxCoeff();
  res.gap_threshold = tol.tol_eig * radius;

  Index start = 0;
  for (Index i = 1; i <= n; ++i) {
    if (i < n && eig.values(i) - eig.values(i - 1) <= res.gap_threshold) continue;
    EigenCluster cluster;
    cluster.multiplicity = i - start;
    cluster.eigenvalue = eig.values.segment(start, i - start).mean();
    cluster.basis = orthonormalize_columns(eig.vectors.middleCols(start, i - start), h1, tol);
    if (cluster.basis.cols() != cluster.multiplicity) {
      throw Error(ErrorCode::InternalInconsistency, "eigenvectors of a cluster are linearly dependent");
    }
    res.clusters.push_back(std::move(cluster));
    start = i;
  }

  ComplexMatrix recon = ComplexMatrix::Zero(n, n);
  for (const auto& c : res.clusters) recon += c.eigenvalue * cluster_projector(c, g.h1());
  const double g_norm = norm_inf(g.mat());
  res.reconstruction = norm_inf(g.mat() - recon) / (g_norm > 0.0 ? g_norm : 1.0);

  for (std::size_t a = 0; a < res.clusters.size(); ++a) {
    for (std::size_t b = a + 1; b < res.clusters.size(); ++b) {
      const ComplexMatrix cross = res.clusters[a].basis.adjoint() * h1 * res.clusters[b].basis;
      res.cross_orthogonality = std::max(res.cross_orthogonality, cross.cwiseAbs().maxCoeff());
    }
  }
  return res;
}

ComplexMatrix cluster_projector(const EigenCluster& cluster, const HermitianForm& h1) {
  return cluster.basis * (cluster.basis.adjoint() * h1.gram());
}

GroupSignature group_signature(const SpectralResolution& res) {
  GroupSignature sig;
  for (const auto& c : res.clusters) sig.multiplicities.push_back(c.multiplicity);
  return sig;
}

bool is_generic_def1(const SpectralResolution& res) {
  return std::all_of(res.clusters.begin(), res.clusters.end(),
                     [](const EigenCluster& c) { return c.multiplicity == 1; });
}

ComplexVector cyclic_vector(const SpectralResolution& res, const ComplexVector& mu) {
  if (mu.size() != res.cluster_count()) {
    throw Error(ErrorCode::DimensionMismatch, "need one coefficient per eigenvalue");
  }
  if (!is_generic_def1(res)) {
    throw Error(ErrorCode::Degenerate, "cyclic vector construction needs a nondegenerate spectrum");
  }
  const Index n = res.dim();
  ComplexVector x0 = ComplexVector::Zero(n);
  for (Index k = 0; k < mu.size(); ++k) {
    if (mu(k) == Complex(0.0, 0.0)) {
      throw Error(ErrorCode::ZeroCoefficient, "coefficient " + std::to_string(k) + " is zero");
    }
    x0 += mu(k) * res.clusters[static_cast<std::size_t>(k)].basis.col(0);
  }
  return x0;
}

bool is_cyclic(const ConnectingOperator& g, int trials, std::uint64_t seed, const Tolerances& tol) {
  if (trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be at least 1");
  const Index n = g.dim();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int t = 0; t < trials; ++t) {
    ComplexVector x(n);
    for (Index i = 0; i < n; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      x(i) = Complex(re, im);
    }
    x.normalize();
    if (krylov_rank(g.mat(), x, tol) == n) return true;
  }
  return false;
}

Index commutant_dimension(const ConnectingOperator& g, const Tolerances& tol) {
  const Index n = g.dim();
  const ComplexMatrix model = hermitian_model(g);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> model_eigs(model, Eigen::EigenvaluesOnly);
  const RealVector& lambda = model_eigs.eigenvalues();
  const double threshold = tol.tol_eig * lambda.cwiseAbs().maxCoeff();

  if (n <= kDirectCommutantMaxDim) {
    // vec(ĜX − XĜ) = (1 ⊗ Ĝ − Ĝᵀ ⊗ 1)·vec(X); Hermitian, so its singular
    // values are the moduli of its eigenvalues.
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    const ComplexMatrix gt = model.transpose();
    ComplexMatrix map(n * n, n * n);
    for (Index a = 0; a < n; ++a) {
      for (Index b = 0; b < n; ++b) {
        map.block(a * n, b * n, n, n) = id(a, b) * model - gt(a, b) * id;
      }
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> map_eigs(map, Eigen::EigenvaluesOnly);
    Index nullity = 0;
    for (Index i = 0; i < map_eigs.eigenvalues().size(); ++i) {
      if (std::abs(map_eigs.eigenvalues()(i)) <= threshold) ++nullity;
    }
    return nullity;
  }

  Index nullity = 0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (std::abs(lambda(i) - lambda(j)) <= threshold) ++nullity;
    }
  }
  return nullity;
}

Index bicommutant_dimension(const SpectralResolution& res) { return res.cluster_count(); }

bool is_generic_def2(const ConnectingOperator& g, const Tolerances& tol) {
  return commutant_dimension(g, tol) == bicommutant_dimension(spectral_resolution(g, tol));
}

}  // namespace biherm
