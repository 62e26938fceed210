#include "biherm/direct_integral.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace biherm {

namespace {

double rel(double residual, double scale) { return scale > 0.0 ? residual / scale : residual; }

struct FiberCoordinates {
  ComplexMatrix mat;       // V⁻¹·A·V
  double cross = 0.0;      // max cross-fiber |entry| / ‖V⁻¹AV‖∞
  double commutator = 0.0; // ‖GA − AG‖∞ / (‖G‖∞·‖A‖∞)
};

FiberCoordinates to_fiber_coordinates(const ComplexMatrix& a, const DiscreteDirectIntegral& dec) {
  if (a.rows() != a.cols() || a.rows() != dec.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "operator must be square with the decomposition's dimension");
  }
  if (!a.allFinite()) throw Error(ErrorCode::NonFinite, "operator has NaN or infinite entries");
  const ComplexMatrix& g = dec.connecting().mat();
  FiberCoordinates fc;
  fc.commutator = rel(norm_inf(g * a - a * g), norm_inf(g) * norm_inf(a));
  fc.mat = dec.basis_inverse() * a * dec.basis();
  const double scale = norm_inf(fc.mat);
  double cross = 0.0;
  const auto& fibers = dec.fibers();
  for (std::size_t r = 0; r < fibers.size(); ++r) {
    for (std::size_t c = 0; c < fibers.size(); ++c) {
      if (r == c) continue;
      const auto block = fc.mat.block(dec.offset(r), dec.offset(c), fibers[r].dim, fibers[c].dim);
      cross = std::max(cross, block.cwiseAbs().maxCoeff());
    }
  }
  fc.cross = rel(cross, scale);
  return fc;
}

}  // namespace

DiscreteDirectIntegral::DiscreteDirectIntegral(ConnectingOperator g, std::vector<Fiber> fibers,
                                               const Tolerances& tol)
    : g_(std::move(g)), fibers_(std::move(fibers)) {
  const Index n = g_.dim();
  Index total = 0;
  double weight = 0.0;
  for (std::size_t j = 0; j < fibers_.size(); ++j) {
    const Fiber& f = fibers_[j];
    if (f.dim < 1 || f.basis.rows() != n || f.basis.cols() != f.dim) {
      throw Error(ErrorCode::DimensionMismatch, "fiber basis does not match its dimension");
    }
    if (!(f.weight > 0.0)) throw Error(ErrorCode::InvalidArgument, "fiber weights must be positive");
    offsets_.push_back(total);
    total += f.dim;
    weight += f.weight;
    segments_[f.dim].push_back(j);
  }
  if (total != n) throw Error(ErrorCode::DimensionMismatch, "fiber dimensions do not add up to n");
  if (std::abs(weight - 1.0) > tol.tol_resid * static_cast<double>(fibers_.size())) {
    throw Error(ErrorCode::InvalidArgument, "fiber weights must sum to 1");
  }
  basis_.resize(n, n);
  for (std::size_t j = 0; j < fibers_.size(); ++j) {
    basis_.middleCols(offsets_[j], fibers_[j].dim) = fibers_[j].basis;
  }
  // Joint h1-orthonormality; roundoff grows with the conditioning of h1.
  const ComplexMatrix gram = basis_.adjoint() * g_.h1().gram() * basis_;
  const double defect = (gram - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (defect > tol.tol_resid * std::max(1.0, g_.checks().h1_condition)) {
    throw Error(ErrorCode::InternalInconsistency,
                "fiber bases are not jointly h1-orthonormal (defect " + std::to_string(defect) + ")");
  }
}

ComplexMatrix DiscreteDirectIntegral::basis_inverse() const { return basis_.adjoint() * g_.h1().gram(); }

bool DiscreteDirectIntegral::all_unidimensional() const {
  return std::all_of(fibers_.begin(), fibers_.end(), [](const Fiber& f) { return f.dim == 1; });
}

DiscreteDirectIntegral build_decomposition(const ConnectingOperator& g, const Tolerances& tol) {
  const auto res = spectral_resolution(g, tol);
  const double n = static_cast<double>(g.dim());
  std::vector<Fiber> fibers;
  fibers.reserve(res.clusters.size());
  for (const auto& c : res.clusters) {
    fibers.push_back(Fiber{c.eigenvalue, static_cast<double>(c.multiplicity) / n, c.multiplicity, c.basis});
  }
  return DiscreteDirectIntegral(g, std::move(fibers), tol);
}

ProportionalityReport check_proportionality(const DiscreteDirectIntegral& dec, const HermitianForm& h1,
                                            const HermitianForm& h2, const Tolerances& tol) {
  if (h1.dim() != dec.dim() || h2.dim() != dec.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "forms do not match the decomposition");
  }
  ProportionalityReport report;
  for (const auto& f : dec.fibers()) report.scale = std::max(report.scale, std::abs(f.eigenvalue));
  report.passed = true;
  for (const auto& f : dec.fibers()) {
    const ComplexMatrix m1 = f.basis.adjoint() * h1.gram() * f.basis;
    const ComplexMatrix m2 = f.basis.adjoint() * h2.gram() * f.basis;
    const double violation = rel((m2 - f.eigenvalue * m1).cwiseAbs().maxCoeff(), report.scale);
    report.max_violation.push_back(violation);
    if (violation > tol.tol_resid) report.passed = false;
  }
  return report;
}

DecomposableOperator project_to_commutant_blocks(const ComplexMatrix& a, const DiscreteDirectIntegral& dec,
                                                 const Tolerances& tol) {
  const auto fc = to_fiber_coordinates(a, dec);
  if (fc.commutator > tol.tol_resid) {
    throw Error(ErrorCode::NotInCommutant,
                "operator does not commute with G (relative commutator " + std::to_string(fc.commutator) + ")");
  }
  if (fc.cross > tol.tol_resid) {
    throw Error(ErrorCode::NotInCommutant,
                "cross-fiber blocks do not vanish (relative residual " + std::to_string(fc.cross) + ")");
  }
  DecomposableOperator out;
  out.cross_fiber_residual = fc.cross;
  const auto& fibers = dec.fibers();
  for (std::size_t j = 0; j < fibers.size(); ++j) {
    out.blocks.emplace_back(fc.mat.block(dec.offset(j), dec.offset(j), fibers[j].dim, fibers[j].dim));
  }
  return out;
}

BicommutantReport check_bicommutant_scalar(const ComplexMatrix& b, const DiscreteDirectIntegral& dec,
                                           const Tolerances& tol) {
  const auto fc = to_fiber_coordinates(b, dec);
  BicommutantReport report;
  report.commutator = fc.commutator;
  report.in_commutant = fc.commutator <= tol.tol_resid && fc.cross <= tol.tol_resid;
  if (!report.in_commutant) return report;
  const double scale = norm_inf(fc.mat);
  const auto& fibers = dec.fibers();
  for (std::size_t j = 0; j < fibers.size(); ++j) {
    const Index k = fibers[j].dim;
    const ComplexMatrix block = fc.mat.block(dec.offset(j), dec.offset(j), k, k);
    const Complex s = block.trace() / static_cast<double>(k);
    report.scalars.push_back(s);
    const double defect = rel(norm_inf(block - s * ComplexMatrix::Identity(k, k)), scale);
    report.max_scalar_defect = std::max(report.max_scalar_defect, defect);
  }
  report.fiber_scalar = report.max_scalar_defect <= tol.tol_resid;
  return report;
}

bool check_prop2(const DiscreteDirectIntegral& dec, const ConnectingOperator& g, const Tolerances& tol) {
  const bool unidimensional = dec.all_unidimensional();
  const bool generic = is_generic_def2(g, tol);
  if (unidimensional != generic) {
    throw Error(ErrorCode::InternalInconsistency,
                std::string("fibers ") + (unidimensional ? "are" : "are not") +
                    " all one-dimensional but the commutant test says " + (generic ? "generic" : "not generic"));
  }
  return unidimensional;
}

ComplexMatrix haar_unitary(Index k, std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  ComplexMatrix z(k, k);
  for (Index c = 0; c < k; ++c) {
    for (Index r = 0; r < k; ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      z(r, c) = Complex(re, im);
    }
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(k, k);
  const ComplexMatrix& r = qr.matrixQR();
  for (Index i = 0; i < k; ++i) {
    const double mod = std::abs(r(i, i));
    if (mod > 0.0) q.col(i) *= r(i, i) / mod;
  }
  return q;
}

ComplexMatrix assemble(const DiscreteDirectIntegral& dec, const std::vector<ComplexMatrix>& blocks) {
  const auto& fibers = dec.fibers();
  if (blocks.size() != fibers.size()) {
    throw Error(ErrorCode::DimensionMismatch, "need one block per fiber");
  }
  const Index n = dec.dim();
  ComplexMatrix d = ComplexMatrix::Zero(n, n);
  for (std::size_t j = 0; j < fibers.size(); ++j) {
    if (blocks[j].rows() != fibers[j].dim || blocks[j].cols() != fibers[j].dim) {
      throw Error(ErrorCode::DimensionMismatch, "block size does not match its fiber");
    }
    d.block(dec.offset(j), dec.offset(j), fibers[j].dim, fibers[j].dim) = blocks[j];
  }
  return dec.basis() * d * dec.basis_inverse();
}

ComplexMatrix sample_biunitary(const DiscreteDirectIntegral& dec, std::uint64_t seed) {
  std::vector<ComplexMatrix> blocks;
  const auto& fibers = dec.fibers();
  for (std::size_t j = 0; j < fibers.size(); ++j) {
    blocks.push_back(haar_unitary(fibers[j].dim, seed, j));
  }
  return assemble(dec, blocks);
}

ComplexMatrix phase_biunitary(const DiscreteDirectIntegral& dec, const std::vector<double>& phases) {
  if (!dec.all_unidimensional()) {
    throw Error(ErrorCode::NotGeneric, "phase bi-unitaries need one-dimensional fibers");
  }
  if (phases.size() != dec.fibers().size()) {
    throw Error(ErrorCode::DimensionMismatch, "need one phase per fiber");
  }
  std::vector<ComplexMatrix> blocks;
  for (double phi : phases) {
    if (!std::isfinite(phi)) throw Error(ErrorCode::NonFinite, "phase is not finite");
    blocks.push_back(ComplexMatrix::Constant(1, 1, std::polar(1.0, phi)));
  }
  return assemble(dec, blocks);
}

}  // namespace biherm
