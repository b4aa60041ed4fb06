// Irreducibility via the commutant, and synthesis of the intertwining
// isometries W_α for an arbitrary finite Heisenberg action.
#pragma once

#include "heislab/peter_weyl.hpp"

#include <span>

namespace heislab {

struct CommutantReport {
  int dimension = 0;
  std::vector<ComplexMatrix> basis;
  double residual = 0.0;  // max over basis and generators of ‖gX − Xg‖_max
  std::string method;
};

enum class CommutantMethod { kAuto, kDense, kReduced };

namespace detail {

inline std::vector<ComplexMatrix> null_vectors_to_matrices(const ComplexMatrix& null_basis, Eigen::Index dim) {
  std::vector<ComplexMatrix> out;
  for (Eigen::Index c = 0; c < null_basis.cols(); ++c) {
    out.push_back(Eigen::Map<const ComplexMatrix>(null_basis.col(c).data(), dim, dim));
  }
  return out;
}

/// Constraint (I⊗g − gᵀ⊗I) vec X = 0 for every generator, all d² unknowns.
inline std::vector<ComplexMatrix> commutant_dense(std::span<const ComplexMatrix> gens, double cutoff) {
  const Eigen::Index d = gens.front().rows();
  const ComplexMatrix id = identity(d);
  RowBlockQR qr(d * d);
  for (const auto& g : gens) qr.absorb(kron(id, g) - kron(g.transpose(), id));
  const NullSpace ns = nullspace(qr.r(), cutoff);
  return null_vectors_to_matrices(ns.basis, d);
}

/// The same constraint restricted to matrices that are block diagonal in the
/// eigenbasis of a random Hermitian combination B of the generators. Every
/// commutant element commutes with B, so the restriction loses nothing.
inline std::vector<ComplexMatrix> commutant_reduced(std::span<const ComplexMatrix> gens, double cutoff) {
  const Eigen::Index d = gens.front().rows();
  std::mt19937_64 rng(0x5eedc0ffeeULL);
  const ComplexMatrix coeffs = complex_gaussian(static_cast<Eigen::Index>(gens.size()), 1, rng);
  ComplexMatrix b = ComplexMatrix::Zero(d, d);
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const cplx c = coeffs(static_cast<Eigen::Index>(i), 0);
    b += c * gens[i] + std::conj(c) * gens[i].adjoint();
  }
  const HermitianEigen eig = hermitian_eigen(b);
  const double scale = std::max(1.0, eig.values.cwiseAbs().maxCoeff());
  // Clusters of numerically equal eigenvalues; merging too much is harmless.
  std::vector<Eigen::Index> start{0};
  for (Eigen::Index i = 1; i < d; ++i) {
    if (eig.values(i - 1) - eig.values(i) > 1e-6 * scale) start.push_back(i);
  }
  start.push_back(d);
  const std::size_t nc = start.size() - 1;
  std::vector<Eigen::Index> cluster_of(static_cast<std::size_t>(d)), offset(nc);
  Eigen::Index unknowns = 0;
  for (std::size_t c = 0; c < nc; ++c) {
    offset[c] = unknowns;
    const Eigen::Index size = start[c + 1] - start[c];
    unknowns += size * size;
    for (Eigen::Index i = start[c]; i < start[c + 1]; ++i) cluster_of[static_cast<std::size_t>(i)] = static_cast<Eigen::Index>(c);
  }
  // Unknown Y_c(p, q) with p, q local to cluster c.
  auto unknown = [&](Eigen::Index row, Eigen::Index col) {
    const auto c = static_cast<std::size_t>(cluster_of[static_cast<std::size_t>(row)]);
    const Eigen::Index size = start[c + 1] - start[c];
    return offset[c] + (row - start[c]) + (col - start[c]) * size;
  };

  const ComplexMatrix& q = eig.vectors;
  RowBlockQR qr(unknowns);
  const Eigen::Index cols_per_chunk = std::max<Eigen::Index>(1, 4096 / std::max<Eigen::Index>(d, 1));
  for (const auto& g : gens) {
    const ComplexMatrix gt = q.adjoint() * g * q;
    for (Eigen::Index t0 = 0; t0 < d; t0 += cols_per_chunk) {
      const Eigen::Index t1 = std::min(d, t0 + cols_per_chunk);
      ComplexMatrix rows = ComplexMatrix::Zero((t1 - t0) * d, unknowns);
      for (Eigen::Index t = t0; t < t1; ++t) {
        const auto ct = static_cast<std::size_t>(cluster_of[static_cast<std::size_t>(t)]);
        for (Eigen::Index r = 0; r < d; ++r) {
          const Eigen::Index row = (t - t0) * d + r;
          // (g̃ X̃)_{rt} = Σ_{p in cl(t)} g̃_{rp} X̃_{pt}
          for (Eigen::Index p = start[ct]; p < start[ct + 1]; ++p) rows(row, unknown(p, t)) += gt(r, p);
          // (X̃ g̃)_{rt} = Σ_{p in cl(r)} X̃_{rp} g̃_{pt}
          const auto cr = static_cast<std::size_t>(cluster_of[static_cast<std::size_t>(r)]);
          for (Eigen::Index p = start[cr]; p < start[cr + 1]; ++p) rows(row, unknown(r, p)) -= gt(p, t);
        }
      }
      qr.absorb(rows);
    }
  }
  const NullSpace ns = nullspace(qr.r(), cutoff);
  std::vector<ComplexMatrix> out;
  for (Eigen::Index k = 0; k < ns.dim; ++k) {
    ComplexMatrix xt = ComplexMatrix::Zero(d, d);
    for (std::size_t c = 0; c < nc; ++c) {
      for (Eigen::Index p = start[c]; p < start[c + 1]; ++p) {
        for (Eigen::Index s = start[c]; s < start[c + 1]; ++s) xt(p, s) = ns.basis(unknown(p, s), k);
      }
    }
    out.push_back(q * xt * q.adjoint());
  }
  return out;
}

}  // namespace detail

/// Dimension of {X : gX = Xg for every generator g}, singular-value cutoff
/// `cutoff` relative to the largest. For a set of unitaries closed under the
/// group they generate this is Σ (multiplicity)².
inline CommutantReport commutant_dimension(std::span<const ComplexMatrix> generators, double cutoff = 1e-8,
                                           CommutantMethod method = CommutantMethod::kAuto) {
  if (generators.empty()) throw StructuralError("commutant: no generators");
  const Eigen::Index d = generators.front().rows();
  for (const auto& g : generators) {
    if (g.rows() != d || g.cols() != d) throw StructuralError("commutant: generators of different sizes");
  }
  if (method == CommutantMethod::kAuto) method = d <= 16 ? CommutantMethod::kDense : CommutantMethod::kReduced;
  CommutantReport report;
  report.method = method == CommutantMethod::kDense ? "dense" : "reduced";
  report.basis = method == CommutantMethod::kDense ? detail::commutant_dense(generators, cutoff)
                                                   : detail::commutant_reduced(generators, cutoff);
  report.dimension = static_cast<int>(report.basis.size());
  for (const auto& x : report.basis) {
    for (const auto& g : generators) report.residual = std::max(report.residual, norm_max(g * x - x * g));
  }
  return report;
}

inline CommutantReport commutant_dimension(const HeisenbergAction& rho, double cutoff = 1e-8,
                                           CommutantMethod method = CommutantMethod::kAuto) {
  const auto gens = rho.generators();
  return commutant_dimension(std::span<const ComplexMatrix>(gens), cutoff, method);
}

/// max over generators of ‖ρ(g) W − W canonical(g)‖_max.
inline double equivariance_defect(const HeisenbergAction& rho, const HeisenbergAction& canonical,
                                  const ComplexMatrix& w) {
  const auto rg = rho.generators();
  const auto cg = canonical.generators();
  double d = 0.0;
  for (std::size_t i = 0; i < rg.size(); ++i) d = std::max(d, norm_max(rg[i] * w - w * cg[i]));
  return d;
}

inline double isometry_defect(const ComplexMatrix& w) { return norm_max(w.adjoint() * w - identity(w.cols())); }

struct IsotypicDecomposition {
  int multiplicity = 0;
  ComplexMatrix h00_basis;                 // orthonormal basis {v_α} of H_{0,0}
  std::vector<ComplexMatrix> intertwiners;  // W_α : L²(E) → H, dim × |E|
  std::vector<double> isometry_defects;
  std::vector<double> equivariance_defects;
  double orthogonality_defect = 0.0;  // max_{α≠β} ‖W_α* W_β‖_max
  double completeness_defect = 0.0;   // ‖Σ W_α W_α* − I‖_max
  double basis_gram_defect = 0.0;     // Gram of {T_x M_χ δ_G} against I

  double max_defect() const {
    double d = std::max({orthogonality_defect, completeness_defect, basis_gram_defect});
    for (double v : isometry_defects) d = std::max(d, v);
    for (double v : equivariance_defects) d = std::max(d, v);
    return d;
  }
};

/// Tolerance for synthesis defects at a given space dimension.
inline double synthesis_tolerance(Eigen::Index dim) {
  return dim <= 128 ? 1e-8 : std::sqrt(static_cast<double>(dim)) * 1e-9;
}

/// Orthonormal basis {T_x M_χ δ_G} of L²(E) over coset representatives of
/// G × G^⊥ in E × Ê, x-major; also returns the (x, χ) pairs.
inline std::pair<ComplexMatrix, std::vector<std::pair<GroupElement, Character>>> coset_basis(
    const SubgroupContext& ctx) {
  const FiniteAbelianGroup& e = ctx.group();
  const ComplexVector delta = delta_G(ctx.subgroup());
  std::vector<std::pair<GroupElement, Character>> labels;
  for (const auto& x : ctx.quotient().representatives()) {
    for (const auto& chi_elem : ctx.dual_of_subgroup().representatives()) labels.emplace_back(x, as_character(chi_elem));
  }
  ComplexMatrix basis(static_cast<Eigen::Index>(e.order()), static_cast<Eigen::Index>(labels.size()));
  for (std::size_t k = 0; k < labels.size(); ++k) {
    basis.col(static_cast<Eigen::Index>(k)) =
        translation_matrix(e, labels[k].first) * (modulation_matrix(e, labels[k].second) * delta);
  }
  return {basis, labels};
}

/// H = ⊕ H^α with W_α(T_x M_χ δ_G) = ρ(T_x) ρ(M_χ) v_α.
inline IsotypicDecomposition synthesize_intertwiners(const HeisenbergAction& rho, const SubgroupContext& ctx) {
  detail::require_valid(rho, ctx);
  const FiniteAbelianGroup& e = ctx.group();
  const Eigen::Index n = static_cast<Eigen::Index>(e.order());
  if (rho.dim() % n != 0) {
    throw HypothesisViolation("dimension " + std::to_string(rho.dim()) + " is not a multiple of |E| = " +
                              std::to_string(n) + "; the central character hypothesis cannot hold");
  }
  const ComplexMatrix p00 = eigenprojector(rho, ctx, {0, 0});
  IsotypicDecomposition out;
  out.h00_basis = projector_range_basis(p00);
  out.multiplicity = static_cast<int>(out.h00_basis.cols());
  if (out.multiplicity == 0 && rho.dim() > 0) {
    throw HypothesisViolation("H_{0,0} is empty although dim > 0");
  }
  if (numerical_rank(p00, kRankCutoff) != out.multiplicity) {
    throw InternalConsistencyError("P_{0,0} is not an orthogonal projector");
  }

  auto [basis, labels] = coset_basis(ctx);
  out.basis_gram_defect = norm_max(basis.adjoint() * basis - identity(basis.cols()));
  const HeisenbergAction canonical = canonical_action(e);
  ComplexMatrix completeness = ComplexMatrix::Zero(rho.dim(), rho.dim());
  for (int alpha = 0; alpha < out.multiplicity; ++alpha) {
    const ComplexVector v = out.h00_basis.col(alpha);
    ComplexMatrix images(rho.dim(), basis.cols());
    for (std::size_t k = 0; k < labels.size(); ++k) {
      images.col(static_cast<Eigen::Index>(k)) = rho.U(labels[k].first) * (rho.V(labels[k].second) * v);
    }
    ComplexMatrix w = images * basis.adjoint();
    out.isometry_defects.push_back(isometry_defect(w));
    out.equivariance_defects.push_back(equivariance_defect(rho, canonical, w));
    completeness += w * w.adjoint();
    out.intertwiners.push_back(std::move(w));
  }
  out.completeness_defect = norm_max(completeness - identity(rho.dim()));
  for (int a = 0; a < out.multiplicity; ++a) {
    for (int b = 0; b < out.multiplicity; ++b) {
      if (a == b) continue;
      out.orthogonality_defect = std::max(
          out.orthogonality_defect,
          norm_max(out.intertwiners[static_cast<std::size_t>(a)].adjoint() * out.intertwiners[static_cast<std::size_t>(b)]));
    }
  }
  return out;
}

class UniquenessViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The unimodular c with ‖W − c W_α‖_max ≤ tol. W must be an isometric
/// intertwiner (defects ≤ 1e−8); throws UniquenessViolation if no such c.
inline cplx uniqueness_check(const HeisenbergAction& rho, const IsotypicDecomposition& dec, const ComplexMatrix& w,
                             int alpha, double tol = 1e-7) {
  if (alpha < 0 || alpha >= dec.multiplicity) throw StructuralError("uniqueness_check: component index out of range");
  const ComplexMatrix& wa = dec.intertwiners[static_cast<std::size_t>(alpha)];
  if (w.rows() != wa.rows() || w.cols() != wa.cols()) throw StructuralError("uniqueness_check: shape mismatch");
  if (isometry_defect(w) > 1e-8) throw StructuralError("uniqueness_check: candidate is not an isometry");
  if (equivariance_defect(rho, canonical_action(rho.group()), w) > 1e-8) {
    throw StructuralError("uniqueness_check: candidate is not an intertwiner");
  }
  const cplx c = (wa.adjoint() * w).trace() / static_cast<double>(wa.cols());
  const double residual = norm_max(w - c * wa);
  if (residual > tol || std::abs(std::abs(c) - 1.0) > tol) {
    throw UniquenessViolation("no unimodular scalar relates the candidate to W_" + std::to_string(alpha) +
                              " (residual " + std::to_string(residual) + ", |c| = " + std::to_string(std::abs(c)) +
                              ")");
  }
  return c;
}

inline nlohmann::json to_json(const IsotypicDecomposition& dec, int commutant_dim) {
  nlohmann::json per_alpha = nlohmann::json::array();
  for (int a = 0; a < dec.multiplicity; ++a) {
    per_alpha.push_back({{"isometry_defect", dec.isometry_defects[static_cast<std::size_t>(a)]},
                         {"equivariance_defect", dec.equivariance_defects[static_cast<std::size_t>(a)]}});
  }
  return {{"multiplicity", dec.multiplicity},
          {"per_alpha", per_alpha},
          {"orthogonality_defect", dec.orthogonality_defect},
          {"completeness_defect", dec.completeness_defect},
          {"commutant_dim", commutant_dim}};
}

}  // namespace heislab
