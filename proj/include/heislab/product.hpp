// L = E × Rⁿ at desk scale: a finite group times the periodic grid, with the
// tensor leg order fixed as (finite ⊗ grid).
#pragma once

#include "heislab/intertwiner.hpp"
#include "heislab/weyl.hpp"

namespace heislab {

struct ProductModel {
  Subgroup subgroup;  // G inside E
  GridSpec grid;

  const FiniteAbelianGroup& group() const { return subgroup.parent(); }
  Eigen::Index dim() const { return static_cast<Eigen::Index>(group().order()) * grid.points(); }
};

/// Kronecker product of e^{2πit} T_x M_χ on L²(E) and W_k on the grid.
inline ComplexMatrix tensor_action(const ProductModel& model, const HeisenbergElement& h, const PhasePoint& k) {
  return kron(heisenberg_matrix(model.group(), h), weyl_operator(model.grid, k));
}

/// An action of H_E × H_grid with a shared centre: a finite Heisenberg action
/// and a grid action on the same space that commute with each other.
class ProductAction {
 public:
  ProductAction(HeisenbergAction finite, GridAction grid, double tol = 1e-9)
      : finite_(std::move(finite)), grid_(std::move(grid)) {
    if (finite_.dim() != grid_.dim()) throw StructuralError("finite and grid factors act on spaces of different size");
    if (auto v = finite_.check_relations(tol)) throw HypothesisViolation("finite factor: " + *v);
    if (auto v = grid_.check_relations(tol)) throw HypothesisViolation("grid factor: " + *v);
    const double c = cross_commutation_defect();
    if (c > tol) {
      throw HypothesisViolation("finite and grid factors do not commute (defect " + std::to_string(c) + ")");
    }
  }

  const HeisenbergAction& finite() const { return finite_; }
  const GridAction& grid() const { return grid_; }
  Eigen::Index dim() const { return finite_.dim(); }

  double cross_commutation_defect() const {
    double d = 0.0;
    for (const auto& a : finite_.generators()) {
      for (const auto& b : grid_.generators()) d = std::max(d, norm_max(a * b - b * a));
    }
    return d;
  }

  std::vector<ComplexMatrix> generators() const {
    std::vector<ComplexMatrix> all = finite_.generators();
    for (auto& g : grid_.generators()) all.push_back(std::move(g));
    return all;
  }

 private:
  HeisenbergAction finite_;
  GridAction grid_;
};

inline ProductAction canonical_product_action(const ProductModel& model) {
  const FiniteAbelianGroup& e = model.group();
  const ComplexMatrix id_grid = identity(model.grid.points());
  const ComplexMatrix id_e = identity(static_cast<Eigen::Index>(e.order()));
  const HeisenbergAction fin = canonical_action(e);
  const GridAction grd = canonical_grid_action(model.grid);
  std::vector<ComplexMatrix> fu, fv, gu, gv;
  for (const auto& m : fin.u_generators()) fu.push_back(kron(m, id_grid));
  for (const auto& m : fin.v_generators()) fv.push_back(kron(m, id_grid));
  for (const auto& m : grd.u_generators()) gu.push_back(kron(id_e, m));
  for (const auto& m : grd.v_generators()) gv.push_back(kron(id_e, m));
  return {HeisenbergAction::unchecked(e, fu, fv), GridAction(model.grid, gu, gv)};
}

inline ProductAction conjugate(const ProductAction& rho, const ComplexMatrix& x) {
  return {conjugate(rho.finite(), x), conjugate(rho.grid(), x)};
}

inline ProductAction direct_sum(const ProductAction& a, const ProductAction& b) {
  return {direct_sum(a.finite(), b.finite()), direct_sum(a.grid(), b.grid())};
}

inline ProductAction conjugated_product_copies(const ProductModel& model, int copies, std::uint64_t seed) {
  if (copies < 1) throw StructuralError("conjugated_product_copies: need at least one copy");
  ProductAction rho = canonical_product_action(model);
  for (int i = 1; i < copies; ++i) rho = direct_sum(rho, canonical_product_action(model));
  return conjugate(rho, haar_random_unitary(rho.dim(), seed));
}

/// B* g B for each grid generator, with B an isometry onto an invariant subspace.
inline GridAction restrict_grid_action(const GridAction& rho, const ComplexMatrix& basis) {
  std::vector<ComplexMatrix> u, v;
  for (const auto& g : rho.u_generators()) u.push_back(basis.adjoint() * g * basis);
  for (const auto& g : rho.v_generators()) v.push_back(basis.adjoint() * g * basis);
  return {rho.grid(), u, v};
}

struct ProductBlock {
  EigenspaceIndex index;
  Eigen::Index dim = 0;
  int grid_multiplicity = 0;
  double invariance_defect = 0.0;  // ‖(I − P) g P‖ over grid generators
  double witness_defect = 0.0;     // max defect of the grid decomposition of the block
};

struct BlockDecomposition {
  std::vector<ProductBlock> blocks;
  bool equal_dims = true;
  double projector_completeness_defect = 0.0;

  double max_witness_defect() const {
    double d = 0.0;
    for (const auto& b : blocks) d = std::max({d, b.witness_defect, b.invariance_defect});
    return d;
  }
};

/// Eigenspaces of the finite factor (indexed by Ĝ × A); each is invariant
/// under the grid factor, and the restricted grid action is decomposed with
/// explicit witness isometries.
inline BlockDecomposition block_decompose(const ProductAction& rho, const SubgroupContext& ctx) {
  const EigenspaceDecomposition dec = decompose(rho.finite(), ctx);
  BlockDecomposition out;
  out.projector_completeness_defect = dec.completeness_defect();
  for (const auto& space : dec.spaces()) {
    ProductBlock block;
    block.index = space.index;
    block.dim = space.basis.cols();
    if (block.dim > 0) {
      const ComplexMatrix& b = space.basis;
      const ComplexMatrix outside = identity(rho.dim()) - b * b.adjoint();
      for (const auto& g : rho.grid().generators()) {
        block.invariance_defect = std::max(block.invariance_defect, norm_max(outside * (g * b)));
      }
      const RealIsotypicDecomposition grid_dec = real_intertwiner_synth(restrict_grid_action(rho.grid(), b));
      block.grid_multiplicity = grid_dec.multiplicity;
      block.witness_defect = grid_dec.max_defect();
    }
    if (!out.blocks.empty() && block.dim != out.blocks.front().dim) out.equal_dims = false;
    out.blocks.push_back(block);
  }
  return out;
}

struct CombinedDecomposition {
  int multiplicity = 0;
  Eigen::Index h00_dim = 0;
  std::vector<ComplexMatrix> intertwiners;  // W_α : L²(E) ⊗ L²(grid) → H
  std::vector<double> isometry_defects;
  std::vector<double> equivariance_defects;
  double grid_witness_defect = 0.0;
  double orthogonality_defect = 0.0;
  double completeness_defect = 0.0;

  double max_defect() const {
    double d = std::max({grid_witness_defect, orthogonality_defect, completeness_defect});
    for (double v : isometry_defects) d = std::max(d, v);
    for (double v : equivariance_defects) d = std::max(d, v);
    return d;
  }
};

inline double equivariance_defect(const ProductAction& rho, const ProductAction& canonical, const ComplexMatrix& w) {
  const auto rg = rho.generators();
  const auto cg = canonical.generators();
  double d = 0.0;
  for (std::size_t i = 0; i < rg.size(); ++i) d = std::max(d, norm_max(rg[i] * w - w * cg[i]));
  return d;
}

/// Finite factor first: H_{0,0} from the finite projector, then the grid
/// decomposition of H_{0,0} gives W̃^α with v_α = W̃^α(φ). The combined map
/// is W_α(T_x M_χ δ_G ⊗ f) = ρ(T_x M_χ) W̃^α f over coset representatives.
inline CombinedDecomposition combined_intertwiner(const ProductAction& rho, const SubgroupContext& ctx) {
  const FiniteAbelianGroup& e = ctx.group();
  const GridSpec& grid = rho.grid().grid();
  const Eigen::Index order = static_cast<Eigen::Index>(e.order());
  const Eigen::Index p = grid.points();
  if (rho.dim() % (order * p) != 0) {
    throw HypothesisViolation("dimension " + std::to_string(rho.dim()) + " is not a multiple of |E|*N^n = " +
                              std::to_string(order * p));
  }
  const ComplexMatrix p00 = eigenprojector(rho.finite(), ctx, {0, 0});
  const ComplexMatrix b00 = projector_range_basis(p00);
  CombinedDecomposition out;
  out.h00_dim = b00.cols();
  if (out.h00_dim == 0) throw HypothesisViolation("H_{0,0} is empty although dim > 0");

  const RealIsotypicDecomposition grid_dec = real_intertwiner_synth(restrict_grid_action(rho.grid(), b00));
  out.multiplicity = grid_dec.multiplicity;
  out.grid_witness_defect = grid_dec.max_defect();

  auto [basis, labels] = coset_basis(ctx);
  const ProductAction canonical = canonical_product_action({ctx.subgroup(), grid});
  const ComplexMatrix id_grid = identity(p);
  ComplexMatrix completeness = ComplexMatrix::Zero(rho.dim(), rho.dim());
  for (int alpha = 0; alpha < out.multiplicity; ++alpha) {
    const ComplexMatrix lifted = b00 * grid_dec.intertwiners[static_cast<std::size_t>(alpha)];
    ComplexMatrix w = ComplexMatrix::Zero(rho.dim(), order * p);
    for (std::size_t k = 0; k < labels.size(); ++k) {
      const ComplexMatrix img = rho.finite().U(labels[k].first) * (rho.finite().V(labels[k].second) * lifted);
      w.noalias() += img * kron(basis.col(static_cast<Eigen::Index>(k)).adjoint(), id_grid);
    }
    out.isometry_defects.push_back(isometry_defect(w));
    out.equivariance_defects.push_back(equivariance_defect(rho, canonical, w));
    completeness += w * w.adjoint();
    out.intertwiners.push_back(std::move(w));
  }
  out.completeness_defect = norm_max(completeness - identity(rho.dim()));
  for (int a = 0; a < out.multiplicity; ++a) {
    for (int b = 0; b < out.multiplicity; ++b) {
      if (a == b) continue;
      out.orthogonality_defect =
          std::max(out.orthogonality_defect, norm_max(out.intertwiners[static_cast<std::size_t>(a)].adjoint() *
                                                      out.intertwiners[static_cast<std::size_t>(b)]));
    }
  }
  return out;
}

struct OrbitSpan {
  Eigen::Index rank = 0;
  Eigen::Index expected = 0;
  double smallest_ratio = 0.0;  // λ_min / λ_max of the orbit frame operator
};

/// Numerical rank of {T_x M_χ W_k (δ_G ⊗ φ)} over all x, χ, k, via the frame
/// operator Σ v v*.
inline OrbitSpan cyclic_orbit_span(const ProductModel& model, double cutoff = 1e-8) {
  const FiniteAbelianGroup& e = model.group();
  const GridSpec& grid = model.grid;
  const ComplexVector phi = grid.to_coefficients(gaussian(grid));
  const ComplexVector delta = delta_G(model.subgroup);
  const auto elements = e.elements();
  const auto characters = e.characters();

  std::vector<ComplexVector> finite_orbit;
  for (const auto& x : elements) {
    for (const auto& chi : characters) finite_orbit.push_back(translation_matrix(e, x) * (modulation_matrix(e, chi) * delta));
  }
  PhaseSpaceFunction helper(grid);
  ComplexMatrix grid_orbit(grid.points(), grid.phase_points());
  for (Eigen::Index i = 0; i < grid.phase_points(); ++i) grid_orbit.col(i) = apply_weyl(grid, helper.point(i), phi);

  ComplexMatrix frame = ComplexMatrix::Zero(model.dim(), model.dim());
  ComplexMatrix block(model.dim(), grid.phase_points());
  for (const auto& a : finite_orbit) {
    for (Eigen::Index i = 0; i < grid.phase_points(); ++i) block.col(i) = kron(ComplexMatrix(a), ComplexMatrix(grid_orbit.col(i)));
    frame.noalias() += block * block.adjoint();
  }
  const HermitianEigen eig = hermitian_eigen(frame);
  OrbitSpan out;
  out.expected = model.dim();
  const double top = eig.values(0);
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    if (eig.values(i) > cutoff * top) ++out.rank;
  }
  out.smallest_ratio = eig.values(eig.values.size() - 1) / top;
  return out;
}

/// Discretization defect of the Gaussian symbol V(φ,φ) against the continuum
/// e^{−π(x²+y²)/2}: the only grid-attributable error in the product pipeline.
inline double gaussian_symbol_defect(const GridSpec& grid) {
  const ComplexVector phi = gaussian(grid);
  return (fourier_wigner(grid, phi, phi) - gaussian_symbol(grid)).sup_norm();
}

}  // namespace heislab
