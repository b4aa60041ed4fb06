#include "heislab/product.hpp"

#include <gtest/gtest.h>

using namespace heislab;

namespace {

ProductModel small_model(std::string_view group = "Z2", std::string_view sub = "[]") {
  const FiniteAbelianGroup e = parse_group(group);
  return {parse_subgroup(e, sub), GridSpec{1, 32, 0.25}};
}

}  // namespace

TEST(ProductModel, TensorActionIsKron) {
  const ProductModel model = small_model("Z3");
  const FiniteAbelianGroup& e = model.group();
  const HeisenbergElement h{RationalPhase(1, 3), {{1}}, {{2}}};
  const PhasePoint k = phase_point(model.grid, 2, -1);
  const ComplexMatrix t = tensor_action(model, h, k);
  EXPECT_EQ(t.rows(), model.dim());
  // (A⊗B)(a⊗b) = Aa ⊗ Bb on basis vectors.
  ComplexVector a = ComplexVector::Zero(3), b = ComplexVector::Zero(32);
  a(1) = 1.0;
  b(5) = 1.0;
  const ComplexVector lhs = t * kron(ComplexMatrix(a), ComplexMatrix(b));
  const ComplexVector rhs = kron(ComplexMatrix(heisenberg_matrix(e, h) * a), ComplexMatrix(weyl_operator(model.grid, k) * b));
  EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(ProductAction, CanonicalFactorsCommute) {
  const ProductAction rho = canonical_product_action(small_model("Z4", "[2]"));
  EXPECT_LT(rho.cross_commutation_defect(), 1e-14);
  EXPECT_EQ(rho.dim(), 128);
}

TEST(ProductAction, RejectsNonCommutingFactors) {
  const ProductModel model = small_model();
  const ProductAction can = canonical_product_action(model);
  // Conjugating only the grid factor breaks cross-commutation.
  const ComplexMatrix x = haar_random_unitary(can.dim(), 3);
  EXPECT_THROW(ProductAction(can.finite(), conjugate(can.grid(), x)), HypothesisViolation);
}

TEST(Blocks, CanonicalBlocksHaveGridMultiplicityOne) {
  const ProductModel model = small_model("Z4", "[2]");
  const BlockDecomposition dec = block_decompose(canonical_product_action(model), SubgroupContext(model.subgroup));
  ASSERT_EQ(dec.blocks.size(), 4u);
  EXPECT_TRUE(dec.equal_dims);
  for (const auto& b : dec.blocks) {
    EXPECT_EQ(b.dim, 32);
    EXPECT_EQ(b.grid_multiplicity, 1);
  }
  EXPECT_LT(dec.max_witness_defect(), 1e-8);
  EXPECT_LT(dec.projector_completeness_defect, 1e-12);
}

TEST(Combined, ConjugatedCopies) {
  const ProductModel model = small_model();
  for (int m : {1, 2}) {
    const ProductAction rho = conjugated_product_copies(model, m, 17);
    const CombinedDecomposition dec = combined_intertwiner(rho, SubgroupContext(model.subgroup));
    EXPECT_EQ(dec.multiplicity, m);
    EXPECT_EQ(dec.h00_dim, 32 * m);
    EXPECT_LT(dec.max_defect(), 1e-8) << m;
  }
}

TEST(Combined, CanonicalIsIdentityUpToPhase) {
  const ProductModel model = small_model("Z2", "[1]");
  const CombinedDecomposition dec =
      combined_intertwiner(canonical_product_action(model), SubgroupContext(model.subgroup));
  ASSERT_EQ(dec.multiplicity, 1);
  const ComplexMatrix& w = dec.intertwiners[0];
  const cplx c = w(0, 0) / std::abs(w(0, 0));
  EXPECT_LT(norm_max(w - c * identity(model.dim())), 1e-8);
}

TEST(OrbitSpan, FullRank) {
  const ProductModel model = small_model("Z2", "[]");
  const OrbitSpan span = cyclic_orbit_span(model);
  EXPECT_EQ(span.rank, span.expected);
  EXPECT_GT(span.smallest_ratio, 0.5);
}

TEST(GaussianSymbol, DefectTiny) { EXPECT_LT(gaussian_symbol_defect(GridSpec{1, 64, 0.125}), 1e-9); }
