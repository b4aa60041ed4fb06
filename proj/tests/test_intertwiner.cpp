#include "heislab/intertwiner.hpp"

#include <gtest/gtest.h>

using namespace heislab;

TEST(Commutant, CanonicalIsScalar) {
  for (const auto& e : groups_up_to_order(12)) {
    const CommutantReport r = commutant_dimension(canonical_action(e));
    EXPECT_EQ(r.dimension, 1) << e.to_string();
    EXPECT_LT(r.residual, 1e-10);
  }
}

TEST(Commutant, DoubleCopyIsFour) {
  const FiniteAbelianGroup e({4});
  EXPECT_EQ(commutant_dimension(conjugated_copies(e, 2, 3)).dimension, 4);
  EXPECT_EQ(commutant_dimension(conjugated_copies(e, 3, 3)).dimension, 9);
}

TEST(Commutant, DenseAndReducedAgree) {
  for (const auto& e : {FiniteAbelianGroup({4}), FiniteAbelianGroup({2, 3}), FiniteAbelianGroup({2, 2})}) {
    for (int copies : {1, 2}) {
      const HeisenbergAction rho = conjugated_copies(e, copies, 4);
      const int dense = commutant_dimension(rho, 1e-8, CommutantMethod::kDense).dimension;
      const int reduced = commutant_dimension(rho, 1e-8, CommutantMethod::kReduced).dimension;
      EXPECT_EQ(dense, copies * copies);
      EXPECT_EQ(reduced, dense);
    }
  }
}

TEST(Commutant, ReducibleControlWithoutModulation) {
  // Translations alone on L²(Z6) commute with all translations: dimension 6.
  const FiniteAbelianGroup e({6});
  const std::vector<ComplexMatrix> gens{translation_matrix(e, {{1}})};
  EXPECT_EQ(commutant_dimension(std::span<const ComplexMatrix>(gens)).dimension, 6);
}

TEST(Commutant, BasisCommutes) {
  const HeisenbergAction rho = conjugated_copies(FiniteAbelianGroup({3}), 2, 8);
  const CommutantReport r = commutant_dimension(rho);
  ASSERT_EQ(r.basis.size(), 4u);
  for (const auto& x : r.basis) {
    for (const auto& g : rho.generators()) EXPECT_LT(norm_max(g * x - x * g), 1e-10);
  }
}

TEST(Synthesis, CanonicalIsIdentityUpToPhase) {
  const FiniteAbelianGroup e({4});
  const HeisenbergAction rho = canonical_action(e);
  const IsotypicDecomposition dec = synthesize_intertwiners(rho, SubgroupContext(parse_subgroup(e, "[2]")));
  ASSERT_EQ(dec.multiplicity, 1);
  const ComplexMatrix& w = dec.intertwiners[0];
  const cplx c = w(0, 0);
  EXPECT_NEAR(std::abs(c), 1.0, 1e-12);
  EXPECT_LT(norm_max(w - c * identity(4)), 1e-12);
}

TEST(Synthesis, MultiplicitiesAndDefects) {
  for (const auto& e : {FiniteAbelianGroup({4}), FiniteAbelianGroup({6}), FiniteAbelianGroup({4, 2})}) {
    for (const auto& g : all_subgroups(e)) {
      for (int m : {1, 2, 3}) {
        const HeisenbergAction rho = conjugated_copies(e, m, 40 + m);
        const IsotypicDecomposition dec = synthesize_intertwiners(rho, SubgroupContext(g));
        EXPECT_EQ(dec.multiplicity, m);
        EXPECT_LE(dec.max_defect(), 1e-8) << e.to_string() << " " << format_subgroup(g) << " m=" << m;
      }
    }
  }
}

TEST(Synthesis, WMapsDeltaToV) {
  const FiniteAbelianGroup e({6});
  const Subgroup g = parse_subgroup(e, "[2]");
  const HeisenbergAction rho = conjugated_copies(e, 2, 9);
  const IsotypicDecomposition dec = synthesize_intertwiners(rho, SubgroupContext(g));
  for (int a = 0; a < dec.multiplicity; ++a) {
    EXPECT_LT((dec.intertwiners[a] * delta_G(g) - dec.h00_basis.col(a)).norm(), 1e-10);
  }
}

TEST(Synthesis, RejectsBadDimension) {
  const FiniteAbelianGroup e({2});
  const ComplexMatrix one = identity(1);
  // A 1-dimensional "action" cannot satisfy the commutation relation.
  EXPECT_THROW(HeisenbergAction(e, {one}, {-one}), HypothesisViolation);
}

TEST(Uniqueness, PhaseRecovered) {
  const FiniteAbelianGroup e({4, 2});
  const HeisenbergAction rho = conjugated_copies(e, 2, 12);
  const IsotypicDecomposition dec = synthesize_intertwiners(rho, SubgroupContext(Subgroup::trivial(e)));
  const cplx c = std::polar(1.0, 0.7);
  EXPECT_LT(std::abs(uniqueness_check(rho, dec, c * dec.intertwiners[1], 1) - c), 1e-10);
  // A different isotypic component is not a multiple of W_1.
  EXPECT_THROW(uniqueness_check(rho, dec, dec.intertwiners[0], 1), UniquenessViolation);
  EXPECT_THROW(uniqueness_check(rho, dec, dec.intertwiners[0], 2), StructuralError);
  EXPECT_THROW(uniqueness_check(rho, dec, 2.0 * dec.intertwiners[0], 0), StructuralError);
}

TEST(Synthesis, JsonShape) {
  const FiniteAbelianGroup e({3});
  const HeisenbergAction rho = conjugated_copies(e, 2, 1);
  const auto j = to_json(synthesize_intertwiners(rho, SubgroupContext(Subgroup::trivial(e))), 4);
  EXPECT_EQ(j["multiplicity"], 2);
  EXPECT_EQ(j["per_alpha"].size(), 2u);
  EXPECT_EQ(j["commutant_dim"], 4);
}
