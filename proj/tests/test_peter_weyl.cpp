#include "heislab/peter_weyl.hpp"

#include <gtest/gtest.h>

using namespace heislab;

namespace {

// Direct eigenvector test: ρ(T_g) v = e^{2πiη(g)} v and ρ(M_ξ) v = e^{2πiξ(a)} v.
double eigen_equation_defect(const HeisenbergAction& rho, const SubgroupContext& ctx, const Eigenspace& s) {
  double d = 0.0;
  for (Eigen::Index c = 0; c < s.basis.cols(); ++c) {
    const ComplexVector v = s.basis.col(c);
    for (const auto& g : ctx.subgroup().elements()) {
      d = std::max(d, (rho.U(g) * v - ctx.eta_at(s.index.eta, g).to_complex() * v).cwiseAbs().maxCoeff());
    }
    for (const auto& xi : ctx.annihilator_subgroup().elements()) {
      const cplx lambda = ctx.xi_at(as_character(xi), s.index.a).to_complex();
      d = std::max(d, (rho.V(as_character(xi)) * v - lambda * v).cwiseAbs().maxCoeff());
    }
  }
  return d;
}

}  // namespace

TEST(SubgroupContext, Sizes) {
  const FiniteAbelianGroup e({4, 2});
  const SubgroupContext ctx(parse_subgroup(e, "[(2,0)]"));
  EXPECT_EQ(ctx.annihilator_subgroup().order(), 4);
  EXPECT_EQ(ctx.quotient().order(), 4);
  EXPECT_EQ(ctx.dual_of_subgroup().order(), 2);
  EXPECT_EQ(ctx.index_count(), 8);
  for (int i = 0; i < ctx.index_count(); ++i) {
    auto [eta, a] = ctx.unflat(i);
    EXPECT_EQ(ctx.flat(eta, a), i);
  }
}

TEST(SubgroupContext, XiIndependentOfRepresentative) {
  const FiniteAbelianGroup e({6});
  const SubgroupContext ctx(parse_subgroup(e, "[3]"));
  for (const auto& xi : ctx.annihilator_subgroup().elements()) {
    for (const auto& x : e.elements()) {
      EXPECT_EQ(e.pairing(x, as_character(xi)), ctx.xi_at(as_character(xi), ctx.project(x)));
    }
  }
}

TEST(Eigenspaces, TrivialSubgroupGivesPointMasses) {
  const FiniteAbelianGroup e({5});
  const HeisenbergAction rho = canonical_action(e);
  const SubgroupContext ctx(Subgroup::trivial(e));
  const EigenspaceDecomposition dec = decompose(rho, ctx);
  for (const auto& s : dec.spaces()) {
    ASSERT_EQ(s.rank, 1);
    const GroupElement rep = ctx.quotient().representative(s.index.a);
    EXPECT_NEAR(std::abs(s.basis(e.index_of(rep), 0)), 1.0, 1e-12);
  }
}

TEST(Eigenspaces, WholeGroupGivesCharacters) {
  const FiniteAbelianGroup e({3, 2});
  const HeisenbergAction rho = canonical_action(e);
  const SubgroupContext ctx(Subgroup::whole(e));
  const EigenspaceDecomposition dec = decompose(rho, ctx);
  EXPECT_EQ(dec.spaces().size(), 6u);
  for (const auto& s : dec.spaces()) {
    ASSERT_EQ(s.rank, 1);
    // The eigenvector of all translations with eigenvalue η(x) is ū-independent
    // up to scale: |v(u)| = 1/√|E|.
    for (Eigen::Index u = 0; u < 6; ++u) EXPECT_NEAR(std::abs(s.basis(u, 0)), 1.0 / std::sqrt(6.0), 1e-12);
  }
}

TEST(Eigenspaces, AllPairsSmallGroups) {
  for (const auto& e : groups_up_to_order(12)) {
    const HeisenbergAction rho = canonical_action(e);
    for (const auto& g : all_subgroups(e)) {
      const SubgroupContext ctx(g);
      const EigenspaceDecomposition dec = decompose(rho, ctx);
      EXPECT_LT(dec.completeness_defect(), 1e-10);
      EXPECT_LT(dec.projector_defect(), 1e-10);
      EXPECT_LT(dec.orthogonality_defect(), 1e-10);
      EXPECT_TRUE(dec.flags().empty());
      for (const auto& s : dec.spaces()) {
        EXPECT_EQ(s.rank, 1);
        EXPECT_LT(eigen_equation_defect(rho, ctx, s), 1e-10);
      }
      EXPECT_TRUE(index_action_transitive(ctx));
    }
  }
}

TEST(Eigenspaces, MultiplicityScalesRanks) {
  const FiniteAbelianGroup e({4});
  const HeisenbergAction rho = conjugated_copies(e, 3, 5);
  const SubgroupContext ctx(parse_subgroup(e, "[2]"));
  const EigenspaceDecomposition dec = decompose(rho, ctx);
  for (const auto& s : dec.spaces()) {
    EXPECT_EQ(s.rank, 3);
    EXPECT_LT(eigen_equation_defect(rho, ctx, s), 1e-10);
  }
  EXPECT_EQ(dec.total_rank(), 12);
}

TEST(Permutation, CanonicalAndConjugated) {
  for (const auto& e : {FiniteAbelianGroup({4, 2}), FiniteAbelianGroup({6}), FiniteAbelianGroup({3, 3})}) {
    for (const auto& g : all_subgroups(e)) {
      const SubgroupContext ctx(g);
      const PermutationReport r = verify_subspace_permutation(conjugated_copies(e, 2, 7), ctx);
      EXPECT_TRUE(r.pass) << (r.failures.empty() ? "" : r.failures.front());
      EXPECT_LT(r.max_defect, 1e-10);
      EXPECT_TRUE(r.equal_ranks);
    }
  }
}

TEST(Permutation, IndexActionMatchesOracle) {
  // (η, a) ↦ (η − χ|_G, a + q(x)), checked through character values on G.
  const FiniteAbelianGroup e({4, 2});
  const SubgroupContext ctx(parse_subgroup(e, "[(2,0)]"));
  for (const auto& x : e.elements()) {
    for (const auto& chi : e.characters()) {
      for (int i = 0; i < ctx.index_count(); ++i) {
        auto [eta, a] = ctx.unflat(i);
        const EigenspaceIndex t = index_action(ctx, x, chi, {eta, a});
        for (const auto& g : ctx.subgroup().elements()) {
          EXPECT_EQ(ctx.eta_at(t.eta, g), ctx.eta_at(eta, g) - e.pairing(g, chi));
        }
        EXPECT_EQ(t.a, ctx.project(e.add(ctx.quotient().representative(a), x)));
      }
    }
  }
}

TEST(Eigenspaces, RejectsInvalidAction) {
  const FiniteAbelianGroup e({3});
  const auto bad = HeisenbergAction::unchecked(e, {translation_matrix(e, {{1}})}, {modulation_matrix(e, {{2}})});
  const SubgroupContext ctx(Subgroup::trivial(e));
  EXPECT_THROW(decompose(bad, ctx), HypothesisViolation);
  // The unchecked permutation report flags it instead of throwing.
  EXPECT_FALSE(verify_subspace_permutation(bad, ctx).pass);
}

TEST(Eigenspaces, GroupMismatch) {
  const SubgroupContext ctx(Subgroup::trivial(FiniteAbelianGroup({3})));
  EXPECT_THROW(decompose(canonical_action(FiniteAbelianGroup({4})), ctx), StructuralError);
}

TEST(Eigenspaces, JsonShape) {
  const FiniteAbelianGroup e({4});
  const auto j = to_json(decompose(canonical_action(e), SubgroupContext(parse_subgroup(e, "[2]"))), true);
  EXPECT_EQ(j["space_dim"], 4);
  EXPECT_EQ(j["eigenspaces"].size(), 4u);
  EXPECT_EQ(j["eigenspaces"][0]["basis"].size(), 1u);
}
