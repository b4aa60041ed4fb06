#include "heislab/action.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace heislab;

namespace {

ComplexMatrix mat2(cplx a, cplx b, cplx c, cplx d) {
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

HeisenbergElement random_element(const FiniteAbelianGroup& e, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::int64_t> pick(0, e.order() - 1);
  std::uniform_int_distribution<int> t(0, 23);
  return {RationalPhase(t(rng), 24), e.element_at(pick(rng)), e.character_at(pick(rng))};
}

}  // namespace

TEST(Translation, SpecExamples) {
  const FiniteAbelianGroup z2({2});
  EXPECT_EQ(norm_max(translation_matrix(z2, {{1}}) - mat2(0, 1, 1, 0)), 0.0);
  const FiniteAbelianGroup z3({3});
  const ComplexMatrix t = translation_matrix(z3, {{1}});
  EXPECT_EQ(norm_max(t * t * t - identity(3)), 0.0);
  EXPECT_GT(norm_max(t - identity(3)), 0.5);
}

TEST(Translation, ShiftsBasisVectors) {
  const FiniteAbelianGroup e({4, 3});
  for (const auto& x : e.elements()) {
    const ComplexMatrix t = translation_matrix(e, x);
    for (const auto& u : e.elements()) {
      ComplexVector f = ComplexVector::Zero(e.order());
      f(e.index_of(u)) = 1.0;
      const ComplexVector g = t * f;
      EXPECT_EQ(g(e.index_of(e.add(u, x))), cplx(1, 0));
    }
  }
}

TEST(Modulation, SpecExamples) {
  EXPECT_EQ(norm_max(modulation_matrix(FiniteAbelianGroup({2}), {{1}}) - mat2(1, 0, 0, -1)), 0.0);
  const ComplexMatrix m = modulation_matrix(FiniteAbelianGroup({4}), {{1}});
  const cplx expected[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (int i = 0; i < 4; ++i) EXPECT_EQ(m(i, i), expected[i]);
}

TEST(Commutator, SpecExamples) {
  double defect = 1.0;
  EXPECT_EQ(commutator_check(FiniteAbelianGroup({2}), {{1}}, {{1}}, 1e-12, &defect), RationalPhase(1, 2));
  EXPECT_LT(defect, 1e-14);
  const RationalPhase p = commutator_check(FiniteAbelianGroup({4}), {{1}}, {{1}});
  EXPECT_EQ(p, RationalPhase(3, 4));
  EXPECT_EQ(p.to_complex(), cplx(0, -1));
}

TEST(Commutator, ExhaustiveSmallGroups) {
  for (const auto& e : groups_up_to_order(12)) {
    for (const auto& x : e.elements()) {
      for (const auto& c : e.characters()) {
        double d = 1.0;
        EXPECT_EQ(commutator_check(e, x, c, 1e-10, &d), -e.pairing(x, c));
        EXPECT_LT(d, 1e-12);
      }
    }
  }
}

TEST(HeisenbergMatrix, SpecExamples) {
  const FiniteAbelianGroup z3({3});
  const HeisenbergElement minus_one{RationalPhase(1, 2), z3.zero(), z3.zero_character()};
  EXPECT_LT(norm_max(heisenberg_matrix(z3, minus_one) + identity(3)), 1e-15);
  const FiniteAbelianGroup z2({2});
  const HeisenbergElement h{RationalPhase(), {{1}}, {{1}}};
  EXPECT_LT(norm_max(heisenberg_matrix(z2, h) - mat2(0, -1, 1, 0)), 1e-15);
}

TEST(HeisenbergMatrix, HomomorphismRandomPairs) {
  std::mt19937_64 rng(101);
  for (const auto& e : {FiniteAbelianGroup({6}), FiniteAbelianGroup({4, 2}), FiniteAbelianGroup({3, 3}),
                        FiniteAbelianGroup({12})}) {
    for (int i = 0; i < 100; ++i) {
      const HeisenbergElement a = random_element(e, rng), b = random_element(e, rng);
      const ComplexMatrix lhs = heisenberg_matrix(e, a) * heisenberg_matrix(e, b);
      EXPECT_LT(norm_max(lhs - heisenberg_matrix(e, multiply(e, a, b))), 1e-12) << e.to_string();
    }
  }
}

TEST(HeisenbergMatrix, UnitaryAndCentral) {
  std::mt19937_64 rng(102);
  const FiniteAbelianGroup e({5, 2});
  for (int i = 0; i < 50; ++i) {
    const HeisenbergElement a = random_element(e, rng);
    EXPECT_LT(unitarity_defect(heisenberg_matrix(e, a)), 1e-12);
    const HeisenbergElement central{a.t, e.zero(), e.zero_character()};
    EXPECT_LT(norm_max(heisenberg_matrix(e, central) - a.t.to_complex() * identity(e.order())), 1e-15);
  }
}

TEST(HeisenbergGroup, InverseAndAssociativity) {
  std::mt19937_64 rng(103);
  const FiniteAbelianGroup e({4, 3});
  const HeisenbergElement id = heisenberg_identity(e);
  for (int i = 0; i < 100; ++i) {
    const HeisenbergElement a = random_element(e, rng), b = random_element(e, rng), c = random_element(e, rng);
    EXPECT_EQ(multiply(e, a, inverse(e, a)), id);
    EXPECT_EQ(multiply(e, inverse(e, a), a), id);
    EXPECT_EQ(multiply(e, multiply(e, a, b), c), multiply(e, a, multiply(e, b, c)));
  }
}

TEST(DeltaG, SpecExamples) {
  const FiniteAbelianGroup z4({4});
  const ComplexVector d = delta_G(parse_subgroup(z4, "[2]"));
  const double w = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(d(0).real(), w, 1e-15);
  EXPECT_EQ(d(1), cplx(0, 0));
  EXPECT_NEAR(d(2).real(), w, 1e-15);
  EXPECT_NEAR(delta_G(Subgroup::whole(z4)).norm(), 1.0, 1e-15);
  EXPECT_EQ(delta_G(Subgroup::trivial(z4))(0), cplx(1, 0));
}

TEST(DeltaG, InvariantUnderSubgroupTranslationAndAnnihilatorModulation) {
  for (const auto& e : groups_up_to_order(12)) {
    for (const auto& g : all_subgroups(e)) {
      const ComplexVector d = delta_G(g);
      const Subgroup perp = annihilator(g);
      for (const auto& x : g.elements()) EXPECT_LT((translation_matrix(e, x) * d - d).norm(), 1e-14);
      for (const auto& c : perp.elements()) {
        EXPECT_LT((modulation_matrix(e, as_character(c)) * d - d).norm(), 1e-14);
      }
    }
  }
}

TEST(Action, CanonicalSatisfiesRelations) {
  for (const auto& e : groups_up_to_order(12)) {
    const HeisenbergAction rho = canonical_action(e);
    EXPECT_FALSE(rho.check_relations().has_value()) << e.to_string();
    for (const auto& x : e.elements()) EXPECT_LT(norm_max(rho.U(x) - translation_matrix(e, x)), 1e-13);
    for (const auto& c : e.characters()) EXPECT_LT(norm_max(rho.V(c) - modulation_matrix(e, c)), 1e-13);
  }
}

TEST(Action, ConjugatedCopiesValidate) {
  const FiniteAbelianGroup e({4, 2});
  const HeisenbergAction rho = conjugated_copies(e, 3, 9);
  EXPECT_EQ(rho.dim(), 24);
  EXPECT_FALSE(rho.check_relations(1e-10).has_value());
}

TEST(Action, RejectsWrongCommutation) {
  // Swapping the sign of the modulation breaks V U = e^{2πiχ(x)} U V.
  const FiniteAbelianGroup e({3});
  std::vector<ComplexMatrix> u{translation_matrix(e, {{1}})};
  std::vector<ComplexMatrix> v{modulation_matrix(e, {{2}})};
  EXPECT_THROW(HeisenbergAction(e, u, v), HypothesisViolation);
  EXPECT_NO_THROW(HeisenbergAction::unchecked(e, u, v));
}

TEST(Action, RejectsNonUnitaryAndShape) {
  const FiniteAbelianGroup e({2});
  std::vector<ComplexMatrix> u{2.0 * translation_matrix(e, {{1}})};
  std::vector<ComplexMatrix> v{modulation_matrix(e, {{1}})};
  EXPECT_THROW(HeisenbergAction(e, u, v), HypothesisViolation);
  EXPECT_THROW(HeisenbergAction(e, {identity(2)}, {identity(3)}), StructuralError);
  EXPECT_THROW(HeisenbergAction(e, {}, {}), StructuralError);
}
