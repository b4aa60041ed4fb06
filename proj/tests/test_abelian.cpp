#include "heislab/abelian.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

using namespace heislab;

namespace {

Subgroup sub(const FiniteAbelianGroup& e, std::string_view spec) { return parse_subgroup(e, spec); }

std::set<Residues> residue_set(const Subgroup& g) {
  std::set<Residues> out;
  for (const auto& x : g.elements()) out.insert(x.residues);
  return out;
}

}  // namespace

TEST(RationalPhase, CanonicalForm) {
  const RationalPhase p(-3, 12);
  EXPECT_EQ(p.numerator(), 3);
  EXPECT_EQ(p.denominator(), 4);
  EXPECT_TRUE(RationalPhase(5, 5).is_zero());
  EXPECT_EQ(RationalPhase(1, 2) + RationalPhase(1, 2), RationalPhase());
  EXPECT_EQ(-RationalPhase(1, 3), RationalPhase(2, 3));
  EXPECT_THROW(RationalPhase(1, 0), StructuralError);
  EXPECT_NEAR(std::abs(RationalPhase(3, 7).to_complex()), 1.0, 1e-15);
}

TEST(Pairing, SpecExamples) {
  EXPECT_EQ(FiniteAbelianGroup({4}).pairing({{1}}, {{1}}), RationalPhase(1, 4));
  const FiniteAbelianGroup e({2, 3});
  EXPECT_EQ(e.pairing({{1, 2}}, {{1, 1}}), RationalPhase(1, 6));
  for (const auto& x : e.elements()) EXPECT_TRUE(e.pairing(x, e.zero_character()).is_zero());
}

TEST(Pairing, MatchesFractionOracle) {
  for (const auto& e : groups_up_to_order(16)) {
    for (const auto& x : e.elements()) {
      for (const auto& c : e.characters()) {
        const auto [num, den] = oracle::pairing(e.cyclic_orders(), x.residues, c.residues);
        const RationalPhase p = e.pairing(x, c);
        EXPECT_EQ(p.numerator(), num);
        EXPECT_EQ(p.denominator(), den);
      }
    }
  }
}

TEST(Pairing, ShapeMismatch) {
  const FiniteAbelianGroup e({2, 2});
  EXPECT_THROW(e.pairing({{1}}, {{1, 1}}), StructuralError);
}

TEST(Pairing, BiadditiveExhaustive) {
  for (const auto& e : groups_up_to_order(16)) {
    for (const auto& x : e.elements()) {
      for (const auto& y : e.elements()) {
        for (std::size_t i = 0; i < e.rank(); ++i) {
          const Character c = e.unit_character(i);
          EXPECT_EQ(e.pairing(e.add(x, y), c), e.pairing(x, c) + e.pairing(y, c));
        }
      }
    }
  }
}

TEST(Pairing, BiadditiveRandomizedLargeGroups) {
  std::mt19937_64 rng(17);
  for (const auto& e : {FiniteAbelianGroup({30, 7}), FiniteAbelianGroup({64}), FiniteAbelianGroup({9, 9, 2})}) {
    std::uniform_int_distribution<std::int64_t> pick(0, e.order() - 1);
    for (int i = 0; i < 200; ++i) {
      const GroupElement x = e.element_at(pick(rng)), y = e.element_at(pick(rng));
      const Character c = e.character_at(pick(rng)), d = e.character_at(pick(rng));
      EXPECT_EQ(e.pairing(e.add(x, y), c), e.pairing(x, c) + e.pairing(y, c));
      EXPECT_EQ(e.pairing(x, e.add(c, d)), e.pairing(x, c) + e.pairing(x, d));
    }
  }
}

TEST(Pairing, CharacterOrthogonality) {
  for (const auto& e : groups_up_to_order(16)) {
    for (const auto& c : e.characters()) {
      cplx sum = 0;
      for (const auto& x : e.elements()) sum += e.pairing(x, c).to_complex();
      const double expected = c == e.zero_character() ? static_cast<double>(e.order()) : 0.0;
      EXPECT_LT(std::abs(sum - expected), 1e-10);
    }
  }
}

TEST(Group, EnumerationAndShape) {
  const FiniteAbelianGroup e({4, 2});
  EXPECT_EQ(e.order(), 8);
  const auto els = e.elements();
  EXPECT_EQ(std::set<GroupElement>(els.begin(), els.end()).size(), 8u);
  EXPECT_EQ(e.dual(), e);
  EXPECT_EQ(e.to_string(), "Z4xZ2");
  EXPECT_EQ(FiniteAbelianGroup({1}).order(), 1);
  EXPECT_THROW(FiniteAbelianGroup({0}), StructuralError);
}

TEST(Group, ReductionIsIdempotent) {
  const FiniteAbelianGroup e({5, 3});
  const GroupElement x = e.element({7, -1});
  EXPECT_EQ(x.residues, (Residues{2, 2}));
  EXPECT_EQ(e.element(x.residues).residues, x.residues);
}

TEST(Annihilator, SpecExamples) {
  const FiniteAbelianGroup z4({4});
  EXPECT_EQ(residue_set(annihilator(sub(z4, "[2]"))), (std::set<Residues>{{0}, {2}}));
  EXPECT_EQ(annihilator(Subgroup::whole(z4)).order(), 1);
  EXPECT_EQ(annihilator(Subgroup::trivial(z4)).order(), 4);
}

TEST(Annihilator, OrderAndDoubleAnnihilatorExhaustive) {
  for (const auto& e : groups_up_to_order(16)) {
    for (const auto& g : all_subgroups(e)) {
      const Subgroup perp = annihilator(g);
      EXPECT_EQ(perp.order() * g.order(), e.order());
      EXPECT_EQ(residue_set(annihilator(perp)), residue_set(g)) << e.to_string() << " " << format_subgroup(g);
      for (const auto& x : g.elements()) {
        for (const auto& c : perp.elements()) EXPECT_TRUE(e.pairing(x, as_character(c)).is_zero());
      }
    }
  }
}

TEST(DoubleDual, SpecExamples) {
  EXPECT_TRUE(verify_double_dual(FiniteAbelianGroup({2})));
  EXPECT_TRUE(verify_double_dual(FiniteAbelianGroup({6})));
  EXPECT_TRUE(verify_double_dual(FiniteAbelianGroup({4, 2})));
  // Distinct rows of the pairing table, checked with the fraction oracle.
  const FiniteAbelianGroup e({6});
  std::set<std::vector<std::pair<long long, long long>>> rows;
  for (const auto& x : oracle::enumerate({6})) {
    std::vector<std::pair<long long, long long>> row;
    for (const auto& c : oracle::enumerate({6})) row.push_back(oracle::pairing({6}, x, c));
    rows.insert(row);
  }
  EXPECT_EQ(rows.size(), 6u);
  EXPECT_EQ(double_dual_map(e, {{1}}).size(), 6u);
}

TEST(Cosets, SpecExamples) {
  const FiniteAbelianGroup z4({4});
  auto reps = coset_representatives(z4, sub(z4, "[2]"));
  ASSERT_EQ(reps.size(), 2u);
  EXPECT_EQ(reps[0].residues, Residues{0});
  EXPECT_EQ(reps[1].residues, Residues{1});
  EXPECT_EQ(coset_representatives(z4, Subgroup::whole(z4)).size(), 1u);
  const FiniteAbelianGroup v({2, 2});
  reps = coset_representatives(v, sub(v, "[(1,0)]"));
  ASSERT_EQ(reps.size(), 2u);
  EXPECT_EQ(reps[0].residues, (Residues{0, 0}));
  EXPECT_EQ(reps[1].residues, (Residues{0, 1}));
}

TEST(Cosets, CoverEachCosetOnce) {
  for (const auto& e : groups_up_to_order(12)) {
    for (const auto& g : all_subgroups(e)) {
      const auto reps = coset_representatives(e, g);
      EXPECT_EQ(static_cast<std::int64_t>(reps.size()) * g.order(), e.order());
      std::set<GroupElement> covered;
      for (const auto& r : reps) {
        for (const auto& h : g.elements()) EXPECT_TRUE(covered.insert(e.add(r, h)).second);
      }
      EXPECT_EQ(static_cast<std::int64_t>(covered.size()), e.order());
    }
  }
}

TEST(Quotient, SpecExamples) {
  const FiniteAbelianGroup z4({4});
  const QuotientGroup a = quotient_group(z4, sub(z4, "[2]"));
  EXPECT_EQ(a.order(), 2);
  EXPECT_EQ(a.project(GroupElement{{1}}), 1);
  EXPECT_EQ(a.cyclic_structure().group.cyclic_orders(), std::vector<int>{2});

  const QuotientGroup same = quotient_group(z4, Subgroup::trivial(z4));
  for (const auto& x : z4.elements()) EXPECT_EQ(same.representative(same.project(x)), x);

  const FiniteAbelianGroup z9({9});
  EXPECT_EQ(quotient_group(z9, sub(z9, "[3]")).cyclic_structure().group.cyclic_orders(), std::vector<int>{3});
}

TEST(Quotient, ExactnessAndHomomorphism) {
  for (const auto& e : groups_up_to_order(16)) {
    for (const auto& g : all_subgroups(e)) {
      const QuotientGroup a(e, g);
      // q∘j = 0 and ker q = im j.
      for (const auto& x : e.elements()) EXPECT_EQ(a.project(x) == 0, g.contains(x));
      for (const auto& x : e.elements()) {
        for (const auto& y : e.elements()) EXPECT_EQ(a.project(e.add(x, y)), a.add(a.project(x), a.project(y)));
      }
      const auto cs = a.cyclic_structure();
      EXPECT_EQ(cs.group.order(), a.order());
    }
  }
}

TEST(Subgroups, LagrangeAndClosure) {
  for (const auto& e : groups_up_to_order(16)) {
    for (const auto& g : all_subgroups(e)) {
      EXPECT_EQ(e.order() % g.order(), 0);
      EXPECT_TRUE(g.contains(e.zero()));
      for (const auto& x : g.elements()) {
        EXPECT_TRUE(g.contains(e.negate(x)));
        for (const auto& y : g.elements()) EXPECT_TRUE(g.contains(e.add(x, y)));
      }
    }
  }
}

TEST(Parse, GroupsAndErrors) {
  EXPECT_EQ(parse_group("Z4xZ2").cyclic_orders(), (std::vector<int>{4, 2}));
  EXPECT_EQ(parse_group("Z1").order(), 1);
  EXPECT_THROW(parse_group("Z0"), StructuralError);
  EXPECT_THROW(parse_group("Z4x"), StructuralError);
  EXPECT_THROW(parse_group("Y4"), StructuralError);
  EXPECT_THROW(parse_group(""), StructuralError);
  try {
    parse_group("Z4xQ2");
    FAIL();
  } catch (const StructuralError& err) {
    EXPECT_NE(std::string(err.what()).find("position 3"), std::string::npos);
  }
}

TEST(Parse, Subgroups) {
  const FiniteAbelianGroup e({4, 2});
  EXPECT_EQ(parse_subgroup(e, "[(2,0)]").order(), 2);
  EXPECT_EQ(parse_subgroup(e, "[(2,0), (0,1)]").order(), 4);
  EXPECT_EQ(parse_subgroup(e, "[]").order(), 1);
  EXPECT_EQ(parse_subgroup(FiniteAbelianGroup({4}), "[2]").order(), 2);
  EXPECT_THROW(parse_subgroup(e, "[(4,0)]"), StructuralError);
  EXPECT_THROW(parse_subgroup(e, "[(1)]"), StructuralError);
  EXPECT_THROW(parse_subgroup(e, "(1,0)"), StructuralError);
  EXPECT_THROW(parse_subgroup(e, "[(1,0)"), StructuralError);
  EXPECT_EQ(format_subgroup(parse_subgroup(e, "[(2,0)]")), "[(2,0)]");
}

TEST(Groups, UpToOrder) {
  // Abelian groups of order <= 8 up to isomorphism: 1,2,3,4(2),5,6,7,8(3) gives 11.
  // The multiset of element orders separates them.
  std::set<std::vector<int>> classes;
  for (const auto& e : groups_up_to_order(8)) {
    EXPECT_LE(e.order(), 8);
    std::vector<int> orders;
    for (const auto& x : e.elements()) {
      int ord = 1;
      for (std::size_t i = 0; i < e.rank(); ++i) {
        const int n = e.cyclic_orders()[i];
        ord = std::lcm(ord, n / std::gcd(x.residues[i], n));
      }
      orders.push_back(ord);
    }
    std::sort(orders.begin(), orders.end());
    classes.insert(orders);
  }
  EXPECT_EQ(classes.size(), 11u);
}
