// Finite abelian groups ∏ Z/n_iZ, their duals, subgroups and quotients.
//
// The circle T = R/Z is represented additively by exact rationals mod 1; a
// character with residues c evaluates on x as Σ c_i x_i / n_i mod 1. Because
// the dual of ∏ Z/n_i has the same cyclic orders, a character is stored as a
// residue vector of the same shape and subgroups of the dual are ordinary
// subgroups of an isomorphic group. The double-dual identification is then
// the identity on residues.
#pragma once

#include "heislab/numerics.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace heislab {

/// An element of Q/Z in lowest terms, 0 ≤ numerator < denominator.
class RationalPhase {
 public:
  RationalPhase() = default;
  RationalPhase(std::int64_t numerator, std::int64_t denominator) {
    if (denominator <= 0) throw StructuralError("RationalPhase: denominator must be positive");
    std::int64_t r = numerator % denominator;
    if (r < 0) r += denominator;
    const std::int64_t g = std::gcd(r, denominator);
    num_ = r / g;
    den_ = denominator / g;
  }

  std::int64_t numerator() const { return num_; }
  std::int64_t denominator() const { return den_; }
  bool is_zero() const { return num_ == 0; }
  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  /// e^{2πi·value}.
  cplx to_complex() const { return unit_phase(num_, den_); }

  friend RationalPhase operator+(const RationalPhase& a, const RationalPhase& b) {
    const std::int64_t l = std::lcm(a.den_, b.den_);
    return {a.num_ * (l / a.den_) + b.num_ * (l / b.den_), l};
  }
  friend RationalPhase operator-(const RationalPhase& a) { return {-a.num_, a.den_}; }
  friend RationalPhase operator-(const RationalPhase& a, const RationalPhase& b) { return a + (-b); }
  friend bool operator==(const RationalPhase&, const RationalPhase&) = default;

  friend std::ostream& operator<<(std::ostream& os, const RationalPhase& p) {
    return os << p.num_ << "/" << p.den_;
  }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

using Residues = std::vector<int>;

struct GroupElement {
  Residues residues;
  auto operator<=>(const GroupElement&) const = default;
};

struct Character {
  Residues residues;
  auto operator<=>(const Character&) const = default;
};

inline constexpr std::int64_t kMaxEnumeratedOrder = 1'000'000;

/// ∏ Z/n_iZ with n_i ≥ 1. Elements are enumerated lexicographically (first
/// factor most significant); `index_of` and `element_at` are inverse.
class FiniteAbelianGroup {
 public:
  FiniteAbelianGroup() : FiniteAbelianGroup(std::vector<int>{1}) {}

  explicit FiniteAbelianGroup(std::vector<int> cyclic_orders) : orders_(std::move(cyclic_orders)) {
    if (orders_.empty()) throw StructuralError("group needs at least one cyclic factor");
    order_ = 1;
    for (int n : orders_) {
      if (n < 1) throw StructuralError("cyclic factor order must be >= 1, got " + std::to_string(n));
      order_ *= n;
      if (order_ > kMaxEnumeratedOrder) {
        throw StructuralError("group order exceeds enumeration cap of 10^6");
      }
    }
    common_denominator_ = 1;
    for (int n : orders_) common_denominator_ = std::lcm(common_denominator_, static_cast<std::int64_t>(n));
  }

  const std::vector<int>& cyclic_orders() const { return orders_; }
  std::size_t rank() const { return orders_.size(); }
  std::int64_t order() const { return order_; }

  /// Same cyclic shape: the Pontryagin dual of a finite group in these coordinates.
  const FiniteAbelianGroup& dual() const { return *this; }

  GroupElement zero() const { return {Residues(orders_.size(), 0)}; }
  Character zero_character() const { return {Residues(orders_.size(), 0)}; }

  /// i-th standard generator (1 in factor i).
  GroupElement unit(std::size_t i) const {
    GroupElement e = zero();
    e.residues.at(i) = orders_[i] > 1 ? 1 : 0;
    return e;
  }
  Character unit_character(std::size_t i) const { return {unit(i).residues}; }

  void check(const Residues& r) const {
    if (r.size() != orders_.size()) {
      throw StructuralError("residue vector has " + std::to_string(r.size()) +
                            " entries, group has " + std::to_string(orders_.size()) + " factors");
    }
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (r[i] < 0 || r[i] >= orders_[i]) {
        throw StructuralError("residue " + std::to_string(r[i]) + " out of range for Z" +
                              std::to_string(orders_[i]));
      }
    }
  }

  Residues reduce(Residues r) const {
    if (r.size() != orders_.size()) throw StructuralError("residue vector shape mismatch");
    for (std::size_t i = 0; i < r.size(); ++i) {
      r[i] %= orders_[i];
      if (r[i] < 0) r[i] += orders_[i];
    }
    return r;
  }

  GroupElement element(Residues r) const { return {reduce(std::move(r))}; }
  Character character(Residues r) const { return {reduce(std::move(r))}; }

  GroupElement add(const GroupElement& a, const GroupElement& b) const { return {add_residues(a.residues, b.residues)}; }
  GroupElement negate(const GroupElement& a) const { return {negate_residues(a.residues)}; }
  GroupElement subtract(const GroupElement& a, const GroupElement& b) const { return add(a, negate(b)); }
  Character add(const Character& a, const Character& b) const { return {add_residues(a.residues, b.residues)}; }
  Character negate(const Character& a) const { return {negate_residues(a.residues)}; }

  std::int64_t index_of(const Residues& r) const {
    check(r);
    std::int64_t idx = 0;
    for (std::size_t i = 0; i < r.size(); ++i) idx = idx * orders_[i] + r[i];
    return idx;
  }
  std::int64_t index_of(const GroupElement& x) const { return index_of(x.residues); }
  std::int64_t index_of(const Character& c) const { return index_of(c.residues); }

  Residues residues_at(std::int64_t idx) const {
    if (idx < 0 || idx >= order_) throw StructuralError("element index out of range");
    Residues r(orders_.size());
    for (std::size_t i = orders_.size(); i-- > 0;) {
      r[i] = static_cast<int>(idx % orders_[i]);
      idx /= orders_[i];
    }
    return r;
  }
  GroupElement element_at(std::int64_t idx) const { return {residues_at(idx)}; }
  Character character_at(std::int64_t idx) const { return {residues_at(idx)}; }

  std::vector<GroupElement> elements() const {
    std::vector<GroupElement> out;
    out.reserve(static_cast<std::size_t>(order_));
    for (std::int64_t i = 0; i < order_; ++i) out.push_back(element_at(i));
    return out;
  }
  std::vector<Character> characters() const {
    std::vector<Character> out;
    out.reserve(static_cast<std::size_t>(order_));
    for (std::int64_t i = 0; i < order_; ++i) out.push_back(character_at(i));
    return out;
  }

  /// χ(x) = Σ c_i x_i / n_i mod 1, exact.
  RationalPhase pairing(const GroupElement& x, const Character& chi) const {
    if (x.residues.size() != orders_.size() || chi.residues.size() != orders_.size()) {
      throw StructuralError("pairing: residue vector shape mismatch");
    }
    std::int64_t num = 0;
    for (std::size_t i = 0; i < orders_.size(); ++i) {
      const std::int64_t term = static_cast<std::int64_t>(chi.residues[i]) * x.residues[i] % orders_[i];
      num = (num + term * (common_denominator_ / orders_[i])) % common_denominator_;
    }
    return {num, common_denominator_};
  }

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < orders_.size(); ++i) {
      if (i) s += "x";
      s += "Z" + std::to_string(orders_[i]);
    }
    return s;
  }

  friend bool operator==(const FiniteAbelianGroup& a, const FiniteAbelianGroup& b) {
    return a.orders_ == b.orders_;
  }

 private:
  Residues add_residues(const Residues& a, const Residues& b) const {
    if (a.size() != orders_.size() || b.size() != orders_.size()) {
      throw StructuralError("add: residue vector shape mismatch");
    }
    Residues r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = (a[i] + b[i]) % orders_[i];
    return r;
  }
  Residues negate_residues(const Residues& a) const {
    Residues r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = (orders_[i] - a[i]) % orders_[i];
    return r;
  }

  std::vector<int> orders_;
  std::int64_t order_ = 1;
  std::int64_t common_denominator_ = 1;
};

inline GroupElement as_element(const Character& c) { return {c.residues}; }
inline Character as_character(const GroupElement& x) { return {x.residues}; }

/// A subgroup stored by generators and its enumerated closure (sorted).
class Subgroup {
 public:
  Subgroup(FiniteAbelianGroup parent, std::vector<GroupElement> generators)
      : parent_(std::move(parent)), generators_(std::move(generators)) {
    for (auto& g : generators_) parent_.check(g.residues);
    std::vector<char> seen(static_cast<std::size_t>(parent_.order()), 0);
    std::vector<GroupElement> frontier{parent_.zero()};
    seen[static_cast<std::size_t>(parent_.index_of(parent_.zero()))] = 1;
    while (!frontier.empty()) {
      GroupElement x = frontier.back();
      frontier.pop_back();
      for (const auto& g : generators_) {
        GroupElement y = parent_.add(x, g);
        auto idx = static_cast<std::size_t>(parent_.index_of(y));
        if (!seen[idx]) {
          seen[idx] = 1;
          frontier.push_back(std::move(y));
        }
      }
    }
    for (std::size_t i = 0; i < seen.size(); ++i) {
      if (seen[i]) elements_.push_back(parent_.element_at(static_cast<std::int64_t>(i)));
    }
    membership_ = std::move(seen);
  }

  static Subgroup trivial(const FiniteAbelianGroup& parent) { return {parent, {}}; }
  static Subgroup whole(const FiniteAbelianGroup& parent) {
    std::vector<GroupElement> gens;
    for (std::size_t i = 0; i < parent.rank(); ++i) gens.push_back(parent.unit(i));
    return {parent, gens};
  }

  const FiniteAbelianGroup& parent() const { return parent_; }
  const std::vector<GroupElement>& generators() const { return generators_; }
  const std::vector<GroupElement>& elements() const { return elements_; }
  std::int64_t order() const { return static_cast<std::int64_t>(elements_.size()); }

  bool contains(const GroupElement& x) const {
    return membership_[static_cast<std::size_t>(parent_.index_of(x))] != 0;
  }
  bool contains(const Character& c) const { return contains(as_element(c)); }

  std::vector<Character> as_characters() const {
    std::vector<Character> out;
    out.reserve(elements_.size());
    for (const auto& e : elements_) out.push_back(as_character(e));
    return out;
  }

  /// Same parent and same element set.
  friend bool operator==(const Subgroup& a, const Subgroup& b) {
    return a.parent_ == b.parent_ && a.elements_ == b.elements_;
  }

 private:
  FiniteAbelianGroup parent_;
  std::vector<GroupElement> generators_;
  std::vector<GroupElement> elements_;
  std::vector<char> membership_;
};

/// Greedy generating set of an element set that is known to be a subgroup.
inline std::vector<GroupElement> greedy_generators(const FiniteAbelianGroup& parent,
                                                   const std::vector<GroupElement>& elements) {
  std::vector<GroupElement> gens;
  Subgroup span = Subgroup::trivial(parent);
  for (const auto& x : elements) {
    if (!span.contains(x)) {
      gens.push_back(x);
      span = Subgroup(parent, gens);
    }
  }
  return gens;
}

inline RationalPhase pairing(const FiniteAbelianGroup& group, const GroupElement& x, const Character& chi) {
  return group.pairing(x, chi);
}

/// G^⊥ = {χ : χ(g) = 0 for all g ∈ G}, a subgroup of the dual. Applied to a
/// subgroup of the dual it returns the annihilator in E under the double-dual
/// identification.
inline Subgroup annihilator(const Subgroup& g) {
  const FiniteAbelianGroup& e = g.parent();
  std::vector<GroupElement> members;
  for (const auto& chi : e.characters()) {
    bool kills = true;
    for (const auto& x : g.generators()) {
      if (!e.pairing(x, chi).is_zero()) {
        kills = false;
        break;
      }
    }
    if (kills) members.push_back(as_element(chi));
  }
  return {e.dual(), greedy_generators(e.dual(), members)};
}

/// The evaluation functional χ ↦ χ(x) as a table indexed like `characters()`.
inline std::vector<RationalPhase> double_dual_map(const FiniteAbelianGroup& group, const GroupElement& x) {
  std::vector<RationalPhase> row;
  row.reserve(static_cast<std::size_t>(group.order()));
  for (const auto& chi : group.characters()) row.push_back(group.pairing(x, chi));
  return row;
}

/// x ↦ ev_x is injective (hence bijective onto the double dual, by order count).
inline bool verify_double_dual(const FiniteAbelianGroup& group) {
  std::set<std::vector<std::pair<std::int64_t, std::int64_t>>> rows;
  for (const auto& x : group.elements()) {
    std::vector<std::pair<std::int64_t, std::int64_t>> key;
    for (const auto& p : double_dual_map(group, x)) key.emplace_back(p.numerator(), p.denominator());
    if (!rows.insert(std::move(key)).second) return false;
  }
  return static_cast<std::int64_t>(rows.size()) == group.order();
}

/// One representative per coset of G in E, the lexicographic minimum of its
/// coset, listed in increasing order.
inline std::vector<GroupElement> coset_representatives(const FiniteAbelianGroup& e, const Subgroup& g) {
  if (!(g.parent() == e)) throw StructuralError("coset_representatives: subgroup of a different group");
  std::vector<char> covered(static_cast<std::size_t>(e.order()), 0);
  std::vector<GroupElement> reps;
  for (std::int64_t i = 0; i < e.order(); ++i) {
    if (covered[static_cast<std::size_t>(i)]) continue;
    GroupElement x = e.element_at(i);
    reps.push_back(x);
    for (const auto& h : g.elements()) covered[static_cast<std::size_t>(e.index_of(e.add(x, h)))] = 1;
  }
  return reps;
}

/// E/G realized on lexicographically minimal coset representatives, with the
/// projection q : E → E/G. Coset a has representative `representative(a)`;
/// the zero coset has index 0.
class QuotientGroup {
 public:
  QuotientGroup(FiniteAbelianGroup parent, Subgroup kernel)
      : parent_(std::move(parent)), kernel_(std::move(kernel)) {
    if (!(kernel_.parent() == parent_)) throw StructuralError("quotient: subgroup of a different group");
    reps_ = coset_representatives(parent_, kernel_);
    projection_.assign(static_cast<std::size_t>(parent_.order()), -1);
    for (std::size_t a = 0; a < reps_.size(); ++a) {
      for (const auto& h : kernel_.elements()) {
        projection_[static_cast<std::size_t>(parent_.index_of(parent_.add(reps_[a], h)))] = static_cast<int>(a);
      }
    }
  }

  const FiniteAbelianGroup& parent() const { return parent_; }
  const Subgroup& kernel() const { return kernel_; }
  std::int64_t order() const { return static_cast<std::int64_t>(reps_.size()); }
  const std::vector<GroupElement>& representatives() const { return reps_; }
  const GroupElement& representative(int a) const { return reps_.at(static_cast<std::size_t>(a)); }

  int project(const GroupElement& x) const { return projection_[static_cast<std::size_t>(parent_.index_of(x))]; }
  int project(const Character& c) const { return project(as_element(c)); }

  int add(int a, int b) const { return project(parent_.add(representative(a), representative(b))); }
  int negate(int a) const { return project(parent_.negate(representative(a))); }
  int zero() const { return 0; }

  int element_order(int a) const {
    int k = 1;
    for (int acc = a; acc != 0; acc = add(acc, a)) ++k;
    return a == 0 ? 1 : k;
  }

  /// An isomorphic product of cyclic groups together with the coset indices
  /// of its standard generators. Found by search over maximal-order elements
  /// whose cyclic subgroups meet the span so far trivially.
  struct CyclicStructure {
    FiniteAbelianGroup group;
    std::vector<int> generators;
  };

  CyclicStructure cyclic_structure() const {
    if (order() == 1) return {FiniteAbelianGroup({1}), {0}};
    std::vector<int> chosen;
    std::vector<char> span(static_cast<std::size_t>(order()), 0);
    span[0] = 1;
    if (!search(chosen, span)) throw InternalConsistencyError("quotient: no cyclic decomposition found");
    std::vector<int> orders;
    for (int a : chosen) orders.push_back(element_order(a));
    return {FiniteAbelianGroup(orders), chosen};
  }

  /// Coordinates of coset a in `cyclic_structure()`.
  GroupElement to_cyclic(int a, const CyclicStructure& cs) const {
    for (std::int64_t i = 0; i < cs.group.order(); ++i) {
      Residues r = cs.group.residues_at(i);
      int acc = 0;
      for (std::size_t j = 0; j < r.size(); ++j) {
        for (int k = 0; k < r[j]; ++k) acc = add(acc, cs.generators[j]);
      }
      if (acc == a) return {r};
    }
    throw InternalConsistencyError("quotient: coset not in cyclic span");
  }

 private:
  bool search(std::vector<int>& chosen, std::vector<char>& span) const {
    const auto covered = std::count(span.begin(), span.end(), 1);
    if (covered == order()) return true;
    int best = 0;
    for (int a = 1; a < order(); ++a) {
      if (!span[static_cast<std::size_t>(a)]) best = std::max(best, element_order(a));
    }
    for (int target = best; target >= 2; --target) {
      for (int a = 1; a < order(); ++a) {
        if (span[static_cast<std::size_t>(a)] || element_order(a) != target) continue;
        bool trivial_meet = true;
        for (int m = a; m != 0; m = add(m, a)) {
          if (span[static_cast<std::size_t>(m)]) {
            trivial_meet = false;
            break;
          }
        }
        if (!trivial_meet) continue;
        std::vector<char> next(span.size(), 0);
        for (int s = 0; s < order(); ++s) {
          if (!span[static_cast<std::size_t>(s)]) continue;
          int m = s;
          for (int k = 0; k < target; ++k) {
            next[static_cast<std::size_t>(m)] = 1;
            m = add(m, a);
          }
        }
        chosen.push_back(a);
        if (search(chosen, next)) {
          span = std::move(next);
          return true;
        }
        chosen.pop_back();
      }
    }
    return false;
  }

  FiniteAbelianGroup parent_;
  Subgroup kernel_;
  std::vector<GroupElement> reps_;
  std::vector<int> projection_;
};

inline QuotientGroup quotient_group(const FiniteAbelianGroup& e, const Subgroup& g) { return {e, g}; }

/// Every subgroup of E, each once, ordered by (order, element list).
inline std::vector<Subgroup> all_subgroups(const FiniteAbelianGroup& e) {
  std::map<std::vector<GroupElement>, Subgroup> found;
  std::vector<Subgroup> queue{Subgroup::trivial(e)};
  found.emplace(queue.front().elements(), queue.front());
  while (!queue.empty()) {
    Subgroup s = queue.back();
    queue.pop_back();
    for (const auto& x : e.elements()) {
      if (s.contains(x)) continue;
      std::vector<GroupElement> gens = s.generators();
      gens.push_back(x);
      Subgroup t(e, gens);
      if (found.emplace(t.elements(), t).second) queue.push_back(t);
    }
  }
  std::vector<Subgroup> out;
  for (auto& [key, s] : found) out.push_back(s);
  std::stable_sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) { return a.order() < b.order(); });
  return out;
}

/// All cyclic-factor shapes (n_1 ≥ n_2 ≥ … ≥ 2) with product ≤ max_order,
/// plus the trivial group Z1.
inline std::vector<FiniteAbelianGroup> groups_up_to_order(int max_order) {
  std::vector<FiniteAbelianGroup> out{FiniteAbelianGroup({1})};
  std::vector<int> shape;
  auto rec = [&](auto&& self, int remaining, int cap) -> void {
    for (int n = std::min(remaining, cap); n >= 2; --n) {
      shape.push_back(n);
      out.emplace_back(shape);
      self(self, remaining / n, n);
      shape.pop_back();
    }
  };
  rec(rec, max_order, max_order);
  std::stable_sort(out.begin(), out.end(),
                   [](const FiniteAbelianGroup& a, const FiniteAbelianGroup& b) { return a.order() < b.order(); });
  return out;
}

// ---------------------------------------------------------------------------
// Grammar: groups `Z4xZ2`; subgroups `[(2,0),(0,1)]`, `[2]`, `[]`.

inline FiniteAbelianGroup parse_group(std::string_view spec) {
  std::vector<int> orders;
  std::size_t pos = 0;
  auto fail = [&](const std::string& why) -> void {
    throw StructuralError("group spec '" + std::string(spec) + "' at position " + std::to_string(pos) + ": " + why);
  };
  if (spec.empty()) fail("empty spec");
  while (true) {
    if (pos >= spec.size() || spec[pos] != 'Z') fail("expected 'Z'");
    ++pos;
    const std::size_t start = pos;
    long long n = 0;
    while (pos < spec.size() && spec[pos] >= '0' && spec[pos] <= '9') {
      n = n * 10 + (spec[pos] - '0');
      if (n > kMaxEnumeratedOrder) fail("cyclic order too large");
      ++pos;
    }
    if (pos == start) fail("expected cyclic order digits");
    if (n < 1) {
      pos = start;
      fail("cyclic order must be >= 1");
    }
    orders.push_back(static_cast<int>(n));
    if (pos == spec.size()) break;
    if (spec[pos] != 'x') fail("expected 'x' between factors");
    ++pos;
  }
  return FiniteAbelianGroup(orders);
}

inline Subgroup parse_subgroup(const FiniteAbelianGroup& group, std::string_view spec) {
  std::size_t pos = 0;
  auto fail = [&](const std::string& why) -> void {
    throw StructuralError("subgroup spec '" + std::string(spec) + "' at position " + std::to_string(pos) + ": " + why);
  };
  auto skip_ws = [&] {
    while (pos < spec.size() && spec[pos] == ' ') ++pos;
  };
  auto parse_int = [&]() -> long long {
    skip_ws();
    bool neg = false;
    if (pos < spec.size() && spec[pos] == '-') {
      neg = true;
      ++pos;
    }
    const std::size_t start = pos;
    long long v = 0;
    while (pos < spec.size() && spec[pos] >= '0' && spec[pos] <= '9') {
      v = v * 10 + (spec[pos] - '0');
      if (v > kMaxEnumeratedOrder) fail("residue too large");
      ++pos;
    }
    if (pos == start) fail("expected integer");
    skip_ws();
    return neg ? -v : v;
  };
  std::vector<GroupElement> gens;
  skip_ws();
  if (pos >= spec.size() || spec[pos] != '[') fail("expected '['");
  ++pos;
  skip_ws();
  if (pos < spec.size() && spec[pos] == ']') {
    ++pos;
  } else {
    while (true) {
      skip_ws();
      Residues r;
      if (pos < spec.size() && spec[pos] == '(') {
        ++pos;
        while (true) {
          r.push_back(static_cast<int>(parse_int()));
          if (pos < spec.size() && spec[pos] == ',') {
            ++pos;
            continue;
          }
          if (pos < spec.size() && spec[pos] == ')') {
            ++pos;
            break;
          }
          fail("expected ',' or ')'");
        }
      } else {
        r.push_back(static_cast<int>(parse_int()));
      }
      if (r.size() != group.rank()) {
        fail("generator has " + std::to_string(r.size()) + " residues, group " + group.to_string() + " has " +
             std::to_string(group.rank()) + " factors");
      }
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i] < 0 || r[i] >= group.cyclic_orders()[i]) {
          fail("residue " + std::to_string(r[i]) + " not in Z" + std::to_string(group.cyclic_orders()[i]));
        }
      }
      gens.push_back({r});
      skip_ws();
      if (pos < spec.size() && spec[pos] == ',') {
        ++pos;
        continue;
      }
      if (pos < spec.size() && spec[pos] == ']') {
        ++pos;
        break;
      }
      fail("expected ',' or ']'");
    }
  }
  skip_ws();
  if (pos != spec.size()) fail("trailing characters");
  return {group, gens};
}

inline std::string format_residues(const Residues& r) {
  std::string s = "(";
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(r[i]);
  }
  return s + ")";
}

inline std::string format_subgroup(const Subgroup& g) {
  std::string s = "[";
  for (std::size_t i = 0; i < g.generators().size(); ++i) {
    if (i) s += ",";
    s += format_residues(g.generators()[i].residues);
  }
  return s + "]";
}

}  // namespace heislab
