// Representations of the finite Heisenberg group given by generator images.
#pragma once

#include "heislab/heisenberg.hpp"

#include <optional>
#include <string>

namespace heislab {

/// A unitary action of the Heisenberg group of E on C^dim, given by U(e_i)
/// and V(e_i) for the standard generators of E and of its dual. The center
/// is assumed to act by e^{2πit}, which is equivalent to
///   V(χ) U(x) = e^{2πiχ(x)} U(x) V(χ).
/// The full maps U(x), V(χ) are materialized from generator powers.
class HeisenbergAction {
 public:
  /// Validating constructor; throws HypothesisViolation on the first
  /// violated relation.
  HeisenbergAction(FiniteAbelianGroup group, std::vector<ComplexMatrix> u_generators,
                   std::vector<ComplexMatrix> v_generators, double tol = 1e-10)
      : HeisenbergAction(unchecked(std::move(group), std::move(u_generators), std::move(v_generators))) {
    if (auto violation = check_relations(tol)) throw HypothesisViolation(*violation);
  }

  /// Builds the maps without checking any relation (negative controls).
  static HeisenbergAction unchecked(FiniteAbelianGroup group, std::vector<ComplexMatrix> u_generators,
                                    std::vector<ComplexMatrix> v_generators) {
    return HeisenbergAction(std::move(group), std::move(u_generators), std::move(v_generators), Unchecked{});
  }

  const FiniteAbelianGroup& group() const { return group_; }
  Eigen::Index dim() const { return dim_; }
  const std::vector<ComplexMatrix>& u_generators() const { return u_gen_; }
  const std::vector<ComplexMatrix>& v_generators() const { return v_gen_; }

  const ComplexMatrix& U(const GroupElement& x) const { return u_[static_cast<std::size_t>(group_.index_of(x))]; }
  const ComplexMatrix& V(const Character& chi) const { return v_[static_cast<std::size_t>(group_.index_of(chi))]; }

  /// ρ(e^{2πit} T_x M_χ).
  ComplexMatrix apply(const HeisenbergElement& h) const { return h.t.to_complex() * (U(h.x) * V(h.chi)); }

  /// Every generator image: U(e_i) then V(e_i).
  std::vector<ComplexMatrix> generators() const {
    std::vector<ComplexMatrix> all = u_gen_;
    all.insert(all.end(), v_gen_.begin(), v_gen_.end());
    return all;
  }

  /// Unitarity, U and V homomorphisms on generators, and the commutation
  /// relation on generator pairs. Returns a diagnostic naming the first
  /// violated relation, or nothing.
  std::optional<std::string> check_relations(double tol = 1e-10) const {
    const std::size_t r = group_.rank();
    const ComplexMatrix id = identity(dim_);
    for (std::size_t i = 0; i < r; ++i) {
      const int n = group_.cyclic_orders()[i];
      if (unitarity_defect(u_gen_[i]) > tol) return "U(e_" + std::to_string(i) + ") is not unitary";
      if (unitarity_defect(v_gen_[i]) > tol) return "V(e_" + std::to_string(i) + ") is not unitary";
      if (norm_max(power(u_gen_[i], n) - id) > tol) {
        return "U(e_" + std::to_string(i) + ")^" + std::to_string(n) + " != I";
      }
      if (norm_max(power(v_gen_[i], n) - id) > tol) {
        return "V(e_" + std::to_string(i) + ")^" + std::to_string(n) + " != I";
      }
      for (std::size_t j = 0; j < r; ++j) {
        if (j > i) {
          if (norm_max(u_gen_[i] * u_gen_[j] - u_gen_[j] * u_gen_[i]) > tol) {
            return "U(e_" + std::to_string(i) + ") and U(e_" + std::to_string(j) + ") do not commute";
          }
          if (norm_max(v_gen_[i] * v_gen_[j] - v_gen_[j] * v_gen_[i]) > tol) {
            return "V(e_" + std::to_string(i) + ") and V(e_" + std::to_string(j) + ") do not commute";
          }
        }
        const cplx phase = group_.pairing(group_.unit(i), group_.unit_character(j)).to_complex();
        const double d = norm_max(v_gen_[j] * u_gen_[i] - phase * (u_gen_[i] * v_gen_[j]));
        if (d > tol) {
          return "commutation relation V(chi)U(x) = e^{2pi i chi(x)} U(x)V(chi) violated for x=e_" +
                 std::to_string(i) + ", chi=e_" + std::to_string(j) + " (defect " + std::to_string(d) + ")";
        }
      }
    }
    return std::nullopt;
  }

  static ComplexMatrix power(const ComplexMatrix& a, int k) {
    ComplexMatrix out = identity(a.rows());
    for (int i = 0; i < k; ++i) out = out * a;
    return out;
  }

 private:
  struct Unchecked {};

  HeisenbergAction(FiniteAbelianGroup group, std::vector<ComplexMatrix> u_generators,
                   std::vector<ComplexMatrix> v_generators, Unchecked)
      : group_(std::move(group)), u_gen_(std::move(u_generators)), v_gen_(std::move(v_generators)) {
    if (u_gen_.size() != group_.rank() || v_gen_.size() != group_.rank()) {
      throw StructuralError("action needs one U and one V generator per cyclic factor");
    }
    dim_ = u_gen_.empty() ? 0 : u_gen_.front().rows();
    for (const auto& m : generators()) {
      if (m.rows() != dim_ || m.cols() != dim_) throw StructuralError("generator matrices must all be dim x dim");
      require_finite(m, "generator");
    }
    u_ = materialize(u_gen_);
    v_ = materialize(v_gen_);
  }

  std::vector<ComplexMatrix> materialize(const std::vector<ComplexMatrix>& gens) const {
    std::vector<ComplexMatrix> out;
    out.reserve(static_cast<std::size_t>(group_.order()));
    // Lexicographic order: element i+1 differs from a lower-index element by
    // one generator step, so each map value costs one product.
    for (std::int64_t idx = 0; idx < group_.order(); ++idx) {
      Residues r = group_.residues_at(idx);
      std::size_t f = r.size();
      while (f-- > 0 && r[f] == 0) {
      }
      if (f == static_cast<std::size_t>(-1)) {
        out.push_back(identity(dim_));
        continue;
      }
      Residues prev = r;
      prev[f] -= 1;
      out.push_back(gens[f] * out[static_cast<std::size_t>(group_.index_of(prev))]);
    }
    return out;
  }

  FiniteAbelianGroup group_;
  std::vector<ComplexMatrix> u_gen_;
  std::vector<ComplexMatrix> v_gen_;
  Eigen::Index dim_ = 0;
  std::vector<ComplexMatrix> u_;
  std::vector<ComplexMatrix> v_;
};

/// The canonical representation on L²(E).
inline HeisenbergAction canonical_action(const FiniteAbelianGroup& e) {
  std::vector<ComplexMatrix> u, v;
  for (std::size_t i = 0; i < e.rank(); ++i) {
    u.push_back(translation_matrix(e, e.unit(i)));
    v.push_back(modulation_matrix(e, e.unit_character(i)));
  }
  return {e, u, v};
}

/// ρ ↦ X ρ X*.
inline HeisenbergAction conjugate(const HeisenbergAction& rho, const ComplexMatrix& x) {
  std::vector<ComplexMatrix> u, v;
  for (const auto& g : rho.u_generators()) u.push_back(x * g * x.adjoint());
  for (const auto& g : rho.v_generators()) v.push_back(x * g * x.adjoint());
  return HeisenbergAction::unchecked(rho.group(), u, v);
}

inline HeisenbergAction direct_sum(const HeisenbergAction& a, const HeisenbergAction& b) {
  if (!(a.group() == b.group())) throw StructuralError("direct_sum: actions of different groups");
  std::vector<ComplexMatrix> u, v;
  for (std::size_t i = 0; i < a.group().rank(); ++i) {
    u.push_back(direct_sum(a.u_generators()[i], b.u_generators()[i]));
    v.push_back(direct_sum(a.v_generators()[i], b.v_generators()[i]));
  }
  return HeisenbergAction::unchecked(a.group(), u, v);
}

/// m copies of the canonical representation conjugated by a Haar unitary.
inline HeisenbergAction conjugated_copies(const FiniteAbelianGroup& e, int copies, std::uint64_t seed) {
  if (copies < 1) throw StructuralError("conjugated_copies: need at least one copy");
  HeisenbergAction rho = canonical_action(e);
  for (int i = 1; i < copies; ++i) rho = direct_sum(rho, canonical_action(e));
  return conjugate(rho, haar_random_unitary(rho.dim(), seed));
}

}  // namespace heislab
