// Joint eigenspaces H_{η,a} of the commuting pair (G, G^⊥) inside any
// Heisenberg action, and the permutation of those eigenspaces by the group.
//
// Index conventions: Ĝ is realized as Ê/G^⊥ (restriction to G), A as E/G.
// Both are QuotientGroup objects, so η and a are coset indices; η(g) is
// evaluated through the lexicographically minimal representative character.
#pragma once

#include "heislab/action.hpp"

#include <nlohmann/json.hpp>

#include <set>
#include <sstream>

namespace heislab {

/// E, G and the derived groups G^⊥, A = E/G, Ĝ = Ê/G^⊥.
class SubgroupContext {
 public:
  explicit SubgroupContext(Subgroup g)
      : group_(g.parent()),
        g_(g),
        g_perp_(annihilator(g)),
        a_(group_, g),
        g_hat_(group_.dual(), g_perp_) {}

  const FiniteAbelianGroup& group() const { return group_; }
  const Subgroup& subgroup() const { return g_; }
  const Subgroup& annihilator_subgroup() const { return g_perp_; }
  const QuotientGroup& quotient() const { return a_; }
  const QuotientGroup& dual_of_subgroup() const { return g_hat_; }

  /// |Ĝ × A| = |E|.
  int index_count() const { return static_cast<int>(g_hat_.order() * a_.order()); }
  int flat(int eta, int a) const { return eta * static_cast<int>(a_.order()) + a; }
  std::pair<int, int> unflat(int i) const {
    return {i / static_cast<int>(a_.order()), i % static_cast<int>(a_.order())};
  }

  /// η(g) for g ∈ G.
  RationalPhase eta_at(int eta, const GroupElement& g) const {
    return group_.pairing(g, as_character(g_hat_.representative(eta)));
  }
  /// ξ(a) for ξ ∈ G^⊥; independent of the coset representative.
  RationalPhase xi_at(const Character& xi, int a) const { return group_.pairing(a_.representative(a), xi); }

  /// ĵ(χ): restriction of χ to G, as an index in Ĝ.
  int restrict_character(const Character& chi) const { return g_hat_.project(chi); }
  /// q(x).
  int project(const GroupElement& x) const { return a_.project(x); }

 private:
  FiniteAbelianGroup group_;
  Subgroup g_;
  Subgroup g_perp_;
  QuotientGroup a_;
  QuotientGroup g_hat_;
};

struct EigenspaceIndex {
  int eta = 0;
  int a = 0;
  friend bool operator==(const EigenspaceIndex&, const EigenspaceIndex&) = default;
};

/// (η, a) ↦ (η − ĵ(χ), a + q(x)): where ρ(T_x M_χ) sends H_{η,a}.
inline EigenspaceIndex index_action(const SubgroupContext& ctx, const GroupElement& x, const Character& chi,
                                    EigenspaceIndex idx) {
  const QuotientGroup& gh = ctx.dual_of_subgroup();
  const QuotientGroup& a = ctx.quotient();
  return {gh.add(idx.eta, gh.negate(ctx.restrict_character(chi))), a.add(idx.a, ctx.project(x))};
}

inline constexpr double kRankCutoff = 1e-8;

struct Eigenspace {
  EigenspaceIndex index;
  ComplexMatrix projector;
  int rank = 0;
  ComplexMatrix basis;  // orthonormal columns, deterministic order
};

class EigenspaceDecomposition {
 public:
  EigenspaceDecomposition(SubgroupContext ctx, Eigen::Index dim, std::vector<Eigenspace> spaces)
      : ctx_(std::move(ctx)), dim_(dim), spaces_(std::move(spaces)) {}

  const SubgroupContext& context() const { return ctx_; }
  Eigen::Index space_dim() const { return dim_; }
  const std::vector<Eigenspace>& spaces() const { return spaces_; }
  const Eigenspace& at(EigenspaceIndex idx) const {
    return spaces_[static_cast<std::size_t>(ctx_.flat(idx.eta, idx.a))];
  }

  /// ‖Σ P − I‖_max.
  double completeness_defect() const {
    ComplexMatrix sum = ComplexMatrix::Zero(dim_, dim_);
    for (const auto& s : spaces_) sum += s.projector;
    return norm_max(sum - identity(dim_));
  }
  /// max over P of ‖P² − P‖ and ‖P* − P‖.
  double projector_defect() const {
    double d = 0.0;
    for (const auto& s : spaces_) {
      d = std::max(d, norm_max(s.projector * s.projector - s.projector));
      d = std::max(d, norm_max(s.projector.adjoint() - s.projector));
    }
    return d;
  }
  /// max over distinct pairs of ‖P P'‖_max.
  double orthogonality_defect() const {
    double d = 0.0;
    for (std::size_t i = 0; i < spaces_.size(); ++i) {
      for (std::size_t j = 0; j < spaces_.size(); ++j) {
        if (i != j) d = std::max(d, norm_max(spaces_[i].projector * spaces_[j].projector));
      }
    }
    return d;
  }
  int total_rank() const {
    int t = 0;
    for (const auto& s : spaces_) t += s.rank;
    return t;
  }
  bool equal_ranks() const {
    for (const auto& s : spaces_) {
      if (s.rank != spaces_.front().rank) return false;
    }
    return true;
  }
  /// Reasons this decomposition cannot come from a valid action.
  std::vector<std::string> flags() const {
    std::vector<std::string> out;
    if (!equal_ranks()) out.push_back("eigenspace ranks differ");
    if (total_rank() != dim_) out.push_back("eigenspace ranks do not sum to the space dimension");
    for (const auto& s : spaces_) {
      if (s.rank == 0 && dim_ > 0) {
        out.push_back("eigenspace (" + std::to_string(s.index.eta) + "," + std::to_string(s.index.a) + ") is empty");
        break;
      }
    }
    return out;
  }

 private:
  SubgroupContext ctx_;
  Eigen::Index dim_;
  std::vector<Eigenspace> spaces_;
};

namespace detail {

/// ρ(T_g) ρ(M_ξ) for every (g, ξ) ∈ G × G^⊥, g-major.
inline std::vector<ComplexMatrix> averaging_terms(const HeisenbergAction& rho, const SubgroupContext& ctx) {
  std::vector<ComplexMatrix> terms;
  for (const auto& g : ctx.subgroup().elements()) {
    for (const auto& xi : ctx.annihilator_subgroup().elements()) terms.push_back(rho.U(g) * rho.V(as_character(xi)));
  }
  return terms;
}

inline ComplexMatrix average(const std::vector<ComplexMatrix>& terms, const SubgroupContext& ctx, Eigen::Index dim,
                             EigenspaceIndex idx) {
  ComplexMatrix p = ComplexMatrix::Zero(dim, dim);
  std::size_t k = 0;
  for (const auto& g : ctx.subgroup().elements()) {
    const RationalPhase eg = ctx.eta_at(idx.eta, g);
    for (const auto& xi : ctx.annihilator_subgroup().elements()) {
      const RationalPhase phase = -(eg + ctx.xi_at(as_character(xi), idx.a));
      p += phase.to_complex() * terms[k++];
    }
  }
  return p / static_cast<double>(terms.size());
}

inline void require_valid(const HeisenbergAction& rho, const SubgroupContext& ctx) {
  if (!(rho.group() == ctx.group())) throw StructuralError("action and subgroup live on different groups");
  if (auto violation = rho.check_relations(1e-10)) throw HypothesisViolation(*violation);
}

inline EigenspaceDecomposition decompose_unchecked(const HeisenbergAction& rho, const SubgroupContext& ctx) {
  const auto terms = averaging_terms(rho, ctx);
  std::vector<Eigenspace> spaces;
  for (int i = 0; i < ctx.index_count(); ++i) {
    auto [eta, a] = ctx.unflat(i);
    Eigenspace s;
    s.index = {eta, a};
    s.projector = average(terms, ctx, rho.dim(), s.index);
    s.rank = numerical_rank(s.projector, kRankCutoff);
    s.basis = projector_range_basis(s.projector);
    spaces.push_back(std::move(s));
  }
  return {ctx, rho.dim(), std::move(spaces)};
}

}  // namespace detail

/// P_{η,a} = (1/|G||G^⊥|) Σ_{g,ξ} e^{−2πi(η(g)+ξ(a))} ρ(T_g) ρ(M_ξ).
inline ComplexMatrix eigenprojector(const HeisenbergAction& rho, const SubgroupContext& ctx, EigenspaceIndex idx) {
  detail::require_valid(rho, ctx);
  return detail::average(detail::averaging_terms(rho, ctx), ctx, rho.dim(), idx);
}

inline EigenspaceDecomposition decompose(const HeisenbergAction& rho, const SubgroupContext& ctx) {
  detail::require_valid(rho, ctx);
  return detail::decompose_unchecked(rho, ctx);
}

/// Generators of E × Ê as (x, χ) pairs: (e_i, 0), (0, e_i), and (e_i, e_i).
inline std::vector<std::pair<GroupElement, Character>> generating_pairs(const FiniteAbelianGroup& e) {
  std::vector<std::pair<GroupElement, Character>> out;
  for (std::size_t i = 0; i < e.rank(); ++i) out.emplace_back(e.unit(i), e.zero_character());
  for (std::size_t i = 0; i < e.rank(); ++i) out.emplace_back(e.zero(), e.unit_character(i));
  for (std::size_t i = 0; i < e.rank(); ++i) out.emplace_back(e.unit(i), e.unit_character(i));
  return out;
}

/// Orbit of (0,0) under index_action of the generating pairs covers Ĝ × A.
inline bool index_action_transitive(const SubgroupContext& ctx) {
  std::vector<char> seen(static_cast<std::size_t>(ctx.index_count()), 0);
  std::vector<EigenspaceIndex> frontier{{0, 0}};
  seen[0] = 1;
  const auto gens = generating_pairs(ctx.group());
  while (!frontier.empty()) {
    EigenspaceIndex idx = frontier.back();
    frontier.pop_back();
    for (const auto& [x, chi] : gens) {
      EigenspaceIndex next = index_action(ctx, x, chi, idx);
      auto& s = seen[static_cast<std::size_t>(ctx.flat(next.eta, next.a))];
      if (!s) {
        s = 1;
        frontier.push_back(next);
      }
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

struct PermutationReport {
  bool pass = true;
  double max_defect = 0.0;
  bool equal_ranks = true;
  bool transitive = true;
  std::vector<std::string> failures;
  // Equal ranks follow from transitivity, and nonvanishing of every
  // eigenspace from equal ranks; the checks run in that order.
  std::string note = "transitivity checked before rank equality and nonvanishing";
};

/// ρ(T_xM_χ) P_{η,a} ρ(T_xM_χ)* = P_{index_action(x,χ,(η,a))} for generating
/// (x, χ) and every index; equal ranks; transitive index orbit. Does not
/// reject invalid actions: violations appear in the report.
inline PermutationReport verify_subspace_permutation(const HeisenbergAction& rho, const SubgroupContext& ctx,
                                                     double tol = 1e-9) {
  PermutationReport report;
  const EigenspaceDecomposition dec = detail::decompose_unchecked(rho, ctx);
  report.transitive = index_action_transitive(ctx);
  if (!report.transitive) report.failures.push_back("index action is not transitive");
  for (const auto& [x, chi] : generating_pairs(ctx.group())) {
    const ComplexMatrix g = rho.U(x) * rho.V(chi);
    for (const auto& s : dec.spaces()) {
      const EigenspaceIndex target = index_action(ctx, x, chi, s.index);
      const double d = norm_max(g * s.projector * g.adjoint() - dec.at(target).projector);
      report.max_defect = std::max(report.max_defect, d);
      if (d > tol) {
        std::ostringstream os;
        os << "conjugation by x=" << format_residues(x.residues) << " chi=" << format_residues(chi.residues)
           << " does not carry (" << s.index.eta << "," << s.index.a << ") to (" << target.eta << "," << target.a
           << "): defect " << d;
        report.failures.push_back(os.str());
      }
    }
  }
  report.equal_ranks = dec.equal_ranks();
  for (const auto& f : dec.flags()) report.failures.push_back(f);
  report.pass = report.failures.empty();
  return report;
}

inline nlohmann::json to_json(const EigenspaceDecomposition& dec, bool include_bases = false) {
  nlohmann::json spaces = nlohmann::json::array();
  for (const auto& s : dec.spaces()) {
    nlohmann::json j{{"index", {{"eta", s.index.eta}, {"a", s.index.a}}}, {"rank", s.rank}};
    if (include_bases) {
      nlohmann::json cols = nlohmann::json::array();
      for (Eigen::Index c = 0; c < s.basis.cols(); ++c) {
        nlohmann::json col = nlohmann::json::array();
        for (Eigen::Index r = 0; r < s.basis.rows(); ++r) col.push_back({s.basis(r, c).real(), s.basis(r, c).imag()});
        cols.push_back(col);
      }
      j["basis"] = cols;
    }
    spaces.push_back(j);
  }
  return {{"space_dim", dec.space_dim()},
          {"subgroup_order", dec.context().subgroup().order()},
          {"eigenspaces", spaces},
          {"completeness_defect", dec.completeness_defect()}};
}

}  // namespace heislab
