// The Heisenberg group of a finite abelian group E and its canonical
// representation on L²(E) (counting measure, basis e_u indexed like
// FiniteAbelianGroup::elements()).
#pragma once

#include "heislab/abelian.hpp"

#include <ostream>

namespace heislab {

/// (t, x, χ) standing for e^{2πit} T_x M_χ.
struct HeisenbergElement {
  RationalPhase t;
  GroupElement x;
  Character chi;

  friend bool operator==(const HeisenbergElement&, const HeisenbergElement&) = default;
};

inline HeisenbergElement heisenberg_identity(const FiniteAbelianGroup& e) {
  return {RationalPhase{}, e.zero(), e.zero_character()};
}

/// (t,x,χ)(t',x',χ') = (t + t' + χ(x'), x + x', χ + χ'). The twist comes from
/// M_χ T_{x'} = e^{2πiχ(x')} T_{x'} M_χ.
inline HeisenbergElement multiply(const FiniteAbelianGroup& e, const HeisenbergElement& a, const HeisenbergElement& b) {
  return {a.t + b.t + e.pairing(b.x, a.chi), e.add(a.x, b.x), e.add(a.chi, b.chi)};
}

inline HeisenbergElement inverse(const FiniteAbelianGroup& e, const HeisenbergElement& a) {
  // (t,x,χ)(s,−x,−χ) = (t + s + χ(−x), 0, 0) = identity ⇒ s = −t + χ(x).
  return {-a.t + e.pairing(a.x, a.chi), e.negate(a.x), e.negate(a.chi)};
}

/// T_x f(u) = f(u − x): the permutation e_u ↦ e_{u+x}.
inline ComplexMatrix translation_matrix(const FiniteAbelianGroup& e, const GroupElement& x) {
  e.check(x.residues);
  const auto n = static_cast<Eigen::Index>(e.order());
  ComplexMatrix t = ComplexMatrix::Zero(n, n);
  for (Eigen::Index u = 0; u < n; ++u) {
    const auto target = e.index_of(e.add(e.element_at(u), x));
    t(static_cast<Eigen::Index>(target), u) = 1.0;
  }
  return t;
}

/// M_χ f(u) = e^{2πiχ(u)} f(u).
inline ComplexMatrix modulation_matrix(const FiniteAbelianGroup& e, const Character& chi) {
  e.check(chi.residues);
  const auto n = static_cast<Eigen::Index>(e.order());
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (Eigen::Index u = 0; u < n; ++u) m(u, u) = e.pairing(e.element_at(u), chi).to_complex();
  return m;
}

inline ComplexMatrix heisenberg_matrix(const FiniteAbelianGroup& e, const HeisenbergElement& h) {
  return h.t.to_complex() * (translation_matrix(e, h.x) * modulation_matrix(e, h.chi));
}

/// Phase of the scalar T_x M_χ T_x^{-1} M_χ^{-1}; always −χ(x) mod 1.
/// Throws InternalConsistencyError if the commutator is not scalar.
inline RationalPhase commutator_check(const FiniteAbelianGroup& e, const GroupElement& x, const Character& chi,
                                      double tol = 1e-10, double* defect = nullptr) {
  const ComplexMatrix t = translation_matrix(e, x);
  const ComplexMatrix m = modulation_matrix(e, chi);
  const ComplexMatrix c = t * m * t.adjoint() * m.adjoint();
  const RationalPhase expected = -e.pairing(x, chi);
  const double d = norm_max(c - expected.to_complex() * identity(c.rows()));
  if (defect) *defect = d;
  if (d > tol) {
    const cplx scalar = c(0, 0);
    const double off_scalar = norm_max(c - scalar * identity(c.rows()));
    if (off_scalar > tol) throw InternalConsistencyError("commutator is not a scalar matrix");
    throw InternalConsistencyError("commutator scalar differs from e^{-2πiχ(x)}");
  }
  return expected;
}

/// Unit-normalized indicator of G in L²(E).
inline ComplexVector delta_G(const Subgroup& g) {
  const FiniteAbelianGroup& e = g.parent();
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(e.order()));
  const double w = 1.0 / std::sqrt(static_cast<double>(g.order()));
  for (const auto& x : g.elements()) v(static_cast<Eigen::Index>(e.index_of(x))) = w;
  return v;
}

/// One row per matrix row, `re,im` pairs separated by commas.
inline void write_matrix_csv(std::ostream& os, const ComplexMatrix& a) {
  os.precision(17);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (j) os << ",";
      os << a(i, j).real() << "," << a(i, j).imag();
    }
    os << "\n";
  }
}

}  // namespace heislab
