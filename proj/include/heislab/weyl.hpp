// Periodic grid model of L²(Rⁿ): Weyl operators, the Fourier–Wigner
// transform, twisted convolution and Weyl quantization.
//
// Grid: N points per axis (N even), step h, positions u_j = (j − N/2) h on
// the window [−Nh/2, Nh/2). Frequencies live on the dual grid with step
// 1/(Nh). A phase-space point k = (x, y) is stored by its integer steps
// x = s h, y = m/(Nh) with s, m ∈ [−N/2, N/2); everything on the grid is
// periodic, and all phases are exact rationals with denominator 2N.
//
// Spatial functions are sample vectors with inner product hⁿ Σ f ḡ. Operators
// (W_k, T, M) have the same matrix in samples and in the orthonormal
// coordinates h^{n/2}·samples; intertwiners are returned in orthonormal
// coordinates so that isometry means W*W = I.
#pragma once

#include "heislab/numerics.hpp"

#include <array>
#include <optional>
#include <string>
#include <ostream>

namespace heislab {

struct GridSpec {
  int n = 1;
  int N = 128;
  double h = 1.0 / 8.0;

  void validate() const {
    if (n != 1 && n != 2) throw StructuralError("grid dimension n must be 1 or 2");
    if (N < 2 || N % 2 != 0) throw StructuralError("grid size N must be even and >= 2, got " + std::to_string(N));
    if (!(h > 0.0) || !std::isfinite(h)) throw StructuralError("grid step h must be positive");
  }

  int center() const { return N / 2; }
  /// Nⁿ.
  Eigen::Index points() const { return n == 1 ? N : static_cast<Eigen::Index>(N) * N; }
  /// N²ⁿ.
  Eigen::Index phase_points() const { return points() * points(); }
  double half_window() const { return N * h / 2.0; }
  double frequency_step() const { return 1.0 / (N * h); }
  double spatial_weight() const { return std::pow(h, n); }
  /// hⁿ·(1/(Nh))ⁿ = (1/N)ⁿ.
  double phase_weight() const { return std::pow(1.0 / N, n); }

  /// Centered integer coordinate in [−N/2, N/2).
  int wrap(long long v) const {
    long long r = (v + center()) % N;
    if (r < 0) r += N;
    return static_cast<int>(r - center());
  }

  /// Per-axis centered coordinates of a flat spatial index (last axis fastest).
  std::array<int, 2> coords(Eigen::Index flat) const {
    if (n == 1) return {static_cast<int>(flat) - center(), 0};
    return {static_cast<int>(flat / N) - center(), static_cast<int>(flat % N) - center()};
  }
  Eigen::Index flat(const std::array<int, 2>& c) const {
    const Eigen::Index a = wrap(c[0]) + center();
    if (n == 1) return a;
    return a * N + (wrap(c[1]) + center());
  }

  double position(int centered) const { return centered * h; }

  cplx inner(const ComplexVector& f, const ComplexVector& g) const {
    check_vector(f);
    check_vector(g);
    return spatial_weight() * g.dot(f);  // Σ f ḡ
  }
  double norm(const ComplexVector& f) const { return std::sqrt(std::abs(inner(f, f))); }

  ComplexVector to_coefficients(const ComplexVector& samples) const { return std::sqrt(spatial_weight()) * samples; }
  ComplexVector to_samples(const ComplexVector& coefficients) const {
    return coefficients / std::sqrt(spatial_weight());
  }

  void check_vector(const ComplexVector& f) const {
    if (f.size() != points()) {
      throw StructuralError("vector has " + std::to_string(f.size()) + " entries, grid has " + std::to_string(points()));
    }
  }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// k = (x, y) with x = s·h, y = m/(Nh); s and m centered.
struct PhasePoint {
  std::array<int, 2> s{0, 0};
  std::array<int, 2> m{0, 0};
  friend bool operator==(const PhasePoint&, const PhasePoint&) = default;
};

inline PhasePoint phase_point(const GridSpec& grid, int s, int m) {
  return {{grid.wrap(s), 0}, {grid.wrap(m), 0}};
}

/// From real coordinates; throws if (x, y) is not on the grid.
inline PhasePoint phase_point(const GridSpec& grid, std::span<const double> x, std::span<const double> y) {
  if (x.size() != static_cast<std::size_t>(grid.n) || y.size() != static_cast<std::size_t>(grid.n)) {
    throw StructuralError("phase point has the wrong dimension");
  }
  PhasePoint k;
  for (int d = 0; d < grid.n; ++d) {
    const double sx = x[static_cast<std::size_t>(d)] / grid.h;
    const double my = y[static_cast<std::size_t>(d)] * grid.N * grid.h;
    if (std::abs(sx - std::round(sx)) > 1e-9 || std::abs(my - std::round(my)) > 1e-9) {
      throw StructuralError("phase point is off the grid (no interpolation)");
    }
    k.s[static_cast<std::size_t>(d)] = grid.wrap(std::llround(sx));
    k.m[static_cast<std::size_t>(d)] = grid.wrap(std::llround(my));
  }
  return k;
}

inline PhasePoint negate(const GridSpec& grid, const PhasePoint& k) {
  return {{grid.wrap(-k.s[0]), grid.wrap(-k.s[1])}, {grid.wrap(-k.m[0]), grid.wrap(-k.m[1])}};
}
inline PhasePoint add(const GridSpec& grid, const PhasePoint& a, const PhasePoint& b) {
  return {{grid.wrap(a.s[0] + b.s[0]), grid.wrap(a.s[1] + b.s[1])},
          {grid.wrap(a.m[0] + b.m[0]), grid.wrap(a.m[1] + b.m[1])}};
}
inline PhasePoint subtract(const GridSpec& grid, const PhasePoint& a, const PhasePoint& b) {
  return add(grid, a, negate(grid, b));
}

/// ω(k, l) = y·u − x·v.
inline double symplectic_form(const GridSpec& grid, const PhasePoint& k, const PhasePoint& l) {
  long long num = 0;
  for (int d = 0; d < grid.n; ++d) num += static_cast<long long>(k.m[d]) * l.s[d] - static_cast<long long>(k.s[d]) * l.m[d];
  return static_cast<double>(num) / grid.N;
}

/// e^{πiω(k,l)}.
inline cplx symplectic_phase(const GridSpec& grid, const PhasePoint& k, const PhasePoint& l) {
  long long num = 0;
  for (int d = 0; d < grid.n; ++d) num += static_cast<long long>(k.m[d]) * l.s[d] - static_cast<long long>(k.s[d]) * l.m[d];
  return unit_phase(num, 2LL * grid.N);
}

/// W_a W_b = e^{πiθ/N} W_{a+b} on the periodic grid (a+b wrapped). For
/// sums that stay in the window θ = N·ω(a, b).
inline long long weyl_cocycle(const GridSpec& grid, const PhasePoint& a, const PhasePoint& b) {
  const PhasePoint c = add(grid, a, b);
  long long theta = 0;
  for (int d = 0; d < grid.n; ++d) {
    theta += static_cast<long long>(a.s[d]) * a.m[d] + static_cast<long long>(b.s[d]) * b.m[d] +
             2LL * a.m[d] * b.s[d] - static_cast<long long>(c.s[d]) * c.m[d];
  }
  return theta;
}

/// A complex function on the N²ⁿ phase-space grid. Flat layout
/// index = flat(s)·Nⁿ + flat(m).
class PhaseSpaceFunction {
 public:
  explicit PhaseSpaceFunction(GridSpec grid)
      : grid_(grid), values_(ComplexVector::Zero(grid.phase_points())) {}
  PhaseSpaceFunction(GridSpec grid, ComplexVector values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.phase_points()) throw StructuralError("phase-space function has the wrong size");
  }

  const GridSpec& grid() const { return grid_; }
  const ComplexVector& values() const { return values_; }
  ComplexVector& values() { return values_; }

  Eigen::Index index(const PhasePoint& k) const { return grid_.flat(k.s) * grid_.points() + grid_.flat(k.m); }
  PhasePoint point(Eigen::Index idx) const {
    PhasePoint k;
    k.s = grid_.coords(idx / grid_.points());
    k.m = grid_.coords(idx % grid_.points());
    return k;
  }

  cplx operator()(const PhasePoint& k) const { return values_(index(k)); }
  cplx& operator()(const PhasePoint& k) { return values_(index(k)); }

  double sup_norm() const { return values_.size() ? values_.cwiseAbs().maxCoeff() : 0.0; }
  double l1_norm() const { return grid_.phase_weight() * values_.cwiseAbs().sum(); }
  double l2_norm() const { return std::sqrt(grid_.phase_weight() * values_.squaredNorm()); }

  /// ⟨Φ, Ψ⟩ = Σ Φ Ψ̄ with the phase-space weight.
  cplx inner(const PhaseSpaceFunction& other) const {
    require_same_grid(other);
    return grid_.phase_weight() * other.values_.dot(values_);
  }

  /// Φ*(k) = conj(Φ(−k)). Where −k leaves the window it wraps, and
  /// W_{s+N,m} = (−1)^m W_{s,m}, W_{s,m+N} = (−1)^s W_{s,m} supply a sign, so
  /// that W_{Φ*} = W_Φ* holds exactly on the grid.
  PhaseSpaceFunction star() const {
    PhaseSpaceFunction out(grid_);
    const int edge = -grid_.N / 2;
    for (Eigen::Index i = 0; i < values_.size(); ++i) {
      const PhasePoint j = point(i);
      const PhasePoint k = negate(grid_, j);
      int parity = 0;
      for (int d = 0; d < grid_.n; ++d) {
        if (k.s[d] == edge) parity += j.m[d];
        if (k.m[d] == edge) parity += j.s[d];
      }
      const cplx v = std::conj(values_(index(k)));
      out.values_(i) = parity % 2 == 0 ? v : -v;
    }
    return out;
  }

  PhaseSpaceFunction conj() const { return {grid_, values_.conjugate()}; }

  friend PhaseSpaceFunction operator-(const PhaseSpaceFunction& a, const PhaseSpaceFunction& b) {
    a.require_same_grid(b);
    return {a.grid_, a.values_ - b.values_};
  }
  friend PhaseSpaceFunction operator*(cplx c, const PhaseSpaceFunction& a) { return {a.grid_, c * a.values_}; }

  void require_same_grid(const PhaseSpaceFunction& other) const {
    if (!(grid_ == other.grid_)) throw StructuralError("phase-space functions live on different grids");
  }

  /// Plot-ready CSV: x..., y..., re, im per point.
  void write_csv(std::ostream& os) const {
    os.precision(17);
    if (grid_.n == 1) {
      os << "k_x,k_y,re,im\n";
    } else {
      os << "x1,x2,y1,y2,re,im\n";
    }
    for (Eigen::Index i = 0; i < values_.size(); ++i) {
      const PhasePoint k = point(i);
      for (int d = 0; d < grid_.n; ++d) os << grid_.position(k.s[d]) << ",";
      for (int d = 0; d < grid_.n; ++d) os << k.m[d] * grid_.frequency_step() << ",";
      os << values_(i).real() << "," << values_(i).imag() << "\n";
    }
  }

 private:
  GridSpec grid_;
  ComplexVector values_;
};

/// Σ_d s_d m_d for flat spatial indices, the building block of every phase.
class DotTable {
 public:
  explicit DotTable(const GridSpec& grid) : p_(grid.points()), table_(static_cast<std::size_t>(p_ * p_)) {
    for (Eigen::Index a = 0; a < p_; ++a) {
      const auto ca = grid.coords(a);
      for (Eigen::Index b = 0; b < p_; ++b) {
        const auto cb = grid.coords(b);
        long long v = 0;
        for (int d = 0; d < grid.n; ++d) v += static_cast<long long>(ca[d]) * cb[d];
        table_[static_cast<std::size_t>(a * p_ + b)] = v;
      }
    }
  }
  long long operator()(Eigen::Index a, Eigen::Index b) const { return table_[static_cast<std::size_t>(a * p_ + b)]; }

 private:
  Eigen::Index p_;
  std::vector<long long> table_;
};

/// flat(wrap(coords(a) − coords(b))).
class DifferenceTable {
 public:
  explicit DifferenceTable(const GridSpec& grid) : p_(grid.points()), table_(static_cast<std::size_t>(p_ * p_)) {
    for (Eigen::Index a = 0; a < p_; ++a) {
      const auto ca = grid.coords(a);
      for (Eigen::Index b = 0; b < p_; ++b) {
        const auto cb = grid.coords(b);
        table_[static_cast<std::size_t>(a * p_ + b)] =
            static_cast<int>(grid.flat({ca[0] - cb[0], ca[1] - cb[1]}));
      }
    }
  }
  int operator()(Eigen::Index a, Eigen::Index b) const { return table_[static_cast<std::size_t>(a * p_ + b)]; }

 private:
  Eigen::Index p_;
  std::vector<int> table_;
};

/// W_k f (samples in, samples out) without forming the matrix.
inline ComplexVector apply_weyl(const GridSpec& grid, const PhasePoint& k, const ComplexVector& f) {
  grid.check_vector(f);
  ComplexVector out(f.size());
  const long long two_n = 2LL * grid.N;
  long long sm = 0;
  for (int d = 0; d < grid.n; ++d) sm += static_cast<long long>(k.s[d]) * k.m[d];
  for (Eigen::Index j = 0; j < f.size(); ++j) {
    const auto c = grid.coords(j);
    // input index j' = j − s; phase e^{πi x·y} e^{2πi y·(u_j − x)}, with
    // y·(u_j − x) taken at the input position.
    const std::array<int, 2> src{grid.wrap(c[0] - k.s[0]), grid.wrap(c[1] - k.s[1])};
    long long num = sm;
    for (int d = 0; d < grid.n; ++d) num += 2LL * k.m[d] * src[d];
    out(j) = unit_phase(num, two_n) * f(grid.flat(src));
  }
  return out;
}

/// W_k = e^{πi x·y} T_x M_y on the periodic grid.
inline ComplexMatrix weyl_operator(const GridSpec& grid, const PhasePoint& k) {
  grid.validate();
  const Eigen::Index p = grid.points();
  ComplexMatrix w = ComplexMatrix::Zero(p, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    ComplexVector e = ComplexVector::Zero(p);
    e(j) = 1.0;
    w.col(j) = apply_weyl(grid, k, e);
  }
  return w;
}

enum class FourierWignerMethod {
  kShiftFft,      // V(k) = ∫ e^{2πi y(u−x/2)} f(u−x) ḡ(u) du, FFT over u
  kHalfShiftFft,  // V(k) = ∫ e^{2πi y u} f(u−x/2) ḡ(u+x/2) du, half shifts by phase ramps
};

namespace detail {

/// out[i] = in[(i + N/2) mod N] along every axis; an involution.
inline ComplexVector roll_half(const GridSpec& grid, const ComplexVector& in) {
  ComplexVector out(in.size());
  for (Eigen::Index i = 0; i < in.size(); ++i) {
    const auto c = grid.coords(i);
    // coords are centered: index i ↔ c + N/2; adding N/2 to the index is the
    // same as mapping c to c + N/2 (wrapped).
    out(i) = in(grid.flat({c[0] + grid.center(), c[1] + grid.center()}));
  }
  return out;
}

/// hⁿ Σ_j e^{2πi y_m·u_j} p_j for every centered m (flat index).
inline ComplexVector centered_dft(const GridSpec& grid, const ComplexVector& p) {
  const double scale = grid.spatial_weight() * std::pow(static_cast<double>(grid.N), grid.n / 2.0);
  ComplexVector q = roll_half(grid, p);
  ComplexVector t = fft_nd(q, grid.N, grid.n, /*inverse=*/true);
  return scale * roll_half(grid, t);
}

/// f(u − a) with a = s·h/2 per axis, by a spectral phase ramp. The Nyquist
/// bin gets the real factor cos(π s / 2).
inline ComplexVector half_shift(const GridSpec& grid, const ComplexVector& f, const std::array<int, 2>& s) {
  ComplexVector spec = fft_nd(f, grid.N, grid.n, false);
  const long long two_n = 2LL * grid.N;
  for (Eigen::Index i = 0; i < spec.size(); ++i) {
    std::array<int, 2> q{0, 0};
    if (grid.n == 1) {
      q[0] = static_cast<int>(i);
    } else {
      q[0] = static_cast<int>(i / grid.N);
      q[1] = static_cast<int>(i % grid.N);
    }
    cplx factor{1.0, 0.0};
    for (int d = 0; d < grid.n; ++d) {
      const int qd = q[static_cast<std::size_t>(d)];
      if (2 * qd == grid.N) {
        factor *= std::cos(std::numbers::pi * s[static_cast<std::size_t>(d)] / 2.0);
      } else {
        const long long signed_q = qd < grid.N / 2 ? qd : qd - grid.N;
        factor *= unit_phase(-signed_q * s[static_cast<std::size_t>(d)], two_n);
      }
    }
    spec(i) *= factor;
  }
  return fft_nd(spec, grid.N, grid.n, true);
}

}  // namespace detail

/// V(f, g)(k) = ⟨W_k f, g⟩ on the phase-space grid, one FFT per x.
inline PhaseSpaceFunction fourier_wigner(const GridSpec& grid, const ComplexVector& f, const ComplexVector& g,
                                         FourierWignerMethod method = FourierWignerMethod::kShiftFft) {
  grid.validate();
  grid.check_vector(f);
  grid.check_vector(g);
  const Eigen::Index p = grid.points();
  PhaseSpaceFunction out(grid);
  const long long two_n = 2LL * grid.N;
  const DotTable dot(grid);
  for (Eigen::Index sidx = 0; sidx < p; ++sidx) {
    const auto s = grid.coords(sidx);
    ComplexVector prod(p);
    if (method == FourierWignerMethod::kShiftFft) {
      for (Eigen::Index j = 0; j < p; ++j) {
        const auto c = grid.coords(j);
        prod(j) = f(grid.flat({c[0] - s[0], c[1] - s[1]})) * std::conj(g(j));
      }
    } else {
      const ComplexVector fs = detail::half_shift(grid, f, s);
      const ComplexVector gs = detail::half_shift(grid, g, {-s[0], -s[1]});
      prod = fs.cwiseProduct(gs.conjugate());
    }
    const ComplexVector row = detail::centered_dft(grid, prod);
    for (Eigen::Index midx = 0; midx < p; ++midx) {
      cplx v = row(midx);
      if (method == FourierWignerMethod::kShiftFft) v *= unit_phase(-dot(sidx, midx), two_n);
      out.values()(sidx * p + midx) = v;
    }
  }
  return out;
}

/// Φ#Ψ(k) = Σ_l e^{πiω(k−l,l)} Φ(k−l) Ψ(l) · (1/N)ⁿ, with the grid's exact
/// Weyl cocycle in place of e^{πiω} (they agree whenever k−l and l add up
/// inside the window). With this phase W_{Φ#Ψ} = W_Φ W_Ψ holds on the grid.
inline PhaseSpaceFunction twisted_convolution(const PhaseSpaceFunction& phi, const PhaseSpaceFunction& psi) {
  phi.require_same_grid(psi);
  const GridSpec& grid = phi.grid();
  const Eigen::Index p = grid.points();
  const long long two_n = 2LL * grid.N;
  const DotTable dot(grid);
  const DifferenceTable diff(grid);
  std::vector<cplx> phase(static_cast<std::size_t>(two_n));
  for (long long t = 0; t < two_n; ++t) phase[static_cast<std::size_t>(t)] = unit_phase(t, two_n);
  auto reduce = [two_n](long long v) {
    v %= two_n;
    return v < 0 ? v + two_n : v;
  };
  auto ph = [&](long long t) { return phase[static_cast<std::size_t>(reduce(t))]; };

  // θ = s_a·m_a + s_l·m_l + 2 m_a·s_l − s_k·m_k factors over (s_a, m_a),
  // (s_l, m_a), (s_l, m_l) and (s_k, m_k), so for fixed s_k, s_l the sum over
  // m_l is a circular convolution in m, done by FFT.
  const cplx* a = phi.values().data();
  const cplx* b = psi.values().data();
  std::vector<ComplexVector> b_hat(static_cast<std::size_t>(p));
  for (Eigen::Index sl = 0; sl < p; ++sl) {
    ComplexVector d(p);
    for (Eigen::Index ml = 0; ml < p; ++ml) d(ml) = b[sl * p + ml] * ph(dot(sl, ml));
    b_hat[static_cast<std::size_t>(sl)] = fft_nd(d, grid.N, grid.n, false);
  }
  // Indices are offset by N/2 per axis: a half roll, (−1)^j on each frequency axis.
  ComplexVector roll(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const Eigen::Index parity = grid.n == 1 ? j : j / grid.N + j % grid.N;
    roll(j) = parity % 2 == 0 ? 1.0 : -1.0;
  }
  const double scale = grid.phase_weight() * std::sqrt(static_cast<double>(p));

  PhaseSpaceFunction out(grid);
  ComplexVector c(p);
  for (Eigen::Index sk = 0; sk < p; ++sk) {
    ComplexVector acc = ComplexVector::Zero(p);
    for (Eigen::Index sl = 0; sl < p; ++sl) {
      const int sa = diff(sk, sl);
      const cplx* a_row = a + static_cast<Eigen::Index>(sa) * p;
      for (Eigen::Index ma = 0; ma < p; ++ma) c(ma) = a_row[ma] * ph(dot(sa, ma) + 2 * dot(sl, ma));
      acc += fft_nd(c, grid.N, grid.n, false).cwiseProduct(b_hat[static_cast<std::size_t>(sl)]);
    }
    const ComplexVector row = fft_nd(acc.cwiseProduct(roll), grid.N, grid.n, true);
    for (Eigen::Index mk = 0; mk < p; ++mk) out.values()(sk * p + mk) = scale * ph(-dot(sk, mk)) * row(mk);
  }
  return out;
}

/// Φ^k(l) = e^{πiω(k,l−k)} Φ(l−k), the symbol of W_k W_Φ (grid cocycle).
inline PhaseSpaceFunction shifted_symbol(const PhaseSpaceFunction& phi, const PhasePoint& k) {
  const GridSpec& grid = phi.grid();
  PhaseSpaceFunction out(grid);
  for (Eigen::Index i = 0; i < out.values().size(); ++i) {
    const PhasePoint l = out.point(i);
    const PhasePoint lk = subtract(grid, l, k);
    out.values()(i) = unit_phase(weyl_cocycle(grid, k, lk), 2LL * grid.N) * phi(lk);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Representations of the grid Heisenberg group.

/// A unitary action on C^dim given by U_d (one step h along axis d) and V_d
/// (one frequency step along axis d). ρ(W_k) = e^{πi s·m/N} Π U_d^{s_d} Π V_d^{m_d}.
class GridAction {
 public:
  GridAction(GridSpec grid, std::vector<ComplexMatrix> u, std::vector<ComplexMatrix> v)
      : grid_(grid), u_(std::move(u)), v_(std::move(v)) {
    grid_.validate();
    if (u_.size() != static_cast<std::size_t>(grid_.n) || v_.size() != static_cast<std::size_t>(grid_.n)) {
      throw StructuralError("grid action needs one U and one V generator per axis");
    }
    dim_ = u_.front().rows();
    for (const auto& g : generators()) {
      if (g.rows() != dim_ || g.cols() != dim_) throw StructuralError("grid generators must all be dim x dim");
      require_finite(g, "grid generator");
    }
  }

  const GridSpec& grid() const { return grid_; }
  Eigen::Index dim() const { return dim_; }
  const std::vector<ComplexMatrix>& u_generators() const { return u_; }
  const std::vector<ComplexMatrix>& v_generators() const { return v_; }
  std::vector<ComplexMatrix> generators() const {
    std::vector<ComplexMatrix> all = u_;
    all.insert(all.end(), v_.begin(), v_.end());
    return all;
  }

  /// Unitarity, U_d^N = V_d^N = I, commuting families, and
  /// V_d U_e = e^{2πi δ_de / N} U_e V_d.
  std::optional<std::string> check_relations(double tol = 1e-9) const {
    const ComplexMatrix id = identity(dim_);
    for (int d = 0; d < grid_.n; ++d) {
      const auto& ud = u_[static_cast<std::size_t>(d)];
      const auto& vd = v_[static_cast<std::size_t>(d)];
      const std::string ax = std::to_string(d);
      if (unitarity_defect(ud) > tol) return "U_" + ax + " is not unitary";
      if (unitarity_defect(vd) > tol) return "V_" + ax + " is not unitary";
      if (norm_max(int_power(ud, grid_.N) - id) > tol) return "U_" + ax + "^N != I";
      if (norm_max(int_power(vd, grid_.N) - id) > tol) return "V_" + ax + "^N != I";
      for (int e = 0; e < grid_.n; ++e) {
        const auto& ue = u_[static_cast<std::size_t>(e)];
        const auto& ve = v_[static_cast<std::size_t>(e)];
        const cplx phase = d == e ? unit_phase(1, grid_.N) : cplx{1.0, 0.0};
        const double c = norm_max(vd * ue - phase * (ue * vd));
        if (c > tol) {
          return "grid commutation relation V_" + ax + " U_" + std::to_string(e) + " violated (defect " +
                 std::to_string(c) + ")";
        }
        if (e > d) {
          if (norm_max(ud * ue - ue * ud) > tol) return "U_" + ax + " and U_" + std::to_string(e) + " do not commute";
          if (norm_max(vd * ve - ve * vd) > tol) return "V_" + ax + " and V_" + std::to_string(e) + " do not commute";
        }
      }
    }
    return std::nullopt;
  }

  /// A^k for integer k (negative powers through the adjoint), by squaring.
  static ComplexMatrix int_power(const ComplexMatrix& a, long long k) {
    ComplexMatrix base = k < 0 ? ComplexMatrix(a.adjoint()) : a;
    unsigned long long e = static_cast<unsigned long long>(k < 0 ? -k : k);
    ComplexMatrix out = identity(a.rows());
    while (e) {
      if (e & 1ULL) out = out * base;
      e >>= 1;
      if (e) base = base * base;
    }
    return out;
  }

  /// Products Π_d G_d^{c_d} for every flat spatial index c (centered powers).
  std::vector<ComplexMatrix> power_table(const std::vector<ComplexMatrix>& gens) const {
    std::vector<std::vector<ComplexMatrix>> axis(static_cast<std::size_t>(grid_.n));
    for (int d = 0; d < grid_.n; ++d) {
      auto& pw = axis[static_cast<std::size_t>(d)];
      pw.reserve(static_cast<std::size_t>(grid_.N));
      pw.push_back(int_power(gens[static_cast<std::size_t>(d)], -grid_.center()));
      for (int i = 1; i < grid_.N; ++i) pw.push_back(gens[static_cast<std::size_t>(d)] * pw.back());
    }
    std::vector<ComplexMatrix> out;
    out.reserve(static_cast<std::size_t>(grid_.points()));
    for (Eigen::Index f = 0; f < grid_.points(); ++f) {
      const auto c = grid_.coords(f);
      ComplexMatrix m = axis[0][static_cast<std::size_t>(c[0] + grid_.center())];
      if (grid_.n == 2) m = m * axis[1][static_cast<std::size_t>(c[1] + grid_.center())];
      out.push_back(std::move(m));
    }
    return out;
  }

  ComplexMatrix apply(const PhasePoint& k) const {
    long long sm = 0;
    ComplexMatrix out = identity(dim_);
    for (int d = 0; d < grid_.n; ++d) out = out * int_power(u_[static_cast<std::size_t>(d)], k.s[d]);
    for (int d = 0; d < grid_.n; ++d) {
      out = out * int_power(v_[static_cast<std::size_t>(d)], k.m[d]);
      sm += static_cast<long long>(k.s[d]) * k.m[d];
    }
    return unit_phase(sm, 2LL * grid_.N) * out;
  }

 private:
  GridSpec grid_;
  std::vector<ComplexMatrix> u_;
  std::vector<ComplexMatrix> v_;
  Eigen::Index dim_ = 0;
};

inline PhasePoint unit_shift(int axis) {
  PhasePoint k;
  k.s[static_cast<std::size_t>(axis)] = 1;
  return k;
}
inline PhasePoint unit_frequency(int axis) {
  PhasePoint k;
  k.m[static_cast<std::size_t>(axis)] = 1;
  return k;
}

inline GridAction canonical_grid_action(const GridSpec& grid) {
  grid.validate();
  std::vector<ComplexMatrix> u, v;
  for (int d = 0; d < grid.n; ++d) {
    u.push_back(weyl_operator(grid, unit_shift(d)));
    v.push_back(weyl_operator(grid, unit_frequency(d)));
  }
  return {grid, u, v};
}

inline GridAction conjugate(const GridAction& rho, const ComplexMatrix& x) {
  std::vector<ComplexMatrix> u, v;
  for (const auto& g : rho.u_generators()) u.push_back(x * g * x.adjoint());
  for (const auto& g : rho.v_generators()) v.push_back(x * g * x.adjoint());
  return {rho.grid(), u, v};
}

inline GridAction direct_sum(const GridAction& a, const GridAction& b) {
  if (!(a.grid() == b.grid())) throw StructuralError("direct_sum: grid actions on different grids");
  std::vector<ComplexMatrix> u, v;
  for (int d = 0; d < a.grid().n; ++d) {
    u.push_back(direct_sum(a.u_generators()[static_cast<std::size_t>(d)], b.u_generators()[static_cast<std::size_t>(d)]));
    v.push_back(direct_sum(a.v_generators()[static_cast<std::size_t>(d)], b.v_generators()[static_cast<std::size_t>(d)]));
  }
  return {a.grid(), u, v};
}

inline GridAction conjugated_grid_copies(const GridSpec& grid, int copies, std::uint64_t seed) {
  if (copies < 1) throw StructuralError("conjugated_grid_copies: need at least one copy");
  GridAction rho = canonical_grid_action(grid);
  for (int i = 1; i < copies; ++i) rho = direct_sum(rho, canonical_grid_action(grid));
  return conjugate(rho, haar_random_unitary(rho.dim(), seed));
}

/// ρ(W_Φ) = (1/N)ⁿ Σ_k Φ(k) ρ(W_k).
inline ComplexMatrix weyl_quantize(const PhaseSpaceFunction& phi, const GridAction& rho) {
  const GridSpec& grid = rho.grid();
  if (!(phi.grid() == grid)) throw StructuralError("weyl_quantize: symbol and action on different grids");
  const Eigen::Index p = grid.points();
  const Eigen::Index dim = rho.dim();
  const long long two_n = 2LL * grid.N;
  const DotTable dot(grid);
  const auto vpow = rho.power_table(rho.v_generators());
  const auto upow = rho.power_table(rho.u_generators());
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  ComplexMatrix inner(dim, dim);
  for (Eigen::Index s = 0; s < p; ++s) {
    inner.setZero();
    bool any = false;
    for (Eigen::Index m = 0; m < p; ++m) {
      const cplx c = phi.values()(s * p + m);
      if (c == cplx{0.0, 0.0}) continue;
      inner += (c * unit_phase(dot(s, m), two_n)) * vpow[static_cast<std::size_t>(m)];
      any = true;
    }
    if (any) out.noalias() += upow[static_cast<std::size_t>(s)] * inner;
  }
  return grid.phase_weight() * out;
}

/// φ(u) = 2^{n/4} e^{−π|u|²}; the window must satisfy Nh/2 ≥ 4.
inline ComplexVector gaussian(const GridSpec& grid) {
  grid.validate();
  if (grid.half_window() < 4.0) {
    throw StructuralError("window too small for the Gaussian: need N*h/2 >= 4, have " +
                          std::to_string(grid.half_window()) + " (tail mass must stay below 1e-12)");
  }
  ComplexVector out(grid.points());
  const double amp = std::pow(2.0, grid.n / 4.0);
  for (Eigen::Index j = 0; j < out.size(); ++j) {
    const auto c = grid.coords(j);
    double r2 = 0.0;
    for (int d = 0; d < grid.n; ++d) r2 += grid.position(c[d]) * grid.position(c[d]);
    out(j) = amp * std::exp(-std::numbers::pi * r2);
  }
  return out;
}

/// L²-normalized Hermite function of degree k in the e^{−πu²} scaling,
/// (2π)^{1/4} ψ_k(√(2π) u) with ψ_k the standard Hermite functions.
inline double hermite_value(int k, double u) {
  const double t = std::sqrt(kTwoPi) * u;
  double prev = 0.0;
  double cur = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * t * t);
  for (int j = 0; j < k; ++j) {
    const double next = std::sqrt(2.0 / (j + 1)) * t * cur - std::sqrt(static_cast<double>(j) / (j + 1)) * prev;
    prev = cur;
    cur = next;
  }
  return std::pow(kTwoPi, 0.25) * cur;
}

/// Tensor-product Hermite function with one degree per axis.
inline ComplexVector hermite_function(const GridSpec& grid, std::array<int, 2> degrees) {
  grid.validate();
  ComplexVector out(grid.points());
  for (Eigen::Index j = 0; j < out.size(); ++j) {
    const auto c = grid.coords(j);
    double v = 1.0;
    for (int d = 0; d < grid.n; ++d) v *= hermite_value(degrees[static_cast<std::size_t>(d)], grid.position(c[d]));
    out(j) = v;
  }
  return out;
}

/// Riemann-sum Fourier transform f̂(ξ_m) = hⁿ Σ_j f(u_j) e^{−2πi u_j·ξ_m} on
/// the frequency grid ξ_m = m/(Nh), flat-indexed like spatial vectors.
inline ComplexVector fourier_transform(const GridSpec& grid, const ComplexVector& f) {
  grid.check_vector(f);
  const double scale = grid.spatial_weight() * std::pow(static_cast<double>(grid.N), grid.n / 2.0);
  ComplexVector t = fft_nd(detail::roll_half(grid, f), grid.N, grid.n, false);
  return scale * detail::roll_half(grid, t);
}

/// Continuum Gaussian symbol e^{−π(|x|²+|y|²)/2} sampled on the phase-space grid.
inline PhaseSpaceFunction gaussian_symbol(const GridSpec& grid) {
  PhaseSpaceFunction out(grid);
  for (Eigen::Index i = 0; i < out.values().size(); ++i) {
    const PhasePoint k = out.point(i);
    double r2 = 0.0;
    for (int d = 0; d < grid.n; ++d) {
      const double x = grid.position(k.s[d]);
      const double y = k.m[d] * grid.frequency_step();
      r2 += x * x + y * y;
    }
    out.values()(i) = std::exp(-std::numbers::pi * r2 / 2.0);
  }
  return out;
}

// ---------------------------------------------------------------------------

struct FaithfulnessProbe {
  double symbol_sup = 0.0;      // ‖Φ‖_∞
  double operator_norm = 0.0;   // ‖ρ(W_Φ)‖ (spectral)
  double operator_fro = 0.0;    // ‖ρ(W_Φ)‖_F
  double moment_map_min_sv = 0.0;
  double bound = 0.0;           // ‖ρ(W_Φ)‖_F / σ_min ≥ ‖Φ‖_2 ≥ ‖Φ‖_∞
  double calibrated_constant = 0.0;  // ‖Φ‖_∞ / ‖ρ(W_Φ)‖_F when defined
  bool consistent = true;
};

/// Contrapositive of faithfulness on the grid. The map Φ ↦ ρ(W_Φ) has
/// Frobenius singular values √dim / Nⁿ because tr(ρ(W_k)*ρ(W_l)) = dim·δ_kl for
/// any valid action, so ‖Φ‖_∞ ≤ (Nⁿ/√dim)·‖ρ(W_Φ)‖_F.
inline FaithfulnessProbe faithfulness_probe(const PhaseSpaceFunction& phi, const GridAction& rho) {
  FaithfulnessProbe probe;
  const ComplexMatrix op = weyl_quantize(phi, rho);
  probe.symbol_sup = phi.sup_norm();
  probe.operator_norm = norm_op(op);
  probe.operator_fro = norm_fro(op);
  probe.moment_map_min_sv =
      std::sqrt(static_cast<double>(rho.dim())) / static_cast<double>(rho.grid().points());
  probe.bound = probe.operator_fro / probe.moment_map_min_sv;
  probe.calibrated_constant = probe.operator_fro > 0.0 ? probe.symbol_sup / probe.operator_fro : 0.0;
  probe.consistent = probe.symbol_sup <= probe.bound * (1.0 + 1e-9) + 1e-14;
  return probe;
}

struct PartOneWitness {
  double min_ratio = 0.0;  // min over unit g of ‖V(f,g)‖ / ‖f‖
  double max_ratio = 0.0;
};

/// Singular values of g ↦ V(f, g), relative to ‖f‖. If both are 1 then
/// V(f, g) ≡ 0 forces g = 0.
inline PartOneWitness part_one_witness(const GridSpec& grid, const ComplexVector& f) {
  grid.check_vector(f);
  const Eigen::Index p = grid.points();
  ComplexMatrix frame = ComplexMatrix::Zero(p, p);
  PhaseSpaceFunction index_helper(grid);
  for (Eigen::Index i = 0; i < grid.phase_points(); ++i) {
    const ComplexVector w = apply_weyl(grid, index_helper.point(i), f);
    frame.noalias() += w * w.adjoint();
  }
  // ‖V(f,g)‖² = (1/N)ⁿ h^{2n} g* (Σ_k W_k f f* W_k*) g  with g in samples and
  // ‖g‖² = hⁿ g*g.
  frame *= grid.phase_weight() * grid.spatial_weight();
  const double fnorm = grid.norm(f);
  const HermitianEigen eig = hermitian_eigen(frame);
  return {std::sqrt(std::max(0.0, eig.values(eig.values.size() - 1))) / fnorm, std::sqrt(eig.values(0)) / fnorm};
}

// ---------------------------------------------------------------------------

struct RealIsotypicDecomposition {
  int multiplicity = 0;
  ComplexMatrix range_basis;                // {v_α}: orthonormal basis of range ρ(W_Φ)
  std::vector<ComplexMatrix> intertwiners;  // W_α: orthonormal grid coords → H
  std::vector<double> isometry_defects;
  std::vector<double> equivariance_defects;
  double projector_defect = 0.0;  // max(‖P² − P‖, ‖P* − P‖)
  double orthogonality_defect = 0.0;
  double completeness_defect = 0.0;

  double max_defect() const {
    double d = std::max({projector_defect, orthogonality_defect, completeness_defect});
    for (double v : isometry_defects) d = std::max(d, v);
    for (double v : equivariance_defects) d = std::max(d, v);
    return d;
  }
};

/// max over generators of ‖ρ(g) W − W canonical(g)‖_max.
inline double equivariance_defect(const GridAction& rho, const ComplexMatrix& w) {
  const GridAction canonical = canonical_grid_action(rho.grid());
  const auto rg = rho.generators();
  const auto cg = canonical.generators();
  double d = 0.0;
  for (std::size_t i = 0; i < rg.size(); ++i) d = std::max(d, norm_max(rg[i] * w - w * cg[i]));
  return d;
}

/// The Gaussian symbol V(φ, φ) computed on the grid.
inline PhaseSpaceFunction gaussian_projector_symbol(const GridSpec& grid) {
  const ComplexVector phi = gaussian(grid);
  return fourier_wigner(grid, phi, phi).conj();
}

/// H = ⊕ H^α with W_α(W_k φ) = ρ(W_k) v_α, {v_α} an orthonormal basis of the
/// range of ρ(W_Φ) for the Gaussian Φ.
///
/// W_α is the least-squares solution of W (W_kφ) = ρ(W_k)v_α over all grid
/// points k. The vectors W_kφ form a tight frame (Σ_k W_kφ φ*W_k* = Nⁿ‖φ‖² I),
/// so the least-squares solution is Σ_k ρ(W_k)v_α (W_kφ)* / Nⁿ.
inline RealIsotypicDecomposition real_intertwiner_synth(const GridAction& rho, double rank_cutoff = 1e-6) {
  if (auto violation = rho.check_relations(1e-9)) throw HypothesisViolation(*violation);
  const GridSpec& grid = rho.grid();
  const Eigen::Index p = grid.points();
  const Eigen::Index dim = rho.dim();

  const ComplexMatrix proj = weyl_quantize(gaussian_projector_symbol(grid), rho);
  RealIsotypicDecomposition out;
  out.projector_defect = std::max(norm_max(proj * proj - proj), norm_max(proj.adjoint() - proj));
  out.range_basis = projector_range_basis(proj);
  out.multiplicity = static_cast<int>(out.range_basis.cols());
  if (out.multiplicity == 0 && dim > 0) {
    throw HypothesisViolation("the Gaussian projector vanishes: action inconsistent with the central character");
  }
  if (numerical_rank(proj, rank_cutoff) != out.multiplicity) {
    throw InternalConsistencyError("Gaussian projector has eigenvalues away from 0 and 1");
  }

  const ComplexVector phi = grid.to_coefficients(gaussian(grid));
  const GridAction canonical = canonical_grid_action(grid);
  const auto rho_v = rho.power_table(rho.v_generators());
  const auto rho_u = rho.power_table(rho.u_generators());
  const auto can_v = canonical.power_table(canonical.v_generators());
  const auto can_u = canonical.power_table(canonical.u_generators());

  // Frame side does not depend on α: B_s = [T^s M^m φ · phase]_m.
  ComplexMatrix mphi(p, p);
  for (Eigen::Index m = 0; m < p; ++m) mphi.col(m) = can_v[static_cast<std::size_t>(m)] * phi;

  ComplexMatrix completeness = ComplexMatrix::Zero(dim, dim);
  for (int alpha = 0; alpha < out.multiplicity; ++alpha) {
    const ComplexVector v = out.range_basis.col(alpha);
    ComplexMatrix vv(dim, p);
    for (Eigen::Index m = 0; m < p; ++m) vv.col(m) = rho_v[static_cast<std::size_t>(m)] * v;
    ComplexMatrix w = ComplexMatrix::Zero(dim, p);
    for (Eigen::Index s = 0; s < p; ++s) {
      ComplexMatrix a = rho_u[static_cast<std::size_t>(s)] * vv;
      ComplexMatrix b = can_u[static_cast<std::size_t>(s)] * mphi;
      // The phases e^{πi s·m/N} on both sides cancel in a b*.
      w.noalias() += a * b.adjoint();
    }
    w /= static_cast<double>(p) * phi.squaredNorm();
    out.isometry_defects.push_back(norm_max(w.adjoint() * w - identity(p)));
    out.equivariance_defects.push_back(equivariance_defect(rho, w));
    completeness += w * w.adjoint();
    out.intertwiners.push_back(std::move(w));
  }
  out.completeness_defect = norm_max(completeness - identity(dim));
  for (int a = 0; a < out.multiplicity; ++a) {
    for (int b = 0; b < out.multiplicity; ++b) {
      if (a != b) {
        out.orthogonality_defect =
            std::max(out.orthogonality_defect, norm_max(out.intertwiners[static_cast<std::size_t>(a)].adjoint() *
                                                        out.intertwiners[static_cast<std::size_t>(b)]));
      }
    }
  }
  return out;
}

/// A-priori bound on the discretization error of Gaussian-class quantities:
/// frequency aliasing from the dual period 1/h plus spatial wrap, with a
/// polynomial factor for Hermite degrees up to 4.
inline double aliasing_bound(const GridSpec& grid) {
  const double inv_h = 1.0 / grid.h;
  const double alias = std::exp(-std::numbers::pi * inv_h * inv_h / 8.0) * (1.0 + std::pow(inv_h, 4));
  const double wrap = std::exp(-std::numbers::pi * grid.half_window() * grid.half_window() / 2.0) *
                      (1.0 + std::pow(grid.half_window(), 4));
  return alias + wrap;
}

/// max over Hermite quadruples (degrees ≤ max_degree, n = 1 axis degrees) of
/// |⟨V(f,g),V(φ,ψ)⟩ − ⟨f,φ⟩⟨ψ,g⟩|. With `continuum` the inner products on the
/// right are the exact values δ (Hermite functions are orthonormal); otherwise
/// they are grid inner products.
inline double hermite_isometry_defect(const GridSpec& grid, int max_degree, bool continuum) {
  std::vector<ComplexVector> fns;
  std::vector<std::array<int, 2>> degs;
  for (int a = 0; a <= max_degree; ++a) {
    for (int b = 0; b <= (grid.n == 2 ? max_degree - a : 0); ++b) {
      degs.push_back({a, b});
      fns.push_back(hermite_function(grid, {a, b}));
    }
  }
  const std::size_t count = fns.size();
  std::vector<PhaseSpaceFunction> v;
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = 0; j < count; ++j) v.push_back(fourier_wigner(grid, fns[i], fns[j]));
  }
  auto ip = [&](std::size_t i, std::size_t j) -> cplx {
    if (continuum) return i == j ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
    return grid.inner(fns[i], fns[j]);
  };
  double worst = 0.0;
  for (std::size_t f = 0; f < count; ++f) {
    for (std::size_t g = 0; g < count; ++g) {
      for (std::size_t a = 0; a < count; ++a) {
        for (std::size_t b = 0; b < count; ++b) {
          const cplx lhs = v[f * count + g].inner(v[a * count + b]);
          const cplx rhs = ip(f, a) * ip(b, g);
          worst = std::max(worst, std::abs(lhs - rhs));
        }
      }
    }
  }
  return worst;
}

/// Largest N per axis used when refining: 256 in one dimension, 32 in two.
inline int grid_size_limit(int n) { return n == 1 ? 256 : 32; }

struct ConvergenceStep {
  GridSpec grid;
  double defect = 0.0;
};

/// Hermite isometry defect (against continuum values) on a ladder of grids
/// with the window of `target` fixed and h halving from ≈1 down to target.h.
/// Finer levels are appended until some level is resolved (defect < 1, the
/// Cauchy–Schwarz size of the compared quantities) yet above roundoff, with
/// a finer level after it.
inline std::vector<ConvergenceStep> isometry_convergence(const GridSpec& target, int max_degree) {
  target.validate();
  std::vector<GridSpec> ladder{target};
  while (ladder.front().h * 2.0 <= 1.0 + 1e-12 && ladder.front().N % 4 == 0 && ladder.front().N / 2 >= 8) {
    GridSpec coarser = ladder.front();
    coarser.h *= 2.0;
    coarser.N /= 2;
    ladder.insert(ladder.begin(), coarser);
  }
  std::vector<ConvergenceStep> out;
  for (const auto& g : ladder) out.push_back({g, hermite_isometry_defect(g, max_degree, true)});
  auto has_pair = [&] {
    for (std::size_t i = 0; i + 1 < out.size(); ++i) {
      if (out[i].defect < 1.0 && out[i].defect > 1e-12) return true;
    }
    return false;
  };
  const int max_n = grid_size_limit(target.n);
  while (!has_pair() && out.back().defect > 1e-12 && out.back().grid.N * 2 <= max_n) {
    GridSpec finer = out.back().grid;
    finer.h /= 2.0;
    finer.N *= 2;
    out.push_back({finer, hermite_isometry_defect(finer, max_degree, true)});
  }
  return out;
}

}  // namespace heislab
