// Dense complex linear algebra and unitary FFTs used throughout heislab.
//
// Everything is double precision. Matrices are Eigen column-major dense
// matrices; the only contract that matters to callers is the shape and the
// Euclidean inner product on C^n.
#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace heislab {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Malformed input: shape mismatch, unparsable spec, out-of-range size.
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The input is well formed but violates a hypothesis of the theorem
/// (commutation relation, central character, dimension count).
class HypothesisViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An identity that holds for every valid input failed; signals a bug.
class InternalConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// e^{2πi·num/den}. Callers pass reduced numerators so equal phases are
/// bitwise equal.
inline cplx unit_phase(std::int64_t num, std::int64_t den) {
  std::int64_t r = num % den;
  if (r < 0) r += den;
  if (r == 0) return {1.0, 0.0};
  if (2 * r == den) return {-1.0, 0.0};
  if (4 * r == den) return {0.0, 1.0};
  if (4 * r == 3 * den) return {0.0, -1.0};
  // Upper half by conjugation, so e^{−iθ} is bitwise conj(e^{iθ}).
  if (2 * r > den) return std::conj(unit_phase(den - r, den));
  return std::polar(1.0, kTwoPi * static_cast<double>(r) / static_cast<double>(den));
}

inline ComplexMatrix adjoint(const ComplexMatrix& a) { return a.adjoint(); }

inline ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw StructuralError("matmul: shape mismatch " + std::to_string(a.rows()) + "x" +
                          std::to_string(a.cols()) + " * " + std::to_string(b.rows()) + "x" +
                          std::to_string(b.cols()));
  }
  return a * b;
}

inline double norm_max(const ComplexMatrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

inline double norm_fro(const ComplexMatrix& a) { return a.norm(); }

/// Largest singular value.
inline double norm_op(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::BDCSVD<ComplexMatrix> svd(a);
  return svd.singularValues()(0);
}

inline ComplexMatrix identity(Eigen::Index n) { return ComplexMatrix::Identity(n, n); }

/// ‖U*U − I‖_max.
inline double unitarity_defect(const ComplexMatrix& u) {
  return norm_max(u.adjoint() * u - identity(u.cols()));
}

inline void require_finite(const ComplexMatrix& a, const char* what) {
  if (!a.allFinite()) throw StructuralError(std::string(what) + ": non-finite entry");
}

/// Block-diagonal A ⊕ B.
inline ComplexMatrix direct_sum(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out = ComplexMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

struct NullSpace {
  int dim = 0;
  ComplexMatrix basis;  // columns: orthonormal right-singular vectors
  RealVector singular_values;
};

/// Right null space of A: singular values ≤ cutoff·σ_max count as zero.
/// Columns beyond the row count are always null.
inline NullSpace nullspace(const ComplexMatrix& a, double cutoff) {
  if (a.size() == 0) throw StructuralError("nullspace: empty matrix");
  if (!(cutoff > 0.0 && cutoff < 1.0)) throw StructuralError("nullspace: cutoff must lie in (0,1)");
  Eigen::BDCSVD<ComplexMatrix> svd(a, Eigen::ComputeFullV);
  const RealVector& s = svd.singularValues();
  const double smax = s.size() ? s(0) : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (smax > 0.0 && s(i) > cutoff * smax) ++rank;
  }
  NullSpace ns;
  ns.dim = static_cast<int>(a.cols() - rank);
  ns.basis = svd.matrixV().rightCols(ns.dim);
  ns.singular_values = s;
  return ns;
}

inline int numerical_rank(const ComplexMatrix& a, double cutoff) {
  if (a.size() == 0) return 0;
  Eigen::BDCSVD<ComplexMatrix> svd(a);
  const RealVector& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  return static_cast<int>((s.array() > cutoff * s(0)).count());
}

/// Incremental Householder QR over row blocks of a tall matrix: after all
/// blocks are absorbed, R has the singular values of the stacked matrix.
class RowBlockQR {
 public:
  explicit RowBlockQR(Eigen::Index cols) : r_(ComplexMatrix::Zero(0, cols)) {}

  void absorb(const ComplexMatrix& block) {
    if (block.cols() != r_.cols()) throw StructuralError("RowBlockQR: column mismatch");
    if (block.rows() == 0) return;
    ComplexMatrix stacked(r_.rows() + block.rows(), r_.cols());
    stacked << r_, block;
    Eigen::HouseholderQR<ComplexMatrix> qr(stacked);
    const Eigen::Index k = std::min(stacked.rows(), stacked.cols());
    r_ = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  }

  /// R padded to square.
  ComplexMatrix r() const {
    ComplexMatrix out = ComplexMatrix::Zero(r_.cols(), r_.cols());
    out.topRows(r_.rows()) = r_;
    return out;
  }

 private:
  ComplexMatrix r_;
};

/// Eigen-decomposition of the Hermitian part of `a`, eigenvalues descending.
struct HermitianEigen {
  RealVector values;
  ComplexMatrix vectors;
};

inline HermitianEigen hermitian_eigen(const ComplexMatrix& a) {
  ComplexMatrix herm = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm);
  const Eigen::Index n = herm.rows();
  HermitianEigen out{RealVector(n), ComplexMatrix(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = es.eigenvalues()(n - 1 - i);
    out.vectors.col(i) = es.eigenvectors().col(n - 1 - i);
  }
  return out;
}

/// Rotate v so its first coordinate with modulus > tol is positive real.
inline void normalize_leading_phase(Eigen::Ref<ComplexVector> v, double tol = 1e-8) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > tol) {
      v *= std::conj(v(i)) / std::abs(v(i));
      return;
    }
  }
}

/// Orthonormal basis of the range of an (approximate) orthogonal projector:
/// eigenvectors with eigenvalue > 1/2, ordered by descending eigenvalue
/// (ties within `tie_tol`), then by leading-coordinate index and modulus.
/// Each vector's leading coordinate is made positive real.
inline ComplexMatrix projector_range_basis(const ComplexMatrix& p, double tie_tol = 1e-8) {
  HermitianEigen eig = hermitian_eigen(p);
  struct Item {
    double value;
    Eigen::Index lead;
    double lead_abs;
    ComplexVector vec;
  };
  std::vector<Item> items;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    if (eig.values(i) <= 0.5) continue;
    ComplexVector v = eig.vectors.col(i);
    normalize_leading_phase(v);
    Eigen::Index lead = 0;
    while (lead < v.size() && std::abs(v(lead)) <= 1e-8) ++lead;
    items.push_back({eig.values(i), lead, lead < v.size() ? std::abs(v(lead)) : 0.0, v});
  }
  std::stable_sort(items.begin(), items.end(), [&](const Item& a, const Item& b) {
    if (std::abs(a.value - b.value) > tie_tol) return a.value > b.value;
    if (a.lead != b.lead) return a.lead < b.lead;
    return a.lead_abs > b.lead_abs;
  });
  ComplexMatrix basis(p.rows(), static_cast<Eigen::Index>(items.size()));
  for (std::size_t i = 0; i < items.size(); ++i) basis.col(static_cast<Eigen::Index>(i)) = items[i].vec;
  return basis;
}

// ---------------------------------------------------------------------------
// FFT with unitary normalization: forward Σ x_j e^{-2πijk/N}/√N, inverse with
// e^{+2πijk/N}/√N.

inline ComplexVector fft(const ComplexVector& x) {
  const Eigen::Index n = x.size();
  if (n == 0) throw StructuralError("fft: empty input");
  if (n == 1) return x;  // kissfft cannot factor length 1
  Eigen::FFT<double> engine;
  std::vector<cplx> in(x.data(), x.data() + n), out;
  engine.fwd(out, in);
  ComplexVector y(n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (Eigen::Index i = 0; i < n; ++i) y(i) = out[static_cast<std::size_t>(i)] * scale;
  return y;
}

inline ComplexVector ifft(const ComplexVector& x) {
  const Eigen::Index n = x.size();
  if (n == 0) throw StructuralError("ifft: empty input");
  if (n == 1) return x;  // kissfft cannot factor length 1
  Eigen::FFT<double> engine;
  engine.SetFlag(Eigen::FFT<double>::Unscaled);
  std::vector<cplx> in(x.data(), x.data() + n), out;
  engine.inv(out, in);
  ComplexVector y(n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (Eigen::Index i = 0; i < n; ++i) y(i) = out[static_cast<std::size_t>(i)] * scale;
  return y;
}

/// Unitary FFT along every axis of an n-dimensional cube of side `side`
/// stored row-major (last axis fastest).
inline ComplexVector fft_nd(const ComplexVector& x, int side, int dims, bool inverse) {
  Eigen::Index total = 1;
  for (int d = 0; d < dims; ++d) total *= side;
  if (x.size() != total) throw StructuralError("fft_nd: size is not side^dims");
  ComplexVector data = x;
  ComplexVector line(side);
  Eigen::Index stride = 1;
  for (int axis = dims - 1; axis >= 0; --axis) {
    for (Eigen::Index base = 0; base < total; ++base) {
      if ((base / stride) % side != 0) continue;
      for (int i = 0; i < side; ++i) line(i) = data(base + i * stride);
      ComplexVector t = inverse ? ifft(line) : fft(line);
      for (int i = 0; i < side; ++i) data(base + i * stride) = t(i);
    }
    stride *= side;
  }
  return data;
}

/// 2-d unitary FFT of a matrix (rows then columns).
inline ComplexMatrix fft2(const ComplexMatrix& a, bool inverse = false) {
  ComplexMatrix out = a;
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    ComplexVector row = out.row(r).transpose();
    out.row(r) = (inverse ? ifft(row) : fft(row)).transpose();
  }
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    ComplexVector col = out.col(c);
    out.col(c) = inverse ? ifft(col) : fft(col);
  }
  return out;
}

inline ComplexMatrix ifft2(const ComplexMatrix& a) { return fft2(a, true); }

// ---------------------------------------------------------------------------

/// Complex Gaussian matrix with i.i.d. entries of unit variance.
inline ComplexMatrix complex_gaussian(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  ComplexMatrix z(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      z(i, j) = {re, im};
    }
  }
  return z;
}

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases
/// of diag(R) folded into Q. Deterministic per seed.
inline ComplexMatrix haar_random_unitary(Eigen::Index dim, std::uint64_t seed) {
  if (dim < 1) throw StructuralError("haar_random_unitary: dim must be >= 1");
  std::mt19937_64 rng(seed);
  ComplexMatrix z = complex_gaussian(dim, dim, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ() * identity(dim);
  const ComplexMatrix& r = qr.matrixQR();
  for (Eigen::Index i = 0; i < dim; ++i) {
    const cplx d = r(i, i);
    const double a = std::abs(d);
    q.col(i) *= (a > 0.0 ? d / a : cplx{1.0, 0.0});
  }
  return q;
}

}  // namespace heislab
