// Independent reference computations for the tests. Nothing here calls the
// library routine it is used to check.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Σ c_i x_i / n_i mod 1 as a reduced fraction (num, den), by summing fractions.
inline std::pair<long long, long long> pairing(const std::vector<int>& n, const std::vector<int>& x,
                                               const std::vector<int>& c) {
  long long num = 0, den = 1;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const long long a = static_cast<long long>(x[i]) * c[i];
    const long long b = n[i];
    num = num * b + a * den;
    den *= b;
    const long long g = std::gcd(num, den);
    num /= g;
    den /= g;
  }
  num %= den;
  if (num < 0) num += den;
  if (num == 0) return {0, 1};
  const long long g = std::gcd(num, den);
  return {num / g, den / g};
}

/// Every element of ∏ Z/n_i in lexicographic order.
inline std::vector<std::vector<int>> enumerate(const std::vector<int>& n) {
  std::vector<std::vector<int>> out{{}};
  for (int ni : n) {
    std::vector<std::vector<int>> next;
    for (const auto& v : out) {
      for (int r = 0; r < ni; ++r) {
        auto w = v;
        w.push_back(r);
        next.push_back(w);
      }
    }
    out = std::move(next);
  }
  return out;
}

/// Naive DFT with e^{sign·2πi jk/N}/√N.
inline Vector dft(const Vector& x, int sign) {
  const auto n = x.size();
  Vector out(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    cplx acc = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      acc += std::polar(1.0, sign * 2.0 * std::numbers::pi * static_cast<double>(j * k) / static_cast<double>(n)) * x(j);
    }
    out(k) = acc / std::sqrt(static_cast<double>(n));
  }
  return out;
}

/// 1-d grid, n = 1: W_k as e^{πi x y} T_x M_y from real coordinates, built
/// column by column from the continuum formula W_k f(u) = e^{πixy} e^{2πiy(u−x)} f(u−x).
inline Matrix weyl_1d(int N, double h, int s, int m) {
  Matrix w = Matrix::Zero(N, N);
  const double x = s * h;
  const double y = m / (N * h);
  for (int j = 0; j < N; ++j) {
    const int src = ((j - s) % N + N) % N;
    const double u_src = (src - N / 2) * h;  // u − x reduced into the window
    w(j, src) = std::polar(1.0, std::numbers::pi * x * y + 2.0 * std::numbers::pi * y * u_src);
  }
  return w;
}

/// ⟨W_k f, g⟩ = h Σ (W_k f) ḡ by direct matrix product, n = 1.
inline cplx matrix_coefficient_1d(int N, double h, int s, int m, const Vector& f, const Vector& g) {
  return h * g.dot(weyl_1d(N, h, s, m) * f);
}

inline double hermite_1d(int k, double u) {
  // Physicists' Hermite polynomial by the three-term recurrence, then scaled.
  const double t = std::sqrt(2.0 * std::numbers::pi) * u;
  double h0 = 1.0, h1 = 2.0 * t;
  double hk = k == 0 ? h0 : h1;
  for (int j = 1; j < k; ++j) {
    const double h2 = 2.0 * t * h1 - 2.0 * j * h0;
    h0 = h1;
    h1 = h2;
    hk = h2;
  }
  double norm = std::pow(2.0, 0.25) / std::sqrt(std::pow(2.0, k) * std::tgamma(k + 1.0));
  return norm * hk * std::exp(-std::numbers::pi * u * u);
}

}  // namespace oracle
