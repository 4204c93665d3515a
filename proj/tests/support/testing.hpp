#pragma once

// Independent reference computations used to check the library. Nothing in
// here calls the code under test.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <vector>

namespace testing {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240611);
  return gen;
}

inline double uniform(double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng()); }

inline Matrix random_matrix(Eigen::Index r, Eigen::Index c, double lo = -1.0, double hi = 1.0) {
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = uniform(lo, hi);
  return m;
}

/// Dirichlet(1,...,1) draw pushed away from the boundary by `floor`.
inline Vector random_simplex(Eigen::Index n, double floor = 0.02) {
  std::exponential_distribution<double> e(1.0);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = e(rng());
  v /= v.sum();
  v = (1.0 - floor * static_cast<double>(n)) * v + Vector::Constant(n, floor);
  return v / v.sum();
}

inline Matrix random_stochastic(Eigen::Index r, Eigen::Index c, double floor = 0.0) {
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) m.row(i) = random_simplex(c, floor).transpose();
  return m;
}

__extension__ using wide_int = __int128;

/// Exact rank of an integer matrix by fraction-free Gaussian elimination.
inline int bareiss_rank(std::vector<std::vector<long long>> a) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  std::vector<std::vector<wide_int>> m(rows, std::vector<wide_int>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m[i][j] = a[i][j];
  wide_int prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && m[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) m[i][j] = (m[i][j] * m[r][c] - m[i][c] * m[r][j]) / prev;
      m[i][c] = 0;
    }
    prev = m[r][c];
    ++r;
  }
  return static_cast<int>(r);
}

/// min c'x over {A x <= b, 0 <= x <= ub} by enumerating every vertex.
/// Returns nullopt when the polytope is empty.
inline std::optional<double> vertex_enumeration_min(const Vector& c, const Matrix& a, const Vector& b,
                                                    const Vector& ub) {
  const Eigen::Index n = c.size();
  // Stack all constraints as G x <= h.
  const Eigen::Index m = a.rows() + 2 * n;
  Matrix g(m, n);
  Vector h(m);
  g.topRows(a.rows()) = a;
  h.head(a.rows()) = b;
  g.block(a.rows(), 0, n, n) = -Matrix::Identity(n, n);
  h.segment(a.rows(), n).setZero();
  g.bottomRows(n) = Matrix::Identity(n, n);
  h.tail(n) = ub;

  std::optional<double> best;
  std::vector<int> pick(static_cast<std::size_t>(n));
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == n) {
      Matrix sub(n, n);
      Vector rhs(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        sub.row(i) = g.row(pick[static_cast<std::size_t>(i)]);
        rhs(i) = h(pick[static_cast<std::size_t>(i)]);
      }
      Eigen::FullPivLU<Matrix> lu(sub);
      if (!lu.isInvertible()) return;
      const Vector x = lu.solve(rhs);
      if (((g * x - h).array() > 1e-9).any()) return;
      const double v = c.dot(x);
      if (!best || v < *best) best = v;
      return;
    }
    for (int i = start; i < m; ++i) {
      pick[static_cast<std::size_t>(depth)] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
  return best;
}

/// Shannon entropy in nats.
inline double entropy(const Vector& p) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i)
    if (p(i) > 0) h -= p(i) * std::log(p(i));
  return h;
}

/// Richardson-extrapolated one-sided derivative of f at t = 0.
inline double richardson(const std::function<double(double)>& f, double h = 1e-3) {
  const double f0 = f(0.0);
  const double d1 = (f(h) - f0) / h;
  const double d2 = (f(h / 2) - f0) / (h / 2);
  const double d4 = (f(h / 4) - f0) / (h / 4);
  const double r1 = 2 * d2 - d1;
  const double r2 = 2 * d4 - d2;
  return (4 * r2 - r1) / 3;
}

}  // namespace testing
