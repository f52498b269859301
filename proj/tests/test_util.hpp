#pragma once

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <numeric>
#include <vector>

#include "snt/linalg.hpp"
#include "snt/types.hpp"

namespace snt::testutil {

inline Matrix random_matrix(Rng& rng, int n, int m, double lo, double hi) {
  Matrix a(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) a(i, j) = rng.uniform(lo, hi);
  return a;
}

inline Matrix random_symmetric(Rng& rng, int n, double scale = 1.0) {
  const Matrix g = random_matrix(rng, n, n, -scale, scale);
  return 0.5 * (g + g.transpose());
}

// dense, entrywise positive, hence irreducible
inline Matrix random_nonneg_sym(Rng& rng, int n, double lo = 0.05,
                                double hi = 1.0) {
  const Matrix g = random_matrix(rng, n, n, lo, hi);
  return 0.5 * (g + g.transpose());
}

inline Matrix random_orthogonal(Rng& rng, int n) {
  Matrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = rng.gaussian();
  // Gram-Schmidt, retrying on near-dependence
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < j; ++i) g.col(j) -= g.col(i).dot(g.col(j)) * g.col(i);
    double nrm = g.col(j).norm();
    while (nrm < 1e-8) {
      for (int i = 0; i < n; ++i) g(i, j) = rng.gaussian();
      for (int i = 0; i < j; ++i) g.col(j) -= g.col(i).dot(g.col(j)) * g.col(i);
      nrm = g.col(j).norm();
    }
    g.col(j) /= nrm;
  }
  return g;
}

// random nonnegative factor pair with planted zeros in B
inline Trifactor random_factor(Rng& rng, int n, int k, double zero_rate = 0.3) {
  Matrix b(n, k);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j)
      b(i, j) = (rng.uniform() < zero_rate) ? 0.0 : rng.uniform(0.1, 2.0);
  Matrix c(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) {
      const double v = (rng.uniform() < zero_rate) ? 0.0 : rng.uniform(0.1, 2.0);
      c(i, j) = v;
      c(j, i) = v;
    }
  return Trifactor(b, c);
}

inline std::vector<int> random_permutation(Rng& rng, int k) {
  std::vector<int> p(k);
  std::iota(p.begin(), p.end(), 0);
  for (int i = k - 1; i > 0; --i) std::swap(p[i], p[rng.index(i + 1)]);
  return p;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

// independent reference spectrum
inline Vector eigen_solver_values(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  return es.eigenvalues();
}

}  // namespace snt::testutil
