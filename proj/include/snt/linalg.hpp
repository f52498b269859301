#pragma once

#include <cstdint>
#include <functional>
#include <random>

#include "snt/types.hpp"

namespace snt {

// Eigendecomposition A = V diag(values) V^T with eigenvalues sorted
// descending and each eigenvector sign-fixed so its largest-magnitude
// entry is positive (first such index on ties).
struct EigenDecomposition {
  Vector values;
  Matrix vectors;
};

// Cyclic-by-rows Jacobi rotations on a dense symmetric matrix. Sweeps run
// in a fixed order, so the result is deterministic for identical input.
// Iteration stops once the off-diagonal Frobenius norm drops below
// tol * ||A||_F.
EigenDecomposition jacobi_eigendecomposition(const Matrix& a,
                                             double tol = 1e-12,
                                             int max_sweeps = 64);

// Deterministic random source. Draws are produced from raw mt19937_64
// output rather than distribution objects so that streams are identical
// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : m_gen(seed) {}

  // uniform on [0, 1)
  double uniform() {
    return static_cast<double>(m_gen() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double gaussian();

  // integer in [0, n)
  int index(int n);

 private:
  std::mt19937_64 m_gen;
  bool m_has_spare = false;
  double m_spare = 0.0;
};

// Nonnegative least squares: argmin ||A x - b|| subject to x >= 0,
// Lawson-Hanson active set with deterministic tie breaking.
Vector nnls(const Matrix& a, const Vector& b, double tol = 1e-9,
            int max_iter = 0);

// Root of a continuous function by bisection; f(lo) and f(hi) must have
// opposite signs. Runs until the bracket is narrower than tol.
double bisect_root(const std::function<double(double)>& f, double lo,
                   double hi, double tol = 1e-14);

}  // namespace snt
