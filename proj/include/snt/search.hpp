#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "snt/types.hpp"

namespace snt {

struct FitOptions {
  int restarts = 30;
  int max_iters = 5000;
  double tol_residual = 1e-7;  // relative to max(1, ||A||_F)
  std::uint64_t seed = 12345;
  double armijo_c = 1e-4;
  double backtrack = 0.5;
  std::vector<Trifactor> warm_starts;  // tried before the random restarts
};

struct FitResult {
  Trifactor f;
  double residual = 0.0;  // || A - B C B^T ||_F
  bool converged = false;
  int iterations = 0;  // iterations used by the winning run
  int run_index = 0;   // warm starts first, then random restarts
};

// || A - B C B^T ||_F^2 and its gradient (dB, dC); dC is symmetrized.
double fit_objective(const SymMatrix& a, const Matrix& b, const Matrix& c);
std::pair<Matrix, Matrix> fit_gradient(const SymMatrix& a, const Matrix& b,
                                       const Matrix& c);

// Projected gradient descent over nonnegative (B, C), C kept symmetric,
// with Barzilai-Borwein trial steps and nonmonotone Armijo backtracking,
// from warm starts and seeded random restarts (restart t draws from
// seed + t and rotates the initial C between identity, hollow, and dense
// symmetric). Deterministic for fixed options. Stops early once a run
// reaches tol_residual; otherwise returns the best run by (residual,
// run order).
FitResult fit_trifactorization(const SymMatrix& a, int k,
                               const FitOptions& opts = {});

struct UpperBoundResult {
  int k = 0;
  Trifactor f;  // witness factorization of width k
  bool identity_fallback = false;
  std::vector<std::pair<int, double>> per_k;  // residual per attempted width
};

// Smallest width the fit reaches tolerance at, scanning k from rank(A)
// to n. (I, A) backstops the scan at k = n, so a witness always exists.
UpperBoundResult snt_upper_bound(const SymMatrix& a,
                                 const FitOptions& opts = {});

struct BooleanRankResult {
  int value = 0;
  bool exact = false;
};

// Exact boolean rank (minimal all-ones-submatrix cover of the support)
// for matrices up to 8x8, by iterative-deepening search over closed
// concepts with memoized dead states.
BooleanRankResult boolean_rank(const BoolMatrix& m);

struct BoundReport {
  int n = 0;
  int lower = 0;  // best available lower bound
  int upper = 0;
  int rank_lower = 0;
  int bool_rank_lower = 0;
  bool bool_rank_available = false;
  Inertia inertia_info;
  bool identity_fallback = false;
  std::optional<Trifactor> upper_witness;
  std::vector<std::pair<int, double>> per_k;
  std::vector<std::string> notes;
};

// Combines the cheap lower bounds (rank, boolean rank of the support for
// n <= 8) with the fit-based upper bound into one interval.
BoundReport bounds_report(const SymMatrix& a, const FitOptions& opts = {});

}  // namespace snt
