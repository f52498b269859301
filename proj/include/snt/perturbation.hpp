#pragma once

#include <cstdint>
#include <vector>

#include "snt/types.hpp"

namespace snt {

// Invertible r x r matrix S whose first column is strictly positive and
// whose inverse has a strictly positive first row. These are exactly the
// similarities that can carry a Perron eigenvector in the factor moves
// below; both conditions are validated on construction.
class PerronSimilarity {
 public:
  explicit PerronSimilarity(const Matrix& s);

  int r() const { return static_cast<int>(m_s.rows()); }
  const Matrix& s() const { return m_s; }
  const Matrix& s_inv() const { return m_s_inv; }

 private:
  Matrix m_s;
  Matrix m_s_inv;
};

// Smallest beta >= 0 making
//   B(beta, S) = U (beta (+) I) S^{-1} = beta u s^1 + U1 S^{-1}[1:, :]
// entrywise nonnegative (closed form over the negative entries of the
// fixed part). s^1 is the first row of S^{-1}.
double min_beta(const SpectralData& sd, const PerronSimilarity& s);

// Smallest alpha >= 0 making
//   C(alpha, beta, S) = ((lambda1+alpha)/beta^2) s1 s1^T + S1 diag(d1) S1^T
// entrywise nonnegative, where s1 is the first column of S and S1 the
// remaining columns. Requires beta > 0.
double min_alpha(const SpectralData& sd, const PerronSimilarity& s,
                 double beta);

// Assembles the factor pair (B(beta, S), C(alpha, beta, S)); subtraction
// dust in [-1e-12, 0) is clamped to exact zero.
Trifactor perturbed_factor(const SpectralData& sd, const PerronSimilarity& s,
                           double alpha, double beta);

struct PerturbResult {
  double alpha = 0.0;
  double beta = 0.0;
  Trifactor f;
  SymMatrix a_perturbed;
};

// Rank-preserving diagonal perturbation: finds the minimal beta, then the
// minimal alpha, and returns a valid width-r factorization of
// A + alpha u u^T. When min_beta is zero (the fixed part of B is already
// nonnegative) beta is instead chosen as large as possible subject to
// alpha staying zero. Rank-1 input short-circuits to alpha = 0 with the
// factor (u, [lambda1]).
PerturbResult perturb_with_spectral(const SymMatrix& a, const SpectralData& sd,
                                    const PerronSimilarity& s);
PerturbResult perturb_factorization(const SymMatrix& a,
                                    const PerronSimilarity& s);

struct OptimizeResult {
  Matrix s;
  double alpha = 0.0;
  double beta = 0.0;
  int evaluations = 0;
};

// Randomized search for a similarity with small perturbation size alpha:
// orthogonal completions of random positive first columns, refined by
// Nelder-Mead on the entries of S. Deterministic for a fixed seed. Extra
// starting candidates may be supplied and are evaluated first. The result
// is a feasible similarity with the best alpha seen; no optimality claim.
OptimizeResult optimize_similarity(const SymMatrix& a, int budget,
                                   std::uint64_t seed,
                                   const std::vector<Matrix>& initial_candidates = {});

struct SimilarityExtract {
  Matrix t;
  Matrix t_inv;
  bool first_col_nonneg = false;
  bool first_row_inv_nonneg = false;
  double b_residual = 0.0;  // || U T^{-1} - B ||_max
  double c_residual = 0.0;  // || T (lambda1 (+) d1) T^T - C ||_max
};

// Recovers the similarity T with B = U T^{-1}, C = T (lambda1 (+) d1) T^T
// from a width-r factor of an irreducible A. Throws DomainError when B is
// not supported on the column space of U or the recovered T is singular.
SimilarityExtract extract_similarity(const SymMatrix& a, const Trifactor& f);

}  // namespace snt
