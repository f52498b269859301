#pragma once

#include <optional>

#include "snt/search.hpp"
#include "snt/types.hpp"

namespace snt {

// Factorization of the one-sided extension
//   [[A1, A1 N], [N^T A1, N^T A1 N + A0]]
// from a factor of A1, the coupling N, and (optionally) a factor of the
// Schur term A0. When A0 is omitted it is taken to be zero and the width
// stays k1 with B = [B1; N^T B1], C = C1. Requires N^T B1 >= 0.
Trifactor schur_completion(const Trifactor& f1, const Matrix& coupling,
                           const std::optional<Trifactor>& f0 = std::nullopt);

struct GlueInput {
  Trifactor a1_hat_factor;  // factor of the bordered block [[A', a], [a^T, alpha]]
  Trifactor a2_factor;      // factor of A2
  Vector u;                 // unit u >= 0 with A2 u = alpha u
  double alpha = 0.0;       // overlap entry, strictly positive
};

struct GlueResult {
  SymMatrix a;  // [[A', a u^T], [u a^T, A2]]
  Trifactor f;
};

// Glues two factorizations along a single overlap entry alpha, replacing
// it by the rank-1 coupling a u^T. B is block diagonal; the off-diagonal
// block of C is (1/alpha) C1 b1 u^T B2 C2 with b1 the glued row of B1,
// so the result is entrywise nonnegative by construction and has width
// k1 + k2.
GlueResult rank1_glue(const GlueInput& in);

// Special case A2 = alpha u u^T: the glued row is replaced by the block
// u b1^T and the width stays k1. alpha is read off the factor as
// b1^T C1 b1.
GlueResult rank1_glue_rank1(const Trifactor& a1_hat_factor, const Vector& u);

// Width lower bound for any completion of [[A1, X], [X^T, A2]]:
// max(pi+(A1), pi+(A2)) + max(pi-(A1), pi-(A2)).
int completion_lower_bound(const SymMatrix& a1, const SymMatrix& a2);

struct CompletionFit {
  Trifactor f;             // factor of the completed matrix
  Matrix x;                // realized off-diagonal block of B C B^T
  double residual = 0.0;   // Frobenius residual over the known blocks
  double min_cross = 0.0;  // smallest entry of the realized block
  bool converged = false;
};

// Searches for a width-k factorization matching the diagonal blocks A1
// and A2 while the off-diagonal block is free. With strict_positive_x
// the block is additionally pushed to be entrywise >= 1e-3 times the
// largest known entry (hinge penalty); converged then also requires the
// hinge to vanish.
CompletionFit fit_completion(const SymMatrix& a1, const SymMatrix& a2, int k,
                             bool strict_positive_x,
                             const FitOptions& opts = {});

}  // namespace snt
