#pragma once

#include <vector>

#include "snt/types.hpp"

namespace snt {

// Nonnegative factor pair of a (not necessarily symmetric) matrix X = U V^T.
struct NmfPair {
  Matrix u;
  Matrix v;

  NmfPair(const Matrix& u_in, const Matrix& v_in);
  int k() const { return static_cast<int>(u.cols()); }
  Matrix product() const { return u * v.transpose(); }
};

// Factor of A1 + A2 from factors of the summands (same size):
// B = [B1 B2], C = diag(C1, C2).
Trifactor sum_factor(const Trifactor& f1, const Trifactor& f2);

// Factor of the block-diagonal direct sum A1 (+) A2.
Trifactor direct_sum(const Trifactor& f1, const Trifactor& f2);

// Factor of A^m from a factor of A: B stays, C becomes (C B^T B)^(m-1) C.
Trifactor power_factor(const Trifactor& f, int m);

// Factor of the principal submatrix A[rows, rows]: B restricted to rows,
// C unchanged. rows must be distinct in-range indices (0-based).
Trifactor principal_subfactor(const Trifactor& f, const std::vector<int>& rows);

// Factor of [[0, X], [X^T, 0]] from an NMF of X:
// B = diag(U, V), C with identity blocks on the antidiagonal. k = 2 k(X).
Trifactor bipartite_factor(const NmfPair& x);

// Factor of X + X^T from an NMF of the square matrix X:
// B = [U V], same antidiagonal C. k = 2 k(X).
Trifactor symmetrization_factor(const NmfPair& x);

// Factor from a separable column set: every column of A must be a
// nonnegative combination of A[:, cols]. B carries the combination
// coefficients (identity rows on cols), C = A[cols, cols].
// Throws DomainError when some column is not representable within tol.
Trifactor separable_factor(const SymMatrix& a, const std::vector<int>& cols,
                           double tol = 1e-9);

// First separable column set in index order, sizes from rank(A) upward.
// Returns an empty vector when none is found within the size budget.
std::vector<int> find_separable_columns(const SymMatrix& a,
                                        double tol = 1e-9);

// Exact k = 2 factor of a rank-2 matrix via the two extreme rays of the
// planar cone spanned by the columns (angular sort, ties to the smaller
// index). Throws DomainError when numerical_rank(A) != 2.
Trifactor rank2_factor(const SymMatrix& a, double tol = -1.0);

// Squared point-to-point distances on the line: M[i][j] = (i - j)^2.
Matrix edm_matrix(int n);

// Exact factor of edm_matrix(n) with k = n/2 + 2 for even n >= 2.
// Odd sizes are rejected; callers restrict edm_factor(n + 1) instead.
Trifactor edm_factor(int n);

}  // namespace snt
