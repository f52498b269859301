#pragma once

#include <utility>
#include <vector>

#include "snt/types.hpp"

namespace snt {

// Entrywise residual check of A = B C B^T together with the factor-side
// invariants (B, C nonnegative up to -1e-12 dust, C symmetric).
VerifyReport verify_trifactorization(const SymMatrix& a, const Matrix& b,
                                     const Matrix& c, double tol = 1e-10);
VerifyReport verify_trifactorization(const SymMatrix& a, const Trifactor& f,
                                     double tol = 1e-10);

// Count of eigenvalues with |lambda| above the rank threshold. A negative
// tol selects the default threshold n * 1e-12 * |lambda|_max; an explicit
// tol >= 0 uses tol * max(1, |lambda|_max).
int numerical_rank(const SymMatrix& a, double tol = -1.0);

// Signature (pi_plus, pi_minus, pi_zero) under the same thresholding.
Inertia inertia(const SymMatrix& a, double tol = -1.0);

// Perron pair of an irreducible matrix: spectral radius and the positive
// unit eigenvector. Throws DomainError when A is reducible.
std::pair<double, Vector> perron(const SymMatrix& a);

// Splits the spectrum of an irreducible matrix at the Perron eigenvalue,
// dropping eigenvalues below the rank threshold:
//   A ~ lambda1 u u^T + U1 diag(d1) U1^T,  r = numerical_rank(A).
SpectralData spectral_split(const SymMatrix& a, double tol = -1.0);

// Connectivity of the undirected support graph (strictly positive entries).
bool is_irreducible(const SymMatrix& a);

// Boolean pattern of entries with |a_ij| > tol.
BoolMatrix support_pattern(const Matrix& a, double tol = 0.0);

// Diagonal scaling plus column permutation, the product-preserving move
//   (B, C) -> (B P D, D^{-1} P^T C P D^{-1}).
// perm[j] names the old column placed at position j; d holds the positive
// diagonal of D.
Trifactor apply_scaling(const Trifactor& f, const std::vector<int>& perm,
                        const Vector& d);

}  // namespace snt
