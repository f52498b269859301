#pragma once

#include <optional>
#include <string>

#include "snt/types.hpp"

namespace snt {

// Witness that a nonnegative factor pair (B, C) cannot be moved along its
// zero pattern: X >= 0 supported on the zero set of B and symmetric
// W >= 0 supported on the zero set of C, not both zero, with
// W C = B^T X.
struct Certificate {
  Matrix x;  // shape of B
  Matrix w;  // k x k, symmetric
  double max_residual = 0.0;  // || W C - B^T X ||_max at the returned point
};

// Searches for a certificate by linear programming (feasibility of the
// support-constrained system plus a normalization ruling out the zero
// solution). Entries of B and C at or below zero_tol times the matrix's
// largest entry count as zeros. Returns std::nullopt when no certificate
// exists.
std::optional<Certificate> boundary_certificate(const Matrix& b,
                                                const Matrix& c,
                                                double zero_tol = 1e-9);
std::optional<Certificate> boundary_certificate(const Trifactor& f,
                                                double zero_tol = 1e-9);

struct MovabilityReport {
  bool movable = false;
  std::string reason;
  std::optional<Certificate> certificate;
};

// A pair is movable when some entrywise-nonnegative first-order move of
// (B, C) preserving the product exists: trivially when B or C is strictly
// positive, otherwise exactly when no certificate exists.
MovabilityReport check_movable(const Trifactor& f, double zero_tol = 1e-9);

}  // namespace snt
