#include "snt/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "snt/simplex.hpp"

namespace snt {
namespace {

std::vector<std::pair<int, int>> zero_entries(const Matrix& m,
                                              double zero_tol) {
  const double cut = zero_tol * std::max(m.maxCoeff(), 0.0);
  std::vector<std::pair<int, int>> out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (m(i, j) <= cut) out.emplace_back(static_cast<int>(i), static_cast<int>(j));
    }
  }
  return out;
}

void check_factor_pair(const Matrix& b, const Matrix& c) {
  if (b.rows() < 1 || b.cols() < 1) throw DimensionError("B must be nonempty");
  if (c.rows() != c.cols() || c.rows() != b.cols()) {
    throw DimensionError("C must be square with the column count of B");
  }
  const double bs = std::max(1.0, b.cwiseAbs().maxCoeff());
  const double cs = std::max(1.0, c.cwiseAbs().maxCoeff());
  if (b.minCoeff() < -1e-6 * bs || c.minCoeff() < -1e-6 * cs) {
    throw DomainError("factor entries must be nonnegative");
  }
}

}  // namespace

std::optional<Certificate> boundary_certificate(const Matrix& b,
                                                const Matrix& c,
                                                double zero_tol) {
  check_factor_pair(b, c);
  const int n = static_cast<int>(b.rows());
  const int k = static_cast<int>(b.cols());

  const auto zb = zero_entries(b, zero_tol);
  std::vector<std::pair<int, int>> zc;
  for (const auto& [i, j] : zero_entries(c, zero_tol)) {
    if (i <= j) zc.emplace_back(i, j);
  }
  const int nb = static_cast<int>(zb.size());
  const int nw = static_cast<int>(zc.size());
  if (nb + nw == 0) return std::nullopt;

  // Rows 0..k*k-1: entries of W C - B^T X = 0; last row: normalization.
  const int rows = k * k + 1;
  Matrix lp_a = Matrix::Zero(rows, nb + nw);
  Vector lp_b = Vector::Zero(rows);
  lp_b(rows - 1) = 1.0;

  auto eq = [k](int p, int q) { return p * k + q; };

  for (int e = 0; e < nb; ++e) {
    const auto [i, j] = zb[e];
    for (int p = 0; p < k; ++p) lp_a(eq(p, j), e) -= b(i, p);
    lp_a(rows - 1, e) = 1.0;
  }
  for (int f = 0; f < nw; ++f) {
    const auto [i, j] = zc[f];
    const int col = nb + f;
    for (int q = 0; q < k; ++q) {
      lp_a(eq(i, q), col) += c(j, q);
      if (i != j) lp_a(eq(j, q), col) += c(i, q);
    }
    lp_a(rows - 1, col) = (i == j) ? 1.0 : 2.0;
  }

  Vector point;
  if (!lp_feasible(lp_a, lp_b, 1e-9, &point)) return std::nullopt;

  Certificate cert;
  cert.x = Matrix::Zero(n, k);
  cert.w = Matrix::Zero(k, k);
  for (int e = 0; e < nb; ++e) {
    const auto [i, j] = zb[e];
    cert.x(i, j) = std::max(0.0, point(e));
  }
  for (int f = 0; f < nw; ++f) {
    const auto [i, j] = zc[f];
    const double v = std::max(0.0, point(nb + f));
    cert.w(i, j) = v;
    cert.w(j, i) = v;
  }
  cert.max_residual =
      (cert.w * c - b.transpose() * cert.x).cwiseAbs().maxCoeff();
  if (cert.max_residual > 1e-7 * std::max(1.0, c.cwiseAbs().maxCoeff())) {
    throw DomainError("certificate solve left a large residual");
  }
  return cert;
}

std::optional<Certificate> boundary_certificate(const Trifactor& f,
                                                double zero_tol) {
  return boundary_certificate(f.b(), f.c(), zero_tol);
}

MovabilityReport check_movable(const Trifactor& f, double zero_tol) {
  MovabilityReport report;
  if (zero_entries(f.b(), zero_tol).empty()) {
    report.movable = true;
    report.reason = "B is strictly positive";
    return report;
  }
  if (zero_entries(f.c(), zero_tol).empty()) {
    report.movable = true;
    report.reason = "C is strictly positive";
    return report;
  }
  report.certificate = boundary_certificate(f, zero_tol);
  if (report.certificate.has_value()) {
    report.movable = false;
    report.reason = "zero-pattern certificate found";
  } else {
    report.movable = true;
    report.reason = "no zero-pattern certificate exists";
  }
  return report;
}

}  // namespace snt
