#include "snt/matcore.hpp"

#include <cmath>
#include <vector>

#include "snt/linalg.hpp"

namespace snt {

namespace {

constexpr double kNegDust = 1e-12;

double rank_threshold(const Vector& eigenvalues, int n, double tol) {
  const double lam_max = eigenvalues.cwiseAbs().maxCoeff();
  if (tol < 0.0) return n * 1e-12 * lam_max;
  return tol * std::max(1.0, lam_max);
}

}  // namespace

VerifyReport verify_trifactorization(const SymMatrix& a, const Matrix& b,
                                     const Matrix& c, double tol) {
  if (b.rows() != a.n() || c.rows() != c.cols() || b.cols() != c.rows()) {
    throw DimensionError("verify: factor shapes do not match the target");
  }
  VerifyReport rep;
  const Matrix residual = a.data() - b * c * b.transpose();
  rep.max_residual = residual.cwiseAbs().maxCoeff();
  rep.fro_residual = residual.norm();
  rep.nonneg_ok = b.minCoeff() >= -kNegDust && c.minCoeff() >= -kNegDust;
  const double cscale = std::max(1.0, c.cwiseAbs().maxCoeff());
  rep.symmetry_ok =
      (c - c.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * cscale;
  rep.valid = rep.max_residual <= tol && rep.nonneg_ok && rep.symmetry_ok;
  return rep;
}

VerifyReport verify_trifactorization(const SymMatrix& a, const Trifactor& f,
                                     double tol) {
  return verify_trifactorization(a, f.b(), f.c(), tol);
}

int numerical_rank(const SymMatrix& a, double tol) {
  const EigenDecomposition ed = jacobi_eigendecomposition(a.data());
  const double thresh = rank_threshold(ed.values, a.n(), tol);
  int rank = 0;
  for (int i = 0; i < ed.values.size(); ++i) {
    if (std::abs(ed.values(i)) > thresh) ++rank;
  }
  return rank;
}

Inertia inertia(const SymMatrix& a, double tol) {
  const EigenDecomposition ed = jacobi_eigendecomposition(a.data());
  const double thresh = rank_threshold(ed.values, a.n(), tol);
  Inertia in;
  for (int i = 0; i < ed.values.size(); ++i) {
    if (ed.values(i) > thresh) {
      ++in.pi_plus;
    } else if (ed.values(i) < -thresh) {
      ++in.pi_minus;
    } else {
      ++in.pi_zero;
    }
  }
  return in;
}

bool is_irreducible(const SymMatrix& a) {
  const int n = a.n();
  if (n <= 1) return true;
  std::vector<bool> seen(n, false);
  std::vector<int> stack = {0};
  seen[0] = true;
  int reached = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int w = 0; w < n; ++w) {
      if (!seen[w] && w != v && a(v, w) > 0.0) {
        seen[w] = true;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  return reached == n;
}

std::pair<double, Vector> perron(const SymMatrix& a) {
  if (!is_irreducible(a)) {
    throw DomainError("perron pair requires an irreducible matrix");
  }
  const EigenDecomposition ed = jacobi_eigendecomposition(a.data());
  // eigenvalues are sorted descending; for a nonnegative symmetric matrix
  // the largest one is the spectral radius
  Vector u = ed.vectors.col(0);
  if (u.sum() < 0.0) u = -u;
  return {ed.values(0), u};
}

SpectralData spectral_split(const SymMatrix& a, double tol) {
  if (!is_irreducible(a)) {
    throw DomainError("spectral split requires an irreducible matrix");
  }
  const EigenDecomposition ed = jacobi_eigendecomposition(a.data());
  const double thresh = rank_threshold(ed.values, a.n(), tol);

  SpectralData sd;
  sd.lambda1 = ed.values(0);
  sd.u = ed.vectors.col(0);
  if (sd.u.sum() < 0.0) sd.u = -sd.u;
  if (sd.lambda1 <= thresh) {
    throw DomainError("perron eigenvalue is numerically zero");
  }

  std::vector<int> keep;
  for (int i = 1; i < ed.values.size(); ++i) {
    if (std::abs(ed.values(i)) > thresh) keep.push_back(i);
  }
  sd.r = 1 + static_cast<int>(keep.size());
  sd.d1.resize(keep.size());
  sd.u1.resize(a.n(), keep.size());
  for (size_t t = 0; t < keep.size(); ++t) {
    sd.d1(t) = ed.values(keep[t]);
    sd.u1.col(t) = ed.vectors.col(keep[t]);
  }
  return sd;
}

BoolMatrix support_pattern(const Matrix& a, double tol) {
  BoolMatrix p(a.rows(), a.cols());
  for (long i = 0; i < a.rows(); ++i) {
    for (long j = 0; j < a.cols(); ++j) {
      p(i, j) = std::abs(a(i, j)) > tol;
    }
  }
  return p;
}

Trifactor apply_scaling(const Trifactor& f, const std::vector<int>& perm,
                        const Vector& d) {
  const int k = f.k();
  if (static_cast<int>(perm.size()) != k || d.size() != k) {
    throw DimensionError("scaling data must match the factor width");
  }
  std::vector<bool> hit(k, false);
  for (int j : perm) {
    if (j < 0 || j >= k || hit[j]) {
      throw DomainError("invalid column permutation");
    }
    hit[j] = true;
  }
  if (d.minCoeff() <= 0.0) {
    throw DomainError("scaling diagonal must be strictly positive");
  }

  Matrix b2(f.n(), k);
  Matrix c2(k, k);
  for (int j = 0; j < k; ++j) b2.col(j) = f.b().col(perm[j]) * d(j);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      c2(i, j) = f.c()(perm[i], perm[j]) / (d(i) * d(j));
    }
  }
  return Trifactor(b2, c2);
}

}  // namespace snt
