#include "snt/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "snt/linalg.hpp"
#include "snt/matcore.hpp"

namespace snt {

namespace {

Matrix antidiag_identity(int h) {
  Matrix k = Matrix::Zero(h, h);
  for (int i = 0; i < h; ++i) k(i, h - 1 - i) = 1.0;
  return k;
}

// C block shared by the bipartite and symmetrization builders:
// [[0, I_k], [I_k, 0]].
Matrix swap_blocks(int k) {
  Matrix c = Matrix::Zero(2 * k, 2 * k);
  c.block(0, k, k, k) = Matrix::Identity(k, k);
  c.block(k, 0, k, k) = Matrix::Identity(k, k);
  return c;
}

std::optional<Trifactor> try_separable(const SymMatrix& a,
                                       const std::vector<int>& cols,
                                       double tol, std::string* why) {
  const int n = a.n();
  const int k = static_cast<int>(cols.size());
  Matrix anchors(n, k);
  for (int t = 0; t < k; ++t) anchors.col(t) = a.data().col(cols[t]);

  Matrix b = Matrix::Zero(n, k);
  std::vector<bool> is_anchor(n, false);
  for (int t = 0; t < k; ++t) {
    b(cols[t], t) = 1.0;
    is_anchor[cols[t]] = true;
  }

  double worst = 0.0;
  int worst_col = -1;
  for (int j = 0; j < n; ++j) {
    if (is_anchor[j]) continue;
    const Vector target = a.data().col(j);
    const Vector q = nnls(anchors, target, tol);
    const double res = (anchors * q - target).norm();
    const double rel = res / std::max(1.0, target.norm());
    if (res > tol * std::max(1.0, target.norm()) && rel > worst) {
      worst = rel;
      worst_col = j;
    }
    b.row(j) = q.transpose();
  }
  if (worst_col >= 0) {
    if (why != nullptr) {
      *why = "column " + std::to_string(worst_col) +
             " is not a nonnegative combination of the selected columns "
             "(relative residual " +
             std::to_string(worst) + ")";
    }
    return std::nullopt;
  }

  Matrix c(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) c(i, j) = a(cols[i], cols[j]);
  }
  return Trifactor(b, c);
}

}  // namespace

NmfPair::NmfPair(const Matrix& u_in, const Matrix& v_in) : u(u_in), v(v_in) {
  if (u.cols() != v.cols() || u.cols() < 1) {
    throw DimensionError("nmf factors must share a positive column count");
  }
  if (u.minCoeff() < 0.0 || v.minCoeff() < 0.0) {
    throw DomainError("nmf factors must be nonnegative");
  }
}

Trifactor sum_factor(const Trifactor& f1, const Trifactor& f2) {
  if (f1.n() != f2.n()) {
    throw DimensionError("summand factors must have the same row count");
  }
  const int k1 = f1.k();
  const int k2 = f2.k();
  Matrix b(f1.n(), k1 + k2);
  b << f1.b(), f2.b();
  Matrix c = Matrix::Zero(k1 + k2, k1 + k2);
  c.topLeftCorner(k1, k1) = f1.c();
  c.bottomRightCorner(k2, k2) = f2.c();
  return Trifactor(b, c);
}

Trifactor direct_sum(const Trifactor& f1, const Trifactor& f2) {
  const int k1 = f1.k();
  const int k2 = f2.k();
  Matrix b = Matrix::Zero(f1.n() + f2.n(), k1 + k2);
  b.topLeftCorner(f1.n(), k1) = f1.b();
  b.bottomRightCorner(f2.n(), k2) = f2.b();
  Matrix c = Matrix::Zero(k1 + k2, k1 + k2);
  c.topLeftCorner(k1, k1) = f1.c();
  c.bottomRightCorner(k2, k2) = f2.c();
  return Trifactor(b, c);
}

Trifactor power_factor(const Trifactor& f, int m) {
  if (m < 1) throw DomainError("power exponent must be at least 1");
  if (m == 1) return f;
  const Matrix gram = f.b().transpose() * f.b();
  Matrix c = f.c();
  for (int i = 1; i < m; ++i) c = f.c() * gram * c;
  c = 0.5 * (c + c.transpose());
  return Trifactor(f.b(), c);
}

Trifactor principal_subfactor(const Trifactor& f,
                              const std::vector<int>& rows) {
  if (rows.empty()) throw DimensionError("row selection is empty");
  std::vector<bool> hit(f.n(), false);
  for (int r : rows) {
    if (r < 0 || r >= f.n()) {
      throw DimensionError("row index " + std::to_string(r) + " out of range");
    }
    if (hit[r]) throw DomainError("row selection has duplicates");
    hit[r] = true;
  }
  Matrix b(rows.size(), f.k());
  for (size_t i = 0; i < rows.size(); ++i) b.row(i) = f.b().row(rows[i]);
  return Trifactor(b, f.c());
}

Trifactor bipartite_factor(const NmfPair& x) {
  const int k = x.k();
  const int n1 = static_cast<int>(x.u.rows());
  const int n2 = static_cast<int>(x.v.rows());
  Matrix b = Matrix::Zero(n1 + n2, 2 * k);
  b.topLeftCorner(n1, k) = x.u;
  b.bottomRightCorner(n2, k) = x.v;
  return Trifactor(b, swap_blocks(k));
}

Trifactor symmetrization_factor(const NmfPair& x) {
  if (x.u.rows() != x.v.rows()) {
    throw DimensionError("symmetrization needs a square product");
  }
  const int k = x.k();
  Matrix b(x.u.rows(), 2 * k);
  b << x.u, x.v;
  return Trifactor(b, swap_blocks(k));
}

Trifactor separable_factor(const SymMatrix& a, const std::vector<int>& cols,
                           double tol) {
  if (cols.empty()) throw DimensionError("column selection is empty");
  std::vector<bool> hit(a.n(), false);
  for (int c : cols) {
    if (c < 0 || c >= a.n()) {
      throw DimensionError("column index " + std::to_string(c) +
                           " out of range");
    }
    if (hit[c]) throw DomainError("column selection has duplicates");
    hit[c] = true;
  }
  std::string why;
  auto f = try_separable(a, cols, tol, &why);
  if (!f) throw DomainError("matrix is not separable over these columns: " + why);
  return *f;
}

std::vector<int> find_separable_columns(const SymMatrix& a, double tol) {
  const int n = a.n();
  const int r = std::max(1, numerical_rank(a));
  long budget = 100000;

  for (int k = r; k <= n; ++k) {
    std::vector<int> cols(k);
    for (int i = 0; i < k; ++i) cols[i] = i;
    while (true) {
      if (--budget < 0) return {};
      if (try_separable(a, cols, tol, nullptr)) return cols;
      // next lexicographic combination
      int i = k - 1;
      while (i >= 0 && cols[i] == n - k + i) --i;
      if (i < 0) break;
      ++cols[i];
      for (int j = i + 1; j < k; ++j) cols[j] = cols[j - 1] + 1;
    }
  }
  return {};
}

Trifactor rank2_factor(const SymMatrix& a, double tol) {
  if (numerical_rank(a, tol) != 2) {
    throw DomainError("rank2 factor requires numerical rank exactly 2");
  }
  const int n = a.n();
  const EigenDecomposition ed = jacobi_eigendecomposition(a.data());

  // the two dominant-magnitude eigenpairs span the column space
  std::vector<int> order(ed.values.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
    return std::abs(ed.values(i)) > std::abs(ed.values(j));
  });
  const int e0 = order[0];
  const int e1 = order[1];

  // coordinates of each column in the orthonormal eigenbasis
  Matrix coords(2, n);
  for (int j = 0; j < n; ++j) {
    coords(0, j) = ed.values(e0) * ed.vectors(j, e0);
    coords(1, j) = ed.values(e1) * ed.vectors(j, e1);
  }

  const double scale = a.data().cwiseAbs().maxCoeff();
  Vector dir = Vector::Zero(2);
  for (int j = 0; j < n; ++j) {
    const double len = coords.col(j).norm();
    if (len > 1e-13 * scale) dir += coords.col(j) / len;
  }
  if (dir.norm() < 1e-12) {
    throw DomainError("columns do not span a pointed planar cone");
  }

  // signed angle of every nonzero column against the cone interior; the
  // extreme rays sit at the two ends
  int arg_lo = -1;
  int arg_hi = -1;
  double lo = 0.0;
  double hi = 0.0;
  for (int j = 0; j < n; ++j) {
    if (coords.col(j).norm() <= 1e-13 * scale) continue;
    const double cross = dir(0) * coords(1, j) - dir(1) * coords(0, j);
    const double dot = dir.dot(coords.col(j));
    const double ang = std::atan2(cross, dot);
    if (arg_lo < 0 || ang < lo - 1e-14) {
      arg_lo = j;
      lo = ang;
    }
    if (arg_hi < 0 || ang > hi + 1e-14) {
      arg_hi = j;
      hi = ang;
    }
  }
  if (arg_lo < 0 || arg_lo == arg_hi) {
    throw DomainError("could not identify two distinct extreme columns");
  }

  std::vector<int> cols = {std::min(arg_lo, arg_hi), std::max(arg_lo, arg_hi)};
  Eigen::Matrix2d anchor;
  anchor.col(0) = coords.col(cols[0]);
  anchor.col(1) = coords.col(cols[1]);

  Matrix b = Matrix::Zero(n, 2);
  b(cols[0], 0) = 1.0;
  b(cols[1], 1) = 1.0;
  for (int j = 0; j < n; ++j) {
    if (j == cols[0] || j == cols[1]) continue;
    Eigen::Vector2d q = anchor.partialPivLu().solve(coords.col(j));
    for (int t = 0; t < 2; ++t) {
      if (q(t) < 0.0) {
        if (q(t) < -1e-7 * std::max(1.0, scale)) {
          throw DomainError("column outside the anchor cone");
        }
        q(t) = 0.0;
      }
    }
    b.row(j) = q.transpose();
  }

  Matrix c(2, 2);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) c(i, j) = a(cols[i], cols[j]);
  }
  Trifactor f(b, c);
  const double res = (a.data() - f.product()).cwiseAbs().maxCoeff();
  if (res > 1e-9 * std::max(1.0, a.data().norm())) {
    throw DomainError("rank2 reconstruction failed, residual " +
                      std::to_string(res));
  }
  return f;
}

Matrix edm_matrix(int n) {
  if (n < 1) throw DimensionError("matrix size must be positive");
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      m(i, j) = static_cast<double>((i - j) * (i - j));
    }
  }
  return m;
}

Trifactor edm_factor(int n) {
  if (n < 2 || n % 2 != 0) {
    throw DomainError("factor is defined for even sizes n >= 2");
  }
  const int h = n / 2;
  Vector v(h);
  for (int i = 0; i < h; ++i) v(i) = 2.0 * i + 1.0;
  const Matrix k = antidiag_identity(h);

  Matrix b = Matrix::Zero(n, h + 2);
  b.block(0, 0, h, 1) = k * v;
  b.block(0, 2, h, h) = Matrix::Identity(h, h);
  b.block(h, 1, h, 1) = v;
  b.block(h, 2, h, h) = k;

  Matrix c = Matrix::Zero(h + 2, h + 2);
  c(0, 1) = 1.0;
  c(1, 0) = 1.0;
  c.block(2, 2, h, h) = edm_matrix(h);
  return Trifactor(b, c);
}

}  // namespace snt
