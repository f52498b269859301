#include "snt/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace snt {

namespace {

double offdiag_norm(const Matrix& a) {
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      if (i != j) s += a(i, j) * a(i, j);
    }
  }
  return std::sqrt(s);
}

void sign_fix_columns(Matrix& v) {
  for (int j = 0; j < v.cols(); ++j) {
    int arg = 0;
    double best = 0.0;
    for (int i = 0; i < v.rows(); ++i) {
      const double m = std::abs(v(i, j));
      if (m > best) {
        best = m;
        arg = i;
      }
    }
    if (v(arg, j) < 0.0) v.col(j) = -v.col(j);
  }
}

}  // namespace

EigenDecomposition jacobi_eigendecomposition(const Matrix& a, double tol,
                                             int max_sweeps) {
  if (a.rows() != a.cols()) {
    throw DimensionError("eigendecomposition needs a square matrix");
  }
  const int n = static_cast<int>(a.rows());
  Matrix m = 0.5 * (a + a.transpose());
  Matrix v = Matrix::Identity(n, n);
  const double target = tol * std::max(m.norm(), 1e-300);

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (offdiag_norm(m) < target) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = m(p, q);
        if (std::abs(apq) < 1e-300) continue;
        // classic two-sided rotation annihilating m(p, q)
        const double theta = (m(q, q) - m(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0)
                             ? 1.0 / (theta + std::sqrt(1.0 + theta * theta))
                             : 1.0 / (theta - std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (int i = 0; i < n; ++i) {
          const double mip = m(i, p);
          const double miq = m(i, q);
          m(i, p) = c * mip - s * miq;
          m(i, q) = s * mip + c * miq;
        }
        for (int i = 0; i < n; ++i) {
          const double mpi = m(p, i);
          const double mqi = m(q, i);
          m(p, i) = c * mpi - s * mqi;
          m(q, i) = s * mpi + c * mqi;
        }
        for (int i = 0; i < n; ++i) {
          const double vip = v(i, p);
          const double viq = v(i, q);
          v(i, p) = c * vip - s * viq;
          v(i, q) = s * vip + c * viq;
        }
      }
    }
  }

  Vector values(n);
  for (int i = 0; i < n; ++i) values(i) = m(i, i);

  // stable descending order keeps degenerate clusters in sweep order
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return values(i) > values(j); });

  EigenDecomposition out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (int j = 0; j < n; ++j) {
    out.values(j) = values(order[j]);
    out.vectors.col(j) = v.col(order[j]);
  }
  sign_fix_columns(out.vectors);
  return out;
}

double Rng::gaussian() {
  if (m_has_spare) {
    m_has_spare = false;
    return m_spare;
  }
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * M_PI * u2;
  m_spare = r * std::sin(phi);
  m_has_spare = true;
  return r * std::cos(phi);
}

int Rng::index(int n) {
  if (n <= 0) throw DomainError("index bound must be positive");
  return static_cast<int>(uniform() * n) % n;
}

Vector nnls(const Matrix& a, const Vector& b, double tol, int max_iter) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  if (b.size() != m) throw DimensionError("nnls shapes disagree");
  if (max_iter <= 0) max_iter = 6 * n + 30;

  Vector x = Vector::Zero(n);
  std::vector<bool> passive(n, false);
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());

  for (int outer = 0; outer < max_iter; ++outer) {
    const Vector w = a.transpose() * (b - a * x);
    int candidate = -1;
    double best = tol * scale;
    for (int j = 0; j < n; ++j) {
      if (!passive[j] && w(j) > best) {
        best = w(j);
        candidate = j;
      }
    }
    if (candidate < 0) break;
    passive[candidate] = true;

    // inner loop: least squares on the passive set, stepping back when a
    // passive coefficient would turn negative
    for (int inner = 0; inner <= max_iter; ++inner) {
      std::vector<int> idx;
      for (int j = 0; j < n; ++j) {
        if (passive[j]) idx.push_back(j);
      }
      if (idx.empty()) break;
      Matrix ap(m, idx.size());
      for (size_t t = 0; t < idx.size(); ++t) ap.col(t) = a.col(idx[t]);
      const Vector z = ap.colPivHouseholderQr().solve(b);

      double step = 1.0;
      bool blocked = false;
      for (size_t t = 0; t < idx.size(); ++t) {
        if (z(t) <= tol) {
          const double denom = x(idx[t]) - z(t);
          if (denom > 0.0) {
            step = std::min(step, x(idx[t]) / denom);
            blocked = true;
          }
        }
      }
      if (!blocked) {
        x.setZero();
        for (size_t t = 0; t < idx.size(); ++t) x(idx[t]) = z(t);
        break;
      }
      for (size_t t = 0; t < idx.size(); ++t) {
        x(idx[t]) += step * (z(t) - x(idx[t]));
      }
      for (size_t t = 0; t < idx.size(); ++t) {
        if (x(idx[t]) <= tol) {
          x(idx[t]) = 0.0;
          passive[idx[t]] = false;
        }
      }
    }
  }
  return x;
}

double bisect_root(const std::function<double(double)>& f, double lo,
                   double hi, double tol) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0.0) == (fhi < 0.0)) {
    throw DomainError("bisection bracket does not change sign");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket at double resolution
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace snt
