#include "snt/simplex.hpp"

#include <cmath>
#include <vector>

namespace snt {

namespace {

// Tableau layout: rows 0..m-1 hold constraints, row m holds reduced costs,
// column n_all holds the right-hand side / negated objective value.
// Columns in [0, n_enter) are eligible to enter the basis.
enum class StepOutcome { optimal, unbounded };

StepOutcome run_simplex(Matrix& tab, std::vector<Index>& basis, Index n_enter,
                        double tol) {
  const Index m = tab.rows() - 1;
  const Index rhs = tab.cols() - 1;
  const long max_pivots = 2000L * (tab.cols() + m) + 10000L;

  for (long iter = 0; iter < max_pivots; ++iter) {
    Index enter = -1;
    for (Index j = 0; j < n_enter; ++j) {
      if (tab(m, j) < -tol) {
        enter = j;
        break;
      }
    }
    if (enter < 0) return StepOutcome::optimal;

    Index leave = -1;
    double best_ratio = 0.0;
    for (Index i = 0; i < m; ++i) {
      if (tab(i, enter) > tol) {
        const double ratio = tab(i, rhs) / tab(i, enter);
        if (leave < 0 || ratio < best_ratio - tol ||
            (std::abs(ratio - best_ratio) <= tol &&
             basis[i] < basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
    }
    if (leave < 0) return StepOutcome::unbounded;

    const double piv = tab(leave, enter);
    tab.row(leave) /= piv;
    for (Index i = 0; i <= m; ++i) {
      if (i == leave) continue;
      const double f = tab(i, enter);
      if (f != 0.0) tab.row(i) -= f * tab.row(leave);
    }
    basis[leave] = enter;
  }
  throw DomainError("simplex exceeded its pivot budget");
}

}  // namespace

LpResult solve_lp(const Matrix& a, const Vector& b, const Vector& c,
                  double feas_tol) {
  const Index m = a.rows();
  const Index n = a.cols();
  if (b.size() != m || c.size() != n) {
    throw DimensionError("linear program shapes disagree");
  }

  LpResult out;
  if (m == 0) {
    out.status = (c.minCoeff() >= -feas_tol || n == 0) ? LpStatus::optimal
                                                       : LpStatus::unbounded;
    out.x = Vector::Zero(n);
    out.objective = 0.0;
    return out;
  }

  // phase 1 tableau with one artificial per row, rows flipped so b >= 0
  const Index n_all = n + m;
  Matrix tab = Matrix::Zero(m + 1, n_all + 1);
  std::vector<Index> basis(m);
  for (Index i = 0; i < m; ++i) {
    const double sign = (b(i) < 0.0) ? -1.0 : 1.0;
    tab.block(i, 0, 1, n) = sign * a.row(i);
    tab(i, n + i) = 1.0;
    tab(i, n_all) = sign * b(i);
    basis[i] = n + i;
  }
  for (Index i = 0; i < m; ++i) tab.row(m) -= tab.row(i);

  if (run_simplex(tab, basis, n, feas_tol) == StepOutcome::unbounded) {
    throw DomainError("phase 1 simplex reported unbounded");
  }
  const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  if (-tab(m, n_all) > feas_tol * scale) {
    out.status = LpStatus::infeasible;
    return out;
  }

  // drive surviving artificials out of the basis where possible
  for (Index i = 0; i < m; ++i) {
    if (basis[i] < n) continue;
    Index piv_col = -1;
    for (Index j = 0; j < n; ++j) {
      if (std::abs(tab(i, j)) > feas_tol) {
        piv_col = j;
        break;
      }
    }
    if (piv_col < 0) continue;  // redundant row, artificial stays at zero
    const double piv = tab(i, piv_col);
    tab.row(i) /= piv;
    for (Index r = 0; r <= m; ++r) {
      if (r == i) continue;
      const double f = tab(r, piv_col);
      if (f != 0.0) tab.row(r) -= f * tab.row(i);
    }
    basis[i] = piv_col;
  }

  // phase 2 objective: rebuild the reduced cost row for c
  tab.row(m).setZero();
  tab.block(m, 0, 1, n) = c.transpose();
  for (Index i = 0; i < m; ++i) {
    if (basis[i] < n) tab.row(m) -= c(basis[i]) * tab.row(i);
  }
  if (run_simplex(tab, basis, n, feas_tol) == StepOutcome::unbounded) {
    out.status = LpStatus::unbounded;
    return out;
  }

  out.status = LpStatus::optimal;
  out.x = Vector::Zero(n);
  for (Index i = 0; i < m; ++i) {
    if (basis[i] < n) out.x(basis[i]) = tab(i, n_all);
  }
  out.objective = c.dot(out.x);
  return out;
}

bool lp_feasible(const Matrix& a, const Vector& b, double feas_tol,
                 Vector* point) {
  const LpResult r = solve_lp(a, b, Vector::Zero(a.cols()), feas_tol);
  if (r.status != LpStatus::optimal) return false;
  if (point != nullptr) *point = r.x;
  return true;
}

}  // namespace snt
