#pragma once

#include "snt/types.hpp"

namespace snt {

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  Vector x;
  double objective = 0.0;
};

// Dense two-phase simplex for
//   min c^T x  subject to  A x = b,  x >= 0.
// Bland's anti-cycling rule is used throughout (smallest eligible index
// enters, smallest basic index breaks ratio ties), so runs are
// deterministic. feas_tol is the pivot/feasibility tolerance.
LpResult solve_lp(const Matrix& a, const Vector& b, const Vector& c,
                  double feas_tol = 1e-9);

// Convenience wrapper asking only whether {A x = b, x >= 0} is nonempty.
bool lp_feasible(const Matrix& a, const Vector& b, double feas_tol = 1e-9,
                 Vector* point = nullptr);

}  // namespace snt
