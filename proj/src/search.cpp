#include "snt/search.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <utility>

#include "snt/linalg.hpp"
#include "snt/matcore.hpp"

namespace snt {

double fit_objective(const SymMatrix& a, const Matrix& b, const Matrix& c) {
  return (a.data() - b * c * b.transpose()).squaredNorm();
}

std::pair<Matrix, Matrix> fit_gradient(const SymMatrix& a, const Matrix& b,
                                       const Matrix& c) {
  const Matrix e = a.data() - b * c * b.transpose();
  Matrix gb = -4.0 * e * b * c;
  Matrix gc = -2.0 * b.transpose() * e * b;
  gc = 0.5 * (gc + gc.transpose()).eval();
  return {std::move(gb), std::move(gc)};
}

namespace {

struct RunOutcome {
  Matrix b;
  Matrix c;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
};

RunOutcome pgd_run(const SymMatrix& a, Matrix b, Matrix c,
                   const FitOptions& opts, double target_fro) {
  const double target_sq = target_fro * target_fro;
  double obj = fit_objective(a, b, c);
  auto [gb, gc] = fit_gradient(a, b, c);

  // Nonmonotone Armijo reference: max objective over the last 10 accepts.
  std::array<double, 10> recent;
  recent.fill(obj);
  int accepts = 0;

  Matrix best_b = b;
  Matrix best_c = c;
  double best_obj = obj;

  double step = 1.0;
  int it = 0;
  int stalled = 0;
  for (; it < opts.max_iters && obj > target_sq; ++it) {
    const double ref = *std::max_element(recent.begin(), recent.end());
    bool accepted = false;
    double t = step;
    for (int back = 0; back < 60 && t >= 1e-18; ++back) {
      Matrix b2 = (b - t * gb).cwiseMax(0.0);
      Matrix c2 = c - t * gc;
      c2 = 0.5 * (c2 + c2.transpose()).eval();
      c2 = c2.cwiseMax(0.0);
      const double obj2 = fit_objective(a, b2, c2);
      const double move =
          gb.cwiseProduct(b - b2).sum() + gc.cwiseProduct(c - c2).sum();
      if (obj2 <= ref - opts.armijo_c * move) {
        auto [gb2, gc2] = fit_gradient(a, b2, c2);
        // Barzilai-Borwein trial step for the next iteration.
        const Matrix sb = b2 - b;
        const Matrix sc = c2 - c;
        const double sy = sb.cwiseProduct(gb2 - gb).sum() +
                          sc.cwiseProduct(gc2 - gc).sum();
        const double ss = sb.squaredNorm() + sc.squaredNorm();
        step = (sy > 1e-30) ? std::clamp(ss / sy, 1e-12, 1e12) : t * 2.0;
        stalled = (obj - obj2 <= 1e-9 * obj) ? stalled + 1 : 0;
        b = std::move(b2);
        c = std::move(c2);
        gb = std::move(gb2);
        gc = std::move(gc2);
        obj = obj2;
        recent[accepts++ % recent.size()] = obj;
        if (obj < best_obj) {
          best_b = b;
          best_c = c;
          best_obj = obj;
        }
        accepted = true;
        break;
      }
      t *= opts.backtrack;
    }
    if (!accepted || stalled >= 10) break;
  }
  return {std::move(best_b), std::move(best_c), best_obj, it,
          best_obj <= target_sq};
}

Matrix random_start(Rng& rng, int n, int k, double a_norm) {
  Matrix b(n, k);
  for (int j = 0; j < k; ++j) {
    for (int i = 0; i < n; ++i) b(i, j) = rng.uniform();
  }
  const double pn = (b * b.transpose()).norm();
  if (pn > 1e-30 && a_norm > 1e-30) b *= std::sqrt(a_norm / pn);
  return b;
}

// Restart runs rotate the shape of the initial C: the identity biases
// toward Gram-like fits, while hollow and dense symmetric starts reach
// factorizations whose C carries negative eigenvalue directions.
Matrix c_start(Rng& rng, int k, int style) {
  if (style == 0) return Matrix::Identity(k, k);
  Matrix c(k, k);
  for (int j = 0; j < k; ++j) {
    for (int i = 0; i <= j; ++i) c(i, j) = c(j, i) = rng.uniform();
  }
  if (style == 1) c.diagonal().setZero();
  return c;
}

void require_entrywise_nonneg(const SymMatrix& a) {
  const double scale = std::max(1.0, a.data().cwiseAbs().maxCoeff());
  if (a.data().minCoeff() < -1e-12 * scale) {
    throw DomainError("matrix must be entrywise nonnegative");
  }
}

}  // namespace

FitResult fit_trifactorization(const SymMatrix& a, int k,
                               const FitOptions& opts) {
  if (k < 1) throw DomainError("k must be positive");
  if (opts.restarts < 0 || opts.max_iters < 1) {
    throw DomainError("restarts must be nonnegative and max_iters positive");
  }
  const int n = a.n();
  const double a_norm = a.data().norm();
  const double target = opts.tol_residual * std::max(1.0, a_norm);

  bool have_best = false;
  RunOutcome best;
  int best_run = 0;

  auto offer = [&](RunOutcome out, int run_index) {
    if (!have_best || out.objective < best.objective) {
      best = std::move(out);
      best_run = run_index;
      have_best = true;
    }
  };

  int run_index = 0;
  for (const Trifactor& w : opts.warm_starts) {
    if (w.n() != n || w.k() != k) {
      throw DimensionError("warm start shape does not match the problem");
    }
    offer(pgd_run(a, w.b(), w.c(), opts, target), run_index);
    ++run_index;
    if (best.converged) break;
  }
  if (!have_best || !best.converged) {
    for (int t = 0; t < opts.restarts; ++t, ++run_index) {
      Rng rng(opts.seed + static_cast<std::uint64_t>(t));
      Matrix b0 = random_start(rng, n, k, a_norm);
      offer(pgd_run(a, std::move(b0), c_start(rng, k, t % 3), opts, target),
            run_index);
      if (best.converged) break;
    }
  }
  if (!have_best) throw DomainError("no fit runs were configured");
  return FitResult{Trifactor(best.b, best.c), std::sqrt(best.objective),
                   best.converged, best.iterations, best_run};
}

UpperBoundResult snt_upper_bound(const SymMatrix& a, const FitOptions& opts) {
  require_entrywise_nonneg(a);
  const int n = a.n();
  std::vector<std::pair<int, double>> per_k;
  for (int k = std::max(1, numerical_rank(a)); k <= n; ++k) {
    FitResult res = fit_trifactorization(a, k, opts);
    per_k.emplace_back(k, res.residual);
    if (res.converged) {
      return UpperBoundResult{k, std::move(res.f), false, std::move(per_k)};
    }
  }
  return UpperBoundResult{n, Trifactor(Matrix::Identity(n, n),
                                       a.data().cwiseMax(0.0)),
                          true, std::move(per_k)};
}

namespace {

// All distinct closed concepts (maximal all-ones blocks and their
// sub-closures) of a 0/1 pattern, as cell masks over i * cols + j.
std::vector<std::uint64_t> concept_masks(const BoolMatrix& m) {
  const int rows = static_cast<int>(m.rows());
  const int cols = static_cast<int>(m.cols());
  std::vector<std::uint64_t> out;
  for (std::uint32_t pick = 1; pick < (1u << cols); ++pick) {
    std::uint32_t rowset = 0;
    for (int i = 0; i < rows; ++i) {
      bool all = true;
      for (int j = 0; j < cols && all; ++j) {
        if ((pick >> j & 1u) && !m(i, j)) all = false;
      }
      if (all) rowset |= 1u << i;
    }
    if (rowset == 0) continue;
    std::uint32_t closure = 0;
    for (int j = 0; j < cols; ++j) {
      bool all = true;
      for (int i = 0; i < rows && all; ++i) {
        if ((rowset >> i & 1u) && !m(i, j)) all = false;
      }
      if (all) closure |= 1u << j;
    }
    std::uint64_t mask = 0;
    for (int i = 0; i < rows; ++i) {
      if (!(rowset >> i & 1u)) continue;
      for (int j = 0; j < cols; ++j) {
        if (closure >> j & 1u) mask |= std::uint64_t{1} << (i * cols + j);
      }
    }
    out.push_back(mask);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool cover_dfs(std::uint64_t uncovered, int budget,
               const std::vector<std::uint64_t>& concepts,
               std::unordered_map<std::uint64_t, int>& dead) {
  if (uncovered == 0) return true;
  if (budget == 0) return false;
  const auto it = dead.find(uncovered);
  if (it != dead.end() && it->second >= budget) return false;
  const int cell = std::countr_zero(uncovered);
  for (const std::uint64_t cmask : concepts) {
    if (!(cmask >> cell & 1u)) continue;
    if (cover_dfs(uncovered & ~cmask, budget - 1, concepts, dead)) return true;
  }
  auto& entry = dead[uncovered];
  entry = std::max(entry, budget);
  return false;
}

}  // namespace

BooleanRankResult boolean_rank(const BoolMatrix& m) {
  const int rows = static_cast<int>(m.rows());
  const int cols = static_cast<int>(m.cols());
  if (rows < 1 || cols < 1) throw DimensionError("matrix must be nonempty");
  if (rows > 8 || cols > 8) {
    throw DimensionError("exact boolean rank is limited to 8x8");
  }
  std::uint64_t ones = 0;
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      if (m(i, j)) ones |= std::uint64_t{1} << (i * cols + j);
    }
  }
  if (ones == 0) return BooleanRankResult{0, true};

  const auto concepts = concept_masks(m);
  std::unordered_map<std::uint64_t, int> dead;
  const int limit = std::min(rows, cols);
  for (int budget = 1; budget <= limit; ++budget) {
    if (cover_dfs(ones, budget, concepts, dead)) {
      return BooleanRankResult{budget, true};
    }
  }
  return BooleanRankResult{limit, true};
}

BoundReport bounds_report(const SymMatrix& a, const FitOptions& opts) {
  require_entrywise_nonneg(a);
  BoundReport rep;
  rep.n = a.n();
  rep.rank_lower = numerical_rank(a);
  rep.inertia_info = inertia(a);
  if (rep.n <= 8) {
    rep.bool_rank_lower = boolean_rank(support_pattern(a.data())).value;
    rep.bool_rank_available = true;
  } else {
    rep.notes.push_back("boolean rank lower bound skipped for n > 8");
  }
  UpperBoundResult ub = snt_upper_bound(a, opts);
  rep.upper = ub.k;
  rep.identity_fallback = ub.identity_fallback;
  rep.per_k = std::move(ub.per_k);
  rep.upper_witness = std::move(ub.f);
  rep.lower = std::max(rep.rank_lower, rep.bool_rank_lower);
  if (rep.identity_fallback) {
    rep.notes.push_back("upper bound is the trivial identity factorization");
  }
  rep.notes.push_back("cp rank not computed: unknown");
  return rep;
}

}  // namespace snt
