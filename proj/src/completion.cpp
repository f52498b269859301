#include "snt/completion.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <utility>

#include "snt/linalg.hpp"
#include "snt/matcore.hpp"

namespace snt {
namespace {

constexpr double kDust = 1e-12;

Matrix clamp_dust(Matrix m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (m(i, j) < 0.0 && m(i, j) >= -kDust) m(i, j) = 0.0;
    }
  }
  return m;
}

void check_glue_vector(const Vector& u) {
  if (u.size() < 1) throw DimensionError("u must be nonempty");
  if (std::abs(u.norm() - 1.0) > 1e-10) throw DomainError("u must be a unit vector");
  if (u.minCoeff() < -kDust) throw DomainError("u must be nonnegative");
}

}  // namespace

Trifactor schur_completion(const Trifactor& f1, const Matrix& coupling,
                           const std::optional<Trifactor>& f0) {
  if (coupling.rows() != f1.n()) {
    throw DimensionError("coupling must have one row per row of the factored block");
  }
  const int n2 = static_cast<int>(coupling.cols());
  if (n2 < 1) throw DimensionError("coupling must have at least one column");
  const Matrix lower = coupling.transpose() * f1.b();
  if (lower.minCoeff() < -kDust) {
    throw DomainError("coupling maps the factor outside the nonnegative cone");
  }

  if (!f0.has_value()) {
    Matrix b(f1.n() + n2, f1.k());
    b.topRows(f1.n()) = f1.b();
    b.bottomRows(n2) = lower;
    return Trifactor(clamp_dust(b), f1.c());
  }

  if (f0->n() != n2) {
    throw DimensionError("Schur factor size must match the coupling columns");
  }
  const int k1 = f1.k();
  const int k0 = f0->k();
  Matrix b = Matrix::Zero(f1.n() + n2, k1 + k0);
  b.topLeftCorner(f1.n(), k1) = f1.b();
  b.bottomLeftCorner(n2, k1) = lower;
  b.bottomRightCorner(n2, k0) = f0->b();
  Matrix c = Matrix::Zero(k1 + k0, k1 + k0);
  c.topLeftCorner(k1, k1) = f1.c();
  c.bottomRightCorner(k0, k0) = f0->c();
  return Trifactor(clamp_dust(b), c);
}

GlueResult rank1_glue(const GlueInput& in) {
  const Trifactor& f1 = in.a1_hat_factor;
  const Trifactor& f2 = in.a2_factor;
  const int m = f1.n();
  const int n2 = f2.n();
  if (m < 2) throw DimensionError("bordered block must be at least 2x2");
  if (in.u.size() != n2) throw DimensionError("u must match the size of A2");
  check_glue_vector(in.u);
  if (!(in.alpha > 0.0)) throw DomainError("alpha must be strictly positive");

  const Matrix a1_hat = f1.product();
  const Matrix a2 = f2.product();
  const double s1 = std::max(1.0, a1_hat.cwiseAbs().maxCoeff());
  const double s2 = std::max(1.0, a2.cwiseAbs().maxCoeff());
  if (std::abs(a1_hat(m - 1, m - 1) - in.alpha) > 1e-8 * s1) {
    throw DomainError("corner entry of the bordered block must equal alpha");
  }
  if ((a2 * in.u - in.alpha * in.u).cwiseAbs().maxCoeff() > 1e-8 * s2) {
    throw DomainError("u must be an eigenvector of A2 with eigenvalue alpha");
  }

  const int n = m - 1 + n2;
  const int k1 = f1.k();
  const int k2 = f2.k();
  const Vector b1 = f1.b().row(m - 1).transpose();
  const Vector a_col = a1_hat.topRightCorner(m - 1, 1);

  Matrix a(n, n);
  a.topLeftCorner(m - 1, m - 1) = a1_hat.topLeftCorner(m - 1, m - 1);
  a.topRightCorner(m - 1, n2) = a_col * in.u.transpose();
  a.bottomLeftCorner(n2, m - 1) = in.u * a_col.transpose();
  a.bottomRightCorner(n2, n2) = a2;

  Matrix b = Matrix::Zero(n, k1 + k2);
  b.topLeftCorner(m - 1, k1) = f1.b().topRows(m - 1);
  b.bottomRightCorner(n2, k2) = f2.b();

  const Matrix y =
      (1.0 / in.alpha) * (f1.c() * b1) * (in.u.transpose() * f2.b() * f2.c());
  Matrix c = Matrix::Zero(k1 + k2, k1 + k2);
  c.topLeftCorner(k1, k1) = f1.c();
  c.topRightCorner(k1, k2) = y;
  c.bottomLeftCorner(k2, k1) = y.transpose();
  c.bottomRightCorner(k2, k2) = f2.c();

  return GlueResult{SymMatrix(a), Trifactor(clamp_dust(b), clamp_dust(c))};
}

GlueResult rank1_glue_rank1(const Trifactor& a1_hat_factor, const Vector& u) {
  const Trifactor& f1 = a1_hat_factor;
  const int m = f1.n();
  if (m < 2) throw DimensionError("bordered block must be at least 2x2");
  check_glue_vector(u);
  const int n2 = static_cast<int>(u.size());

  const Matrix a1_hat = f1.product();
  const Vector b1 = f1.b().row(m - 1).transpose();
  const double alpha = b1.dot(f1.c() * b1);
  if (!(alpha > 0.0)) throw DomainError("corner entry must be strictly positive");

  const int n = m - 1 + n2;
  const Vector a_col = a1_hat.topRightCorner(m - 1, 1);
  Matrix a(n, n);
  a.topLeftCorner(m - 1, m - 1) = a1_hat.topLeftCorner(m - 1, m - 1);
  a.topRightCorner(m - 1, n2) = a_col * u.transpose();
  a.bottomLeftCorner(n2, m - 1) = u * a_col.transpose();
  a.bottomRightCorner(n2, n2) = alpha * (u * u.transpose());

  Matrix b(n, f1.k());
  b.topRows(m - 1) = f1.b().topRows(m - 1);
  b.bottomRows(n2) = u * b1.transpose();
  return GlueResult{SymMatrix(a), Trifactor(clamp_dust(b), f1.c())};
}

int completion_lower_bound(const SymMatrix& a1, const SymMatrix& a2) {
  const Inertia i1 = inertia(a1);
  const Inertia i2 = inertia(a2);
  return std::max(i1.pi_plus, i2.pi_plus) +
         std::max(i1.pi_minus, i2.pi_minus);
}

namespace {

struct CompletionRun {
  Matrix b;
  Matrix c;
  double objective = 0.0;
  double known_residual = 0.0;
  bool converged = false;
};

CompletionRun completion_pgd(const Matrix& known, const Matrix& mask,
                             Matrix b, Matrix c, double eps, bool strict,
                             const FitOptions& opts, double target_known) {
  const Matrix offmask = Matrix::Ones(known.rows(), known.cols()) - mask;
  auto eff_residual = [&](const Matrix& p) {
    Matrix e = mask.cwiseProduct(known - p);
    if (strict) {
      e += offmask.cwiseProduct(
          (eps - p.array()).max(0.0).matrix());
    }
    return e;
  };
  auto known_res = [&](const Matrix& p) {
    return mask.cwiseProduct(known - p).norm();
  };

  auto gradients = [&](const Matrix& bb, const Matrix& cc, const Matrix& ee) {
    Matrix gb = -4.0 * ee * bb * cc;
    Matrix gc = -2.0 * bb.transpose() * ee * bb;
    gc = 0.5 * (gc + gc.transpose()).eval();
    return std::pair<Matrix, Matrix>{std::move(gb), std::move(gc)};
  };
  auto done = [&](const Matrix& p) {
    const bool hinge_ok =
        !strict ||
        offmask.cwiseProduct((eps - p.array()).max(0.0).matrix()).maxCoeff() <=
            1e-9 * std::max(1.0, eps);
    return known_res(p) <= target_known && hinge_ok;
  };

  Matrix e = eff_residual(b * c * b.transpose());
  double obj = e.squaredNorm();
  auto [gb, gc] = gradients(b, c, e);

  std::array<double, 10> recent;
  recent.fill(obj);
  int accepts = 0;

  Matrix best_b = b;
  Matrix best_c = c;
  double best_obj = obj;

  double step = 1.0;
  int stalled = 0;
  for (int it = 0; it < opts.max_iters; ++it) {
    if (done(b * c * b.transpose())) break;
    const double ref = *std::max_element(recent.begin(), recent.end());
    bool accepted = false;
    double t = step;
    for (int back = 0; back < 60 && t >= 1e-18; ++back) {
      Matrix b2 = (b - t * gb).cwiseMax(0.0);
      Matrix c2 = c - t * gc;
      c2 = 0.5 * (c2 + c2.transpose()).eval();
      c2 = c2.cwiseMax(0.0);
      const Matrix e2 = eff_residual(b2 * c2 * b2.transpose());
      const double obj2 = e2.squaredNorm();
      const double move =
          gb.cwiseProduct(b - b2).sum() + gc.cwiseProduct(c - c2).sum();
      if (obj2 <= ref - opts.armijo_c * move) {
        auto [gb2, gc2] = gradients(b2, c2, e2);
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

  const Matrix p = best_b * best_c * best_b.transpose();
  const double kres = known_res(p);
  const bool finished = done(p);
  return CompletionRun{std::move(best_b), std::move(best_c),
                       eff_residual(p).squaredNorm(), kres, finished};
}

}  // namespace

CompletionFit fit_completion(const SymMatrix& a1, const SymMatrix& a2, int k,
                             bool strict_positive_x, const FitOptions& opts) {
  if (k < 1) throw DomainError("k must be positive");
  const int n1 = a1.n();
  const int n2 = a2.n();
  const int n = n1 + n2;

  Matrix known = Matrix::Zero(n, n);
  known.topLeftCorner(n1, n1) = a1.data();
  known.bottomRightCorner(n2, n2) = a2.data();
  Matrix mask = Matrix::Zero(n, n);
  mask.topLeftCorner(n1, n1).setOnes();
  mask.bottomRightCorner(n2, n2).setOnes();

  const double known_norm = known.norm();
  const double target = opts.tol_residual * std::max(1.0, known_norm);
  const double top = std::max(known.maxCoeff(), 0.0);
  const double eps =
      strict_positive_x ? (top > 0.0 ? 1e-3 * top : 1e-3) : 0.0;

  bool have_best = false;
  CompletionRun best;
  int run_index = 0;
  auto offer = [&](CompletionRun out) {
    if (!have_best || out.objective < best.objective) {
      best = std::move(out);
      have_best = true;
    }
  };

  for (const Trifactor& w : opts.warm_starts) {
    if (w.n() != n || w.k() != k) {
      throw DimensionError("warm start shape does not match the problem");
    }
    offer(completion_pgd(known, mask, w.b(), w.c(), eps, strict_positive_x,
                         opts, target));
    ++run_index;
    if (best.converged) break;
  }
  if (!have_best || !best.converged) {
    for (int t = 0; t < opts.restarts; ++t, ++run_index) {
      Rng rng(opts.seed + static_cast<std::uint64_t>(t));
      Matrix b0(n, k);
      for (int j = 0; j < k; ++j) {
        for (int i = 0; i < n; ++i) b0(i, j) = rng.uniform();
      }
      const double pn = (b0 * b0.transpose()).norm();
      if (pn > 1e-30 && known_norm > 1e-30) b0 *= std::sqrt(known_norm / pn);
      Matrix c0 = Matrix::Identity(k, k);
      if (t % 3 != 0) {
        for (int j = 0; j < k; ++j) {
          for (int i = 0; i <= j; ++i) c0(i, j) = c0(j, i) = rng.uniform();
        }
        if (t % 3 == 1) c0.diagonal().setZero();
      }
      offer(completion_pgd(known, mask, b0, c0, eps, strict_positive_x, opts,
                           target));
      if (best.converged) break;
    }
  }
  if (!have_best) throw DomainError("no fit runs were configured");

  const Matrix p = best.b * best.c * best.b.transpose();
  const Matrix x = p.topRightCorner(n1, n2);
  return CompletionFit{Trifactor(best.b, best.c), x, best.known_residual,
                       x.size() > 0 ? x.minCoeff() : 0.0, best.converged};
}

}  // namespace snt
