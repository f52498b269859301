// Acceptance gate: nine end-to-end criteria, one pass/fail line each.
// Exit code is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "oracles.hpp"
#include "snt/certificate.hpp"
#include "snt/completion.hpp"
#include "snt/constructions.hpp"
#include "snt/examples.hpp"
#include "snt/matcore.hpp"
#include "snt/perturbation.hpp"
#include "snt/search.hpp"
#include "test_util.hpp"

using namespace snt;
using namespace snt::testutil;

namespace {

struct Criterion {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << (detail.tellp() > 0 ? "; " : "") << what;
    }
  }
  void note(const std::string& what) {
    detail << (detail.tellp() > 0 ? "; " : "") << what;
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

double seconds_since(
    const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

// --- criterion 1: hand factorization, rank, and fit of the 4x4 root-2 case

void criterion_1(Criterion& c) {
  const auto t0 = std::chrono::steady_clock::now();
  const SymMatrix a(ex::ex23_matrix());
  const Trifactor f = ex::ex23_factor();

  const VerifyReport rep = verify_trifactorization(a, f);
  c.require(rep.valid && rep.max_residual < 1e-12,
            "explicit factor residual " + fmt(rep.max_residual));
  c.require(numerical_rank(a) == 3,
            "rank " + std::to_string(numerical_rank(a)));

  FitOptions opts;  // 30 restarts
  const FitResult fit = fit_trifactorization(a, 3, opts);
  const double rel = fit.residual / a.data().norm();
  c.require(rel < 1e-6, "fit rel residual " + fmt(rel));

  const double dt = seconds_since(t0);
  c.require(dt < 5.0, "took " + fmt(dt) + "s");
  c.note("verify " + fmt(rep.max_residual) + ", fit rel " + fmt(rel) + ", " +
         fmt(dt) + "s");
}

// --- criterion 2: squared-distance factor widths and residuals

void criterion_2(Criterion& c) {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int n = 2; n <= 10; n += 2) {
    const Trifactor f = edm_factor(n);
    if (f.k() != n / 2 + 2) {
      c.require(false, "n=" + std::to_string(n) + " width " +
                           std::to_string(f.k()));
      continue;
    }
    const double res = max_abs_diff(f.product(), edm_matrix(n));
    worst = std::max(worst, res);
    c.require(res < 1e-12, "n=" + std::to_string(n) + " residual " + fmt(res));
    c.require(f.b().minCoeff() >= 0.0 && f.c().minCoeff() >= 0.0,
              "n=" + std::to_string(n) + " has negative factor entries");
  }
  const double dt = seconds_since(t0);
  c.require(dt < 1.0, "took " + fmt(dt) + "s");
  c.note("worst residual " + fmt(worst) + ", " + fmt(dt) + "s");
}

// --- criterion 3: three pinned similarity moves on the four-point matrix

void criterion_3(Criterion& c) {
  const auto t0 = std::chrono::steady_clock::now();
  const SymMatrix a = ex::ex41_matrix();
  const std::vector<ex::SimilarityCase> cases = ex::ex41_cases();

  const double s = ex::root_p();
  const double ps = ((s + 1.0) * s + 5.0) * s + 1.0;
  c.require(std::abs(ps) < 1e-12, "cubic root residual " + fmt(ps));
  c.require(s > -1.0 && s < 0.0, "root outside (-1, 0)");

  const double sqrt6 = std::sqrt(6.0), sqrt2 = std::sqrt(2.0),
               sqrt3 = std::sqrt(3.0);
  const double want_beta[3] = {2.0, (sqrt6 + sqrt2) / 2.0, sqrt2};
  const double want_alpha[3] = {12.0, 4.0 * (1.0 + sqrt3), ex::root_q()};
  const double q3 = ((want_alpha[2] + 2.0) * want_alpha[2] - 64.0) *
                        want_alpha[2] - 256.0;
  c.require(std::abs(q3) < 1e-9, "alpha cubic residual " + fmt(q3));

  for (size_t i = 0; i < cases.size(); ++i) {
    const ex::SimilarityCase& sc = cases[i];
    const double tol = (i == 2) ? 1e-8 : 1e-10;
    const PerronSimilarity psim(sc.s);
    const double beta = min_beta(sc.spectral, psim);
    const double alpha = min_alpha(sc.spectral, psim, beta);
    c.require(std::abs(beta - want_beta[i]) < tol,
              sc.name + " beta " + fmt(beta) + " want " + fmt(want_beta[i]));
    c.require(std::abs(alpha - want_alpha[i]) < tol,
              sc.name + " alpha " + fmt(alpha) + " want " +
                  fmt(want_alpha[i]));

    const Trifactor f = perturbed_factor(sc.spectral, psim, alpha, beta);
    c.require(max_abs_diff(f.b(), sc.b_expected) < 1e-6,
              sc.name + " left factor off by " +
                  fmt(max_abs_diff(f.b(), sc.b_expected)));
    c.require(max_abs_diff(f.c(), sc.c_expected) < 1e-6,
              sc.name + " inner factor off by " +
                  fmt(max_abs_diff(f.c(), sc.c_expected)));

    const Matrix moved =
        a.data() + alpha * sc.spectral.u * sc.spectral.u.transpose();
    const VerifyReport rep =
        verify_trifactorization(SymMatrix(moved), f, 1e-10);
    c.require(rep.valid, sc.name + " moved matrix fails verification");
  }
  const double dt = seconds_since(t0);
  c.require(dt < 1.0, "took " + fmt(dt) + "s");
  c.note("all three similarity cases pinned, " + fmt(dt) + "s");
}

// --- criterion 4: movability certificates on the two pinned factor pairs

void criterion_4(Criterion& c) {
  const auto t0 = std::chrono::steady_clock::now();

  const MovabilityReport open =
      check_movable(ex::ex42_no_certificate_factor());
  c.require(open.movable && !open.certificate.has_value(),
            "first pair should carry no certificate");

  const MovabilityReport stuck = check_movable(ex::ex42_certificate_factor());
  c.require(!stuck.movable && stuck.certificate.has_value(),
            "second pair should carry a certificate");
  if (stuck.certificate) {
    const Certificate& cert = *stuck.certificate;
    const double xmax = cert.x.cwiseAbs().maxCoeff();
    std::vector<std::pair<int, int>> support;
    for (int i = 0; i < cert.x.rows(); ++i)
      for (int j = 0; j < cert.x.cols(); ++j)
        if (cert.x(i, j) > 1e-9 * xmax) support.emplace_back(i, j);
    const std::vector<std::pair<int, int>> want = {
        {0, 0}, {1, 2}, {2, 0}, {3, 1}};
    c.require(support == want, "X support differs from the pinned set");

    double offdiag = 0.0;
    for (int i = 0; i < cert.w.rows(); ++i)
      for (int j = 0; j < cert.w.cols(); ++j)
        if (i != j) offdiag = std::max(offdiag, std::abs(cert.w(i, j)));
    c.require(offdiag < 1e-12, "W not diagonal, offdiag " + fmt(offdiag));

    const double s = ex::root_p();
    const Matrix c3 = ex::ex41_cases()[2].c_expected;
    const double c12 = c3(0, 1), c23 = c3(1, 2);
    const double w33 = cert.w(2, 2);
    c.require(w33 > 0.0, "W(3,3) vanishes");
    const double r1 = cert.x(0, 0) / w33;
    const double r2 = cert.w(0, 0) / w33;
    const double r3 = cert.w(1, 1) / w33;
    c.require(std::abs(r1 - std::sqrt(2.0) * c12 / (3.0 + s)) < 1e-6,
              "X(1,1)/W(3,3) = " + fmt(r1));
    c.require(std::abs(r2 - 2.0 * c23 / (c12 * (1.0 - s))) < 1e-6,
              "W(1,1)/W(3,3) = " + fmt(r2));
    c.require(std::abs(r3 - 1.0) < 1e-6, "W(2,2)/W(3,3) = " + fmt(r3));
  }
  const double dt = seconds_since(t0);
  c.require(dt < 1.0, "took " + fmt(dt) + "s");
  c.note("movable pair open, stuck pair certified, " + fmt(dt) + "s");
}

// --- criterion 5: two-block completion, free versus strictly positive

void criterion_5(Criterion& c) {
  const auto t0 = std::chrono::steady_clock::now();
  const SymMatrix a1(ex::ex51_a1());
  const SymMatrix a2(ex::ex51_a2());

  c.require(completion_lower_bound(a1, a2) == 3,
            "lower bound " + std::to_string(completion_lower_bound(a1, a2)));

  const VerifyReport rep =
      verify_trifactorization(ex::ex51_assembled(), ex::ex51_factor());
  c.require(rep.valid && rep.max_residual < 1e-12,
            "explicit completion residual " + fmt(rep.max_residual));

  const double known_scale = std::max(
      1.0, std::sqrt(a1.data().squaredNorm() + a2.data().squaredNorm()));
  FitOptions opts;
  opts.restarts = 50;

  const CompletionFit free_fit = fit_completion(a1, a2, 3, false, opts);
  const double free_rel = free_fit.residual / known_scale;
  c.require(free_fit.converged && free_rel < 1e-6,
            "free fit rel residual " + fmt(free_rel));

  const CompletionFit strict_fit = fit_completion(a1, a2, 3, true, opts);
  const double eps = 1e-3 * std::max(a1.data().maxCoeff(),
                                     a2.data().maxCoeff());
  const double metric = strict_fit.residual / known_scale +
                        std::max(0.0, eps - strict_fit.min_cross);
  c.require(!strict_fit.converged,
            "strictly positive fit unexpectedly converged");
  c.require(metric > opts.tol_residual, "strict fit metric " + fmt(metric));

  const double dt = seconds_since(t0);
  c.require(dt < 30.0, "took " + fmt(dt) + "s");
  c.note("free rel " + fmt(free_rel) + ", strict metric " + fmt(metric) +
         ", " + fmt(dt) + "s");
}

// --- criterion 6: hundred random rank-2 matrices factor exactly at width 2

void criterion_6(Criterion& c) {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(20260816);
  int done = 0;
  int failures = 0;
  double worst = 0.0;
  while (done < 100) {
    const int n = 2 + rng.index(7);
    Matrix a;
    if (rng.uniform() < 0.5) {
      const Matrix g = random_matrix(rng, n, 2, 0.0, 1.5);
      a = g * g.transpose();
    } else {
      const Vector x = random_matrix(rng, n, 1, 0.0, 1.5).col(0);
      const Vector y = random_matrix(rng, n, 1, 0.0, 1.5).col(0);
      a = x * y.transpose() + y * x.transpose();
    }
    a = 0.5 * (a + a.transpose());
    const SymMatrix sa(a);
    if (numerical_rank(sa) != 2) continue;
    ++done;
    const Trifactor f = rank2_factor(sa);
    const double rel = (a - f.product()).norm() / a.norm();
    worst = std::max(worst, rel);
    if (!(f.k() == 2 && f.b().minCoeff() >= 0.0 && f.c().minCoeff() >= 0.0 &&
          rel < 1e-9)) {
      ++failures;
    }
  }
  c.require(failures == 0, std::to_string(failures) + " draws failed");
  const double dt = seconds_since(t0);
  c.require(dt < 5.0, "took " + fmt(dt) + "s");
  c.note("worst rel residual " + fmt(worst) + ", " + fmt(dt) + "s");
}

// --- criterion 7: width-3 infeasibility of the 4x4 rank-3 example

void criterion_7(Criterion& c) {
  // analytic obstruction: the free parameters would need
  // 2 (1 - x21)(1 - x22) = 3 somewhere on (0,1)^2, but the left side
  // stays strictly below 2
  double grid_max = -1e300;
  for (int i = 0; i < 100; ++i) {
    for (int j = 0; j < 100; ++j) {
      const double x21 = (i + 0.5) / 100.0;
      const double x22 = (j + 0.5) / 100.0;
      grid_max = std::max(grid_max,
                          2.0 * (1.0 - x21) * (1.0 - x22) - 3.0);
    }
  }
  c.require(grid_max < 0.0, "grid maximum " + fmt(grid_max));
  const double expected = 2.0 * 0.995 * 0.995 - 3.0;
  c.require(std::abs(grid_max - expected) < 1e-12,
            "grid maximum " + fmt(grid_max) + " want " + fmt(expected));

  const SymMatrix a(ex::ex210_matrix());
  FitOptions opts;
  opts.restarts = 50;
  const FitResult fit = fit_trifactorization(a, 3, opts);
  const double rel = fit.residual / a.data().norm();
  c.require(rel >= 1e-3, "width-3 fit reached rel residual " + fmt(rel));
  c.note("grid max " + fmt(grid_max) + ", best width-3 rel " + fmt(rel));
}

// --- criterion 8: boolean rank of the 4x4 derangement pattern

void criterion_8(Criterion& c) {
  BoolMatrix off(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) off(i, j) = i != j;

  const BooleanRankResult br = boolean_rank(off);
  c.require(br.exact, "boolean rank is not exact");
  c.require(br.value == 4, "boolean rank " + std::to_string(br.value));

  // independent route: every rectangle subset of size <= 3 leaves an
  // off-diagonal entry uncovered
  const int oracle = cover_number_exhaustive(off, 3);
  c.require(oracle == 4, "exhaustive cover search found size " +
                             std::to_string(oracle));
  c.note("boolean rank 4 via search and exhaustive covers");
}

// --- criterion 9: five randomized property suites

void criterion_9(Criterion& c) {
  // gradient vs central differences, 20 triples
  {
    Rng rng(901);
    int bad = 0;
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 2 + rng.index(3);
      const int k = 1 + rng.index(3);
      const SymMatrix a(random_nonneg_sym(rng, n));
      const Matrix b = random_matrix(rng, n, k, 0.0, 1.5);
      const Matrix cc = random_nonneg_sym(rng, k, 0.0, 1.5);
      const auto [db, dc] = fit_gradient(a, b, cc);
      const double h = 1e-6;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < k; ++j) {
          Matrix bp = b, bm = b;
          bp(i, j) += h;
          bm(i, j) -= h;
          const double fd = (fit_objective(a, bp, cc) -
                             fit_objective(a, bm, cc)) / (2.0 * h);
          if (std::abs(db(i, j) - fd) > 1e-4 * std::max(1.0, std::abs(fd)))
            ++bad;
        }
      }
      for (int p = 0; p < k; ++p) {
        for (int q = p; q < k; ++q) {
          Matrix cp = cc, cm = cc;
          cp(p, q) += h;
          cp(q, p) = cp(p, q);
          cm(p, q) -= h;
          cm(q, p) = cm(p, q);
          const double fd = (fit_objective(a, b, cp) -
                             fit_objective(a, b, cm)) / (2.0 * h);
          const double want = (p == q) ? dc(p, p) : dc(p, q) + dc(q, p);
          if (std::abs(want - fd) > 1e-4 * std::max(1.0, std::abs(fd)))
            ++bad;
        }
      }
    }
    c.require(bad == 0,
              "gradient check: " + std::to_string(bad) + " entries off");
  }

  // permutation/scaling invariance of the product, 100 draws
  {
    Rng rng(902);
    int bad = 0;
    for (int trial = 0; trial < 100; ++trial) {
      const int n = 2 + rng.index(6);
      const int k = 1 + rng.index(5);
      const Trifactor f = random_factor(rng, n, k);
      Vector d(k);
      for (int j = 0; j < k; ++j) d(j) = rng.uniform(0.2, 5.0);
      const Trifactor g = apply_scaling(f, random_permutation(rng, k), d);
      if (max_abs_diff(g.product(), f.product()) > 1e-12) ++bad;
    }
    c.require(bad == 0,
              "scaling invariance: " + std::to_string(bad) + " draws off");
  }

  // congruence inertia inequalities, 50 draws
  {
    Rng rng(903);
    int bad = 0;
    for (int trial = 0; trial < 50; ++trial) {
      const int k = 2 + rng.index(4);
      const int n = 2 + rng.index(6);
      const Matrix cc = random_nonneg_sym(rng, k);
      const Matrix b = random_matrix(rng, n, k, 0.05, 1.0);
      const Matrix a = b * cc * b.transpose();
      const Inertia ia = inertia(SymMatrix(0.5 * (a + a.transpose())));
      const Inertia ic = inertia(SymMatrix(cc));
      if (ia.pi_plus > ic.pi_plus || ia.pi_minus > ic.pi_minus) ++bad;
    }
    c.require(bad == 0,
              "inertia inequalities: " + std::to_string(bad) + " draws off");
  }

  // glue rank identity, 50 draws
  {
    Rng rng(904);
    int bad = 0;
    for (int trial = 0; trial < 50; ++trial) {
      const int n1 = 2 + rng.index(3);
      const int n2 = 2 + rng.index(3);
      const Trifactor f2(random_matrix(rng, n2, 2, 0.1, 1.5),
                         random_nonneg_sym(rng, 2, 0.2, 1.2));
      const auto [alpha, u] = perron(SymMatrix(f2.product()));
      Trifactor left(random_matrix(rng, n1 + 1, 2, 0.1, 1.5),
                     random_nonneg_sym(rng, 2, 0.2, 1.2));
      const double corner = left.product()(n1, n1);
      const Trifactor scaled(left.b(), left.c() * (alpha / corner));
      const GlueResult glued = rank1_glue({scaled, f2, u, alpha});
      const int want = numerical_rank(SymMatrix(scaled.product())) +
                       numerical_rank(SymMatrix(f2.product())) - 1;
      if (numerical_rank(glued.a) != want) ++bad;
    }
    c.require(bad == 0,
              "glue rank identity: " + std::to_string(bad) + " draws off");
  }

  // movability vs the primal margin oracle, 100 draws
  {
    Rng rng(905);
    int bad = 0;
    for (int trial = 0; trial < 100; ++trial) {
      const int n = 2 + rng.index(5);
      const int k = 1 + rng.index(4);
      const Trifactor f = random_factor(rng, n, k, 0.4);
      const bool lib = check_movable(f).movable;
      const bool oracle = movable_margin_oracle(f.b(), f.c(), 1e-9);
      if (lib != oracle) ++bad;
    }
    c.require(bad == 0,
              "movability agreement: " + std::to_string(bad) + " draws off");
  }

  c.note("gradients, scaling, inertia, glue rank, movability all hold");
}

}  // namespace

int main() {
  const std::vector<std::function<void(Criterion&)>> criteria = {
      criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
      criterion_6, criterion_7, criterion_8, criterion_9};

  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Criterion c;
    try {
      criteria[i](c);
    } catch (const std::exception& e) {
      c.require(false, std::string("exception: ") + e.what());
    }
    if (!c.pass) ++failed;
    std::printf("criterion %zu: %s (%s)\n", i + 1, c.pass ? "PASS" : "FAIL",
                c.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed,
              criteria.size());
  return failed;
}
