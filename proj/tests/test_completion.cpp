#include <doctest.h>

#include <cmath>
#include <vector>

#include "snt/completion.hpp"
#include "snt/examples.hpp"
#include "snt/matcore.hpp"
#include "test_util.hpp"

using namespace snt;
using namespace snt::testutil;

namespace {

// dense positive symmetric block with a known factorization and its
// Perron pair, for glue draws
struct GlueBlock {
  Trifactor f;
  double alpha;
  Vector u;
};

GlueBlock random_perron_block(Rng& rng, int n, int k) {
  Matrix b = random_matrix(rng, n, k, 0.1, 1.5);
  Matrix c = random_nonneg_sym(rng, k, 0.2, 1.2);
  Trifactor f(b, c);
  const auto [alpha, u] = perron(SymMatrix(f.product()));
  return {f, alpha, u};
}

}  // namespace

TEST_SUITE("completion") {

TEST_CASE("one-sided extension with a zero Schur term keeps the width") {
  Rng rng(601);
  for (int trial = 0; trial < 15; ++trial) {
    const int n1 = 2 + rng.index(4);
    const int m = 1 + rng.index(3);
    const int k = 1 + rng.index(3);
    const Trifactor f1 = random_factor(rng, n1, k, 0.2);
    const Matrix coupling = random_matrix(rng, n1, m, 0.0, 1.0);
    const Trifactor g = schur_completion(f1, coupling);
    CHECK(g.n() == n1 + m);
    CHECK(g.k() == k);

    const Matrix a1 = f1.product();
    Matrix want(n1 + m, n1 + m);
    want.topLeftCorner(n1, n1) = a1;
    want.topRightCorner(n1, m) = a1 * coupling;
    want.bottomLeftCorner(m, n1) = coupling.transpose() * a1;
    want.bottomRightCorner(m, m) = coupling.transpose() * a1 * coupling;
    CHECK(max_abs_diff(g.product(), want) < 1e-10);
  }
}

TEST_CASE("one-sided extension rank splits over the two ingredients") {
  Rng rng(602);
  for (int trial = 0; trial < 50; ++trial) {
    const int n1 = 2 + rng.index(3);
    const int m = 1 + rng.index(3);
    const int k1 = 1 + rng.index(n1);
    const int k0 = 1 + rng.index(m);
    const Trifactor f1(random_matrix(rng, n1, k1, 0.1, 1.0),
                       random_nonneg_sym(rng, k1, 0.3, 1.0));
    const Trifactor f0(random_matrix(rng, m, k0, 0.1, 1.0),
                       random_nonneg_sym(rng, k0, 0.3, 1.0));
    const Matrix coupling = random_matrix(rng, n1, m, 0.0, 1.0);
    const Trifactor g = schur_completion(f1, coupling, f0);
    CHECK(g.k() == f1.k() + f0.k());

    const int r1 = numerical_rank(SymMatrix(f1.product()));
    const int r0 = numerical_rank(SymMatrix(f0.product()));
    const int r = numerical_rank(SymMatrix(g.product()));
    CAPTURE(trial);
    CHECK(r == r1 + r0);
  }
}

TEST_CASE("one-sided extension rejects sign-breaking couplings") {
  const Trifactor f1(Matrix::Identity(2, 2), Matrix::Identity(2, 2));
  Matrix coupling(2, 1);
  coupling << 1.0, -0.5;  // N^T B1 picks up the negative entry
  CHECK_THROWS_AS(schur_completion(f1, coupling), DomainError);
  CHECK_THROWS_AS(schur_completion(f1, Matrix::Ones(3, 1)), DimensionError);
}

TEST_CASE("glue joins two blocks and adds ranks minus one") {
  Rng rng(603);
  for (int trial = 0; trial < 50; ++trial) {
    const int n1 = 2 + rng.index(3);
    const int n2 = 2 + rng.index(3);
    const GlueBlock right = random_perron_block(rng, n2, 1 + rng.index(2));

    // bordered left block whose corner matches the right Perron value;
    // redraw when the planted zeros wipe out the corner entry
    Trifactor left = random_factor(rng, n1 + 1, 1 + rng.index(2), 0.1);
    double corner = left.product()(n1, n1);
    while (corner <= 1e-6) {
      left = random_factor(rng, n1 + 1, 1 + rng.index(2), 0.1);
      corner = left.product()(n1, n1);
    }
    const Trifactor scaled(left.b(), left.c() * (right.alpha / corner));

    const GlueResult glued =
        rank1_glue({scaled, right.f, right.u, right.alpha});
    CHECK(glued.f.k() == scaled.k() + right.f.k());
    CHECK(glued.f.b().minCoeff() >= 0.0);
    CHECK(glued.f.c().minCoeff() >= -1e-12);
    CHECK(verify_trifactorization(glued.a, glued.f, 1e-8).valid);

    // assembled matrix replaces the overlap by the rank-1 cross block
    const Matrix ahat = scaled.product();
    const Vector a_col = ahat.topRightCorner(n1, 1).col(0);
    CHECK(max_abs_diff(glued.a.data().topRightCorner(n1, n2),
                       a_col * right.u.transpose()) < 1e-10);

    const int ra1 = numerical_rank(SymMatrix(ahat));
    const int ra2 = numerical_rank(SymMatrix(right.f.product()));
    CAPTURE(trial);
    CHECK(numerical_rank(glued.a) == ra1 + ra2 - 1);
  }
}

TEST_CASE("rank-one glue keeps the width and the left factor") {
  Rng rng(604);
  for (int trial = 0; trial < 20; ++trial) {
    const int n1 = 2 + rng.index(3);
    const int m = 1 + rng.index(3);
    const Trifactor left = random_factor(rng, n1 + 1, 1 + rng.index(3), 0.1);
    Vector u = random_matrix(rng, m, 1, 0.1, 1.0).col(0);
    u /= u.norm();

    const GlueResult glued = rank1_glue_rank1(left, u);
    CHECK(glued.f.k() == left.k());
    CHECK(glued.f.n() == n1 + m);
    CHECK(max_abs_diff(glued.f.b().topRows(n1), left.b().topRows(n1)) == 0.0);
    CHECK(max_abs_diff(glued.f.c(), left.c()) == 0.0);
    CHECK(verify_trifactorization(glued.a, glued.f, 1e-9).valid);

    // bottom-right block is alpha u u^T with alpha read off the factor
    const Vector b1 = left.b().row(n1).transpose();
    const double alpha = b1.dot(left.c() * b1);
    CHECK(max_abs_diff(glued.a.data().bottomRightCorner(m, m),
                       alpha * u * u.transpose()) < 1e-10);
  }
}

TEST_CASE("glue validates the overlap data") {
  const Trifactor left(Matrix::Ones(2, 1), Matrix::Ones(1, 1));
  const Trifactor right(Matrix::Ones(2, 1), Matrix::Ones(1, 1));
  Vector u(2);
  u << 1.0, 1.0;
  u /= u.norm();
  // corner of left.product() is 1, not the right Perron value 2
  CHECK_THROWS_AS(rank1_glue({left, right, u, 2.0}), DomainError);
  Vector bad = u;
  bad(0) = -bad(0);
  CHECK_THROWS_AS(rank1_glue_rank1(left, bad), DomainError);
}

TEST_CASE("interval bound for completions uses both inertias") {
  CHECK(completion_lower_bound(SymMatrix(ex::ex51_a1()),
                               SymMatrix(ex::ex51_a2())) == 3);
  CHECK(completion_lower_bound(SymMatrix(Matrix::Identity(2, 2)),
                               SymMatrix(Matrix::Identity(3, 3))) == 3);
  Matrix swap(2, 2);
  swap << 0, 1, 1, 0;
  // one positive and one negative direction on the right block
  CHECK(completion_lower_bound(SymMatrix(Matrix::Identity(2, 2)),
                               SymMatrix(swap)) == 3);
}

TEST_CASE("bound sandwich holds on successful completion fits") {
  Rng rng(605);
  FitOptions opts;
  opts.restarts = 12;
  opts.max_iters = 2000;
  for (int trial = 0; trial < 5; ++trial) {
    const int k = 2 + rng.index(2);
    const Trifactor whole = random_factor(rng, 4 + rng.index(2), k, 0.0);
    const Matrix a = whole.product();
    const int n1 = 2 + rng.index(2);
    const int n2 = static_cast<int>(a.rows()) - n1;
    const SymMatrix a1(Matrix(a.topLeftCorner(n1, n1)));
    const SymMatrix a2(Matrix(a.bottomRightCorner(n2, n2)));

    const CompletionFit fit = fit_completion(a1, a2, k, false, opts);
    if (!fit.converged) continue;  // nonconvex; only converged runs bind
    CHECK(completion_lower_bound(a1, a2) <= k);
    CHECK(fit.f.k() == k);
    const Matrix prod = fit.f.product();
    CHECK((prod.topLeftCorner(n1, n1) - a1.data()).norm() +
              (prod.bottomRightCorner(n2, n2) - a2.data()).norm() <
          1e-5 * std::max(1.0, a.norm()));
    CHECK(max_abs_diff(fit.x, prod.topRightCorner(n1, n2)) < 1e-12);
    CHECK(fit.min_cross == doctest::Approx(fit.x.minCoeff()));
  }
}

TEST_CASE("strict positivity succeeds when a positive cross block exists") {
  // rank-1 completable pair: both blocks from one positive vector
  Vector x(4);
  x << 1.0, 2.0, 0.5, 1.5;
  const Matrix a = x * x.transpose();
  const SymMatrix a1(Matrix(a.topLeftCorner(2, 2)));
  const SymMatrix a2(Matrix(a.bottomRightCorner(2, 2)));
  FitOptions opts;
  opts.restarts = 10;
  const CompletionFit fit = fit_completion(a1, a2, 1, true, opts);
  CHECK(fit.converged);
  const double known = std::max(a1.data().maxCoeff(), a2.data().maxCoeff());
  CHECK(fit.min_cross >= 1e-3 * known - 1e-9);
}

TEST_CASE("completion fit validates widths") {
  const SymMatrix a1(Matrix::Identity(2, 2));
  CHECK_THROWS_AS(fit_completion(a1, a1, 0, false), DomainError);
}

}  // TEST_SUITE
