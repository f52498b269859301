#include <doctest.h>

#include <cmath>
#include <vector>

#include "snt/constructions.hpp"
#include "snt/matcore.hpp"
#include "test_util.hpp"

using namespace snt;
using namespace snt::testutil;

namespace {

Matrix submatrix(const Matrix& a, const std::vector<int>& rows,
                 const std::vector<int>& cols) {
  Matrix s(rows.size(), cols.size());
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < cols.size(); ++j) s(i, j) = a(rows[i], cols[j]);
  return s;
}

}  // namespace

TEST_SUITE("constructions") {

TEST_CASE("sum factor adds products and widths") {
  Rng rng(201);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + rng.index(5);
    const Trifactor f1 = random_factor(rng, n, 1 + rng.index(3));
    const Trifactor f2 = random_factor(rng, n, 1 + rng.index(3));
    const Trifactor s = sum_factor(f1, f2);
    CHECK(s.k() == f1.k() + f2.k());
    CHECK(max_abs_diff(s.product(), f1.product() + f2.product()) < 1e-12);
    CHECK(s.b().minCoeff() >= 0.0);
  }
  CHECK_THROWS_AS(sum_factor(random_factor(rng, 3, 2), random_factor(rng, 4, 2)),
                  DimensionError);
}

TEST_CASE("direct sum factors the block diagonal") {
  Rng rng(202);
  const Trifactor f1 = random_factor(rng, 3, 2);
  const Trifactor f2 = random_factor(rng, 2, 2);
  const Trifactor d = direct_sum(f1, f2);
  CHECK(d.n() == 5);
  CHECK(d.k() == 4);
  Matrix want = Matrix::Zero(5, 5);
  want.topLeftCorner(3, 3) = f1.product();
  want.bottomRightCorner(2, 2) = f2.product();
  CHECK(max_abs_diff(d.product(), want) < 1e-12);
}

TEST_CASE("power factor reproduces matrix powers with the same left factor") {
  Rng rng(203);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + rng.index(4);
    const Trifactor f = random_factor(rng, n, 1 + rng.index(3), 0.0);
    const Matrix a = f.product();
    Matrix power = Matrix::Identity(n, n);
    for (int m = 1; m <= 3; ++m) {
      power = power * a;
      const Trifactor g = power_factor(f, m);
      CHECK(g.k() == f.k());
      CHECK(max_abs_diff(g.b(), f.b()) == 0.0);
      CHECK(max_abs_diff(g.c(), g.c().transpose()) < 1e-12);
      const double scale = std::max(1.0, power.cwiseAbs().maxCoeff());
      CHECK(max_abs_diff(g.product(), power) < 1e-10 * scale);
    }
  }
  CHECK_THROWS_AS(power_factor(random_factor(rng, 3, 2), 0), DomainError);
}

TEST_CASE("power factor keeps the inner matrix nonnegative for odd powers") {
  Rng rng(204);
  const Trifactor f = random_factor(rng, 4, 3, 0.0);
  const Trifactor g = power_factor(f, 3);
  CHECK(g.c().minCoeff() >= 0.0);
}

TEST_CASE("principal subfactor restricts rows") {
  Rng rng(205);
  const Trifactor f = random_factor(rng, 5, 3);
  const std::vector<int> rows = {4, 0, 2};
  const Trifactor g = principal_subfactor(f, rows);
  CHECK(g.n() == 3);
  CHECK(g.k() == 3);
  CHECK(max_abs_diff(g.product(), submatrix(f.product(), rows, rows)) < 1e-12);

  CHECK_THROWS_AS(principal_subfactor(f, {}), DimensionError);
  CHECK_THROWS_AS(principal_subfactor(f, {0, 5}), DimensionError);
  CHECK_THROWS_AS(principal_subfactor(f, {1, 1}), DomainError);
}

TEST_CASE("bipartite factor embeds a rectangular factorization") {
  Rng rng(206);
  const Matrix u = random_matrix(rng, 3, 2, 0.0, 1.0);
  const Matrix v = random_matrix(rng, 4, 2, 0.0, 1.0);
  const NmfPair x(u, v);
  CHECK(x.k() == 2);
  const Trifactor f = bipartite_factor(x);
  CHECK(f.n() == 7);
  CHECK(f.k() == 4);
  Matrix want = Matrix::Zero(7, 7);
  want.topRightCorner(3, 4) = x.product();
  want.bottomLeftCorner(4, 3) = x.product().transpose();
  CHECK(max_abs_diff(f.product(), want) < 1e-12);
  // left blocks sit on separate column groups
  CHECK(f.b().topRightCorner(3, 2).maxCoeff() == 0.0);
  CHECK(f.b().bottomLeftCorner(4, 2).maxCoeff() == 0.0);

  Matrix uneg = u;
  uneg(0, 0) = -0.1;
  CHECK_THROWS_AS(NmfPair(uneg, v), DomainError);
  CHECK_THROWS_AS(NmfPair(u, random_matrix(rng, 4, 3, 0.0, 1.0)),
                  DimensionError);
}

TEST_CASE("symmetrization factor produces X plus X transpose") {
  Rng rng(207);
  const Matrix u = random_matrix(rng, 4, 2, 0.0, 1.0);
  const Matrix v = random_matrix(rng, 4, 2, 0.0, 1.0);
  const NmfPair x(u, v);
  const Trifactor f = symmetrization_factor(x);
  CHECK(f.k() == 4);
  CHECK(max_abs_diff(f.product(), x.product() + x.product().transpose()) <
        1e-12);
  CHECK_THROWS_AS(
      symmetrization_factor(NmfPair(random_matrix(rng, 3, 2, 0.0, 1.0),
                                    random_matrix(rng, 4, 2, 0.0, 1.0))),
      DimensionError);
}

TEST_CASE("separable factor recovers planted anchor columns") {
  Rng rng(208);
  for (int trial = 0; trial < 15; ++trial) {
    const int k = 1 + rng.index(3);
    const int n = k + 1 + rng.index(4);
    const Matrix c = random_nonneg_sym(rng, k, 0.2, 1.5);
    Matrix b(n, k);
    b.topRows(k) = Matrix::Identity(k, k);
    b.bottomRows(n - k) = random_matrix(rng, n - k, k, 0.0, 1.0);
    const SymMatrix a(Matrix(b * c * b.transpose()));

    std::vector<int> cols(k);
    for (int j = 0; j < k; ++j) cols[j] = j;
    const Trifactor f = separable_factor(a, cols);
    CHECK(f.k() == k);
    CHECK(f.b().minCoeff() >= 0.0);
    CHECK(max_abs_diff(f.c(), submatrix(a.data(), cols, cols)) < 1e-12);
    const double scale = std::max(1.0, a.data().cwiseAbs().maxCoeff());
    CHECK(max_abs_diff(f.product(), a.data()) < 1e-7 * scale);

    const std::vector<int> found = find_separable_columns(a);
    REQUIRE(!found.empty());
    const Trifactor g = separable_factor(a, found);
    CHECK(max_abs_diff(g.product(), a.data()) < 1e-7 * scale);
  }
}

TEST_CASE("separable factor rejects unrepresentable columns") {
  const SymMatrix eye(Matrix::Identity(3, 3));
  CHECK_THROWS_AS(separable_factor(eye, {0, 1}), DomainError);
  CHECK_THROWS_AS(separable_factor(eye, {}), DimensionError);
  CHECK_THROWS_AS(separable_factor(eye, {0, 3}), DimensionError);
  CHECK_THROWS_AS(separable_factor(eye, {0, 0}), DomainError);
}

TEST_CASE("rank-2 factor handles fixed cases") {
  Matrix swap(2, 2);
  swap << 0, 1, 1, 0;
  const Trifactor f1 = rank2_factor(SymMatrix(swap));
  CHECK(f1.k() == 2);
  CHECK(f1.b().minCoeff() >= 0.0);
  CHECK(f1.c().minCoeff() >= 0.0);
  CHECK(max_abs_diff(f1.product(), swap) < 1e-12);

  Matrix psd(2, 2);
  psd << 2, 1, 1, 2;
  CHECK(max_abs_diff(rank2_factor(SymMatrix(psd)).product(), psd) < 1e-12);

  Matrix indef(3, 3);
  Vector x(3), y(3);
  x << 1, 0, 2;
  y << 0, 1, 1;
  indef = x * y.transpose() + y * x.transpose();
  const Trifactor f3 = rank2_factor(SymMatrix(indef));
  CHECK(f3.b().minCoeff() >= 0.0);
  CHECK(f3.c().minCoeff() >= 0.0);
  CHECK(max_abs_diff(f3.product(), indef) < 1e-11);
}

TEST_CASE("rank-2 factor covers random definite and indefinite draws") {
  Rng rng(209);
  int done = 0;
  while (done < 30) {
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
    const Trifactor f = rank2_factor(sa);
    CHECK(f.k() == 2);
    CHECK(f.b().minCoeff() >= 0.0);
    CHECK(f.c().minCoeff() >= 0.0);
    CHECK((a - f.product()).norm() < 1e-9 * a.norm());
    ++done;
  }
}

TEST_CASE("rank-2 factor rejects other ranks") {
  CHECK_THROWS_AS(rank2_factor(SymMatrix(Matrix::Ones(3, 3))), DomainError);
  CHECK_THROWS_AS(rank2_factor(SymMatrix(Matrix::Identity(3, 3))), DomainError);
}

TEST_CASE("squared distance matrix and its factor") {
  const Matrix m4 = edm_matrix(4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(m4(i, j) == double((i - j) * (i - j)));

  for (int n = 2; n <= 10; n += 2) {
    const Trifactor f = edm_factor(n);
    CHECK(f.k() == n / 2 + 2);
    CHECK(f.b().minCoeff() >= 0.0);
    CHECK(f.c().minCoeff() >= 0.0);
    CHECK(max_abs_diff(f.product(), edm_matrix(n)) < 1e-12);
  }

  CHECK_THROWS_AS(edm_factor(5), DomainError);
  CHECK_THROWS_AS(edm_matrix(0), DimensionError);

  // odd sizes restrict the even factor one size up
  const Trifactor f3 = principal_subfactor(edm_factor(4), {0, 1, 2});
  CHECK(f3.k() == 4);
  CHECK(max_abs_diff(f3.product(), edm_matrix(3)) < 1e-12);
}

}  // TEST_SUITE
