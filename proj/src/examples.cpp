#include "snt/examples.hpp"

#include <cmath>
#include <utility>

#include "snt/certificate.hpp"
#include "snt/completion.hpp"
#include "snt/constructions.hpp"
#include "snt/linalg.hpp"
#include "snt/matcore.hpp"
#include "snt/perturbation.hpp"
#include "snt/search.hpp"

namespace snt::ex {

namespace {

double poly_p(double s) { return ((s + 1.0) * s + 5.0) * s + 1.0; }
double poly_q(double x) { return ((x + 2.0) * x - 64.0) * x - 256.0; }

double max_abs_diff(const Matrix& x, const Matrix& y) {
  return (x - y).cwiseAbs().maxCoeff();
}

void add(ExampleReport& rep, std::string name, double expected, double actual,
         double tol) {
  const bool pass = std::isfinite(actual) && std::abs(expected - actual) <= tol;
  rep.checks.push_back({std::move(name), expected, actual, tol, pass});
  rep.pass = rep.pass && pass;
}

void add_flag(ExampleReport& rep, std::string name, bool ok) {
  add(rep, std::move(name), 1.0, ok ? 1.0 : 0.0, 0.0);
}

}  // namespace

double root_p() {
  static const double v = bisect_root(poly_p, -1.0, 0.0);
  return v;
}

double root_q() {
  static const double v = bisect_root(poly_q, 8.0, 9.0);
  return v;
}

Matrix ex23_pattern() {
  Matrix a(4, 4);
  a << 1, 1, 0, 0,
       1, 0, 1, 0,
       0, 1, 0, 1,
       0, 0, 1, 1;
  return a;
}

Matrix ex23_matrix() {
  Matrix a(4, 4);
  a << 4, 2, 2, 0,
       2, 3, 1, 2,
       2, 1, 3, 2,
       0, 2, 2, 4;
  return a;
}

Trifactor ex23_factor() {
  const double r2 = std::sqrt(2.0);
  Matrix u(4, 3);
  u << 2, 0, 0,
       1, r2, 0,
       1, 0, r2,
       0, r2, r2;
  return Trifactor(u, Matrix::Identity(3, 3));
}

Matrix ex210_matrix() {
  Matrix a(4, 4);
  a << 1, 1, 2, 2,
       1, 0, 1, 2,
       2, 1, 0, 1,
       2, 2, 1, 1;
  return a;
}

Matrix ex210_nmf_left() {
  Matrix b(4, 3);
  b << 0, 1, 1,
       0, 0, 1,
       1, 0, 0,
       1, 1, 0;
  return b;
}

Matrix ex210_nmf_right() {
  Matrix c(3, 4);
  c << 2, 1, 0, 1,
       0, 1, 1, 0,
       1, 0, 1, 2;
  return c;
}

Matrix ex211_matrix() {
  Matrix a(4, 4);
  a << 10, 7, 5, 8,
       7, 6, 4, 5,
       5, 4, 6, 7,
       8, 5, 7, 10;
  return a;
}

Trifactor ex211_factor() {
  Matrix c(3, 3);
  c << 6, 1, 4,
       1, 2, 1,
       4, 1, 6;
  return Trifactor(ex210_nmf_left(), c);
}

SymMatrix ex41_matrix() {
  Matrix a(4, 4);
  a << 0, 2, 1, 1,
       2, 0, 1, 1,
       1, 1, 0, 2,
       1, 1, 2, 0;
  return SymMatrix(a);
}

std::vector<SimilarityCase> ex41_cases() {
  const double r2 = std::sqrt(2.0);
  const double r3 = std::sqrt(3.0);
  const double r6 = std::sqrt(6.0);

  Vector u(4);
  u << 1, 1, 1, 1;
  u /= 2.0;
  Vector d1(2);
  d1 << -2.0, -2.0;

  Matrix u1a(4, 2);
  u1a << r3, 1,
         -r3, -1,
         -1, r3,
         1, -r3;
  u1a /= 2.0 * r2;
  Matrix s1(3, 3);
  s1 << r2, r3, 1,
        r2, -r3, 1,
        r2, 0, -2;
  s1 /= r6;
  Matrix b1(4, 3);
  b1 << 4, 1, 1,
        0, 3, 3,
        2, 2 + r3, 2 - r3,
        2, 2 - r3, 2 + r3;
  b1 /= 2.0 * r3;
  const Matrix cj =
      2.0 * (Matrix::Ones(3, 3) - Matrix::Identity(3, 3)).eval();

  Matrix u1b(4, 2);
  u1b << 0, -1,
         0, 1,
         -1, 0,
         1, 0;
  u1b /= r2;
  Matrix s2(3, 3);
  s2 << 2, 2, 2,
        2, -1 + r3, -1 - r3,
        2, -1 - r3, -1 + r3;
  s2 /= 2.0 * r3;
  Matrix b2(4, 3);
  b2 << 3 - r3, 6 + 2 * r3, 2 * r3,
        3 + 3 * r3, 0, 6,
        3 - r3, 2 * r3, 6 + 2 * r3,
        3 + 3 * r3, 6, 0;
  b2 /= 6.0 * r2;

  const double s = root_p();
  Matrix u1c(4, 2);
  u1c << 0, 1,
         0, -1,
         1, 0,
         -1, 0;
  u1c /= r2;
  Matrix s3inv(3, 3);
  s3inv << 1, 1, 1,
           -1, 1, s,
           -1, s, 1;
  Matrix s3 = s3inv.inverse();
  Matrix b3(4, 3);
  b3 << 0, 1 + s, 2,
        2, 1 - s, 0,
        0, 2, 1 + s,
        2, 0, 1 - s;
  b3 /= r2;
  const double c12 = 2.0 / ((1.0 + s) * (3.0 + s));
  const double c23 = 4.0 * (2.0 * s * s + s + 1.0) /
                     ((s + 3.0) * (s * s - 1.0) * (s * s - 1.0));
  Matrix c3(3, 3);
  c3 << 0, c12, c12,
        c12, 0, c23,
        c12, c23, 0;

  std::vector<SimilarityCase> cases;
  cases.push_back(
      {"S1", make_spectral_data(4.0, u, u1a, d1), s1, 2.0, 12.0, b1, cj});
  cases.push_back({"S2", make_spectral_data(4.0, u, u1b, d1), s2,
                   (r6 + r2) / 2.0, 4.0 * (1.0 + r3), b2, cj});
  cases.push_back(
      {"S3", make_spectral_data(4.0, u, u1c, d1), s3, r2, root_q(), b3, c3});
  return cases;
}

Trifactor ex42_no_certificate_factor() {
  const auto cases = ex41_cases();
  const SimilarityCase& c = cases[0];
  return perturbed_factor(c.spectral, PerronSimilarity(c.s), c.alpha, c.beta);
}

Trifactor ex42_certificate_factor() {
  const auto cases = ex41_cases();
  const SimilarityCase& c = cases[2];
  return perturbed_factor(c.spectral, PerronSimilarity(c.s), c.alpha, c.beta);
}

Matrix ex51_a1() { return Matrix::Identity(2, 2); }

Matrix ex51_a2() {
  Matrix a(2, 2);
  a << 0, 1,
       1, 0;
  return a;
}

Matrix ex51_cross() {
  Matrix x(2, 2);
  x << 0, 0,
       1, 0.5;
  return x;
}

SymMatrix ex51_assembled() {
  Matrix a(4, 4);
  a << 1, 0, 0, 0,
       0, 1, 1, 0.5,
       0, 1, 0, 1,
       0, 0.5, 1, 0;
  return SymMatrix(a);
}

Trifactor ex51_factor() {
  Matrix b(4, 3);
  b << 1, 0, 0,
       0, 1, 0.5,
       0, 2, 0,
       0, 0, 0.5;
  Matrix c(3, 3);
  c << 1, 0, 0,
       0, 0, 1,
       0, 1, 0;
  return Trifactor(b, c);
}

Trifactor ex52_seed_factor() {
  Matrix b(2, 1);
  b << 1, 1;
  Matrix c(1, 1);
  c << 2;
  return Trifactor(b, c);
}

Matrix ex52_join() {
  Matrix a(2, 2);
  a << 0, 2,
       2, 0;
  return a;
}

Vector ex52_unit() {
  Vector u(2);
  u << 1, 1;
  return u / std::sqrt(2.0);
}

Matrix ex52_intermediate() {
  const double r2 = std::sqrt(2.0);
  Matrix a(3, 3);
  a << 2, r2, r2,
       r2, 0, 2,
       r2, 2, 0;
  return a;
}

Vector ex53_unit() {
  Vector v(2);
  v << 0.6, 0.8;
  return v;
}

Matrix ex53_matrix(const Vector& v) {
  const int m = static_cast<int>(v.size());
  const Matrix core = ex210_matrix();
  Vector a(3);
  a << 2, 2, 1;
  Matrix out(3 + m, 3 + m);
  out.topLeftCorner(3, 3) = core.topLeftCorner(3, 3);
  out.topRightCorner(3, m) = a * v.transpose();
  out.bottomLeftCorner(m, 3) = v * a.transpose();
  out.bottomRightCorner(m, m) = v * v.transpose();
  return out;
}

Matrix ex53_nmf_left(const Vector& v) {
  const int m = static_cast<int>(v.size());
  Matrix b = Matrix::Zero(3 + m, 3);
  b(0, 1) = 1;
  b(0, 2) = 1;
  b(1, 2) = 1;
  b(2, 0) = 1;
  b.block(3, 0, m, 1) = v;
  b.block(3, 1, m, 1) = v;
  return b;
}

Matrix ex53_nmf_right(const Vector& v) {
  const int m = static_cast<int>(v.size());
  Matrix c = Matrix::Zero(3, 3 + m);
  c(0, 0) = 2;
  c(0, 1) = 1;
  c(1, 1) = 1;
  c(1, 2) = 1;
  c(2, 0) = 1;
  c(2, 2) = 1;
  c.block(0, 3, 1, m) = v.transpose();
  c.block(2, 3, 1, m) = 2.0 * v.transpose();
  return c;
}

namespace {

ExampleReport run_ex23(std::uint64_t seed) {
  ExampleReport rep{"ex2.3",
                    "width-3 factor with sqrt(2) entries; 0/1 matrix stuck at 4",
                    {},
                    true};
  const Matrix m = ex23_matrix();
  const SymMatrix a(m);
  add(rep, "factor max residual", 0.0,
      verify_trifactorization(a, ex23_factor()).max_residual, 1e-12);
  add(rep, "rank", 3, numerical_rank(a), 0);
  FitOptions o;
  o.seed = seed;
  const FitResult fit = fit_trifactorization(a, 3, o);
  add(rep, "width-3 fit rel residual", 0.0, fit.residual / m.norm(), 1e-6);
  const SymMatrix p(ex23_pattern());
  add(rep, "pattern rank", 3, numerical_rank(p), 0);
  add(rep, "pattern boolean rank", 4,
      boolean_rank(support_pattern(p.data())).value, 0);
  const BoundReport br = bounds_report(p, o);
  add(rep, "pattern lower bound", 4, br.lower, 0);
  add(rep, "pattern upper bound", 4, br.upper, 0);
  return rep;
}

ExampleReport run_ex210(std::uint64_t seed) {
  ExampleReport rep{"ex2.10",
                    "rank 3 with a width-3 NMF but no width-3 trifactor",
                    {},
                    true};
  const Matrix m = ex210_matrix();
  add(rep, "nmf product residual", 0.0,
      max_abs_diff(ex210_nmf_left() * ex210_nmf_right(), m), 1e-12);
  const SymMatrix a(m);
  add(rep, "rank", 3, numerical_rank(a), 0);

  double worst = -4.0;
  for (int i = 0; i < 100; ++i) {
    for (int j = 0; j < 100; ++j) {
      const double x = (i + 0.5) / 100.0;
      const double y = (j + 0.5) / 100.0;
      worst = std::max(worst, 2.0 * (1.0 - x) * (1.0 - y) - 3.0);
    }
  }
  add(rep, "obstruction grid max", 2.0 * 0.995 * 0.995 - 3.0, worst, 1e-12);
  add_flag(rep, "obstruction negative over grid", worst < 0.0);

  FitOptions o;
  o.seed = seed;
  o.restarts = 50;
  const FitResult fit = fit_trifactorization(a, 3, o);
  add_flag(rep, "width-3 fit stays above 1e-3", fit.residual / m.norm() >= 1e-3);

  FitOptions bo;
  bo.seed = seed;
  const BoundReport br = bounds_report(a, bo);
  add(rep, "lower bound", 3, br.lower, 0);
  add(rep, "upper bound", 4, br.upper, 0);
  return rep;
}

ExampleReport run_ex211(std::uint64_t seed) {
  ExampleReport rep{"ex2.11",
                    "squaring drops the trifactor width back to the rank",
                    {},
                    true};
  const Matrix m = ex211_matrix();
  const Matrix base = ex210_matrix();
  add(rep, "square identity", 0.0, max_abs_diff(base * base, m), 1e-12);
  const SymMatrix a(m);
  add(rep, "factor max residual", 0.0,
      verify_trifactorization(a, ex211_factor()).max_residual, 1e-12);
  add(rep, "rank", 3, numerical_rank(a), 0);
  FitOptions o;
  o.seed = seed;
  const FitResult fit = fit_trifactorization(a, 3, o);
  add(rep, "width-3 fit rel residual", 0.0, fit.residual / m.norm(), 1e-6);
  return rep;
}

ExampleReport run_edm(std::uint64_t) {
  ExampleReport rep{"edm",
                    "distance matrices of points 1..n factor at width n/2+2",
                    {},
                    true};
  for (int n : {2, 4, 6, 8, 10}) {
    const Trifactor f = edm_factor(n);
    add(rep, "n=" + std::to_string(n) + " width", n / 2 + 2, f.k(), 0);
    add(rep, "n=" + std::to_string(n) + " residual", 0.0,
        verify_trifactorization(SymMatrix(edm_matrix(n)), f).max_residual,
        1e-12);
  }
  const Trifactor f5 = principal_subfactor(edm_factor(6), {0, 1, 2, 3, 4});
  add(rep, "n=5 width", 5, f5.k(), 0);
  add(rep, "n=5 residual", 0.0,
      verify_trifactorization(SymMatrix(edm_matrix(5)), f5).max_residual,
      1e-12);
  return rep;
}

ExampleReport run_ex41(std::uint64_t) {
  ExampleReport rep{"ex4.1",
                    "minimal diagonal move (beta, alpha) under three similarities",
                    {},
                    true};
  const double s = root_p();
  const double a3 = root_q();
  add(rep, "p(s) at root", 0.0, poly_p(s), 1e-12);
  add(rep, "q(alpha3) at root", 0.0, poly_q(a3), 1e-9);
  add(rep, "alpha3 closed form", a3, 8.0 / ((1.0 + s) * (1.0 + s)) - 4.0,
      1e-9);

  const SymMatrix a = ex41_matrix();
  add(rep, "rank", 3, numerical_rank(a), 0);

  for (const SimilarityCase& c : ex41_cases()) {
    const double vtol = c.name == "S3" ? 1e-8 : 1e-10;
    const PerronSimilarity ps(c.s);
    const double beta = min_beta(c.spectral, ps);
    add(rep, c.name + " beta", c.beta, beta, vtol);
    const double alpha = min_alpha(c.spectral, ps, beta);
    add(rep, c.name + " alpha", c.alpha, alpha, vtol);
    const Trifactor f = perturbed_factor(c.spectral, ps, alpha, beta);
    add(rep, c.name + " B residual", 0.0, max_abs_diff(f.b(), c.b_expected),
        1e-6);
    add(rep, c.name + " C residual", 0.0, max_abs_diff(f.c(), c.c_expected),
        1e-6);
    const Matrix moved =
        a.data() + alpha * (c.spectral.u * c.spectral.u.transpose());
    add(rep, c.name + " perturbed verify", 0.0,
        verify_trifactorization(SymMatrix(moved), f).max_residual, 1e-10);
  }

  const Matrix d = Matrix::Ones(4, 4) - Matrix::Identity(4, 4);
  add(rep, "derangement boolean rank", 4,
      boolean_rank(support_pattern(d)).value, 0);
  return rep;
}

ExampleReport run_ex42(std::uint64_t) {
  ExampleReport rep{"ex4.2",
                    "zero-pattern certificate separates stuck factors from movable ones",
                    {},
                    true};
  const Trifactor f1 = ex42_no_certificate_factor();
  const MovabilityReport mv1 = check_movable(f1);
  add_flag(rep, "interior pair movable", mv1.movable);
  add_flag(rep, "interior pair has no certificate", !mv1.certificate.has_value());

  const Trifactor f3 = ex42_certificate_factor();
  const auto cert = boundary_certificate(f3);
  add_flag(rep, "boundary pair certificate exists", cert.has_value());
  if (cert.has_value()) {
    const Matrix& x = cert->x;
    const Matrix& w = cert->w;
    const double xmax = x.maxCoeff();
    bool support_ok = xmax > 0.0;
    for (int i = 0; i < x.rows(); ++i) {
      for (int j = 0; j < x.cols(); ++j) {
        const bool expect = (i == 0 && j == 0) || (i == 2 && j == 0) ||
                            (i == 1 && j == 2) || (i == 3 && j == 1);
        support_ok = support_ok && ((x(i, j) > 1e-9 * xmax) == expect);
      }
    }
    add_flag(rep, "certificate X support", support_ok);
    double offdiag = 0.0;
    for (int i = 0; i < w.rows(); ++i) {
      for (int j = 0; j < w.cols(); ++j) {
        if (i != j) offdiag = std::max(offdiag, std::abs(w(i, j)));
      }
    }
    add(rep, "certificate W off-diagonal max", 0.0, offdiag, 1e-15);
    const double s = root_p();
    const double c12 = f3.c()(0, 1);
    const double c23 = f3.c()(1, 2);
    add(rep, "x11/w33", c12 / (3.0 + s), x(0, 0) / w(2, 2), 1e-6);
    add(rep, "w11/w33", 2.0 * c23 / (c12 * (1.0 - s)), w(0, 0) / w(2, 2),
        1e-6);
    add(rep, "w22/w33", 1.0, w(1, 1) / w(2, 2), 1e-6);
  }
  const MovabilityReport mv3 = check_movable(f3);
  add_flag(rep, "boundary pair not movable", !mv3.movable);
  return rep;
}

ExampleReport run_ex51(std::uint64_t seed) {
  ExampleReport rep{"ex5.1",
                    "completion reaches width 3 only with a boundary cross block",
                    {},
                    true};
  const SymMatrix a1(ex51_a1());
  const SymMatrix a2(ex51_a2());
  add(rep, "lower bound", 3, completion_lower_bound(a1, a2), 0);

  const SymMatrix whole = ex51_assembled();
  add(rep, "explicit factor residual", 0.0,
      verify_trifactorization(whole, ex51_factor()).max_residual, 1e-12);
  add(rep, "assembled rank", 3, numerical_rank(whole), 0);

  const double known_scale = std::max(
      1.0, std::sqrt(a1.data().squaredNorm() + a2.data().squaredNorm()));
  FitOptions o;
  o.seed = seed;
  o.restarts = 50;
  const CompletionFit soft = fit_completion(a1, a2, 3, false, o);
  add(rep, "free cross fit rel residual", 0.0, soft.residual / known_scale,
      1e-6);
  add_flag(rep, "free cross fit converged", soft.converged);

  const CompletionFit hard = fit_completion(a1, a2, 3, true, o);
  const double eps = 1e-3;
  const double metric =
      hard.residual / known_scale + std::max(0.0, eps - hard.min_cross);
  add_flag(rep, "positive cross fit fails",
           !hard.converged && metric > 1e-3);
  return rep;
}

ExampleReport run_ex52(std::uint64_t) {
  ExampleReport rep{"ex5.2",
                    "two rank-1 glue steps assemble a 4x4 from 2x2 pieces",
                    {},
                    true};
  const Trifactor join_factor(Matrix::Identity(2, 2), ex52_join());
  const GlueResult g1 =
      rank1_glue({ex52_seed_factor(), join_factor, ex52_unit(), 2.0});
  add(rep, "first glue matrix residual", 0.0,
      max_abs_diff(g1.a.data(), ex52_intermediate()), 1e-12);
  add(rep, "first glue verify", 0.0,
      verify_trifactorization(g1.a, g1.f).max_residual, 1e-12);
  add(rep, "first glue rank", 2, numerical_rank(g1.a), 0);

  const Trifactor fp = apply_scaling(g1.f, {2, 1, 0}, Vector::Ones(3));
  const GlueResult g2 = rank1_glue({fp, join_factor, ex52_unit(), 2.0});
  add(rep, "second glue matrix residual", 0.0,
      max_abs_diff(g2.a.data(), ex41_matrix().data()), 1e-12);
  add(rep, "second glue verify", 0.0,
      verify_trifactorization(g2.a, g2.f).max_residual, 1e-12);
  add(rep, "second glue rank", 3, numerical_rank(g2.a), 0);
  add(rep, "second glue width", 5, g2.f.k(), 0);
  return rep;
}

ExampleReport run_ex53(std::uint64_t) {
  ExampleReport rep{"ex5.3",
                    "rank-1 tail keeps rank 3 and NMF width 3, trifactor width 4",
                    {},
                    true};
  const Vector v = ex53_unit();
  const Matrix av = ex53_matrix(v);
  add(rep, "nmf product residual", 0.0,
      max_abs_diff(ex53_nmf_left(v) * ex53_nmf_right(v), av), 1e-12);
  add(rep, "rank", 3, numerical_rank(SymMatrix(av)), 0);

  const GlueResult g =
      rank1_glue_rank1(Trifactor(Matrix::Identity(4, 4), ex210_matrix()), v);
  add(rep, "glue matrix residual", 0.0, max_abs_diff(g.a.data(), av), 1e-12);
  add(rep, "glue verify", 0.0,
      verify_trifactorization(g.a, g.f).max_residual, 1e-12);
  add(rep, "glue width", 4, g.f.k(), 0);
  return rep;
}

}  // namespace

std::vector<std::string> example_ids() {
  return {"ex2.3", "ex2.10", "ex2.11", "edm", "ex4.1",
          "ex4.2", "ex5.1", "ex5.2", "ex5.3"};
}

ExampleReport run_example(const std::string& id, std::uint64_t seed) {
  if (id == "ex2.3") return run_ex23(seed);
  if (id == "ex2.10") return run_ex210(seed);
  if (id == "ex2.11") return run_ex211(seed);
  if (id == "edm") return run_edm(seed);
  if (id == "ex4.1") return run_ex41(seed);
  if (id == "ex4.2") return run_ex42(seed);
  if (id == "ex5.1") return run_ex51(seed);
  if (id == "ex5.2") return run_ex52(seed);
  if (id == "ex5.3") return run_ex53(seed);
  throw ParseError("unknown example id: " + id);
}

}  // namespace snt::ex
