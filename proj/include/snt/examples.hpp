#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "snt/types.hpp"

// Bundled worked examples. Each id is runnable through the CLI
// `paper-examples` subcommand and prints an expected-vs-computed table;
// the raw matrices are exposed so tests can pin against the same data.

namespace snt::ex {

// Real root of s^3 + s^2 + 5s + 1 in (-1, 0), by bisection.
double root_p();
// Real root of x^3 + 2x^2 - 64x - 256 in (8, 9), by bisection.
double root_q();

// 4x4 0/1 symmetric matrix with rank 3 that admits no trifactor of
// width 3; its interval from bounds_report closes at [4, 4].
Matrix ex23_pattern();
// Integer matrix with an exact width-3 trifactor over sqrt(2) entries.
Matrix ex23_matrix();
Trifactor ex23_factor();

// 4x4 matrix with rank 3, a width-3 NMF, and no width-3 trifactor; the
// obstruction polynomial 2(1-x21)(1-x22) - 3 stays negative on (0,1)^2.
Matrix ex210_matrix();
Matrix ex210_nmf_left();   // 4x3
Matrix ex210_nmf_right();  // 3x4

// Square of ex210_matrix(); drops back to trifactor width 3.
Matrix ex211_matrix();
Trifactor ex211_factor();

// One diagonal perturbation case: a similarity S with the expected
// minimal (beta, alpha) and the factor pair they produce. The spectral
// data pins the eigenbasis the expectations are written in.
struct SimilarityCase {
  std::string name;
  SpectralData spectral;
  Matrix s;
  double beta = 0.0;
  double alpha = 0.0;
  Matrix b_expected;
  Matrix c_expected;
};

// 4x4 matrix with spectrum {4, -2, -2, 0} and Perron vector (1,1,1,1)/2.
SymMatrix ex41_matrix();
std::vector<SimilarityCase> ex41_cases();

// Factor pairs feeding the certificate dichotomy: the first admits no
// zero-pattern certificate, the second has one with diagonal W.
Trifactor ex42_no_certificate_factor();
Trifactor ex42_certificate_factor();

// Completion with known diagonal blocks I2 and [[0,1],[1,0]]: width 3 is
// reachable with a boundary cross block but not with a positive one.
Matrix ex51_a1();
Matrix ex51_a2();
Matrix ex51_cross();      // [[0,0],[1,1/2]]
SymMatrix ex51_assembled();
Trifactor ex51_factor();  // explicit width-3 factor of the assembled matrix

// Two rank-1 glue steps that assemble ex41_matrix() from 2x2 pieces.
Trifactor ex52_seed_factor();  // [1;1] * [2] * [1;1]^T
Matrix ex52_join();            // [[0,2],[2,0]]
Vector ex52_unit();            // (1,1)/sqrt(2)
Matrix ex52_intermediate();    // expected first glue result, 3x3

// Family [[A1, a v^T], [v a^T, v v^T]] over unit vectors v > 0: rank 3,
// width-3 NMF, trifactor width 4 via the degenerate glue.
Vector ex53_unit();                        // (3/5, 4/5)
Matrix ex53_matrix(const Vector& v);
Matrix ex53_nmf_left(const Vector& v);     // (3+m) x 3
Matrix ex53_nmf_right(const Vector& v);    // 3 x (3+m)

struct ExampleCheck {
  std::string name;
  double expected = 0.0;
  double actual = 0.0;
  double tol = 0.0;  // absolute; pass iff |expected - actual| <= tol
  bool pass = false;
};

struct ExampleReport {
  std::string id;
  std::string title;
  std::vector<ExampleCheck> checks;
  bool pass = true;  // all checks passed
};

std::vector<std::string> example_ids();

// Runs one bundled example. Throws ParseError for an unknown id.
ExampleReport run_example(const std::string& id, std::uint64_t seed = 12345);

}  // namespace snt::ex
