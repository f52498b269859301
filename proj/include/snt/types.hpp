#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace snt {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;
using Index = Eigen::Index;

// Shape mismatches and index range violations.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Inputs outside an operation's mathematical domain (reducible matrix,
// negative entries, rank mismatch, infeasible construction, ...).
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Malformed text input (matrix files, value expressions, CLI arguments).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dense symmetric matrix with nonnegative entries.
//
// Construction symmetrizes the input and clamps negative dust in
// [-sym_tol, 0) to exact zero. Asymmetry beyond sym_tol or entries below
// -sym_tol are rejected.
class SymMatrix {
 public:
  explicit SymMatrix(const Matrix& a, double sym_tol = 1e-10);

  int n() const { return static_cast<int>(m_mat.rows()); }
  const Matrix& data() const { return m_mat; }
  double operator()(int i, int j) const { return m_mat(i, j); }

 private:
  Matrix m_mat;
};

// Factor pair (B, C) representing the product B C B^T.
//
// C is stored exactly symmetric ((C + C^T)/2 after a relative asymmetry
// check). Entries are stored as given; nonnegativity is a property checked
// by verify_trifactorization, not enforced here, so that invalid factors
// remain representable for diagnostics.
class Trifactor {
 public:
  Trifactor(const Matrix& b, const Matrix& c);

  int n() const { return static_cast<int>(m_b.rows()); }
  int k() const { return static_cast<int>(m_b.cols()); }
  const Matrix& b() const { return m_b; }
  const Matrix& c() const { return m_c; }

  Matrix product() const { return m_b * m_c * m_b.transpose(); }

 private:
  Matrix m_b;
  Matrix m_c;
};

struct VerifyReport {
  bool valid = false;
  double max_residual = 0.0;  // max |A - B C B^T|
  double fro_residual = 0.0;
  bool nonneg_ok = false;
  bool symmetry_ok = false;
};

struct Inertia {
  int pi_plus = 0;
  int pi_minus = 0;
  int pi_zero = 0;
};

// Spectral data of a symmetric matrix split at the Perron eigenvalue:
//   A = lambda1 u u^T + U1 diag(d1) U1^T
// where r = 1 + d1.size() is the numerical rank, u is the unit Perron
// vector and the columns of U1 are unit eigenvectors of the remaining
// nonzero eigenvalues (d1 sorted descending).
struct SpectralData {
  double lambda1 = 0.0;
  Vector u;
  Matrix u1;
  Vector d1;
  int r = 0;
};

// Validating constructor for externally supplied spectral data.
// Checks unit norms, mutual orthogonality and consistent sizes.
SpectralData make_spectral_data(double lambda1, const Vector& u,
                                const Matrix& u1, const Vector& d1);

}  // namespace snt
