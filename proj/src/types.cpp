#include "snt/types.hpp"

#include <cmath>

namespace snt {

SymMatrix::SymMatrix(const Matrix& a, double sym_tol) {
  if (a.rows() != a.cols()) {
    throw DimensionError("symmetric matrix must be square, got " +
                         std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()));
  }
  const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
  if (asym > sym_tol) {
    throw DomainError("matrix is not symmetric: max |A - A^T| = " +
                      std::to_string(asym));
  }
  Matrix sym = 0.5 * (a + a.transpose());
  const double min_entry = sym.minCoeff();
  if (min_entry < -sym_tol) {
    throw DomainError("matrix has negative entry " + std::to_string(min_entry));
  }
  m_mat = sym.cwiseMax(0.0);
}

Trifactor::Trifactor(const Matrix& b, const Matrix& c) : m_b(b) {
  if (c.rows() != c.cols()) {
    throw DimensionError("inner factor must be square");
  }
  if (b.cols() != c.rows()) {
    throw DimensionError("factor shapes disagree: B is " +
                         std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()) + ", C is " +
                         std::to_string(c.rows()) + "x" +
                         std::to_string(c.cols()));
  }
  if (b.cols() < 1) {
    throw DimensionError("factor width k must be at least 1");
  }
  const double scale = std::max(1.0, c.cwiseAbs().maxCoeff());
  const double asym = (c - c.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-8 * scale) {
    throw DomainError("inner factor is not symmetric: max |C - C^T| = " +
                      std::to_string(asym));
  }
  m_c = 0.5 * (c + c.transpose());
}

SpectralData make_spectral_data(double lambda1, const Vector& u,
                                const Matrix& u1, const Vector& d1) {
  if (u1.cols() != d1.size()) {
    throw DimensionError("eigenvector block width must match eigenvalue count");
  }
  if (u1.cols() > 0 && u1.rows() != u.size()) {
    throw DimensionError("eigenvector lengths disagree");
  }
  if (std::abs(u.norm() - 1.0) > 1e-10) {
    throw DomainError("perron direction must have unit norm");
  }
  if (u1.cols() > 0) {
    const double cross = (u1.transpose() * u).cwiseAbs().maxCoeff();
    if (cross > 1e-8) {
      throw DomainError("eigenvector block is not orthogonal to the perron direction");
    }
    const Matrix gram = u1.transpose() * u1;
    const double ortho =
        (gram - Matrix::Identity(u1.cols(), u1.cols())).cwiseAbs().maxCoeff();
    if (ortho > 1e-8) {
      throw DomainError("eigenvector block is not orthonormal");
    }
  }
  SpectralData sd;
  sd.lambda1 = lambda1;
  sd.u = u;
  sd.u1 = u1;
  sd.d1 = d1;
  sd.r = 1 + static_cast<int>(d1.size());
  return sd;
}

}  // namespace snt
