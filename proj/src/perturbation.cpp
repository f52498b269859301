#include "snt/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "snt/linalg.hpp"
#include "snt/matcore.hpp"

namespace snt {
namespace {

constexpr double kDust = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

Matrix clamp_dust(Matrix m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (m(i, j) < 0.0 && m(i, j) >= -kDust) m(i, j) = 0.0;
    }
  }
  return m;
}

void check_match(const SpectralData& sd, const PerronSimilarity& s) {
  if (sd.r != s.r()) {
    throw DimensionError("similarity size does not match the symmetric rank");
  }
}

// U1 * S^{-1}[1:, :], the part of B(beta, S) that does not move with beta.
Matrix b_fixed_part(const SpectralData& sd, const PerronSimilarity& s) {
  const int r = sd.r;
  if (r == 1) return Matrix::Zero(sd.u.size(), 1);
  return sd.u1 * s.s_inv().bottomRows(r - 1);
}

// S1 diag(d1) S1^T, the part of C(alpha, beta, S) that does not move.
Matrix tail_quadratic(const SpectralData& sd, const PerronSimilarity& s) {
  const int r = sd.r;
  Matrix m = Matrix::Zero(r, r);
  if (r > 1) {
    const Matrix s1 = s.s().rightCols(r - 1);
    m = s1 * sd.d1.asDiagonal() * s1.transpose();
  }
  return m;
}

// Largest beta keeping alpha at zero, used when the fixed part of B is
// already nonnegative and beta is otherwise unconstrained.
double beta_cap_for_zero_alpha(const SpectralData& sd,
                               const PerronSimilarity& s) {
  const Matrix m = tail_quadratic(sd, s);
  const Vector s1 = s.s().col(0);
  double cap2 = kInf;
  for (int i = 0; i < sd.r; ++i) {
    for (int j = 0; j < sd.r; ++j) {
      if (m(i, j) < 0.0) {
        cap2 = std::min(cap2, sd.lambda1 * (-(s1(i) * s1(j)) / m(i, j)));
      }
    }
  }
  if (!std::isfinite(cap2)) return 1.0;
  return std::sqrt(cap2);
}

}  // namespace

PerronSimilarity::PerronSimilarity(const Matrix& s) : m_s(s) {
  if (s.rows() < 1 || s.rows() != s.cols()) {
    throw DimensionError("similarity must be square and nonempty");
  }
  Eigen::FullPivLU<Matrix> lu(s);
  if (!lu.isInvertible()) throw DomainError("similarity is singular");
  m_s_inv = lu.inverse();
  if (m_s.col(0).minCoeff() <= 0.0) {
    throw DomainError("first column of the similarity must be strictly positive");
  }
  if (m_s_inv.row(0).minCoeff() <= 0.0) {
    throw DomainError("first row of the inverse similarity must be strictly positive");
  }
}

double min_beta(const SpectralData& sd, const PerronSimilarity& s) {
  check_match(sd, s);
  const Matrix fixed = b_fixed_part(sd, s);
  const auto s_row = s.s_inv().row(0);
  double beta = 0.0;
  for (Eigen::Index j = 0; j < fixed.cols(); ++j) {
    for (Eigen::Index i = 0; i < fixed.rows(); ++i) {
      if (fixed(i, j) >= 0.0) continue;
      const double denom = sd.u(i) * s_row(j);
      if (denom <= 0.0) {
        throw DomainError("no beta can make B nonnegative: u vanishes on a negative row");
      }
      beta = std::max(beta, -fixed(i, j) / denom);
    }
  }
  return beta;
}

double min_alpha(const SpectralData& sd, const PerronSimilarity& s,
                 double beta) {
  check_match(sd, s);
  if (!(beta > 0.0)) throw DomainError("beta must be positive");
  const Matrix m = tail_quadratic(sd, s);
  const Vector s1 = s.s().col(0);
  double alpha = 0.0;
  for (int i = 0; i < sd.r; ++i) {
    for (int j = 0; j < sd.r; ++j) {
      alpha = std::max(alpha, -sd.lambda1 - beta * beta * m(i, j) / (s1(i) * s1(j)));
    }
  }
  return alpha;
}

Trifactor perturbed_factor(const SpectralData& sd, const PerronSimilarity& s,
                           double alpha, double beta) {
  check_match(sd, s);
  if (!(beta > 0.0)) throw DomainError("beta must be positive");
  if (alpha < 0.0) throw DomainError("alpha must be nonnegative");
  const Matrix b = beta * sd.u * s.s_inv().row(0) + b_fixed_part(sd, s);
  const Vector s1 = s.s().col(0);
  Matrix c = ((sd.lambda1 + alpha) / (beta * beta)) * (s1 * s1.transpose()) +
             tail_quadratic(sd, s);
  c = 0.5 * (c + c.transpose()).eval();
  return Trifactor(clamp_dust(b), clamp_dust(c));
}

PerturbResult perturb_with_spectral(const SymMatrix& a, const SpectralData& sd,
                                    const PerronSimilarity& s) {
  check_match(sd, s);
  if (sd.u.size() != a.n()) {
    throw DimensionError("spectral data does not match the matrix size");
  }
  if (sd.r == 1) {
    Matrix c(1, 1);
    c(0, 0) = sd.lambda1;
    return PerturbResult{0.0, 1.0, Trifactor(clamp_dust(sd.u), c), a};
  }
  double beta = min_beta(sd, s);
  if (beta <= 0.0) beta = beta_cap_for_zero_alpha(sd, s);
  const double alpha = min_alpha(sd, s, beta);
  Trifactor f = perturbed_factor(sd, s, alpha, beta);
  const Matrix ap = a.data() + alpha * (sd.u * sd.u.transpose());
  return PerturbResult{alpha, beta, std::move(f), SymMatrix(ap)};
}

PerturbResult perturb_factorization(const SymMatrix& a,
                                    const PerronSimilarity& s) {
  return perturb_with_spectral(a, spectral_split(a), s);
}

namespace {

struct EvalOutcome {
  double alpha = kInf;
  double beta = kInf;
  bool feasible = false;
};

double condition_estimate(const Matrix& s) {
  Eigen::JacobiSVD<Matrix> svd(s);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  if (smin <= 0.0) return kInf;
  return sv(0) / smin;
}

EvalOutcome evaluate_candidate(const SpectralData& sd, const Matrix& s_raw) {
  EvalOutcome out;
  if (s_raw.rows() != sd.r || s_raw.cols() != sd.r) return out;
  if (!s_raw.allFinite()) return out;
  if (condition_estimate(s_raw) > 1e8) return out;
  try {
    const PerronSimilarity ps(s_raw);
    double beta = min_beta(sd, ps);
    double alpha = 0.0;
    if (beta <= 0.0) {
      beta = beta_cap_for_zero_alpha(sd, ps);
    } else {
      alpha = min_alpha(sd, ps, beta);
    }
    out.alpha = alpha;
    out.beta = beta;
    out.feasible = true;
  } catch (const std::exception&) {
    out.feasible = false;
  }
  return out;
}

// Symmetric orthogonal matrix whose first column (and row) is the unit
// vector q1 > 0.
Matrix householder_completion(const Vector& q1) {
  const int r = static_cast<int>(q1.size());
  Vector w = q1;
  w(0) -= 1.0;
  const double wn = w.squaredNorm();
  if (wn < 1e-30) return Matrix::Identity(r, r);
  return Matrix::Identity(r, r) - (2.0 / wn) * (w * w.transpose());
}

Matrix random_orthogonal_positive_first(Rng& rng, int r) {
  Matrix m(r, r);
  Vector q1(r);
  for (int i = 0; i < r; ++i) q1(i) = std::abs(rng.gaussian()) + 0.1;
  m.col(0) = q1.normalized();
  for (int j = 1; j < r; ++j) {
    while (true) {
      Vector v(r);
      for (int i = 0; i < r; ++i) v(i) = rng.gaussian();
      for (int p = 0; p < j; ++p) v -= m.col(p).dot(v) * m.col(p);
      const double nn = v.norm();
      if (nn > 1e-8) {
        m.col(j) = v / nn;
        break;
      }
    }
  }
  return m;
}

using NmValue = std::pair<double, double>;  // (alpha, beta), lexicographic

struct NmPoint {
  Eigen::VectorXd x;
  NmValue value;
};

Matrix unvec(const Eigen::VectorXd& x, int r) {
  return Eigen::Map<const Matrix>(x.data(), r, r);
}

Eigen::VectorXd vec(const Matrix& s) {
  return Eigen::Map<const Eigen::VectorXd>(s.data(), s.size());
}

}  // namespace

OptimizeResult optimize_similarity(const SymMatrix& a, int budget,
                                   std::uint64_t seed,
                                   const std::vector<Matrix>& initial_candidates) {
  if (budget < 1) throw DomainError("budget must be positive");
  const SpectralData sd = spectral_split(a);
  const int r = sd.r;
  if (r == 1) {
    Matrix s(1, 1);
    s(0, 0) = 1.0;
    return OptimizeResult{s, 0.0, 1.0, 0};
  }

  Rng rng(seed);
  int evals = 0;
  Matrix best_s;
  NmValue best_value{kInf, kInf};

  auto consider = [&](const Matrix& s_raw) -> NmValue {
    const EvalOutcome out = evaluate_candidate(sd, s_raw);
    ++evals;
    const NmValue v{out.alpha, out.beta};
    if (out.feasible && v < best_value) {
      best_value = v;
      best_s = s_raw;
    }
    return v;
  };

  for (const Matrix& s0 : initial_candidates) {
    if (evals >= budget) break;
    consider(s0);
  }
  if (evals < budget) {
    consider(householder_completion(Vector::Ones(r).normalized()));
  }
  const int random_budget = std::min(budget - evals, std::max(16, budget / 4));
  for (int t = 0; t < random_budget && evals < budget; ++t) {
    consider(random_orthogonal_positive_first(rng, r));
  }

  // Nelder-Mead on the entries of S, restarted from fresh random
  // candidates while budget remains.
  const int d = r * r;
  bool first_run = true;
  while (evals < budget && best_value.first > 1e-15 && best_s.size() > 0) {
    Eigen::VectorXd x0 =
        first_run ? vec(best_s)
                  : vec(random_orthogonal_positive_first(rng, r));
    first_run = false;

    std::vector<NmPoint> pts;
    pts.reserve(d + 1);
    pts.push_back({x0, consider(unvec(x0, r))});
    for (int i = 0; i < d && evals < budget; ++i) {
      Eigen::VectorXd xi = x0;
      xi(i) += 0.1 * std::max(1.0, std::abs(x0(i)));
      pts.push_back({xi, consider(unvec(xi, r))});
    }
    if (static_cast<int>(pts.size()) < d + 1) break;

    while (evals < budget) {
      std::stable_sort(pts.begin(), pts.end(),
                       [](const NmPoint& p, const NmPoint& q) {
                         return p.value < q.value;
                       });
      double diam = 0.0;
      for (int i = 1; i <= d; ++i) {
        diam = std::max(diam, (pts[i].x - pts[0].x).lpNorm<Eigen::Infinity>());
      }
      if (diam < 1e-10) break;

      Eigen::VectorXd centroid = Eigen::VectorXd::Zero(d);
      for (int i = 0; i < d; ++i) centroid += pts[i].x;
      centroid /= static_cast<double>(d);

      const Eigen::VectorXd xr = centroid + (centroid - pts[d].x);
      const NmValue fr = consider(unvec(xr, r));
      if (fr < pts[0].value) {
        if (evals >= budget) {
          pts[d] = {xr, fr};
          continue;
        }
        const Eigen::VectorXd xe = centroid + 2.0 * (centroid - pts[d].x);
        const NmValue fe = consider(unvec(xe, r));
        pts[d] = (fe < fr) ? NmPoint{xe, fe} : NmPoint{xr, fr};
      } else if (fr < pts[d - 1].value) {
        pts[d] = {xr, fr};
      } else {
        const Eigen::VectorXd xc = centroid + 0.5 * (pts[d].x - centroid);
        const NmValue fc = consider(unvec(xc, r));
        if (fc < pts[d].value) {
          pts[d] = {xc, fc};
        } else {
          for (int i = 1; i <= d && evals < budget; ++i) {
            pts[i].x = pts[0].x + 0.5 * (pts[i].x - pts[0].x);
            pts[i].value = consider(unvec(pts[i].x, r));
          }
        }
      }
    }
  }

  if (!std::isfinite(best_value.first)) {
    throw DomainError("no feasible similarity found within the budget");
  }
  return OptimizeResult{best_s, best_value.first, best_value.second, evals};
}

SimilarityExtract extract_similarity(const SymMatrix& a, const Trifactor& f) {
  const SpectralData sd = spectral_split(a);
  const int r = sd.r;
  if (f.n() != a.n()) throw DimensionError("factor size does not match the matrix");
  if (f.k() != r) throw DomainError("factor width must equal the symmetric rank");

  Matrix u_full(a.n(), r);
  u_full.col(0) = sd.u;
  if (r > 1) u_full.rightCols(r - 1) = sd.u1;

  const Matrix t_inv = u_full.transpose() * f.b();
  const double b_scale = std::max(1.0, f.b().cwiseAbs().maxCoeff());
  const double b_res = (u_full * t_inv - f.b()).cwiseAbs().maxCoeff();
  if (b_res > 1e-6 * b_scale) {
    throw DomainError("factor columns leave the eigenspace of the matrix");
  }
  Eigen::FullPivLU<Matrix> lu(t_inv);
  if (!lu.isInvertible()) throw DomainError("recovered similarity is singular");
  const Matrix t = lu.inverse();

  Vector evs(r);
  evs(0) = sd.lambda1;
  for (int i = 1; i < r; ++i) evs(i) = sd.d1(i - 1);
  const Matrix c_rec = t * evs.asDiagonal() * t.transpose();

  SimilarityExtract out;
  out.t = t;
  out.t_inv = t_inv;
  out.first_col_nonneg = t.col(0).minCoeff() >= -1e-12;
  out.first_row_inv_nonneg = t_inv.row(0).minCoeff() >= -1e-12;
  out.b_residual = b_res;
  out.c_residual = (c_rec - f.c()).cwiseAbs().maxCoeff();
  return out;
}

}  // namespace snt
