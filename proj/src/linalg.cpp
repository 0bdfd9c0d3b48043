#include "nano/linalg.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "nano/errors.hpp"

namespace nano {

namespace {

constexpr double kSymmetryTol = 1e-10;
constexpr double kPivotTol = 1e-12;

void require_square(const Matrix& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw std::invalid_argument(std::string(what) + ": matrix must be square and non-empty");
  }
}

void require_symmetric(const Matrix& a) {
  const double scale = a.cwiseAbs().maxCoeff();
  const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTol * scale) {
    throw std::invalid_argument("cholesky_factor: matrix is not symmetric (max asymmetry " +
                                std::to_string(asym) + ")");
  }
}

// Column-oriented Cholesky–Crout. Writes pivots into `pivots` as it goes and
// returns the index of the first failing pivot, or n on success.
Eigen::Index factor_in_place(const Matrix& a, Matrix& l, Vector& pivots) {
  const Eigen::Index n = a.rows();
  const double threshold = kPivotTol * a.diagonal().maxCoeff();
  l.setZero(n, n);
  pivots.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double d = a(j, j);
    for (Eigen::Index k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    pivots(j) = d;
    // Negated comparison so NaN pivots fail too.
    if (!(d > threshold) || !(d > 0.0)) return j;
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (Eigen::Index k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return n;
}

}  // namespace

LowerTriangular::LowerTriangular(Matrix m) : m_(std::move(m)) {
  require_square(m_, "LowerTriangular");
  for (Eigen::Index j = 1; j < m_.cols(); ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      if (m_(i, j) != 0.0) {
        throw std::invalid_argument("LowerTriangular: nonzero entry above the diagonal");
      }
    }
  }
}

Matrix LowerTriangular::gram() const { return m_ * m_.transpose(); }

Matrix LowerTriangular::solve(const Matrix& b) const {
  return m_.triangularView<Eigen::Lower>().solve(b);
}

Matrix LowerTriangular::solve_transpose(const Matrix& b) const {
  return m_.transpose().triangularView<Eigen::Upper>().solve(b);
}

LowerTriangular cholesky_factor(const Matrix& a) {
  require_square(a, "cholesky_factor");
  require_symmetric(a);
  Matrix l;
  Vector pivots;
  const Eigen::Index failed = factor_in_place(a, l, pivots);
  if (failed != a.rows()) {
    throw NotPositiveDefinite("cholesky_factor: pivot " + std::to_string(failed) + " = " +
                              std::to_string(pivots(failed)) + " is below the threshold " +
                              std::to_string(kPivotTol * a.diagonal().maxCoeff()));
  }
  return LowerTriangular(std::move(l));
}

Vector cholesky_pivots(const Matrix& a) {
  require_square(a, "cholesky_pivots");
  Matrix l;
  Vector pivots;
  const Eigen::Index failed = factor_in_place(a, l, pivots);
  return failed == a.rows() ? pivots : Vector(pivots.head(failed + 1));
}

bool is_positive_definite(const Matrix& a) {
  try {
    cholesky_factor(a);
    return true;
  } catch (const NotPositiveDefinite&) {
    return false;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

Matrix spd_solve(const Matrix& a, const Matrix& b) {
  if (b.rows() != a.rows()) {
    throw std::invalid_argument("spd_solve: row count of B does not match A");
  }
  const LowerTriangular l = cholesky_factor(a);
  return l.solve_transpose(l.solve(b));
}

Matrix spd_inverse(const Matrix& a) {
  return symmetrize(spd_solve(a, Matrix::Identity(a.rows(), a.cols())));
}

Matrix symmetrize(const Matrix& a) {
  require_square(a, "symmetrize");
  return 0.5 * (a + a.transpose());
}

// stableNorm rescales, so tiny nonzero entries never underflow to a zero norm.
double frobenius_norm(const Matrix& a) { return a.stableNorm(); }

Matrix matrix_exp_truncated(const Matrix& a, int order) {
  require_square(a, "matrix_exp_truncated");
  if (order < 1) throw std::invalid_argument("matrix_exp_truncated: order must be >= 1");
  Matrix result = Matrix::Identity(a.rows(), a.cols());
  Matrix term = Matrix::Identity(a.rows(), a.cols());
  for (int j = 1; j <= order; ++j) {
    term = term * a / static_cast<double>(j);
    result += term;
  }
  return result;
}

}  // namespace nano
