#pragma once

#include <Eigen/Core>

namespace nano {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Square matrix with identically zero strict upper triangle.
class LowerTriangular {
 public:
  // Throws std::invalid_argument if `m` is not square or has a nonzero entry
  // above the diagonal.
  explicit LowerTriangular(Matrix m);

  const Matrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }
  double min_diagonal() const { return m_.diagonal().minCoeff(); }

  // L Lᵀ
  Matrix gram() const;
  // L⁻¹ B and L⁻ᵀ B by substitution.
  Matrix solve(const Matrix& b) const;
  Matrix solve_transpose(const Matrix& b) const;

 private:
  Matrix m_;
};

// Lower Cholesky factor of a symmetric positive-definite matrix. A pivot at
// or below 1e-12 times the largest diagonal entry raises NotPositiveDefinite.
LowerTriangular cholesky_factor(const Matrix& a);

// Pivots d_j (squares of the factor diagonal) seen while factoring `a`;
// stops at the first non-positive pivot. Used to report PD margins.
Vector cholesky_pivots(const Matrix& a);

bool is_positive_definite(const Matrix& a);

// Solves A X = B through the Cholesky factor of A.
Matrix spd_solve(const Matrix& a, const Matrix& b);
Matrix spd_inverse(const Matrix& a);

Matrix symmetrize(const Matrix& a);

double frobenius_norm(const Matrix& a);

// Σ_{j=0}^{order} Aʲ/j!
Matrix matrix_exp_truncated(const Matrix& a, int order);

}  // namespace nano
