#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <random>

#include <Eigen/Eigenvalues>

#include "nano/linalg.hpp"
#include "nano/models.hpp"
#include "nano/noise.hpp"

namespace nano::test {

inline Matrix random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> normal;
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = normal(rng);
  }
  return m;
}

inline Vector random_vector(Rng& rng, Eigen::Index n, double scale = 1.0) {
  return scale * random_matrix(rng, n, 1);
}

// MᵀM + δI
inline Matrix random_spd(Rng& rng, Eigen::Index n, double delta = 1e-3) {
  const Matrix m = random_matrix(rng, n, n);
  return m.transpose() * m + delta * Matrix::Identity(n, n);
}

inline double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

inline double relative_error(const Matrix& approx, const Matrix& exact) {
  return (approx - exact).norm() / std::max(1.0, exact.norm());
}

// Central differences of a vector function; column j is ∂f/∂x_j.
inline Matrix fd_jacobian(const std::function<Vector(const Vector&)>& f, const Vector& x, double h = 1e-5) {
  const Vector f0 = f(x);
  Matrix jac(f0.size(), x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    Vector xp = x, xm = x;
    xp(j) += h;
    xm(j) -= h;
    jac.col(j) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return jac;
}

inline Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& x, double h = 1e-5) {
  Vector g(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    Vector xp = x, xm = x;
    xp(j) += h;
    xm(j) -= h;
    g(j) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

inline double min_eigenvalue(const Matrix& a) {
  return Eigen::SelfAdjointEigenSolver<Matrix>(symmetrize(a), Eigen::EigenvaluesOnly).eigenvalues()(0);
}

// Stable random linear-Gaussian system with n, m in [1, 4].
struct RandomLinearSystem {
  std::shared_ptr<LinearGaussianModel> model;
  LinearForm form;
  Matrix q;
  Matrix r;
};

inline RandomLinearSystem random_linear_system(Rng& rng, int max_dim = 4) {
  std::uniform_int_distribution<int> dim(1, max_dim);
  const int n = dim(rng);
  const int m = dim(rng);
  Matrix a = random_matrix(rng, n, n);
  const double radius = Eigen::EigenSolver<Matrix>(a).eigenvalues().cwiseAbs().maxCoeff();
  if (radius > 0.95) a *= 0.95 / radius;
  const Matrix h = random_matrix(rng, m, n);
  const Matrix bq = random_matrix(rng, n, n);
  const Matrix br = random_matrix(rng, m, m);
  const Matrix q = bq * bq.transpose() / n + 0.1 * Matrix::Identity(n, n);
  const Matrix r = br * br.transpose() / m + 0.1 * Matrix::Identity(m, m);
  LinearForm form{a, Matrix(n, 0), h};
  return {std::make_shared<LinearGaussianModel>(form, q, r), form, q, r};
}

}  // namespace nano::test
