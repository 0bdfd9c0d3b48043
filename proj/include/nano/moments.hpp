#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nano/errors.hpp"
#include "nano/linalg.hpp"

namespace nano {

// Quadrature rule used to approximate Gaussian expectations.
struct SigmaPointRule {
  enum class Kind { kCubature, kUnscented, kGaussHermite };

  Kind kind = Kind::kCubature;
  // Unscented parameters. An absent kappa means the classical 3 - n.
  double alpha = 1.0;
  double beta = 2.0;
  std::optional<double> kappa;
  // Gauss–Hermite points per axis.
  int order = 3;

  static SigmaPointRule cubature();
  static SigmaPointRule unscented(double alpha = 1.0, double beta = 2.0,
                                  std::optional<double> kappa = std::nullopt);
  static SigmaPointRule gauss_hermite(int order);

  // Accepts "cubature", "unscented" and "gh:<p>". Throws ConfigError.
  static SigmaPointRule parse(std::string_view text);
  std::string name() const;

  // Throws std::invalid_argument if the rule cannot be applied in dimension n.
  void validate(Eigen::Index n) const;
  std::size_t num_points(Eigen::Index n) const;
};

inline constexpr int kMaxGaussHermiteOrder = 10;
inline constexpr std::size_t kMaxGaussHermitePoints = 100000;

struct QuadratureNodes {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Nodes and weights of the p-point Gauss–Hermite rule for the standard normal
// density, from the eigen-decomposition of the Jacobi matrix. Nodes ascend.
QuadratureNodes gauss_hermite_nodes(int order);

// Realized collocation points χ_i = μ + L·ξ_i with L the lower Cholesky
// factor of Σ. Mean and covariance weights are kept apart because the
// unscented rule differs in the centre weight only.
struct CollocationSet {
  std::vector<Vector> points;
  std::vector<double> mean_weights;
  std::vector<double> cov_weights;
  Vector center;
  Matrix spread;

  std::size_t size() const { return points.size(); }
};

CollocationSet generate_points(const SigmaPointRule& rule, const Vector& mu, const Matrix& sigma);

struct Moments {
  Vector mean;
  Matrix cov;
};

struct MomentsWithCross {
  Vector mean;
  Matrix cov;
  // Σ w_i^c (χ_i − μ)(h(χ_i) − μ′)ᵀ
  Matrix cross;
};

namespace detail {

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& value, std::size_t point) {
  if (!value.allFinite()) {
    throw NonFiniteFunctionValue("non-finite function value at collocation point " +
                                 std::to_string(point));
  }
}

template <typename F>
std::vector<Vector> evaluate(const CollocationSet& set, F&& h) {
  std::vector<Vector> values;
  values.reserve(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    values.push_back(h(set.points[i]));
    require_finite(values.back(), i);
  }
  return values;
}

Moments reduce_moments(const CollocationSet& set, const std::vector<Vector>& values);

}  // namespace detail

template <typename F>
Moments propagate_moments(const CollocationSet& set, F&& h) {
  return detail::reduce_moments(set, detail::evaluate(set, h));
}

template <typename F>
MomentsWithCross propagate_with_cross(const CollocationSet& set, F&& h) {
  const std::vector<Vector> values = detail::evaluate(set, h);
  Moments m = detail::reduce_moments(set, values);
  Matrix cross = Matrix::Zero(set.center.size(), m.mean.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    cross += set.cov_weights[i] * (set.points[i] - set.center) * (values[i] - m.mean).transpose();
  }
  return {std::move(m.mean), std::move(m.cov), std::move(cross)};
}

// Σ w_i h(χ_i) for matrix-valued h, summed in point order.
template <typename F>
Matrix expected_matrix(const CollocationSet& set, F&& h) {
  Matrix acc;
  for (std::size_t i = 0; i < set.size(); ++i) {
    Matrix value = h(set.points[i]);
    detail::require_finite(value, i);
    if (i == 0) {
      acc = set.mean_weights[i] * value;
    } else {
      acc += set.mean_weights[i] * value;
    }
  }
  return acc;
}

}  // namespace nano
