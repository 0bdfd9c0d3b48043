#include "nano/moments.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace nano {

SigmaPointRule SigmaPointRule::cubature() { return SigmaPointRule{}; }

SigmaPointRule SigmaPointRule::unscented(double alpha, double beta, std::optional<double> kappa) {
  SigmaPointRule r;
  r.kind = Kind::kUnscented;
  r.alpha = alpha;
  r.beta = beta;
  r.kappa = kappa;
  return r;
}

SigmaPointRule SigmaPointRule::gauss_hermite(int order) {
  if (order < 2 || order > kMaxGaussHermiteOrder) {
    throw std::invalid_argument("gauss-hermite order must lie in [2, " +
                                std::to_string(kMaxGaussHermiteOrder) + "]");
  }
  SigmaPointRule r;
  r.kind = Kind::kGaussHermite;
  r.order = order;
  return r;
}

SigmaPointRule SigmaPointRule::parse(std::string_view text) {
  if (text == "cubature") return cubature();
  if (text == "unscented") return unscented();
  if (text.starts_with("gh:")) {
    const std::string_view digits = text.substr(3);
    int p = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), p);
    if (ec == std::errc() && ptr == digits.data() + digits.size() && p >= 2 &&
        p <= kMaxGaussHermiteOrder) {
      return gauss_hermite(p);
    }
  }
  throw ConfigError("unknown moment-matching rule '" + std::string(text) +
                    "' (expected cubature, unscented or gh:<2..10>)");
}

std::string SigmaPointRule::name() const {
  switch (kind) {
    case Kind::kCubature:
      return "cubature";
    case Kind::kUnscented:
      return "unscented";
    case Kind::kGaussHermite:
      return "gh:" + std::to_string(order);
  }
  return "?";
}

void SigmaPointRule::validate(Eigen::Index n) const {
  if (n < 1) throw std::invalid_argument("sigma-point rule: dimension must be >= 1");
  if (kind == Kind::kUnscented) {
    const double k = kappa.value_or(3.0 - static_cast<double>(n));
    const double lambda = alpha * alpha * (static_cast<double>(n) + k) - static_cast<double>(n);
    if (!(static_cast<double>(n) + lambda > 0.0)) {
      throw std::invalid_argument("unscented rule: n + lambda must be positive");
    }
  } else if (kind == Kind::kGaussHermite) {
    if (order < 2 || order > kMaxGaussHermiteOrder) {
      throw std::invalid_argument("gauss-hermite order out of range");
    }
    std::size_t points = 1;
    for (Eigen::Index i = 0; i < n && points <= kMaxGaussHermitePoints; ++i) points *= order;
    if (points > kMaxGaussHermitePoints) {
      throw std::invalid_argument("gauss-hermite tensor grid too large for dimension " +
                                  std::to_string(n));
    }
  }
}

std::size_t SigmaPointRule::num_points(Eigen::Index n) const {
  switch (kind) {
    case Kind::kCubature:
      return static_cast<std::size_t>(2 * n);
    case Kind::kUnscented:
      return static_cast<std::size_t>(2 * n + 1);
    case Kind::kGaussHermite: {
      std::size_t total = 1;
      for (Eigen::Index i = 0; i < n; ++i) total *= static_cast<std::size_t>(order);
      return total;
    }
  }
  return 0;
}

QuadratureNodes gauss_hermite_nodes(int order) {
  if (order < 1) throw std::invalid_argument("gauss_hermite_nodes: order must be >= 1");
  // Probabilists' Hermite recurrence: off-diagonal √k, zero diagonal.
  Matrix jacobi = Matrix::Zero(order, order);
  for (int k = 1; k < order; ++k) {
    jacobi(k, k - 1) = std::sqrt(static_cast<double>(k));
    jacobi(k - 1, k) = jacobi(k, k - 1);
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(jacobi);
  QuadratureNodes q;
  q.nodes.resize(order);
  q.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    q.nodes[i] = eig.eigenvalues()(i);
    const double v0 = eig.eigenvectors()(0, i);
    q.weights[i] = v0 * v0;
  }
  // Exact symmetry about zero: average mirrored pairs.
  for (int i = 0; i < order / 2; ++i) {
    const int j = order - 1 - i;
    const double node = 0.5 * (q.nodes[j] - q.nodes[i]);
    const double weight = 0.5 * (q.weights[i] + q.weights[j]);
    q.nodes[i] = -node;
    q.nodes[j] = node;
    q.weights[i] = weight;
    q.weights[j] = weight;
  }
  if (order % 2 == 1) q.nodes[order / 2] = 0.0;
  return q;
}

CollocationSet generate_points(const SigmaPointRule& rule, const Vector& mu, const Matrix& sigma) {
  const Eigen::Index n = mu.size();
  if (sigma.rows() != n || sigma.cols() != n) {
    throw std::invalid_argument("generate_points: covariance does not match mean dimension");
  }
  rule.validate(n);
  const LowerTriangular sqrt_sigma = cholesky_factor(sigma);
  const Matrix& l = sqrt_sigma.matrix();

  CollocationSet set;
  set.center = mu;
  set.spread = sigma;
  const std::size_t count = rule.num_points(n);
  set.points.reserve(count);
  set.mean_weights.reserve(count);
  set.cov_weights.reserve(count);

  switch (rule.kind) {
    case SigmaPointRule::Kind::kCubature: {
      const double scale = std::sqrt(static_cast<double>(n));
      const double w = 1.0 / (2.0 * static_cast<double>(n));
      for (Eigen::Index i = 0; i < n; ++i) {
        set.points.push_back(mu + scale * l.col(i));
        set.points.push_back(mu - scale * l.col(i));
      }
      set.mean_weights.assign(count, w);
      set.cov_weights.assign(count, w);
      break;
    }
    case SigmaPointRule::Kind::kUnscented: {
      const double nd = static_cast<double>(n);
      const double kappa = rule.kappa.value_or(3.0 - nd);
      const double lambda = rule.alpha * rule.alpha * (nd + kappa) - nd;
      const double scale = std::sqrt(nd + lambda);
      const double w = 1.0 / (2.0 * (nd + lambda));
      set.points.push_back(mu);
      set.mean_weights.push_back(lambda / (nd + lambda));
      set.cov_weights.push_back(lambda / (nd + lambda) + 1.0 - rule.alpha * rule.alpha + rule.beta);
      for (Eigen::Index i = 0; i < n; ++i) {
        set.points.push_back(mu + scale * l.col(i));
        set.points.push_back(mu - scale * l.col(i));
      }
      set.mean_weights.resize(count, w);
      set.cov_weights.resize(count, w);
      break;
    }
    case SigmaPointRule::Kind::kGaussHermite: {
      const QuadratureNodes q = gauss_hermite_nodes(rule.order);
      const int p = rule.order;
      // Multi-index over the tensor grid, first axis varying fastest.
      std::vector<int> index(static_cast<std::size_t>(n), 0);
      Vector unit(n);
      for (std::size_t c = 0; c < count; ++c) {
        double w = 1.0;
        for (Eigen::Index a = 0; a < n; ++a) {
          unit(a) = q.nodes[index[a]];
          w *= q.weights[index[a]];
        }
        set.points.push_back(mu + l * unit);
        set.mean_weights.push_back(w);
        set.cov_weights.push_back(w);
        for (Eigen::Index a = 0; a < n; ++a) {
          if (++index[a] < p) break;
          index[a] = 0;
        }
      }
      break;
    }
  }
  return set;
}

namespace detail {

Moments reduce_moments(const CollocationSet& set, const std::vector<Vector>& values) {
  Vector mean = Vector::Zero(values.front().size());
  for (std::size_t i = 0; i < set.size(); ++i) mean += set.mean_weights[i] * values[i];
  Matrix cov = Matrix::Zero(mean.size(), mean.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    const Vector d = values[i] - mean;
    cov += set.cov_weights[i] * d * d.transpose();
  }
  return {std::move(mean), symmetrize(cov)};
}

}  // namespace detail

}  // namespace nano
