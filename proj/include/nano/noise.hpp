#pragma once

#include <random>
#include <variant>

#include "nano/linalg.hpp"

namespace nano {

// Every stochastic draw in the library goes through this engine.
using Rng = std::mt19937_64;
inline constexpr const char* kRngName = "mt19937_64";

struct GaussianNoise {
  Matrix cov;
  Matrix factor;  // F with F Fᵀ = cov; tolerates semi-definite cov
};

struct LaplaceNoise {
  Vector scale;  // per-axis scale b, variance 2b²
};

// (1 − k)·N(0, nominal) + k·N(0, outlier)
struct MixtureOutlierNoise {
  double prob = 0.0;
  GaussianNoise nominal;
  GaussianNoise outlier;
};

// (1 − k)·N(0, nominal) + k·Beta(a, b)·1, one scalar Beta draw replicated
// over every component.
struct BetaOutlierNoise {
  double prob = 0.0;
  double a = 1.2;
  double b = 1.5;
  GaussianNoise nominal;
};

class NoiseSpec {
 public:
  using Variant = std::variant<GaussianNoise, LaplaceNoise, MixtureOutlierNoise, BetaOutlierNoise>;

  static NoiseSpec gaussian(const Matrix& cov);
  static NoiseSpec laplace(const Vector& scale);
  static NoiseSpec mixture_outlier(double prob, const Matrix& nominal_cov, const Matrix& outlier_cov);
  static NoiseSpec beta_outlier(double prob, double a, double b, const Matrix& nominal_cov);

  Eigen::Index dim() const;
  const Variant& kind() const { return kind_; }

 private:
  explicit NoiseSpec(Variant v) : kind_(std::move(v)) {}
  Variant kind_;
};

// Draw order is fixed per kind: mixtures draw the Bernoulli selector first,
// then the selected component; Gaussians draw dim() standard normals.
Vector sample_noise(const NoiseSpec& spec, Rng& rng);

Vector sample_gaussian(const Vector& mean, const Matrix& factor, Rng& rng);

}  // namespace nano
