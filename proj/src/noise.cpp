#include "nano/noise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>

namespace nano {

namespace {

Matrix psd_factor(const Matrix& cov) {
  if (cov.rows() != cov.cols()) throw std::invalid_argument("noise covariance must be square");
  if (cov.isZero(0.0)) return Matrix::Zero(cov.rows(), cov.cols());
  const Eigen::LDLT<Matrix> ldlt(symmetrize(cov));
  const Vector d = ldlt.vectorD();
  const double tol = 1e-12 * d.cwiseAbs().maxCoeff();
  if (ldlt.info() != Eigen::Success || d.minCoeff() < -tol) {
    throw std::invalid_argument("noise covariance must be positive semi-definite");
  }
  const Matrix l = ldlt.matrixL();
  const Matrix scaled = l * d.cwiseMax(0.0).cwiseSqrt().asDiagonal();
  return ldlt.transpositionsP().transpose() * scaled;
}

GaussianNoise make_gaussian(const Matrix& cov) { return GaussianNoise{cov, psd_factor(cov)}; }

void check_prob(double k) {
  if (!(k >= 0.0 && k <= 1.0)) throw std::invalid_argument("outlier probability must lie in [0, 1]");
}

bool bernoulli(double prob, Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < prob;
}

double sample_beta(double a, double b, Rng& rng) {
  const double x = std::gamma_distribution<double>(a, 1.0)(rng);
  const double y = std::gamma_distribution<double>(b, 1.0)(rng);
  return x / (x + y);
}

}  // namespace

NoiseSpec NoiseSpec::gaussian(const Matrix& cov) { return NoiseSpec(make_gaussian(cov)); }

NoiseSpec NoiseSpec::laplace(const Vector& scale) {
  if (scale.size() == 0 || !(scale.minCoeff() > 0.0)) {
    throw std::invalid_argument("laplace scales must be positive");
  }
  return NoiseSpec(LaplaceNoise{scale});
}

NoiseSpec NoiseSpec::mixture_outlier(double prob, const Matrix& nominal_cov,
                                     const Matrix& outlier_cov) {
  check_prob(prob);
  if (nominal_cov.rows() != outlier_cov.rows()) {
    throw std::invalid_argument("mixture components must share a dimension");
  }
  return NoiseSpec(MixtureOutlierNoise{prob, make_gaussian(nominal_cov), make_gaussian(outlier_cov)});
}

NoiseSpec NoiseSpec::beta_outlier(double prob, double a, double b, const Matrix& nominal_cov) {
  check_prob(prob);
  if (!(a > 0.0 && b > 0.0)) throw std::invalid_argument("beta shape parameters must be positive");
  return NoiseSpec(BetaOutlierNoise{prob, a, b, make_gaussian(nominal_cov)});
}

Eigen::Index NoiseSpec::dim() const {
  struct {
    Eigen::Index operator()(const GaussianNoise& g) const { return g.cov.rows(); }
    Eigen::Index operator()(const LaplaceNoise& l) const { return l.scale.size(); }
    Eigen::Index operator()(const MixtureOutlierNoise& m) const { return m.nominal.cov.rows(); }
    Eigen::Index operator()(const BetaOutlierNoise& b) const { return b.nominal.cov.rows(); }
  } visitor;
  return std::visit(visitor, kind_);
}

Vector sample_gaussian(const Vector& mean, const Matrix& factor, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector z(factor.cols());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = normal(rng);
  return mean + factor * z;
}

Vector sample_noise(const NoiseSpec& spec, Rng& rng) {
  struct {
    Rng& rng;
    Vector draw(const GaussianNoise& g) const {
      return sample_gaussian(Vector::Zero(g.cov.rows()), g.factor, rng);
    }
    Vector operator()(const GaussianNoise& g) const { return draw(g); }
    Vector operator()(const LaplaceNoise& l) const {
      std::uniform_real_distribution<double> uniform(-0.5, 0.5);
      Vector v(l.scale.size());
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double u = uniform(rng);
        const double tail = std::min(2.0 * std::abs(u), 1.0 - 1e-16);
        v(i) = -l.scale(i) * std::copysign(1.0, u) * std::log1p(-tail);
      }
      return v;
    }
    Vector operator()(const MixtureOutlierNoise& m) const {
      return bernoulli(m.prob, rng) ? draw(m.outlier) : draw(m.nominal);
    }
    Vector operator()(const BetaOutlierNoise& b) const {
      if (bernoulli(b.prob, rng)) {
        return Vector::Constant(b.nominal.cov.rows(), sample_beta(b.a, b.b, rng));
      }
      return draw(b.nominal);
    }
  } visitor{rng};
  return std::visit(visitor, spec.kind());
}

}  // namespace nano
