#include <cmath>
#include <string>

#include <Eigen/QR>

#include "nano/errors.hpp"
#include "nano/filters.hpp"

namespace nano {

namespace {

constexpr double kSingularFactorTol = 1e-14;

// Lower-triangular L with L Lᵀ = A Aᵀ, from the QR decomposition of Aᵀ.
// Does not require A Aᵀ to be positive definite.
LowerTriangular triangular_gram_factor(const Matrix& a) {
  const Eigen::Index n = a.rows();
  Eigen::HouseholderQR<Matrix> qr(a.transpose());
  Matrix l = qr.matrixQR().triangularView<Eigen::Upper>().toDenseMatrix().transpose();
  for (Eigen::Index j = 0; j < n; ++j) {
    if (l(j, j) < 0.0) l.col(j) = -l.col(j);
  }
  return LowerTriangular(std::move(l));
}

}  // namespace

void NanoConfig::validate() const {
  if (!(gamma > 0.0)) throw ConfigError("nano.gamma must be positive");
  if (max_iters < 1) throw ConfigError("nano.max_iters must be >= 1");
  if (!(epsilon > 0.0)) throw ConfigError("nano.epsilon must be positive");
  if (exp_order < 1) throw ConfigError("nano exponential order must be >= 1");
  if (!(step_size > 0.0 && step_size <= 1.0)) throw ConfigError("nano.step_size must lie in (0, 1]");
}

std::string to_string(HessianMode m) {
  return m == HessianMode::kExact ? "exact" : "gauss-newton";
}

std::string to_string(CovUpdate m) {
  return m == CovUpdate::kDirect ? "direct" : "cholesky-factor";
}

std::string to_string(ExponentMode m) {
  return m == ExponentMode::kResidual ? "residual" : "literal";
}

HessianMode parse_hessian_mode(std::string_view text) {
  if (text == "exact") return HessianMode::kExact;
  if (text == "gauss-newton" || text == "gn") return HessianMode::kGaussNewton;
  throw ConfigError("unknown hessian mode '" + std::string(text) + "'");
}

CovUpdate parse_cov_update(std::string_view text) {
  if (text == "direct") return CovUpdate::kDirect;
  if (text == "cholesky-factor" || text == "cholesky") return CovUpdate::kCholeskyFactor;
  throw ConfigError("unknown covariance update '" + std::string(text) + "'");
}

ExponentMode parse_exponent_mode(std::string_view text) {
  if (text == "residual") return ExponentMode::kResidual;
  if (text == "literal" || text == "paper-literal") return ExponentMode::kLiteral;  // both spellings accepted
  throw ConfigError("unknown exponent mode '" + std::string(text) + "'");
}

GaussianBelief nano_predict(const GaussianBelief& posterior, const Vector& u, int t,
                            const StateSpaceModel& model, const SigmaPointRule& rule) {
  GaussianBelief prior = sigma_point_predict(posterior, u, t, model, rule);
  cholesky_factor(prior.cov);
  return prior;
}

NanoIterState chol_cov_step(const NanoIterState& state, const Matrix& v_xx, const Matrix& prior_inv,
                            const NanoConfig& cfg) {
  if (!state.factor) throw std::invalid_argument("chol_cov_step: state has no factor");
  const LowerTriangular& lambda = *state.factor;
  if (lambda.matrix().diagonal().cwiseAbs().minCoeff() < kSingularFactorTol) {
    throw SingularFactor("chol_cov_step: factor diagonal below " + std::to_string(kSingularFactorTol));
  }

  Matrix target = symmetrize(v_xx + prior_inv);
  if (cfg.exponent_mode == ExponentMode::kResidual) target -= lambda.gram();
  // ½ Λ⁻¹ M Λ⁻ᵀ
  const Matrix half_whitened =
      symmetrize(0.5 * lambda.solve(lambda.solve(target).transpose()));
  const Matrix stepped = lambda.matrix() * matrix_exp_truncated(half_whitened, cfg.exp_order);

  NanoIterState next;
  next.k = state.k + 1;
  next.mean = state.mean;
  // Same Gram matrix, back in lower-triangular form.
  next.factor = triangular_gram_factor(stepped);
  const Eigen::Index n = lambda.dim();
  const Matrix info = symmetrize(next.factor->gram() + cfg.epsilon * Matrix::Identity(n, n));
  next.cov = spd_inverse(info);
  return next;
}

NanoResult nano_update(const GaussianBelief& prior, const Vector& y, const StateSpaceModel& model,
                       const SigmaPointRule& rule, const NanoConfig& cfg) {
  cfg.validate();
  const LogLikelihood ll(model, y);
  const Matrix prior_inv = spd_inverse(prior.cov);
  const Eigen::Index n = prior.mean.size();

  NanoIterState state;
  if (cfg.init == InitMode::kEkf) {
    GaussianBelief start = ekf_update(prior, y, model);
    state.mean = std::move(start.mean);
    state.cov = std::move(start.cov);
  } else {
    state.mean = prior.mean;
    state.cov = prior.cov;
  }
  if (cfg.cov_update == CovUpdate::kCholeskyFactor) {
    state.factor = cholesky_factor(cfg.init == InitMode::kPrior ? prior_inv : spd_inverse(state.cov));
  }

  UpdateDiagnostics diag;
  for (int k = 0; k < cfg.max_iters; ++k) {
    Vector v_x = Vector::Zero(n);
    Matrix v_xx = Matrix::Zero(n, n);
    try {
      // One collocation set serves both expectations.
      const CollocationSet set = generate_points(rule, state.mean, state.cov);
      Vector grad;
      Matrix hess;
      for (std::size_t i = 0; i < set.size(); ++i) {
        ll.derivatives(set.points[i], cfg.hessian, grad, hess);
        if (!grad.allFinite() || !hess.allFinite()) {
          throw NonFiniteIterate("nano_update: non-finite log-likelihood derivative");
        }
        v_x += set.mean_weights[i] * grad;
        v_xx += set.mean_weights[i] * hess;
      }
    } catch (const NotPositiveDefinite& e) {
      throw PDFailure(std::string("nano_update: covariance iterate lost positive definiteness: ") + e.what());
    }

    NanoIterState next;
    if (cfg.cov_update == CovUpdate::kDirect) {
      next.k = k + 1;
      try {
        next.cov = spd_inverse(symmetrize(prior_inv + v_xx));
      } catch (const NotPositiveDefinite& e) {
        throw PDFailure(std::string("nano_update: information matrix not positive definite: ") + e.what());
      }
    } else {
      next = chol_cov_step(state, v_xx, prior_inv, cfg);
    }
    next.mean = state.mean - cfg.step_size * next.cov * (v_x + prior_inv * (state.mean - prior.mean));
    if (!next.mean.allFinite() || !next.cov.allFinite()) {
      throw NonFiniteIterate("nano_update: non-finite iterate at k = " + std::to_string(k));
    }

    const double delta = frobenius_norm(next.cov - state.cov);
    state = std::move(next);
    diag.iterations = k + 1;
    diag.final_delta = delta;
    if (delta < cfg.gamma) break;
  }
  return {GaussianBelief{std::move(state.mean), std::move(state.cov)}, diag};
}

}  // namespace nano
