#include <stdexcept>

#include "nano/errors.hpp"
#include "nano/filters.hpp"

namespace nano {

LogLikelihood::LogLikelihood(const StateSpaceModel& model, Vector y)
    : model_(model), y_(std::move(y)), r_inv_(spd_inverse(model.measurement_cov())) {
  if (y_.size() != model.measurement_dim()) {
    throw std::invalid_argument("LogLikelihood: measurement has the wrong dimension");
  }
}

double LogLikelihood::value(const Vector& x) const {
  const Vector r = y_ - model_.measurement(x);
  return 0.5 * r.dot(r_inv_ * r);
}

Vector LogLikelihood::gradient(const Vector& x) const {
  const Matrix g = model_.measurement_jacobian(x);
  return g.transpose() * (r_inv_ * (model_.measurement(x) - y_));
}

Matrix LogLikelihood::hessian_gauss_newton(const Vector& x) const {
  const Matrix g = model_.measurement_jacobian(x);
  return symmetrize(g.transpose() * r_inv_ * g);
}

Matrix LogLikelihood::hessian_exact(const Vector& x) const {
  Vector grad;
  Matrix hess;
  derivatives(x, HessianMode::kExact, grad, hess);
  return hess;
}

void LogLikelihood::derivatives(const Vector& x, HessianMode mode, Vector& grad, Matrix& hess) const {
  const Matrix g = model_.measurement_jacobian(x);
  const Vector weighted = r_inv_ * (y_ - model_.measurement(x));
  grad = -(g.transpose() * weighted);
  hess = g.transpose() * r_inv_ * g;
  if (mode == HessianMode::kExact) {
    if (!model_.has_measurement_hessian()) {
      throw MissingHessian("exact Hessian requested but model '" + model_.name() +
                           "' has no measurement Hessian");
    }
    const std::vector<Matrix> blocks = model_.measurement_hessian(x);
    for (std::size_t j = 0; j < blocks.size(); ++j) {
      hess -= weighted(static_cast<Eigen::Index>(j)) * blocks[j];
    }
  }
  hess = symmetrize(hess);
}

double loglik(const Vector& x, const Vector& y, const StateSpaceModel& model) {
  return LogLikelihood(model, y).value(x);
}

Vector grad_loglik(const Vector& x, const Vector& y, const StateSpaceModel& model) {
  return LogLikelihood(model, y).gradient(x);
}

Matrix hess_loglik_exact(const Vector& x, const Vector& y, const StateSpaceModel& model) {
  return LogLikelihood(model, y).hessian_exact(x);
}

Matrix hess_loglik_gn(const Vector& x, const StateSpaceModel& model) {
  const Matrix g = model.measurement_jacobian(x);
  return symmetrize(g.transpose() * spd_inverse(model.measurement_cov()) * g);
}

}  // namespace nano
