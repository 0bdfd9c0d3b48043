#include <cmath>

#include "nano/models.hpp"

namespace nano {

DuffingModel::DuffingModel(DuffingParams params)
    : StateSpaceModel(params.process_var * Matrix::Identity(2, 2),
                      Matrix::Constant(1, 1, params.measurement_var)),
      params_(params) {}

Vector DuffingModel::transition(const Vector& x, const Vector&, int t) const {
  const auto& p = params_;
  const double tk = static_cast<double>(t) * p.dt;
  const double accel = -2.0 * p.zeta * p.omega_n * x(1) - p.omega_n * p.omega_n * x(0) -
                       p.beta * x(0) * x(0) * x(0) + p.force * std::cos(p.omega_f * tk);
  return Eigen::Vector2d(x(0) + x(1) * p.dt, x(1) + accel * p.dt);
}

Matrix DuffingModel::transition_jacobian(const Vector& x, const Vector&, int) const {
  const auto& p = params_;
  Matrix j(2, 2);
  j << 1.0, p.dt,
      (-p.omega_n * p.omega_n - 3.0 * p.beta * x(0) * x(0)) * p.dt,
      1.0 - 2.0 * p.zeta * p.omega_n * p.dt;
  return j;
}

Vector DuffingModel::measurement(const Vector& x) const {
  return Vector::Constant(1, x(0) * x(0) * x(0));
}

Matrix DuffingModel::measurement_jacobian(const Vector& x) const {
  Matrix g(1, 2);
  g << 3.0 * x(0) * x(0), 0.0;
  return g;
}

std::vector<Matrix> DuffingModel::measurement_hessian(const Vector& x) const {
  Matrix h = Matrix::Zero(2, 2);
  h(0, 0) = 6.0 * x(0);
  return {h};
}

std::shared_ptr<const DuffingModel> duffing_model(DuffingParams params) {
  return std::make_shared<const DuffingModel>(params);
}

}  // namespace nano
