#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nano/errors.hpp"
#include "nano/models.hpp"

namespace nano {

namespace {

constexpr int kPitch = 0;
constexpr int kRoll = 1;
constexpr int kYaw = 2;
constexpr double kGimbalTol = 1e-6;

enum class Axis { kX, kY, kZ };

// d^order/da^order of the elementary rotation about `axis`. Derivatives of
// (cos, sin) cycle with period four.
Eigen::Matrix3d elementary(Axis axis, double a, int order) {
  const std::array<double, 4> cos_cycle{std::cos(a), -std::sin(a), -std::cos(a), std::sin(a)};
  const std::array<double, 4> sin_cycle{std::sin(a), std::cos(a), -std::sin(a), -std::cos(a)};
  const double c = cos_cycle[order % 4];
  const double s = sin_cycle[order % 4];
  const double one = order == 0 ? 1.0 : 0.0;
  Eigen::Matrix3d r;
  switch (axis) {
    case Axis::kX:
      r << one, 0, 0, 0, c, -s, 0, s, c;
      break;
    case Axis::kY:
      r << c, 0, s, 0, one, 0, -s, 0, c;
      break;
    case Axis::kZ:
      r << c, -s, 0, s, c, 0, 0, 0, one;
      break;
  }
  return r;
}

// Partial derivative of C(θ)ᵀ with derivative order `d[i]` in state angle i.
Eigen::Matrix3d rotation_transpose_derivative(const Vector& x, const std::array<int, 3>& d) {
  const Eigen::Matrix3d rx = elementary(Axis::kX, x(kRoll), d[kRoll]);
  const Eigen::Matrix3d ry = elementary(Axis::kY, x(kPitch), d[kPitch]);
  const Eigen::Matrix3d rz = elementary(Axis::kZ, x(kYaw), d[kYaw]);
  return rx.transpose() * ry.transpose() * rz.transpose();
}

void check_gimbal(double pitch) {
  if (std::abs(std::cos(pitch)) < kGimbalTol) {
    throw GimbalLock("attitude: pitch " + std::to_string(pitch) + " is at the Euler singularity");
  }
}

}  // namespace

AttitudeModel::AttitudeModel(AttitudeParams params)
    : StateSpaceModel(2.0 * params.laplace_scale * params.laplace_scale * Matrix::Identity(3, 3),
                      params.measurement_var * Matrix::Identity(6, 6)),
      params_(params) {
  if (!(params_.dt > 0.0)) throw std::invalid_argument("attitude_model: dt must be positive");
}

Eigen::Matrix3d AttitudeModel::rotation(const Vector& angles) {
  return rotation_transpose_derivative(angles, {0, 0, 0}).transpose();
}

Eigen::Matrix3d AttitudeModel::rate_matrix(const Vector& angles) {
  const double p = angles(kPitch);
  const double r = angles(kRoll);
  check_gimbal(p);
  const double cp = std::cos(p);
  const double tp = std::tan(p);
  const double cr = std::cos(r);
  const double sr = std::sin(r);
  Eigen::Matrix3d omega;
  omega << 0.0, cr, -sr,
      1.0, sr * tp, cr * tp,
      0.0, sr / cp, cr / cp;
  return omega;
}

Vector AttitudeModel::transition(const Vector& x, const Vector& u, int) const {
  return x + rate_matrix(x) * u * params_.dt;
}

Matrix AttitudeModel::transition_jacobian(const Vector& x, const Vector& u, int) const {
  const double p = x(kPitch);
  const double r = x(kRoll);
  check_gimbal(p);
  const double cp = std::cos(p);
  const double tp = std::tan(p);
  const double sec2 = 1.0 / (cp * cp);
  const double cr = std::cos(r);
  const double sr = std::sin(r);

  Eigen::Matrix3d d_pitch;
  d_pitch << 0.0, 0.0, 0.0,
      0.0, sr * sec2, cr * sec2,
      0.0, sr * tp / cp, cr * tp / cp;
  Eigen::Matrix3d d_roll;
  d_roll << 0.0, -sr, -cr,
      0.0, cr * tp, -sr * tp,
      0.0, cr / cp, -sr / cp;

  Matrix j = Matrix::Identity(3, 3);
  j.col(kPitch) += d_pitch * u * params_.dt;
  j.col(kRoll) += d_roll * u * params_.dt;
  return j;
}

Vector AttitudeModel::measurement(const Vector& x) const {
  const Eigen::Matrix3d ct = rotation_transpose_derivative(x, {0, 0, 0});
  Vector y(6);
  y << ct * params_.gravity, ct * params_.magnetic;
  return y;
}

Matrix AttitudeModel::measurement_jacobian(const Vector& x) const {
  Matrix g(6, 3);
  for (int i = 0; i < 3; ++i) {
    std::array<int, 3> d{0, 0, 0};
    d[i] = 1;
    const Eigen::Matrix3d dct = rotation_transpose_derivative(x, d);
    g.col(i) << dct * params_.gravity, dct * params_.magnetic;
  }
  return g;
}

std::vector<Matrix> AttitudeModel::measurement_hessian(const Vector& x) const {
  std::vector<Matrix> h(6, Matrix::Zero(3, 3));
  for (int i = 0; i < 3; ++i) {
    for (int k = i; k < 3; ++k) {
      std::array<int, 3> d{0, 0, 0};
      ++d[i];
      ++d[k];
      const Eigen::Matrix3d dct = rotation_transpose_derivative(x, d);
      Vector col(6);
      col << dct * params_.gravity, dct * params_.magnetic;
      for (int j = 0; j < 6; ++j) {
        h[j](i, k) = col(j);
        h[j](k, i) = col(j);
      }
    }
  }
  return h;
}

Vector AttitudeModel::control_input(int t) const {
  const double w = std::numbers::pi / 18.0 *
                   std::sin(2.0 * params_.dt * std::numbers::pi * static_cast<double>(t));
  return Vector::Constant(3, w);
}

std::shared_ptr<const AttitudeModel> attitude_model(double dt) {
  AttitudeParams p;
  p.dt = dt;
  return attitude_model(p);
}

std::shared_ptr<const AttitudeModel> attitude_model(AttitudeParams params) {
  return std::make_shared<const AttitudeModel>(params);
}

}  // namespace nano
