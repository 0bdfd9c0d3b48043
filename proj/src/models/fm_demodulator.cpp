#include <cmath>
#include <stdexcept>

#include "nano/models.hpp"

namespace nano {

namespace {
const double kSqrt2 = std::sqrt(2.0);
}

FmDemodulator::FmDemodulator(FmParams params)
    : StateSpaceModel(Eigen::Vector2d(0.01, 1.0).asDiagonal().toDenseMatrix(),
                      Matrix::Identity(2, 2)),
      params_(params),
      a_(2, 2) {
  if (!(params_.beta > 0.0)) throw std::invalid_argument("fm_demodulator: beta must be positive");
  const double decay = std::exp(-params_.period / params_.beta);
  const double coupling = params_.mode == FmMatrixMode::kLiteral
                              ? -params_.beta * decay - 1.0
                              : params_.beta * (1.0 - decay);
  a_ << decay, 0.0, coupling, 0.1;
}

Vector FmDemodulator::transition(const Vector& x, const Vector&, int) const { return a_ * x; }

Matrix FmDemodulator::transition_jacobian(const Vector&, const Vector&, int) const { return a_; }

Vector FmDemodulator::measurement(const Vector& x) const {
  return Eigen::Vector2d(kSqrt2 * std::sin(x(1)), kSqrt2 * std::cos(x(1)));
}

Matrix FmDemodulator::measurement_jacobian(const Vector& x) const {
  Matrix g(2, 2);
  g << 0.0, kSqrt2 * std::cos(x(1)), 0.0, -kSqrt2 * std::sin(x(1));
  return g;
}

std::vector<Matrix> FmDemodulator::measurement_hessian(const Vector& x) const {
  std::vector<Matrix> h(2, Matrix::Zero(2, 2));
  h[0](1, 1) = -kSqrt2 * std::sin(x(1));
  h[1](1, 1) = -kSqrt2 * std::cos(x(1));
  return h;
}

std::shared_ptr<const FmDemodulator> fm_demodulator(double beta, FmMatrixMode mode) {
  FmParams p;
  p.beta = beta;
  p.mode = mode;
  return std::make_shared<const FmDemodulator>(p);
}

}  // namespace nano
