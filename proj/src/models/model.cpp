#include <stdexcept>

#include "nano/errors.hpp"
#include "nano/models.hpp"

namespace nano {

StateSpaceModel::StateSpaceModel(Matrix q, Matrix r) : q_(std::move(q)), r_(std::move(r)) {
  if (q_.rows() != q_.cols() || r_.rows() != r_.cols()) {
    throw std::invalid_argument("StateSpaceModel: noise covariances must be square");
  }
}

std::vector<Matrix> StateSpaceModel::measurement_hessian(const Vector&) const {
  throw MissingHessian("model '" + name() + "' does not provide a measurement Hessian");
}

Vector StateSpaceModel::control_input(int) const { return Vector::Zero(input_dim()); }

}  // namespace nano
