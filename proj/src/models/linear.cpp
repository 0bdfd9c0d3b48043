#include <stdexcept>

#include "nano/models.hpp"

namespace nano {

LinearGaussianModel::LinearGaussianModel(LinearForm form, Matrix q, Matrix r)
    : StateSpaceModel(std::move(q), std::move(r)), form_(std::move(form)) {
  const Eigen::Index n = form_.a.rows();
  if (form_.a.cols() != n || form_.h.cols() != n || form_.b.rows() != n ||
      process_cov().rows() != n || measurement_cov().rows() != form_.h.rows()) {
    throw std::invalid_argument("LinearGaussianModel: inconsistent dimensions");
  }
}

Vector LinearGaussianModel::transition(const Vector& x, const Vector& u, int) const {
  Vector next = form_.a * x;
  if (form_.b.cols() > 0) next += form_.b * u;
  return next;
}

Matrix LinearGaussianModel::transition_jacobian(const Vector&, const Vector&, int) const {
  return form_.a;
}

Vector LinearGaussianModel::measurement(const Vector& x) const { return form_.h * x; }

Matrix LinearGaussianModel::measurement_jacobian(const Vector&) const { return form_.h; }

std::vector<Matrix> LinearGaussianModel::measurement_hessian(const Vector&) const {
  return std::vector<Matrix>(static_cast<std::size_t>(form_.h.rows()),
                             Matrix::Zero(state_dim(), state_dim()));
}

}  // namespace nano
