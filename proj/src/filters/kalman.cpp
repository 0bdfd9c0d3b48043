#include <stdexcept>

#include "nano/errors.hpp"
#include "nano/filters.hpp"

namespace nano {

GaussianBelief linear_update(const GaussianBelief& prior, const Vector& y, const Matrix& h,
                             const Vector& offset, const Matrix& r) {
  const Eigen::Index n = prior.mean.size();
  const Matrix ph = prior.cov * h.transpose();
  const Matrix s = symmetrize(h * ph + r);
  // K = P Hᵀ S⁻¹, via S Kᵀ = H P.
  const Matrix k = spd_solve(s, ph.transpose()).transpose();
  const Vector innovation = y - h * prior.mean - offset;
  const Matrix i_kh = Matrix::Identity(n, n) - k * h;
  GaussianBelief post;
  post.mean = prior.mean + k * innovation;
  post.cov = symmetrize(i_kh * prior.cov * i_kh.transpose() + k * r * k.transpose());
  return post;
}

GaussianBelief kf_step(const GaussianBelief& belief, const Vector& u, const Vector& y,
                       const LinearForm& form, const Matrix& q, const Matrix& r) {
  GaussianBelief prior;
  prior.mean = form.a * belief.mean;
  if (form.b.cols() > 0) prior.mean += form.b * u;
  prior.cov = symmetrize(form.a * belief.cov * form.a.transpose() + q);
  return linear_update(prior, y, form.h, Vector::Zero(form.h.rows()), r);
}

GaussianBelief ekf_predict(const GaussianBelief& posterior, const Vector& u, int t,
                           const StateSpaceModel& model) {
  const Matrix f = model.transition_jacobian(posterior.mean, u, t);
  GaussianBelief prior;
  prior.mean = model.transition(posterior.mean, u, t);
  prior.cov = symmetrize(f * posterior.cov * f.transpose() + model.process_cov());
  return prior;
}

GaussianBelief ekf_update(const GaussianBelief& prior, const Vector& y, const StateSpaceModel& model) {
  const Matrix g = model.measurement_jacobian(prior.mean);
  const Vector offset = model.measurement(prior.mean) - g * prior.mean;
  return linear_update(prior, y, g, offset, model.measurement_cov());
}

GaussianBelief iekf_update(const GaussianBelief& prior, const Vector& y, const StateSpaceModel& model,
                           double gamma, int max_iters, int* iterations) {
  if (max_iters < 1) throw std::invalid_argument("iekf_update: max_iters must be >= 1");
  Vector point = prior.mean;
  GaussianBelief post;
  int i = 0;
  while (i < max_iters) {
    // Relinearize at the current iterate; the update is always of the prior.
    const Matrix g = model.measurement_jacobian(point);
    const Vector offset = model.measurement(point) - g * point;
    post = linear_update(prior, y, g, offset, model.measurement_cov());
    ++i;
    if (!post.mean.allFinite()) throw NonFiniteIterate("iekf_update: non-finite iterate");
    const double delta = (post.mean - point).norm();
    point = post.mean;
    if (delta < gamma) break;
  }
  if (iterations != nullptr) *iterations = i;
  return post;
}

}  // namespace nano
