#include <stdexcept>

#include "nano/errors.hpp"
#include "nano/filters.hpp"

namespace nano {

GaussianBelief sigma_point_predict(const GaussianBelief& posterior, const Vector& u, int t,
                                   const StateSpaceModel& model, const SigmaPointRule& rule) {
  const CollocationSet set = generate_points(rule, posterior.mean, posterior.cov);
  Moments m = propagate_moments(set, [&](const Vector& x) { return model.transition(x, u, t); });
  return {std::move(m.mean), symmetrize(m.cov + model.process_cov())};
}

GaussianBelief ukf_update(const GaussianBelief& prior, const Vector& y, const StateSpaceModel& model,
                          const SigmaPointRule& rule) {
  const CollocationSet set = generate_points(rule, prior.mean, prior.cov);
  const MomentsWithCross m =
      propagate_with_cross(set, [&](const Vector& x) { return model.measurement(x); });
  const Matrix s = symmetrize(m.cov + model.measurement_cov());
  const Matrix k = spd_solve(s, m.cross.transpose()).transpose();
  GaussianBelief post;
  post.mean = prior.mean + k * (y - m.mean);
  post.cov = symmetrize(prior.cov - k * s * k.transpose());
  return post;
}

GaussianBelief plf_update(const GaussianBelief& prior, const Vector& y, const StateSpaceModel& model,
                          const SigmaPointRule& rule, double gamma, int max_iters, int* iterations) {
  if (max_iters < 1) throw std::invalid_argument("plf_update: max_iters must be >= 1");
  GaussianBelief current = prior;
  int i = 0;
  while (i < max_iters) {
    const CollocationSet set = generate_points(rule, current.mean, current.cov);
    const MomentsWithCross m =
        propagate_with_cross(set, [&](const Vector& x) { return model.measurement(x); });
    // Statistical linear regression g(x) ≈ A x + b with residual covariance Ω.
    const Matrix a = spd_solve(current.cov, m.cross).transpose();
    const Vector b = m.mean - a * current.mean;
    const Matrix omega = symmetrize(m.cov - a * current.cov * a.transpose());
    GaussianBelief next = linear_update(prior, y, a, b, model.measurement_cov() + omega);
    ++i;
    if (!next.mean.allFinite()) throw NonFiniteIterate("plf_update: non-finite iterate");
    const double delta = (next.mean - current.mean).norm();
    current = std::move(next);
    if (delta < gamma) break;
  }
  if (iterations != nullptr) *iterations = i;
  return current;
}

}  // namespace nano
