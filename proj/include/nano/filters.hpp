#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nano/belief.hpp"
#include "nano/linalg.hpp"
#include "nano/models.hpp"
#include "nano/moments.hpp"

namespace nano {

// ---------------------------------------------------------------------------
// Configuration

enum class HessianMode { kExact, kGaussNewton };
enum class CovUpdate { kDirect, kCholeskyFactor };
enum class ExponentMode {
  // ½Λ⁻¹(V_xx + P_prior⁻¹)Λ⁻ᵀ, as printed for the factor update.
  kLiteral,
  // ½Λ⁻¹(V_xx + P_prior⁻¹ − ΛΛᵀ)Λ⁻ᵀ; fixed point ΛΛᵀ = V_xx + P_prior⁻¹.
  kResidual,
};
enum class InitMode { kPrior, kEkf };

struct NanoConfig {
  double gamma = 1e-6;  // Frobenius threshold on the covariance-iterate delta
  int max_iters = 10;
  HessianMode hessian = HessianMode::kGaussNewton;
  CovUpdate cov_update = CovUpdate::kDirect;
  double epsilon = 1e-9;
  ExponentMode exponent_mode = ExponentMode::kResidual;
  int exp_order = 1;
  InitMode init = InitMode::kPrior;
  double step_size = 1.0;

  // Throws ConfigError on out-of-range fields.
  void validate() const;
};

std::string to_string(HessianMode m);
std::string to_string(CovUpdate m);
std::string to_string(ExponentMode m);
HessianMode parse_hessian_mode(std::string_view text);
CovUpdate parse_cov_update(std::string_view text);
ExponentMode parse_exponent_mode(std::string_view text);

struct UpdateDiagnostics {
  int iterations = 0;
  double final_delta = 0.0;
  bool pd_failure = false;
  double update_ms = 0.0;
};

// ---------------------------------------------------------------------------
// Kalman-family baselines

// Linear predict followed by a Joseph-form measurement update.
GaussianBelief kf_step(const GaussianBelief& belief, const Vector& u, const Vector& y,
                       const LinearForm& form, const Matrix& q, const Matrix& r);

// Measurement update of a linearized model y ≈ H x + offset with noise r.
GaussianBelief linear_update(const GaussianBelief& prior, const Vector& y, const Matrix& h,
                             const Vector& offset, const Matrix& r);

GaussianBelief ekf_predict(const GaussianBelief& posterior, const Vector& u, int t,
                           const StateSpaceModel& model);
GaussianBelief ekf_update(const GaussianBelief& prior, const Vector& y, const StateSpaceModel& model);

// Gauss–Newton iterated EKF. Stops when the mean moves less than `gamma`
// (Euclidean) or after `max_iters` relinearizations; one iteration is the EKF.
GaussianBelief iekf_update(const GaussianBelief& prior, const Vector& y, const StateSpaceModel& model,
                           double gamma, int max_iters, int* iterations = nullptr);

// Sigma-point predict: moment matching through f plus Q. Shared by the UKF,
// the PLF and NANO.
GaussianBelief sigma_point_predict(const GaussianBelief& posterior, const Vector& u, int t,
                                   const StateSpaceModel& model, const SigmaPointRule& rule);
GaussianBelief ukf_update(const GaussianBelief& prior, const Vector& y, const StateSpaceModel& model,
                          const SigmaPointRule& rule);

// Iterated statistical linear regression over the current posterior.
GaussianBelief plf_update(const GaussianBelief& prior, const Vector& y, const StateSpaceModel& model,
                          const SigmaPointRule& rule, double gamma, int max_iters,
                          int* iterations = nullptr);

// ---------------------------------------------------------------------------
// Log-likelihood ℓ(x, y) = ½(y − g(x))ᵀR⁻¹(y − g(x)) and its derivatives.

class LogLikelihood {
 public:
  LogLikelihood(const StateSpaceModel& model, Vector y);

  double value(const Vector& x) const;
  // Gᵀ R⁻¹ (g(x) − y)
  Vector gradient(const Vector& x) const;
  // Gᵀ R⁻¹ G − Σ_j [R⁻¹(y − g(x))]_j ∂²g_j/∂x²
  Matrix hessian_exact(const Vector& x) const;
  // Gᵀ R⁻¹ G
  Matrix hessian_gauss_newton(const Vector& x) const;

  // Gradient and Hessian at one point, evaluating G once.
  void derivatives(const Vector& x, HessianMode mode, Vector& grad, Matrix& hess) const;

  const Matrix& r_inv() const { return r_inv_; }

 private:
  const StateSpaceModel& model_;
  Vector y_;
  Matrix r_inv_;
};

double loglik(const Vector& x, const Vector& y, const StateSpaceModel& model);
Vector grad_loglik(const Vector& x, const Vector& y, const StateSpaceModel& model);
Matrix hess_loglik_exact(const Vector& x, const Vector& y, const StateSpaceModel& model);
Matrix hess_loglik_gn(const Vector& x, const StateSpaceModel& model);

// ---------------------------------------------------------------------------
// NANO

GaussianBelief nano_predict(const GaussianBelief& posterior, const Vector& u, int t,
                            const StateSpaceModel& model, const SigmaPointRule& rule);

struct NanoIterState {
  int k = 0;
  Vector mean;
  Matrix cov;
  // Factor with P⁻¹ = ΛΛᵀ + εI, present for the Cholesky-factor update.
  std::optional<LowerTriangular> factor;
};

// One exponential-map step of the inverse-covariance factor followed by Gram
// reconstruction. Updates `factor`, `cov` and `k`; the mean is left alone.
NanoIterState chol_cov_step(const NanoIterState& state, const Matrix& v_xx, const Matrix& prior_inv,
                            const NanoConfig& cfg);

struct NanoResult {
  GaussianBelief posterior;
  UpdateDiagnostics diagnostics;
};

// Natural-gradient posterior iteration. Throws PDFailure when a direct-mode
// covariance iterate is not positive definite and NonFiniteIterate on NaN/∞.
NanoResult nano_update(const GaussianBelief& prior, const Vector& y, const StateSpaceModel& model,
                       const SigmaPointRule& rule, const NanoConfig& cfg);

// ---------------------------------------------------------------------------
// Uniform dispatch

enum class FilterId { kKf, kEkf, kIekf, kUkf, kPlf, kNano, kNanoNoPd, kNanoEkf, kNanoChol };

const std::vector<FilterId>& all_filter_ids();
std::string to_string(FilterId id);
FilterId parse_filter_id(std::string_view text);  // throws ConfigError

// NANO configuration implied by a filter id, layered over `base` (which
// carries γ, max_iters, ε, step size and exponent settings).
NanoConfig nano_config_for(FilterId id, const NanoConfig& base);

// Throws ModelNotLinear for the KF on a nonlinear model and MissingHessian
// when the resolved NANO variant needs a Hessian the model lacks.
void check_compatible(FilterId id, const StateSpaceModel& model, const NanoConfig& base = {});

struct FilterContext {
  const StateSpaceModel& model;
  SigmaPointRule rule;
  NanoConfig nano;
};

struct StepResult {
  GaussianBelief belief;
  UpdateDiagnostics diagnostics;
};

// Predict with u_{t-1} at time index t-1, then update with y_t. A PDFailure
// from a NANO update is recorded in the diagnostics and the prior is
// returned; other errors propagate.
StepResult filter_step(FilterId id, const GaussianBelief& belief, const Vector& u, const Vector& y,
                       int t, const FilterContext& ctx);

}  // namespace nano
