#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nano/linalg.hpp"

namespace nano {

// Affine pieces of a linear-Gaussian model: x' = A x + B u, y = H x.
struct LinearForm {
  Matrix a;
  Matrix b;
  Matrix h;
};

// x_{t+1} = f(x_t, u_t, t) + ξ_t,  y_t = g(x_t) + ζ_t,  ξ ~ (0, Q), ζ ~ (0, R).
//
// Implementations are immutable once built and may be shared between
// concurrently running trials.
class StateSpaceModel {
 public:
  virtual ~StateSpaceModel() = default;

  virtual std::string name() const = 0;
  virtual Eigen::Index state_dim() const = 0;
  virtual Eigen::Index measurement_dim() const = 0;
  virtual Eigen::Index input_dim() const { return 0; }

  virtual Vector transition(const Vector& x, const Vector& u, int t) const = 0;
  virtual Matrix transition_jacobian(const Vector& x, const Vector& u, int t) const = 0;
  virtual Vector measurement(const Vector& x) const = 0;
  // G = ∂g/∂x, m×n.
  virtual Matrix measurement_jacobian(const Vector& x) const = 0;

  virtual bool has_measurement_hessian() const { return false; }
  // One n×n block ∂²g_j/∂x² per measurement component. Throws MissingHessian
  // unless overridden.
  virtual std::vector<Matrix> measurement_hessian(const Vector& x) const;

  // Known input signal u_t; empty when the model has no inputs.
  virtual Vector control_input(int t) const;

  virtual std::optional<LinearForm> linear_form() const { return std::nullopt; }

  const Matrix& process_cov() const { return q_; }
  const Matrix& measurement_cov() const { return r_; }

 protected:
  StateSpaceModel(Matrix q, Matrix r);

 private:
  Matrix q_;
  Matrix r_;
};

using ModelPtr = std::shared_ptr<const StateSpaceModel>;

// ---------------------------------------------------------------------------
// FM demodulator, state [λ, θ].

enum class FmMatrixMode {
  // Entry (2,1) = −β·exp(−T/β) − 1, as printed.
  kLiteral,
  // Entry (2,1) = β·(1 − exp(−T/β)).
  kGrouped,
};

struct FmParams {
  double beta = 100.0;
  double period = 2.0 * 3.14159265358979323846 / 16.0;
  FmMatrixMode mode = FmMatrixMode::kLiteral;
};

class FmDemodulator final : public StateSpaceModel {
 public:
  explicit FmDemodulator(FmParams params);

  std::string name() const override { return "fm"; }
  Eigen::Index state_dim() const override { return 2; }
  Eigen::Index measurement_dim() const override { return 2; }
  Vector transition(const Vector& x, const Vector& u, int t) const override;
  Matrix transition_jacobian(const Vector& x, const Vector& u, int t) const override;
  Vector measurement(const Vector& x) const override;
  Matrix measurement_jacobian(const Vector& x) const override;
  bool has_measurement_hessian() const override { return true; }
  std::vector<Matrix> measurement_hessian(const Vector& x) const override;

  const FmParams& params() const { return params_; }
  const Matrix& transition_matrix() const { return a_; }

 private:
  FmParams params_;
  Matrix a_;
};

std::shared_ptr<const FmDemodulator> fm_demodulator(double beta = 100.0,
                                                    FmMatrixMode mode = FmMatrixMode::kLiteral);

// ---------------------------------------------------------------------------
// Satellite attitude from Euler angles, state [pitch, roll, yaw].

struct AttitudeParams {
  double dt = 0.01;
  Eigen::Vector3d gravity{0.0, 0.0, -9.81};
  Eigen::Vector3d magnetic{27.75, -3.65, 47.21};
  // Per-axis Laplace scale of the process noise; Q = 2·scale²·I.
  double laplace_scale = 1e-5;
  double measurement_var = 1e-4;
};

class AttitudeModel final : public StateSpaceModel {
 public:
  explicit AttitudeModel(AttitudeParams params);

  std::string name() const override { return "attitude"; }
  Eigen::Index state_dim() const override { return 3; }
  Eigen::Index measurement_dim() const override { return 6; }
  Eigen::Index input_dim() const override { return 3; }
  Vector transition(const Vector& x, const Vector& u, int t) const override;
  Matrix transition_jacobian(const Vector& x, const Vector& u, int t) const override;
  Vector measurement(const Vector& x) const override;
  Matrix measurement_jacobian(const Vector& x) const override;
  bool has_measurement_hessian() const override { return true; }
  std::vector<Matrix> measurement_hessian(const Vector& x) const override;
  // ω_t = (π/18)·sin(2·Δt·π·t)·1₃
  Vector control_input(int t) const override;

  const AttitudeParams& params() const { return params_; }

  // Body-to-world rotation R_z(yaw)·R_y(pitch)·R_x(roll).
  static Eigen::Matrix3d rotation(const Vector& angles);
  // Euler-rate matrix in state order; throws GimbalLock near pitch ±90°.
  static Eigen::Matrix3d rate_matrix(const Vector& angles);

 private:
  AttitudeParams params_;
};

std::shared_ptr<const AttitudeModel> attitude_model(double dt = 0.01);
std::shared_ptr<const AttitudeModel> attitude_model(AttitudeParams params);

// ---------------------------------------------------------------------------
// Forced, damped Duffing oscillator (explicit Euler), state [x, ẋ].

struct DuffingParams {
  double zeta = 0.05;
  double omega_n = 1.0;
  double beta = 1.0;
  double force = 0.2;
  double omega_f = 1.2;
  double dt = 0.01;
  double process_var = 1e-3;
  double measurement_var = 1e-2;
};

class DuffingModel final : public StateSpaceModel {
 public:
  explicit DuffingModel(DuffingParams params);

  std::string name() const override { return "duffing"; }
  Eigen::Index state_dim() const override { return 2; }
  Eigen::Index measurement_dim() const override { return 1; }
  Vector transition(const Vector& x, const Vector& u, int t) const override;
  Matrix transition_jacobian(const Vector& x, const Vector& u, int t) const override;
  Vector measurement(const Vector& x) const override;
  Matrix measurement_jacobian(const Vector& x) const override;
  bool has_measurement_hessian() const override { return true; }
  std::vector<Matrix> measurement_hessian(const Vector& x) const override;

  const DuffingParams& params() const { return params_; }

 private:
  DuffingParams params_;
};

std::shared_ptr<const DuffingModel> duffing_model(DuffingParams params = {});

// ---------------------------------------------------------------------------

class LinearGaussianModel final : public StateSpaceModel {
 public:
  LinearGaussianModel(LinearForm form, Matrix q, Matrix r);

  std::string name() const override { return "linear"; }
  Eigen::Index state_dim() const override { return form_.a.rows(); }
  Eigen::Index measurement_dim() const override { return form_.h.rows(); }
  Eigen::Index input_dim() const override { return form_.b.cols(); }
  Vector transition(const Vector& x, const Vector& u, int t) const override;
  Matrix transition_jacobian(const Vector& x, const Vector& u, int t) const override;
  Vector measurement(const Vector& x) const override;
  Matrix measurement_jacobian(const Vector& x) const override;
  bool has_measurement_hessian() const override { return true; }
  std::vector<Matrix> measurement_hessian(const Vector& x) const override;
  std::optional<LinearForm> linear_form() const override { return form_; }

 private:
  LinearForm form_;
};

}  // namespace nano
