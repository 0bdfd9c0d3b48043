#include "nano/scenario.hpp"

#include <cmath>
#include <cstring>
#include <sstream>

#include "nano/errors.hpp"

namespace nano {

namespace {

constexpr double kLevelTol = 1e-9;

double snap_level(ModelId model, const Mismatch& m) {
  if (m.kind == MismatchKind::kNone) return 0.0;
  for (double level : mismatch_levels(model, m.kind)) {
    if (std::abs(level - m.level) <= kLevelTol) return level;
  }
  std::ostringstream msg;
  msg << "level " << m.level << " is not on the " << to_string(m.kind) << " grid of model "
      << to_string(model);
  throw UnknownLevel(msg.str());
}

InitialDistribution default_init(ModelId model, Eigen::Index n) {
  const double var = model == ModelId::kAttitude ? 1e-3 : 1.0;
  return {Vector::Zero(n), var * Matrix::Identity(n, n)};
}

}  // namespace

std::string to_string(ModelId id) {
  switch (id) {
    case ModelId::kFm:
      return "fm";
    case ModelId::kAttitude:
      return "attitude";
    case ModelId::kDuffing:
      return "duffing";
  }
  return "?";
}

std::string to_string(MismatchKind kind) {
  switch (kind) {
    case MismatchKind::kNone:
      return "none";
    case MismatchKind::kSystem:
      return "system";
    case MismatchKind::kOutlier:
      return "outlier";
  }
  return "?";
}

ModelId parse_model_id(std::string_view text) {
  if (text == "fm") return ModelId::kFm;
  if (text == "attitude") return ModelId::kAttitude;
  if (text == "duffing") return ModelId::kDuffing;
  throw UnknownScenario("unknown model '" + std::string(text) + "' (expected fm, attitude or duffing)");
}

MismatchKind parse_mismatch_kind(std::string_view text) {
  if (text == "none") return MismatchKind::kNone;
  if (text == "system") return MismatchKind::kSystem;
  if (text == "outlier") return MismatchKind::kOutlier;
  throw ConfigError("unknown mismatch kind '" + std::string(text) +
                    "' (expected none, system or outlier)");
}

std::vector<double> mismatch_levels(ModelId model, MismatchKind kind) {
  switch (kind) {
    case MismatchKind::kNone:
      return {0.0};
    case MismatchKind::kSystem:
      if (model == ModelId::kFm) return {-0.10, -0.05, -0.01, 0.0, 0.01, 0.05, 0.10};
      return {-0.30, -0.20, -0.10, 0.0, 0.10, 0.20, 0.30};
    case MismatchKind::kOutlier:
      switch (model) {
        case ModelId::kFm:
          return {0.0, 0.01, 0.04, 0.07, 0.10};
        case ModelId::kAttitude:
          return {0.0, 0.01, 0.05, 0.10, 0.15};
        case ModelId::kDuffing:
          return {0.0, 0.03, 0.05, 0.08, 0.10};
      }
  }
  return {};
}

std::string Scenario::descriptor() const {
  std::ostringstream out;
  out << to_string(config.model);
  if (config.mismatch.kind != MismatchKind::kNone) {
    out << '/' << to_string(config.mismatch.kind) << '=' << config.mismatch.level;
  }
  return out.str();
}

Scenario scenario_models(const ScenarioConfig& cfg) {
  if (cfg.horizon < 1) throw ConfigError("horizon must be >= 1");
  if (cfg.trials < 1) throw ConfigError("trials must be >= 1");
  const double level = snap_level(cfg.model, cfg.mismatch);
  // Level zero is the nominal scenario for either mismatch kind, so the
  // nominal rng stream is reproduced exactly.
  const bool system = cfg.mismatch.kind == MismatchKind::kSystem && level != 0.0;
  const bool outlier = cfg.mismatch.kind == MismatchKind::kOutlier && level != 0.0;
  const double scale = system ? 1.0 + level : 1.0;

  ModelPtr truth;
  ModelPtr view;
  std::optional<NoiseSpec> process;
  std::optional<NoiseSpec> measurement;

  switch (cfg.model) {
    case ModelId::kFm: {
      const double beta = FmParams{}.beta;
      truth = fm_demodulator(beta, cfg.fm_mode);
      view = fm_demodulator(beta * scale, cfg.fm_mode);
      process = NoiseSpec::gaussian(truth->process_cov());
      measurement = outlier ? NoiseSpec::mixture_outlier(level, Matrix::Identity(2, 2),
                                                         100.0 * Matrix::Identity(2, 2))
                            : NoiseSpec::gaussian(truth->measurement_cov());
      break;
    }
    case ModelId::kAttitude: {
      const AttitudeParams nominal;
      AttitudeParams perturbed = nominal;
      perturbed.dt *= scale;
      truth = attitude_model(nominal);
      view = attitude_model(perturbed);
      process = NoiseSpec::laplace(Vector::Constant(3, nominal.laplace_scale));
      measurement = outlier ? NoiseSpec::beta_outlier(level, 1.2, 1.5, truth->measurement_cov())
                            : NoiseSpec::gaussian(truth->measurement_cov());
      break;
    }
    case ModelId::kDuffing: {
      const DuffingParams nominal;
      DuffingParams perturbed = nominal;
      perturbed.omega_n *= scale;
      truth = duffing_model(nominal);
      view = duffing_model(perturbed);
      process = NoiseSpec::gaussian(truth->process_cov());
      measurement = outlier ? NoiseSpec::mixture_outlier(level, truth->measurement_cov(),
                                                         Matrix::Identity(1, 1))
                            : NoiseSpec::gaussian(truth->measurement_cov());
      break;
    }
  }

  const Eigen::Index n = truth->state_dim();
  const InitialDistribution defaults = default_init(cfg.model, n);
  InitialDistribution truth_init = cfg.truth_init.value_or(defaults);
  GaussianBelief belief = cfg.initial_belief.value_or(GaussianBelief{defaults.mean, defaults.cov});
  if (truth_init.mean.size() != n || belief.mean.size() != n || belief.cov.rows() != n) {
    throw ConfigError("initial distribution does not match the state dimension");
  }
  if (!is_positive_definite(belief.cov)) throw ConfigError("initial belief covariance must be SPD");

  ScenarioConfig resolved = cfg;
  resolved.mismatch.level = level;
  return Scenario{std::move(resolved), std::move(truth),        std::move(*process),
                  std::move(*measurement), std::move(truth_init), std::move(view),
                  std::move(belief)};
}

Trajectory simulate_trajectory(const StateSpaceModel& truth, const NoiseSpec& process,
                               const NoiseSpec& measurement, const InitialDistribution& init,
                               int horizon, Rng& rng) {
  const Eigen::Index n = truth.state_dim();
  if (process.dim() != n || measurement.dim() != truth.measurement_dim() ||
      init.mean.size() != n) {
    throw std::invalid_argument("simulate_trajectory: noise or init dimension mismatch");
  }
  if (horizon < 0) throw std::invalid_argument("simulate_trajectory: negative horizon");

  Trajectory traj;
  traj.states.reserve(static_cast<std::size_t>(horizon) + 1);
  traj.measurements.reserve(static_cast<std::size_t>(horizon));
  traj.inputs.reserve(static_cast<std::size_t>(horizon));

  traj.states.push_back(init.mean + sample_noise(NoiseSpec::gaussian(init.cov), rng));
  for (int t = 1; t <= horizon; ++t) {
    const Vector u = truth.control_input(t - 1);
    Vector x = truth.transition(traj.states.back(), u, t - 1) + sample_noise(process, rng);
    if (!x.allFinite()) throw NonFiniteState("simulate_trajectory: non-finite state at step " + std::to_string(t));
    Vector y = truth.measurement(x) + sample_noise(measurement, rng);
    traj.inputs.push_back(u);
    traj.states.push_back(std::move(x));
    traj.measurements.push_back(std::move(y));
  }
  return traj;
}

std::uint64_t trajectory_hash(const Trajectory& traj) {
  std::uint64_t h = 14695981039346656037ull;
  auto mix = [&h](const Vector& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      unsigned char bytes[sizeof(double)];
      const double value = v(i);
      std::memcpy(bytes, &value, sizeof(double));
      for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ull;
      }
    }
  };
  for (const Vector& x : traj.states) mix(x);
  for (const Vector& y : traj.measurements) mix(y);
  return h;
}

}  // namespace nano
