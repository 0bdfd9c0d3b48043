#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nano/belief.hpp"
#include "nano/models.hpp"
#include "nano/noise.hpp"

namespace nano {

enum class ModelId { kFm, kAttitude, kDuffing };
enum class MismatchKind { kNone, kSystem, kOutlier };

std::string to_string(ModelId id);
std::string to_string(MismatchKind kind);
ModelId parse_model_id(std::string_view text);          // throws UnknownScenario
MismatchKind parse_mismatch_kind(std::string_view text);  // throws ConfigError

// Grid of admissible perturbation levels, ascending. System error levels are
// relative parameter perturbations o; outlier levels are probabilities k.
std::vector<double> mismatch_levels(ModelId model, MismatchKind kind);

struct Mismatch {
  MismatchKind kind = MismatchKind::kNone;
  double level = 0.0;
};

struct InitialDistribution {
  Vector mean;
  Matrix cov;
};

struct ScenarioConfig {
  ModelId model = ModelId::kDuffing;
  Mismatch mismatch;
  int horizon = 200;
  int trials = 100;
  std::uint64_t seed = 0;
  FmMatrixMode fm_mode = FmMatrixMode::kLiteral;
  // Model defaults apply when unset.
  std::optional<InitialDistribution> truth_init;
  std::optional<GaussianBelief> initial_belief;
};

// Truth and filter halves of one scenario. Under system mismatch the filter
// view carries the perturbed parameter while the truth stays nominal; under
// outlier mismatch only the truth's measurement noise changes.
struct Scenario {
  ScenarioConfig config;
  ModelPtr truth;
  NoiseSpec process_noise;
  NoiseSpec measurement_noise;
  InitialDistribution truth_init;
  ModelPtr filter_view;
  GaussianBelief initial_belief;

  // e.g. "duffing/outlier=0.05"
  std::string descriptor() const;
};

Scenario scenario_models(const ScenarioConfig& cfg);

struct Trajectory {
  std::vector<Vector> states;        // x_0 .. x_M
  std::vector<Vector> measurements;  // y_1 .. y_M, measurements[t-1] = y_t
  std::vector<Vector> inputs;        // u_0 .. u_{M-1}

  int horizon() const { return static_cast<int>(measurements.size()); }
};

// Draws x_0 from `init`, then for t = 1..M: process noise, then measurement
// noise. Throws NonFiniteState if the dynamics blow up.
Trajectory simulate_trajectory(const StateSpaceModel& truth, const NoiseSpec& process,
                               const NoiseSpec& measurement, const InitialDistribution& init,
                               int horizon, Rng& rng);

// FNV-1a over the raw bytes of states and measurements.
std::uint64_t trajectory_hash(const Trajectory& traj);

}  // namespace nano
