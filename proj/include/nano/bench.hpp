#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nano/filters.hpp"
#include "nano/scenario.hpp"

namespace nano {

// √( (1/(M·n)) Σ_t ‖x_t − x̂_t‖² ). Throws LengthMismatch.
double rmse(const std::vector<Vector>& truth, const std::vector<Vector>& estimates);

// Estimates beyond this magnitude count as divergence.
inline constexpr double kDivergenceBound = 1e6;

struct TrialResult {
  int trial = 0;
  std::optional<double> rmse;  // absent when diverged
  bool diverged = false;
  int steps = 0;
  std::optional<double> update_ms;  // absent when timing is not recorded
  std::uint64_t trajectory_hash = 0;

  bool operator==(const TrialResult&) const = default;
};

struct RunOptions {
  SigmaPointRule rule = SigmaPointRule::cubature();
  NanoConfig nano;
  // Wall-clock timing makes outputs run-dependent, so it is opt-in.
  bool record_timing = false;
  // Worker threads; 0 defers to NANO_BENCH_THREADS, then hardware concurrency.
  int threads = 0;
  // Keep every filtered belief (test hook; costs memory).
  bool keep_beliefs = false;
};

int resolve_thread_count(int requested);

// Runs one filter over an already simulated trajectory.
TrialResult run_filter(const Scenario& scenario, FilterId filter, const Trajectory& traj, int trial,
                       const RunOptions& options,
                       std::vector<GaussianBelief>* beliefs = nullptr);

// Seeds the rng with base seed + trial index, simulates the truth and filters
// it with the scenario's filter view. Failures are reported as divergence.
TrialResult run_trial(const Scenario& scenario, FilterId filter, int trial,
                      const RunOptions& options = {});

struct FilterSummary {
  FilterId filter = FilterId::kNano;
  std::vector<TrialResult> trials;
  // Over non-diverged trials; NaN when every trial diverged.
  double mean_rmse = 0.0;
  double median_rmse = 0.0;
  double q1_rmse = 0.0;
  double q3_rmse = 0.0;
  int diverged = 0;
  std::optional<double> mean_update_ms;  // mean of the per-trial means
};

FilterSummary summarize(FilterId filter, std::vector<TrialResult> trials);

struct BenchmarkReport {
  std::string scenario;
  std::string rule;
  std::string rng = kRngName;
  std::uint64_t seed = 0;
  int horizon = 0;
  std::vector<FilterSummary> filters;

  const FilterSummary& at(FilterId id) const;
};

// Every filter sees the same per-trial trajectory. Trials may run on several
// threads; results are stored and aggregated in trial-index order.
BenchmarkReport run_monte_carlo(const Scenario& scenario, const std::vector<FilterId>& filters, int trials,
                                const RunOptions& options = {});

struct SweepCell {
  double level = 0.0;
  FilterId filter = FilterId::kNano;
  double mean_rmse = 0.0;
  int diverged = 0;
  int trials = 0;
};

struct SweepTable {
  ModelId model = ModelId::kDuffing;
  MismatchKind kind = MismatchKind::kNone;
  std::vector<double> levels;
  std::vector<SweepCell> cells;  // level-major, filter order as requested
  std::vector<BenchmarkReport> reports;  // one per level
};

// Throws UnknownLevel for a level outside the model's grid.
SweepTable sweep_mismatch(const ScenarioConfig& base, MismatchKind kind, const std::vector<double>& levels,
                          const std::vector<FilterId>& filters, int trials, const RunOptions& options = {});

struct AblationCell {
  ModelId model = ModelId::kDuffing;
  FilterId filter = FilterId::kNano;
  double mean_rmse = 0.0;
  std::optional<double> mean_update_ms;
  int diverged = 0;
  int trials = 0;

  // "diverge" when more than half of the trials diverged.
  bool marked_diverged() const { return 2 * diverged > trials; }
};

struct AblationTable {
  std::vector<AblationCell> cells;
  std::vector<BenchmarkReport> reports;
};

inline const std::vector<FilterId> kAblationFilters = {FilterId::kNanoNoPd, FilterId::kNanoEkf,
                                                       FilterId::kNano};

AblationTable ablate(const std::vector<ModelId>& models, int trials, int horizon, std::uint64_t seed,
                     const RunOptions& options = {});

// ---------------------------------------------------------------------------
// Emission

inline constexpr std::string_view kTrialsCsvHeader = "scenario,filter,trial,rmse,diverged,steps,update_ms";

std::string format_number(double value);

std::string format_trials_csv(const std::vector<BenchmarkReport>& reports);
std::string format_trajectories_csv(const std::vector<BenchmarkReport>& reports);
std::string format_summary(const BenchmarkReport& report);
std::string format_sweep_csv(const SweepTable& table);
std::string format_ablation_csv(const AblationTable& table);
std::string format_ablation_text(const AblationTable& table);

struct ParsedTrialRow {
  std::string scenario;
  FilterId filter = FilterId::kNano;
  TrialResult result;
};

// Inverse of format_trials_csv (trajectory hashes are not part of the schema).
std::vector<ParsedTrialRow> parse_trials_csv(std::string_view text);

// Writes `contents` to `path`, creating parent directories. Throws IoError.
void write_file(const std::string& path, std::string_view contents);

}  // namespace nano
