#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "nano/bench.hpp"
#include "nano/errors.hpp"

namespace nano {

namespace {

bool out_of_bounds(const Vector& mean) {
  return !mean.allFinite() || mean.cwiseAbs().maxCoeff() > kDivergenceBound;
}

// Runs `task(i)` for i in [0, count) on up to `threads` workers.
template <typename Task>
void parallel_for(int count, int threads, Task&& task) {
  const int workers = std::min(threads, count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<int> next{0};
  std::mutex failure_mutex;
  std::exception_ptr failure;
  {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        try {
          for (int i = next++; i < count; i = next++) task(i);
        } catch (...) {
          const std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

TrialResult run_filter(const Scenario& scenario, FilterId filter, const Trajectory& traj, int trial,
                       const RunOptions& options, std::vector<GaussianBelief>* beliefs) {
  TrialResult result;
  result.trial = trial;
  result.trajectory_hash = trajectory_hash(traj);

  const FilterContext ctx{*scenario.filter_view, options.rule, options.nano};
  GaussianBelief belief = scenario.initial_belief;
  std::vector<Vector> estimates;
  estimates.reserve(traj.measurements.size());
  double time_total = 0.0;
  int timed_updates = 0;

  const int horizon = traj.horizon();
  for (int t = 1; t <= horizon; ++t) {
    StepResult step;
    try {
      step = filter_step(filter, belief, traj.inputs[t - 1], traj.measurements[t - 1], t, ctx);
    } catch (const ConfigError&) {
      throw;
    } catch (const Error&) {
      result.diverged = true;
      break;
    }
    time_total += step.diagnostics.update_ms;
    ++timed_updates;
    if (step.diagnostics.pd_failure || out_of_bounds(step.belief.mean)) {
      result.diverged = true;
      break;
    }
    belief = std::move(step.belief);
    estimates.push_back(belief.mean);
    if (beliefs != nullptr) beliefs->push_back(belief);
    ++result.steps;
  }

  if (!result.diverged) {
    const std::vector<Vector> truth(traj.states.begin() + 1, traj.states.end());
    result.rmse = rmse(truth, estimates);
  }
  // The update that failed is timed too, so early divergence still reports a cost.
  if (options.record_timing && timed_updates > 0) {
    result.update_ms = time_total / timed_updates;
  }
  return result;
}

namespace {

Trajectory simulate_for_trial(const Scenario& scenario, int trial) {
  Rng rng(scenario.config.seed + static_cast<std::uint64_t>(trial));
  return simulate_trajectory(*scenario.truth, scenario.process_noise, scenario.measurement_noise,
                             scenario.truth_init, scenario.config.horizon, rng);
}

TrialResult diverged_at_start(int trial) {
  TrialResult r;
  r.trial = trial;
  r.diverged = true;
  return r;
}

}  // namespace

TrialResult run_trial(const Scenario& scenario, FilterId filter, int trial, const RunOptions& options) {
  check_compatible(filter, *scenario.filter_view, options.nano);
  Trajectory traj;
  try {
    traj = simulate_for_trial(scenario, trial);
  } catch (const NonFiniteState&) {
    return diverged_at_start(trial);
  }
  return run_filter(scenario, filter, traj, trial, options);
}

const FilterSummary& BenchmarkReport::at(FilterId id) const {
  for (const FilterSummary& s : filters) {
    if (s.filter == id) return s;
  }
  throw std::out_of_range("report has no filter '" + to_string(id) + "'");
}

BenchmarkReport run_monte_carlo(const Scenario& scenario, const std::vector<FilterId>& filters, int trials,
                                const RunOptions& options) {
  if (trials < 1) throw ConfigError("trials must be >= 1");
  for (FilterId id : filters) check_compatible(id, *scenario.filter_view, options.nano);
  options.nano.validate();

  std::vector<std::vector<TrialResult>> results(filters.size(),
                                                std::vector<TrialResult>(static_cast<std::size_t>(trials)));
  parallel_for(trials, resolve_thread_count(options.threads), [&](int trial) {
    Trajectory traj;
    try {
      traj = simulate_for_trial(scenario, trial);
    } catch (const NonFiniteState&) {
      for (auto& per_filter : results) per_filter[static_cast<std::size_t>(trial)] = diverged_at_start(trial);
      return;
    }
    for (std::size_t f = 0; f < filters.size(); ++f) {
      results[f][static_cast<std::size_t>(trial)] = run_filter(scenario, filters[f], traj, trial, options);
    }
  });

  BenchmarkReport report;
  report.scenario = scenario.descriptor();
  report.rule = options.rule.name();
  report.seed = scenario.config.seed;
  report.horizon = scenario.config.horizon;
  for (std::size_t f = 0; f < filters.size(); ++f) {
    report.filters.push_back(summarize(filters[f], std::move(results[f])));
  }
  return report;
}

SweepTable sweep_mismatch(const ScenarioConfig& base, MismatchKind kind, const std::vector<double>& levels,
                          const std::vector<FilterId>& filters, int trials, const RunOptions& options) {
  SweepTable table;
  table.model = base.model;
  table.kind = kind;
  for (double level : levels) {
    ScenarioConfig cfg = base;
    cfg.mismatch = {kind, level};
    cfg.trials = trials;
    const Scenario scenario = scenario_models(cfg);
    BenchmarkReport report = run_monte_carlo(scenario, filters, trials, options);
    table.levels.push_back(scenario.config.mismatch.level);
    for (const FilterSummary& s : report.filters) {
      table.cells.push_back({scenario.config.mismatch.level, s.filter, s.mean_rmse, s.diverged, trials});
    }
    table.reports.push_back(std::move(report));
  }
  return table;
}

AblationTable ablate(const std::vector<ModelId>& models, int trials, int horizon, std::uint64_t seed,
                     const RunOptions& options) {
  AblationTable table;
  for (ModelId model : models) {
    ScenarioConfig cfg;
    cfg.model = model;
    cfg.trials = trials;
    cfg.horizon = horizon;
    cfg.seed = seed;
    BenchmarkReport report = run_monte_carlo(scenario_models(cfg), kAblationFilters, trials, options);
    for (const FilterSummary& s : report.filters) {
      table.cells.push_back({model, s.filter, s.mean_rmse, s.mean_update_ms, s.diverged, trials});
    }
    table.reports.push_back(std::move(report));
  }
  return table;
}

}  // namespace nano
