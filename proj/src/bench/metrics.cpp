#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <thread>

#include "nano/bench.hpp"
#include "nano/errors.hpp"

namespace nano {

namespace {

// Linear interpolation between order statistics (the common "type 7" rule).
double quantile(const std::vector<double>& sorted, double p) {
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

double rmse(const std::vector<Vector>& truth, const std::vector<Vector>& estimates) {
  if (truth.size() != estimates.size()) {
    throw LengthMismatch("rmse: " + std::to_string(truth.size()) + " truth states vs " +
                         std::to_string(estimates.size()) + " estimates");
  }
  if (truth.empty()) throw LengthMismatch("rmse: empty sequences");
  const Eigen::Index n = truth.front().size();
  double sum = 0.0;
  for (std::size_t t = 0; t < truth.size(); ++t) {
    if (truth[t].size() != n || estimates[t].size() != n) {
      throw LengthMismatch("rmse: state dimension changes at step " + std::to_string(t));
    }
    sum += (truth[t] - estimates[t]).squaredNorm();
  }
  return std::sqrt(sum / (static_cast<double>(truth.size()) * static_cast<double>(n)));
}

FilterSummary summarize(FilterId filter, std::vector<TrialResult> trials) {
  FilterSummary s;
  s.filter = filter;
  std::vector<double> values;
  double time_total = 0.0;
  int timed = 0;
  for (const TrialResult& t : trials) {
    if (t.diverged) {
      ++s.diverged;
    } else if (t.rmse) {
      values.push_back(*t.rmse);
    }
    if (t.update_ms) {
      time_total += *t.update_ms;
      ++timed;
    }
  }
  if (values.empty()) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    s.mean_rmse = s.median_rmse = s.q1_rmse = s.q3_rmse = nan;
  } else {
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean_rmse = sum / static_cast<double>(values.size());
    std::sort(values.begin(), values.end());
    s.q1_rmse = quantile(values, 0.25);
    s.median_rmse = quantile(values, 0.5);
    s.q3_rmse = quantile(values, 0.75);
  }
  if (timed > 0) s.mean_update_ms = time_total / timed;
  s.trials = std::move(trials);
  return s;
}

int resolve_thread_count(int requested) {
  int threads = requested;
  if (threads <= 0) {
    if (const char* env = std::getenv("NANO_BENCH_THREADS")) threads = std::atoi(env);
  }
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  return std::max(threads, 1);
}

}  // namespace nano
