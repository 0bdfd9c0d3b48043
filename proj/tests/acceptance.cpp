// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: acceptance [criterion...]   (default: all of 1-8)

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "nano/bench.hpp"
#include "nano/errors.hpp"
#include "support.hpp"

using namespace nano;

namespace {

struct Verdict {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    notes.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
  void info(const std::string& what) { notes.push_back("info " + what); }
};

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// ---------------------------------------------------------------------------
// 1. Every Gaussian filter reduces to the Kalman filter on linear-Gaussian systems.

Verdict linear_oracle() {
  Verdict v;
  const auto start = std::chrono::steady_clock::now();
  const std::vector<FilterId> ids = {FilterId::kEkf, FilterId::kIekf, FilterId::kUkf,
                                     FilterId::kPlf, FilterId::kNano, FilterId::kNanoChol};
  std::vector<double> worst_mean(ids.size(), 0.0);
  std::vector<double> worst_cov(ids.size(), 0.0);
  Rng rng(2024);
  for (int system = 0; system < 50; ++system) {
    const test::RandomLinearSystem sys = test::random_linear_system(rng);
    const Eigen::Index n = sys.model->state_dim();
    const Eigen::Index m = sys.model->measurement_dim();
    const FilterContext ctx{*sys.model, SigmaPointRule::cubature(), NanoConfig{}};
    const Matrix lq = cholesky_factor(sys.q).matrix();
    const Matrix lr = cholesky_factor(sys.r).matrix();
    const GaussianBelief initial{Vector::Zero(n), Matrix::Identity(n, n)};
    Vector x = sample_gaussian(Vector::Zero(n), Matrix::Identity(n, n), rng);
    GaussianBelief kf = initial;
    std::vector<GaussianBelief> beliefs(ids.size(), initial);
    for (int t = 1; t <= 20; ++t) {
      x = sample_gaussian(sys.form.a * x, lq, rng);
      const Vector y = sample_gaussian(sys.form.h * x, lr, rng);
      kf = kf_step(kf, Vector(), y, sys.form, sys.q, sys.r);
      for (std::size_t i = 0; i < ids.size(); ++i) {
        beliefs[i] = filter_step(ids[i], beliefs[i], Vector(), y, t, ctx).belief;
        worst_mean[i] = std::max(worst_mean[i], (beliefs[i].mean - kf.mean).lpNorm<Eigen::Infinity>());
        worst_cov[i] = std::max(worst_cov[i], (beliefs[i].cov - kf.cov).norm());
      }
    }
    (void)m;
  }
  for (std::size_t i = 0; i < ids.size(); ++i) {
    v.require(worst_mean[i] <= 1e-6 && worst_cov[i] <= 1e-6,
              fmt("%-9s max mean err %.2e, max cov err %.2e (limit 1e-6)", to_string(ids[i]).c_str(),
                  worst_mean[i], worst_cov[i]));
  }
  const double elapsed = seconds_since(start);
  v.require(elapsed < 10.0, fmt("runtime %.2f s (limit 10 s)", elapsed));
  return v;
}

// ---------------------------------------------------------------------------
// 2. nano and nano-chol never lose positive definiteness on the benchmark suite.

struct PdTally {
  long updates = 0;
  long failures = 0;
  std::set<std::string> kinds;
};

void filter_for_pd(const Scenario& scenario, FilterId id, const Trajectory& traj, const RunOptions& options,
                   PdTally& tally) {
  const FilterContext ctx{*scenario.filter_view, options.rule, options.nano};
  GaussianBelief belief = scenario.initial_belief;
  for (int t = 1; t <= traj.horizon(); ++t) {
    StepResult step;
    try {
      step = filter_step(id, belief, traj.inputs[t - 1], traj.measurements[t - 1], t, ctx);
    } catch (const Error& e) {
      // Any breakdown leaves no posterior to certify, so it counts against the filter.
      ++tally.failures;
      tally.kinds.insert(e.what());
      return;
    }
    ++tally.updates;
    if (step.diagnostics.pd_failure) {
      ++tally.failures;
      tally.kinds.insert("PD failure in the covariance update");
      return;
    }
    if (!step.belief.cov.allFinite() || !step.belief.mean.allFinite()) {
      ++tally.failures;
      tally.kinds.insert("non-finite posterior");
      return;
    }
    try {
      cholesky_factor(symmetrize(step.belief.cov));
    } catch (const NotPositiveDefinite&) {
      ++tally.failures;
      tally.kinds.insert("posterior covariance fails Cholesky");
      return;
    }
    belief = std::move(step.belief);
  }
}

Verdict pd_preservation() {
  Verdict v;
  const int trials = 20;
  const int horizon = 100;
  const std::vector<FilterId> ids = {FilterId::kNano, FilterId::kNanoChol};
  std::vector<PdTally> tallies(ids.size());
  int cells = 0;
  for (ModelId model : {ModelId::kFm, ModelId::kAttitude, ModelId::kDuffing}) {
    for (MismatchKind kind : {MismatchKind::kSystem, MismatchKind::kOutlier}) {
      for (double level : mismatch_levels(model, kind)) {
        ScenarioConfig cfg;
        cfg.model = model;
        cfg.mismatch = {kind, level};
        cfg.horizon = horizon;
        cfg.trials = trials;
        const Scenario scenario = scenario_models(cfg);
        ++cells;
        std::vector<long> before;
        for (const PdTally& t : tallies) before.push_back(t.failures);
        for (int trial = 0; trial < trials; ++trial) {
          Rng rng(cfg.seed + static_cast<std::uint64_t>(trial));
          Trajectory traj;
          try {
            traj = simulate_trajectory(*scenario.truth, scenario.process_noise, scenario.measurement_noise,
                                       scenario.truth_init, horizon, rng);
          } catch (const NonFiniteState&) {
            continue;
          }
          for (std::size_t i = 0; i < ids.size(); ++i) filter_for_pd(scenario, ids[i], traj, {}, tallies[i]);
        }
        for (std::size_t i = 0; i < ids.size(); ++i) {
          const long added = tallies[i].failures - before[i];
          if (added > 0) {
            v.info(fmt("%s: %ld failure(s) for %s", scenario.descriptor().c_str(), added,
                       to_string(ids[i]).c_str()));
          }
        }
      }
    }
  }
  v.info(fmt("%d scenario cells x %d trials x %d steps", cells, trials, horizon));
  for (std::size_t i = 0; i < ids.size(); ++i) {
    v.require(tallies[i].failures == 0, fmt("%-9s %ld PD failures over %ld certified posteriors",
                                            to_string(ids[i]).c_str(), tallies[i].failures, tallies[i].updates));
    for (const std::string& k : tallies[i].kinds) v.info("  " + to_string(ids[i]) + ": " + k);
  }
  return v;
}

// ---------------------------------------------------------------------------
// 3. The exact Duffing Hessian is indefinite where Gauss–Newton stays PSD.

Verdict indefiniteness() {
  Verdict v;
  const auto duff = duffing_model();
  const Vector x(Eigen::Vector2d(0.2, 0.0));
  const Vector y = Vector::Constant(1, 1.0);
  const double exact_min = test::min_eigenvalue(hess_loglik_exact(x, y, *duff));
  const double gn_min = test::min_eigenvalue(hess_loglik_gn(x, *duff));
  v.info("duffing, x = (0.2, 0), y = 1");
  v.require(exact_min < 0.0, fmt("exact Hessian min eigenvalue %.6g < 0", exact_min));
  v.require(gn_min >= 0.0, fmt("Gauss-Newton Hessian min eigenvalue %.6g >= 0", gn_min));
  return v;
}

// ---------------------------------------------------------------------------
// 4 and 5 share one paired Monte Carlo run per benchmark.

struct BenchRuns {
  std::vector<ModelId> models = {ModelId::kFm, ModelId::kAttitude, ModelId::kDuffing};
  std::vector<BenchmarkReport> reports;
  BenchmarkReport fm_grouped;
  double seconds = 0.0;
};

const std::vector<FilterId> kComparedFilters = {FilterId::kEkf, FilterId::kIekf, FilterId::kUkf,
                                                FilterId::kPlf, FilterId::kNano, FilterId::kNanoEkf,
                                                FilterId::kNanoNoPd};

const BenchRuns& bench_runs() {
  static const BenchRuns runs = [] {
    BenchRuns r;
    const auto start = std::chrono::steady_clock::now();
    RunOptions options;
    options.threads = 1;  // timings are compared, so keep the runs free of contention
    options.record_timing = true;
    for (ModelId model : r.models) {
      ScenarioConfig cfg;
      cfg.model = model;
      r.reports.push_back(run_monte_carlo(scenario_models(cfg), kComparedFilters, 100, options));
    }
    ScenarioConfig grouped;
    grouped.model = ModelId::kFm;
    grouped.fm_mode = FmMatrixMode::kGrouped;
    r.fm_grouped = run_monte_carlo(scenario_models(grouped), kComparedFilters, 100, options);
    r.seconds = seconds_since(start);
    return r;
  }();
  return runs;
}

// A filter that diverged on most trials ranks behind every finite mean.
double ranking_rmse(const FilterSummary& s) {
  const bool marked = 2 * s.diverged > static_cast<int>(s.trials.size());
  return marked || std::isnan(s.mean_rmse) ? std::numeric_limits<double>::infinity() : s.mean_rmse;
}

std::string describe(const FilterSummary& s) {
  return fmt("%-9s rmse %-10s diverged %3d/%zu  update %.4f ms", to_string(s.filter).c_str(),
             format_number(s.mean_rmse).substr(0, 10).c_str(), s.diverged, s.trials.size(),
             s.mean_update_ms.value_or(std::nan("")));
}

Verdict ablation() {
  Verdict v;
  const BenchRuns& runs = bench_runs();
  struct Reference {
    const char* nopd;
    double ekf;
    double nano;
  };
  const Reference refs[] = {{"diverge", 2.829, 2.533}, {"0.161", 0.127, 0.116}, {"0.293", 0.263, 0.254}};

  for (std::size_t k = 0; k < runs.models.size(); ++k) {
    const BenchmarkReport& r = runs.reports[k];
    const FilterSummary& nano = r.at(FilterId::kNano);
    const FilterSummary& ekf = r.at(FilterId::kNanoEkf);
    const FilterSummary& nopd = r.at(FilterId::kNanoNoPd);
    const std::string model = to_string(runs.models[k]);
    v.info(model + ":");
    for (const FilterSummary* s : {&nopd, &ekf, &nano}) v.info("  " + describe(*s));
    v.info(fmt("  reference nano-nopd %s, nano-ekf %.3f, nano %.3f", refs[k].nopd, refs[k].ekf, refs[k].nano));
    if (std::isfinite(nano.mean_rmse)) {
      const double ratio = nano.mean_rmse / refs[k].nano;
      v.info(fmt("  nano magnitude vs reference: x%.3g (%s the factor-3 target)", ratio,
                 ratio <= 3.0 && ratio >= 1.0 / 3.0 ? "within" : "outside"));
    }

    if (runs.models[k] == ModelId::kFm) {
      v.require(nano.diverged == 0, fmt("(b) fm: nano diverged on %d/100 trials (need 0)", nano.diverged));
      v.require(nopd.diverged >= 1, fmt("(b) fm: nano-nopd diverged on %d/100 trials (need >= 1)", nopd.diverged));
    } else {
      const double a = ranking_rmse(nano);
      const double b = ranking_rmse(ekf);
      const double c = ranking_rmse(nopd);
      v.require(a <= b && b <= c, fmt("(a) %s: nano %.6g <= nano-ekf %.6g <= nano-nopd %.6g", model.c_str(), a, b, c));
    }
    const bool timed = nano.mean_update_ms && nopd.mean_update_ms;
    v.require(timed && *nano.mean_update_ms < *nopd.mean_update_ms,
              fmt("(c) %s: nano %.4f ms < nano-nopd %.4f ms per update", model.c_str(),
                  nano.mean_update_ms.value_or(std::nan("")), nopd.mean_update_ms.value_or(std::nan(""))));
  }
  v.require(runs.seconds < 600.0, fmt("runtime %.1f s (limit 600 s)", runs.seconds));
  return v;
}

Verdict baseline_ordering() {
  Verdict v;
  const BenchRuns& runs = bench_runs();
  const std::vector<FilterId> baselines = {FilterId::kEkf, FilterId::kUkf, FilterId::kIekf, FilterId::kPlf};
  auto check = [&](const BenchmarkReport& r, const std::string& label, bool gate) {
    const FilterSummary& nano = r.at(FilterId::kNano);
    std::string line = fmt("%s: nano %.6g", label.c_str(), nano.mean_rmse);
    bool ok = nano.diverged == 0 && std::isfinite(nano.mean_rmse);
    for (FilterId id : baselines) {
      const FilterSummary& s = r.at(id);
      const bool beaten = nano.mean_rmse <= ranking_rmse(s);
      ok = ok && beaten;
      line += fmt(", %s %.6g%s", to_string(id).c_str(), s.mean_rmse, beaten ? "" : " (lower)");
      if (s.diverged > 0) line += fmt(" [%d diverged]", s.diverged);
    }
    if (gate) {
      v.require(ok, line);
    } else {
      v.info(line + (ok ? "  -> nano lowest" : "  -> nano not lowest"));
    }
  };
  for (std::size_t k = 0; k < runs.models.size(); ++k) check(runs.reports[k], to_string(runs.models[k]), true);
  check(runs.fm_grouped, "fm (grouped matrix, supplementary)", false);
  return v;
}

// ---------------------------------------------------------------------------
// 6. Analytic derivatives against central differences.

Vector random_state(const StateSpaceModel& model, Rng& rng) {
  std::uniform_real_distribution<double> angle(-1.0, 1.0);
  std::uniform_real_distribution<double> wide(-2.0, 2.0);
  Vector x(model.state_dim());
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = model.name() == "attitude" ? angle(rng) : wide(rng);
  return x;
}

Verdict derivatives() {
  Verdict v;
  const auto start = std::chrono::steady_clock::now();
  const std::vector<std::pair<std::string, ModelPtr>> models = {
      {"fm (literal)", fm_demodulator()},
      {"fm (grouped)", fm_demodulator(100.0, FmMatrixMode::kGrouped)},
      {"attitude", attitude_model()},
      {"duffing", duffing_model()}};
  Rng rng(6);
  for (const auto& [label, model] : models) {
    double jf = 0.0, jg = 0.0, hg = 0.0, grad = 0.0, hess = 0.0;
    for (int point = 0; point < 100; ++point) {
      const Vector x = random_state(*model, rng);
      const Vector u = model->input_dim() > 0 ? test::random_vector(rng, model->input_dim()) : Vector();
      const Vector y = model->measurement(random_state(*model, rng));
      jf = std::max(jf, test::relative_error(model->transition_jacobian(x, u, point),
                                             test::fd_jacobian([&](const Vector& z) {
                                               return model->transition(z, u, point);
                                             }, x)));
      jg = std::max(jg, test::relative_error(model->measurement_jacobian(x),
                                             test::fd_jacobian([&](const Vector& z) { return model->measurement(z); }, x)));
      const std::vector<Matrix> h = model->measurement_hessian(x);
      for (Eigen::Index j = 0; j < model->measurement_dim(); ++j) {
        const Matrix fd = test::fd_jacobian(
            [&](const Vector& z) -> Vector { return model->measurement_jacobian(z).row(j).transpose(); }, x);
        hg = std::max(hg, test::relative_error(h[static_cast<std::size_t>(j)], fd));
      }
      grad = std::max(grad, test::relative_error(
                                grad_loglik(x, y, *model),
                                test::fd_gradient([&](const Vector& z) { return loglik(z, y, *model); }, x)));
      hess = std::max(hess, test::relative_error(
                                hess_loglik_exact(x, y, *model),
                                test::fd_jacobian([&](const Vector& z) { return grad_loglik(z, y, *model); }, x)));
    }
    v.require(std::max({jf, jg, hg, grad, hess}) < 1e-4,
              fmt("%-13s rel err: jac_f %.1e, jac_g %.1e, hess_g %.1e, grad loglik %.1e, hess loglik %.1e",
                  label.c_str(), jf, jg, hg, grad, hess));
  }
  const double elapsed = seconds_since(start);
  v.require(elapsed < 5.0, fmt("runtime %.2f s (limit 5 s)", elapsed));
  return v;
}

// ---------------------------------------------------------------------------
// 7. Moment-matching exactness.

double normal_moment(int d) {
  if (d % 2 == 1) return 0.0;
  double m = 1.0;
  for (int k = d - 1; k > 0; k -= 2) m *= k;
  return m;
}

Verdict moment_exactness() {
  Verdict v;
  Rng rng(7);
  for (const SigmaPointRule& rule :
       {SigmaPointRule::cubature(), SigmaPointRule::unscented(), SigmaPointRule::gauss_hermite(3)}) {
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      const Eigen::Index n = 1 + trial % 4;
      const Eigen::Index m = 1 + (trial / 4) % 3;
      const Vector mu = test::random_vector(rng, n);
      const Matrix sigma = test::random_spd(rng, n, 0.1);
      const Matrix a = test::random_matrix(rng, m, n);
      const Vector b = test::random_vector(rng, m);
      const MomentsWithCross out = propagate_with_cross(generate_points(rule, mu, sigma),
                                                        [&](const Vector& x) -> Vector { return a * x + b; });
      worst = std::max({worst, test::relative_error(out.mean, a * mu + b),
                        test::relative_error(out.cov, a * sigma * a.transpose()),
                        test::relative_error(out.cross, sigma * a.transpose())});
    }
    v.require(worst < 1e-9, fmt("affine exactness, %-10s worst rel err %.1e (limit 1e-9)", rule.name().c_str(), worst));
  }
  for (int p : {2, 3, 4, 5}) {
    const CollocationSet set =
        generate_points(SigmaPointRule::gauss_hermite(p), Vector::Zero(1), Matrix::Identity(1, 1));
    double worst = 0.0;
    for (int d = 0; d <= 2 * p - 1; ++d) {
      double sum = 0.0;
      for (std::size_t i = 0; i < set.size(); ++i) sum += set.mean_weights[i] * std::pow(set.points[i](0), d);
      worst = std::max(worst, std::abs(sum - normal_moment(d)) / std::max(1.0, normal_moment(d)));
    }
    v.require(worst < 1e-9, fmt("Gauss-Hermite p = %d, degrees 0..%d, worst rel err %.1e (limit 1e-9)", p,
                                2 * p - 1, worst));
  }
  return v;
}

// ---------------------------------------------------------------------------
// 8. Two CLI invocations produce byte-identical CSV files.

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Verdict determinism() {
  Verdict v;
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "nano_acceptance_determinism";
  fs::remove_all(root);
  for (const char* run : {"first", "second"}) {
    const std::string cmd = std::string("\"") + NANO_BENCH_EXE +
                            "\" run --model duffing --filter nano,ekf --trials 10 --seed 42 --out \"" +
                            (root / run).string() + "\" > /dev/null";
    const int status = std::system(cmd.c_str());
    v.require(status == 0, fmt("%s invocation exit status %d", run, status));
  }
  for (const char* file : {"trials.csv", "trajectories.csv"}) {
    const std::string a = slurp(root / "first" / file);
    const std::string b = slurp(root / "second" / file);
    v.require(!a.empty() && a == b, fmt("%s byte-identical (%zu bytes)", file, a.size()));
  }
  fs::remove_all(root);
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"linear-Gaussian oracle equivalence", linear_oracle},
      {"PD preservation", pd_preservation},
      {"Hessian indefiniteness", indefiniteness},
      {"ablation ordering", ablation},
      {"baseline ordering", baseline_ordering},
      {"numerical derivatives", derivatives},
      {"moment-matching exactness", moment_exactness},
      {"determinism", determinism},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int number = static_cast<int>(k) + 1;
    if (!selected.empty() && !selected.count(number)) continue;
    Verdict verdict;
    try {
      verdict = criteria[k].second();
    } catch (const std::exception& e) {
      verdict.require(false, std::string("exception: ") + e.what());
    }
    std::cout << "criterion " << number << ": " << (verdict.pass ? "PASS" : "FAIL") << "  "
              << criteria[k].first << '\n';
    for (const std::string& note : verdict.notes) std::cout << "    " << note << '\n';
    std::cout.flush();
    if (!verdict.pass) ++failed;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criterion/criteria failed")
            << '\n';
  return failed == 0 ? 0 : 1;
}
