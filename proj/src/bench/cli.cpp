#include "nano/cli.hpp"

#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nano/bench.hpp"
#include "nano/config.hpp"
#include "nano/errors.hpp"

namespace nano {

namespace {

// CLI flags layered over the config file, each mapped onto a config key.
struct Overrides {
  std::map<std::string, std::string> values;
  std::vector<std::string> assignments;  // raw --set key=value
  std::string config_path;
  bool timing = false;
  int threads = 0;
};

void add_string_option(CLI::App& app, Overrides& o, const std::string& flag, const std::string& key,
                       const std::string& help) {
  app.add_option_function<std::string>(
      flag, [&o, key](const std::string& v) { o.values[key] = v; }, help);
}

void add_scenario_options(CLI::App& app, Overrides& o) {
  add_string_option(app, o, "--model", "model", "fm | attitude | duffing");
  add_string_option(app, o, "--filter", "filter", "comma-separated filter ids");
  add_string_option(app, o, "--trials", "trials", "Monte Carlo trials N");
  add_string_option(app, o, "--horizon", "horizon", "steps per trial M");
  add_string_option(app, o, "--seed", "seed", "base seed; trial i uses seed + i");
  add_string_option(app, o, "--mm", "mm", "cubature | unscented | gh:<p>");
  add_string_option(app, o, "--out", "out", "output directory");
  app.add_option("--config", o.config_path, "key = value config file");
  app.add_option("--set", o.assignments, "extra key=value overrides, e.g. nano.gamma=1e-8");
  app.add_flag("--timing", o.timing, "record wall-clock update time (output becomes run-dependent)");
  app.add_option("--threads", o.threads, "worker threads (0 = NANO_BENCH_THREADS or auto)");
}

BenchConfig resolve(const Overrides& o, BenchConfig cfg) {
  if (!o.config_path.empty()) load_config_file(cfg, o.config_path);
  for (const auto& [key, value] : o.values) apply_config_value(cfg, key, value);
  for (const std::string& a : o.assignments) {
    const auto eq = a.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + a + "'");
    apply_config_value(cfg, a.substr(0, eq), a.substr(eq + 1));
  }
  if (o.timing) cfg.run.record_timing = true;
  if (o.threads > 0) cfg.run.threads = o.threads;
  cfg.run.nano.validate();
  return cfg;
}

std::string join_path(const std::string& dir, const std::string& file) {
  return dir.empty() ? file : dir + "/" + file;
}

int cmd_list(std::ostream& out) {
  out << "models:\n";
  for (ModelId m : {ModelId::kFm, ModelId::kAttitude, ModelId::kDuffing}) out << "  " << to_string(m) << '\n';
  out << "filters:\n";
  for (FilterId f : all_filter_ids()) out << "  " << to_string(f) << '\n';
  out << "rules:\n";
  for (const char* r : {"cubature", "unscented", "gh:<p>"}) out << "  " << r << '\n';
  return 0;
}

int cmd_run(const BenchConfig& cfg, std::ostream& out) {
  const Scenario scenario = scenario_models(cfg.scenario);
  const BenchmarkReport report = run_monte_carlo(scenario, cfg.filters, cfg.scenario.trials, cfg.run);
  write_file(join_path(cfg.out_dir, "trials.csv"), format_trials_csv({report}));
  write_file(join_path(cfg.out_dir, "trajectories.csv"), format_trajectories_csv({report}));
  const std::string summary = format_summary(report);
  write_file(join_path(cfg.out_dir, "summary.txt"), summary);
  out << summary;
  return 0;
}

int cmd_sweep(const BenchConfig& cfg, std::ostream& out) {
  const MismatchKind kind = cfg.scenario.mismatch.kind;
  if (kind == MismatchKind::kNone) throw ConfigError("sweep needs --mismatch system|outlier");
  const std::vector<double> levels =
      cfg.levels.empty() ? mismatch_levels(cfg.scenario.model, kind) : cfg.levels;
  const SweepTable table =
      sweep_mismatch(cfg.scenario, kind, levels, cfg.filters, cfg.scenario.trials, cfg.run);
  const std::string csv = format_sweep_csv(table);
  write_file(join_path(cfg.out_dir, "sweep.csv"), csv);
  write_file(join_path(cfg.out_dir, "trials.csv"), format_trials_csv(table.reports));
  out << csv;
  return 0;
}

int cmd_ablate(const BenchConfig& cfg, const std::vector<std::string>& model_names, std::ostream& out) {
  std::vector<ModelId> models;
  for (const std::string& name : model_names) models.push_back(parse_model_id(name));
  if (models.empty()) models = {ModelId::kFm, ModelId::kAttitude, ModelId::kDuffing};
  const AblationTable table =
      ablate(models, cfg.scenario.trials, cfg.scenario.horizon, cfg.scenario.seed, cfg.run);
  write_file(join_path(cfg.out_dir, "ablation.csv"), format_ablation_csv(table));
  write_file(join_path(cfg.out_dir, "trials.csv"), format_trials_csv(table.reports));
  const std::string text = format_ablation_text(table);
  write_file(join_path(cfg.out_dir, "ablation.txt"), text);
  out << text;
  return 0;
}

}  // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Monte Carlo benchmark for natural-gradient Gaussian filters", "nano_bench"};
  app.require_subcommand(1);

  Overrides run_o;
  CLI::App* run = app.add_subcommand("run", "Monte Carlo comparison of filters on one scenario");
  add_scenario_options(*run, run_o);
  add_string_option(*run, run_o, "--mismatch", "mismatch.kind", "none | system | outlier");
  add_string_option(*run, run_o, "--level", "mismatch.level", "perturbation level o or outlier probability k");

  Overrides sweep_o;
  CLI::App* sweep = app.add_subcommand("sweep", "mean RMSE over a mismatch grid");
  add_scenario_options(*sweep, sweep_o);
  add_string_option(*sweep, sweep_o, "--mismatch", "mismatch.kind", "system | outlier");
  add_string_option(*sweep, sweep_o, "--levels", "mismatch.levels", "comma-separated subset of the grid");

  Overrides ablate_o;
  std::vector<std::string> ablate_models;
  CLI::App* ablate_cmd = app.add_subcommand("ablate", "nano-nopd / nano-ekf / nano on every benchmark");
  add_scenario_options(*ablate_cmd, ablate_o);
  ablate_cmd->add_option("--models", ablate_models, "subset of models (default: all)")->delimiter(',');

  app.add_subcommand("list", "print models, filters and moment-matching rules");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (app.got_subcommand("list")) return cmd_list(out);
    if (app.got_subcommand(run)) return cmd_run(resolve(run_o, BenchConfig{}), out);
    if (app.got_subcommand(sweep)) return cmd_sweep(resolve(sweep_o, BenchConfig{}), out);
    if (app.got_subcommand(ablate_cmd)) {
      BenchConfig defaults;
      defaults.filters = kAblationFilters;
      defaults.run.record_timing = true;
      return cmd_ablate(resolve(ablate_o, defaults), ablate_models, out);
    }
  } catch (const ConfigError& e) {
    err << "nano_bench: configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "nano_bench: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace nano
