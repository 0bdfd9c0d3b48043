#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nano/bench.hpp"

namespace nano {

// Everything a harness invocation needs; defaults are the documented ones.
struct BenchConfig {
  ScenarioConfig scenario;
  std::vector<FilterId> filters{FilterId::kNano};
  RunOptions run;
  // Sweep grid; empty means the model's full grid.
  std::vector<double> levels;
  std::string out_dir = "out";
};

// Parses `key = value` lines. `[section]` headers prefix following keys with
// "section."; `#` and `;` start comments. Throws ConfigError with a line number.
std::vector<std::pair<std::string, std::string>> parse_config_text(std::string_view text);

// Recognized keys: model, horizon, trials, seed, mm, filter, out, timing,
// fm.matrix_mode, mismatch.kind, mismatch.level, mismatch.levels,
// nano.gamma, nano.max_iters, nano.hessian, nano.cov_update, nano.epsilon,
// nano.exponent_mode, nano.exp_order, nano.step_size, nano.init.
void apply_config_value(BenchConfig& cfg, std::string_view key, std::string_view value);

void load_config_file(BenchConfig& cfg, const std::string& path);

std::vector<FilterId> parse_filter_list(std::string_view text);
std::vector<double> parse_level_list(std::string_view text);

}  // namespace nano
