#include "nano/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "nano/errors.hpp"

namespace nano {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string_view unquote(std::string_view s) {
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("invalid value '" + std::string(value) + "' for key '" + std::string(key) + "'");
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("invalid boolean '" + std::string(value) + "' for key '" + std::string(key) + "'");
}

std::vector<std::string_view> split_list(std::string_view text) {
  std::vector<std::string_view> items;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t pos = text.find(',', start);
    const std::string_view item = trim(text.substr(start, pos - start));
    if (!item.empty()) items.push_back(item);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return items;
}

}  // namespace

std::vector<FilterId> parse_filter_list(std::string_view text) {
  std::vector<FilterId> ids;
  for (std::string_view item : split_list(text)) ids.push_back(parse_filter_id(item));
  if (ids.empty()) throw ConfigError("filter list is empty");
  return ids;
}

std::vector<double> parse_level_list(std::string_view text) {
  std::vector<double> levels;
  for (std::string_view item : split_list(text)) levels.push_back(parse_number<double>("levels", item));
  return levels;
}

std::vector<std::pair<std::string, std::string>> parse_config_text(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = text.find('\n', pos);
    std::string_view line = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    ++line_no;
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;

    if (const auto hash = line.find_first_of("#;"); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("config line " + std::to_string(line_no) + ": unterminated section");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = unquote(trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    entries.emplace_back(section.empty() ? std::string(key) : section + "." + std::string(key),
                         std::string(value));
  }
  return entries;
}

void apply_config_value(BenchConfig& cfg, std::string_view key, std::string_view value) {
  NanoConfig& nano = cfg.run.nano;
  if (key == "model") {
    cfg.scenario.model = parse_model_id(value);
  } else if (key == "horizon") {
    cfg.scenario.horizon = parse_number<int>(key, value);
  } else if (key == "trials") {
    cfg.scenario.trials = parse_number<int>(key, value);
  } else if (key == "seed") {
    cfg.scenario.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "mm") {
    cfg.run.rule = SigmaPointRule::parse(value);
  } else if (key == "filter" || key == "filter.ids") {
    cfg.filters = parse_filter_list(value);
  } else if (key == "out") {
    cfg.out_dir = std::string(value);
  } else if (key == "timing") {
    cfg.run.record_timing = parse_bool(key, value);
  } else if (key == "fm.matrix_mode") {
    if (value == "literal") {
      cfg.scenario.fm_mode = FmMatrixMode::kLiteral;
    } else if (value == "grouped") {
      cfg.scenario.fm_mode = FmMatrixMode::kGrouped;
    } else {
      throw ConfigError("fm.matrix_mode must be literal or grouped");
    }
  } else if (key == "mismatch.kind") {
    cfg.scenario.mismatch.kind = parse_mismatch_kind(value);
  } else if (key == "mismatch.level") {
    cfg.scenario.mismatch.level = parse_number<double>(key, value);
  } else if (key == "mismatch.levels") {
    cfg.levels = parse_level_list(value);
  } else if (key == "nano.gamma") {
    nano.gamma = parse_number<double>(key, value);
  } else if (key == "nano.max_iters") {
    nano.max_iters = parse_number<int>(key, value);
  } else if (key == "nano.hessian") {
    nano.hessian = parse_hessian_mode(value);
  } else if (key == "nano.cov_update") {
    nano.cov_update = parse_cov_update(value);
  } else if (key == "nano.epsilon") {
    nano.epsilon = parse_number<double>(key, value);
  } else if (key == "nano.exponent_mode") {
    nano.exponent_mode = parse_exponent_mode(value);
  } else if (key == "nano.exp_order") {
    nano.exp_order = parse_number<int>(key, value);
  } else if (key == "nano.step_size") {
    nano.step_size = parse_number<double>(key, value);
  } else if (key == "nano.init") {
    if (value == "prior") {
      nano.init = InitMode::kPrior;
    } else if (value == "ekf") {
      nano.init = InitMode::kEkf;
    } else {
      throw ConfigError("nano.init must be prior or ekf");
    }
  } else {
    throw ConfigError("unknown config key '" + std::string(key) + "'");
  }
}

void load_config_file(BenchConfig& cfg, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  for (const auto& [key, value] : parse_config_text(buf.str())) apply_config_value(cfg, key, value);
}

}  // namespace nano
