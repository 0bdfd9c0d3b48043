#include <array>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nano/bench.hpp"
#include "nano/errors.hpp"

namespace nano {

namespace {

std::string optional_number(const std::optional<double>& v) { return v ? format_number(*v) : ""; }

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double(std::string_view text) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError("malformed number '" + std::string(text) + "'");
  }
  return value;
}

int parse_int(std::string_view text) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError("malformed integer '" + std::string(text) + "'");
  }
  return value;
}

std::optional<double> parse_optional(std::string_view text) {
  if (text.empty()) return std::nullopt;
  return parse_double(text);
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

std::string format_trials_csv(const std::vector<BenchmarkReport>& reports) {
  std::ostringstream out;
  out << kTrialsCsvHeader << '\n';
  for (const BenchmarkReport& report : reports) {
    for (const FilterSummary& s : report.filters) {
      for (const TrialResult& t : s.trials) {
        out << report.scenario << ',' << to_string(s.filter) << ',' << t.trial << ','
            << optional_number(t.rmse) << ',' << (t.diverged ? 1 : 0) << ',' << t.steps << ','
            << optional_number(t.update_ms) << '\n';
      }
    }
  }
  return out.str();
}

std::string format_trajectories_csv(const std::vector<BenchmarkReport>& reports) {
  std::ostringstream out;
  out << "scenario,filter,trial,trajectory_hash\n";
  for (const BenchmarkReport& report : reports) {
    for (const FilterSummary& s : report.filters) {
      for (const TrialResult& t : s.trials) {
        out << report.scenario << ',' << to_string(s.filter) << ',' << t.trial << ','
            << std::hex << t.trajectory_hash << std::dec << '\n';
      }
    }
  }
  return out.str();
}

std::string format_summary(const BenchmarkReport& report) {
  std::ostringstream out;
  out << "scenario = " << report.scenario << '\n'
      << "rule = " << report.rule << '\n'
      << "rng = " << report.rng << " (seed = base seed + trial index)\n"
      << "seed = " << report.seed << '\n'
      << "horizon = " << report.horizon << '\n';
  for (const FilterSummary& s : report.filters) {
    out << '\n'
        << '[' << to_string(s.filter) << "]\n"
        << "trials = " << s.trials.size() << '\n'
        << "diverged = " << s.diverged << '\n'
        << "mean_rmse = " << format_number(s.mean_rmse) << '\n'
        << "median_rmse = " << format_number(s.median_rmse) << '\n'
        << "q1_rmse = " << format_number(s.q1_rmse) << '\n'
        << "q3_rmse = " << format_number(s.q3_rmse) << '\n';
    if (s.mean_update_ms) out << "mean_update_ms = " << format_number(*s.mean_update_ms) << '\n';
  }
  return out.str();
}

std::string format_sweep_csv(const SweepTable& table) {
  std::ostringstream out;
  out << "scenario,mismatch,level,filter,mean_rmse,diverged,trials\n";
  for (const SweepCell& c : table.cells) {
    out << to_string(table.model) << ',' << to_string(table.kind) << ',' << format_number(c.level) << ','
        << to_string(c.filter) << ',' << format_number(c.mean_rmse) << ',' << c.diverged << ','
        << c.trials << '\n';
  }
  return out.str();
}

std::string format_ablation_csv(const AblationTable& table) {
  std::ostringstream out;
  out << "model,filter,rmse,update_ms,diverged,trials\n";
  for (const AblationCell& c : table.cells) {
    out << to_string(c.model) << ',' << to_string(c.filter) << ','
        << (c.marked_diverged() ? std::string("diverge") : format_number(c.mean_rmse)) << ','
        << optional_number(c.mean_update_ms) << ',' << c.diverged << ',' << c.trials << '\n';
  }
  return out.str();
}

std::string format_ablation_text(const AblationTable& table) {
  std::ostringstream out;
  out << "model      filter      rmse        update_ms   diverged\n";
  for (const AblationCell& c : table.cells) {
    char line[128];
    const std::string rmse_text = c.marked_diverged() ? "diverge" : format_number(c.mean_rmse);
    std::snprintf(line, sizeof line, "%-10s %-11s %-11.11s %-11s %d/%d\n", to_string(c.model).c_str(),
                  to_string(c.filter).c_str(), rmse_text.c_str(),
                  c.mean_update_ms ? std::to_string(*c.mean_update_ms).c_str() : "-", c.diverged, c.trials);
    out << line;
  }
  return out.str();
}

std::vector<ParsedTrialRow> parse_trials_csv(std::string_view text) {
  std::vector<ParsedTrialRow> rows;
  std::size_t pos = text.find('\n');
  if (text.substr(0, pos) != kTrialsCsvHeader) throw ConfigError("trials CSV: unexpected header");
  while (pos != std::string_view::npos && pos + 1 < text.size()) {
    const std::size_t end = text.find('\n', pos + 1);
    const std::string_view line = text.substr(pos + 1, end - pos - 1);
    pos = end;
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 7) throw ConfigError("trials CSV: expected 7 fields in '" + std::string(line) + "'");
    ParsedTrialRow row;
    row.scenario = std::string(fields[0]);
    row.filter = parse_filter_id(fields[1]);
    row.result.trial = parse_int(fields[2]);
    row.result.rmse = parse_optional(fields[3]);
    row.result.diverged = fields[4] == "1";
    row.result.steps = parse_int(fields[5]);
    row.result.update_ms = parse_optional(fields[6]);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_file(const std::string& path, std::string_view contents) {
  std::error_code ec;
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
  if (ec) throw IoError("cannot create directory for '" + path + "': " + ec.message());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace nano
