// SPDX-License-Identifier: Apache-2.0
#include "anwt/report.hpp"

#include <charconv>
#include <cmath>
#include <vector>

namespace anwt {
namespace {

void write_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) out << ',';
    out << cells[i];
  }
  out << '\n';
}

void append_bounds(std::vector<std::string>& cells, const BoundReport& b) {
  for (double v : b.values()) cells.push_back(format_number(v));
  cells.push_back(b.regime.large_array ? "1" : "0");
  cells.push_back(b.regime.high_snr ? "1" : "0");
  cells.push_back(b.regime.low_snr ? "1" : "0");
}

void append_bound_names(std::vector<std::string>& cells) {
  for (auto name : BoundReport::kNames) cells.emplace_back(name);
  cells.emplace_back("regime_large_array");
  cells.emplace_back("regime_high_snr");
  cells.emplace_back("regime_low_snr");
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  if (result.rows.empty()) return;
  std::vector<std::string> header{std::string(to_string(result.sweep_param))};
  for (const char* unit : {"", "_shz"}) {
    for (auto name : RateReport::kNames) header.push_back("mean_" + std::string(name) + unit);
    for (auto name : RateReport::kNames) header.push_back("stderr_" + std::string(name) + unit);
  }
  append_bound_names(header);
  header.emplace_back("n_trials");
  header.emplace_back("master_seed");
  header.emplace_back("eve_strategy");
  for (const auto& [key, value] : config_entries(result.rows.front().config)) header.push_back(key);
  write_row(out, header);

  for (const auto& row : result.rows) {
    std::vector<std::string> cells;
    cells.push_back(result.sweep_param == SweepParam::none ? "" : format_number(row.param_value));
    for (const RateReport* r : {&row.mean, &row.stderr_}) {
      for (double v : r->values()) cells.push_back(format_number(v));
    }
    const RateReport mean_shz = row.mean.per_shz(row.config);
    const RateReport err_shz = row.stderr_.per_shz(row.config);
    for (const RateReport* r : {&mean_shz, &err_shz}) {
      for (double v : r->values()) cells.push_back(format_number(v));
    }
    append_bounds(cells, row.bounds);
    cells.push_back(std::to_string(row.n_trials));
    cells.push_back(std::to_string(row.master_seed));
    cells.emplace_back(to_string(result.eve_strategy));
    for (const auto& [key, value] : config_entries(row.config)) cells.push_back(value);
    write_row(out, cells);
  }
}

void write_bounds_csv(std::ostream& out, const SystemConfig& c, const BoundReport& b) {
  std::vector<std::string> header;
  append_bound_names(header);
  const auto entries = config_entries(c);
  for (const auto& [key, value] : entries) header.push_back(key);
  write_row(out, header);
  std::vector<std::string> cells;
  append_bounds(cells, b);
  for (const auto& [key, value] : entries) cells.push_back(value);
  write_row(out, cells);
}

}  // namespace anwt
