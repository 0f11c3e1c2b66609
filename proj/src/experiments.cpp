#include "superstar/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include "json.hpp"
#include "superstar/rational.hpp"
#include "superstar/rng.hpp"

namespace superstar {

namespace {

constexpr const char* kGridHeader = "k,leaves,reservoir,r,runs";

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string trim_right(std::string s) {
  s.erase(s.find_last_not_of(' ') + 1);
  return s;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

template <class Int>
Int parse_int(const std::string& text, std::size_t line, const char* name) {
  Int value{};
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || text.empty()) {
    throw GridParseError(line, std::string("bad ") + name + " '" + text + "'");
  }
  return value;
}

std::string fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

std::string general(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", value);
  return buf;
}

double reference_for(const GridCell& cell) {
  return cell.superstar ? std::pow(cell.r, -static_cast<double>(cell.spec.k)) : 0.0;
}

ResultRow run_cell(const ExperimentGrid& grid, std::size_t index) {
  ResultRow row;
  row.cell = grid.cells[index];
  row.seed = cell_seed(grid.master_seed, index);
  row.engine = grid.engine == Engine::Lazy && row.cell.spec.k < 3 ? Engine::Lumped : grid.engine;
  row.reference = reference_for(row.cell);
  EstimateOptions options;
  options.r = row.cell.r;
  options.runs = row.cell.runs;
  options.master_seed = row.seed;
  options.engine = row.engine;
  options.confidence = grid.confidence;
  options.interval = grid.interval;
  options.step_budget = grid.step_budget;
  const auto start = std::chrono::steady_clock::now();
  try {
    const FixationEstimate est = estimate_fixation(row.cell.spec, options);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    row = make_result_row(row.cell, est, wall);
    row.seed = options.master_seed;
    return row;
  } catch (const std::exception& e) {
    row.failed = true;
    row.error = e.what();
  }
  row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

struct RowKey {
  std::uint32_t k;
  std::uint32_t leaves;
  std::uint32_t reservoir;
  auto operator<=>(const RowKey&) const = default;
};

}  // namespace

ResultRow make_result_row(const GridCell& cell, const FixationEstimate& estimate, double wall_seconds) {
  ResultRow row;
  row.cell = cell;
  row.engine = estimate.engine;
  row.seed = estimate.master_seed;
  row.fixations = estimate.fixations;
  row.trials = estimate.trials;
  row.p_hat = estimate.p_hat;
  row.ci = estimate.ci;
  row.extinction_hat = 1.0 - estimate.p_hat;
  row.reference = reference_for(cell);
  row.wall_seconds = wall_seconds;
  return row;
}

GridParseError::GridParseError(std::size_t line, const std::string& message)
    : std::invalid_argument("grid line " + std::to_string(line) + ": " + message), line_(line) {}

std::vector<GridCell> parse_grid(std::istream& in) {
  std::vector<GridCell> cells;
  bool header_seen = false;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string text = trim(raw);
    if (text.empty() || text.front() == '#') continue;
    std::string compact;
    std::copy_if(text.begin(), text.end(), std::back_inserter(compact), [](char c) { return c != ' ' && c != '\t'; });
    if (compact == kGridHeader) {
      if (header_seen) throw GridParseError(line, "duplicate header");
      header_seen = true;
      continue;
    }
    if (!header_seen) throw GridParseError(line, std::string("expected header '") + kGridHeader + "'");
    const auto fields = split(text);
    if (fields.size() != 5) throw GridParseError(line, "expected 5 fields, found " + std::to_string(fields.size()));
    GridCell cell;
    cell.spec.k = parse_int<std::uint32_t>(fields[0], line, "k");
    cell.spec.leaves = parse_int<std::uint32_t>(fields[1], line, "leaves");
    cell.spec.reservoir = parse_int<std::uint32_t>(fields[2], line, "reservoir");
    cell.r_text = fields[3];
    try {
      cell.r = to_double(parse_rational(fields[3]));
    } catch (const std::invalid_argument&) {
      throw GridParseError(line, "bad r '" + fields[3] + "'");
    }
    if (!(cell.r > 0.0) || !std::isfinite(cell.r)) throw GridParseError(line, "r must be positive");
    cell.runs = parse_int<std::uint64_t>(fields[4], line, "runs");
    if (cell.runs == 0) throw GridParseError(line, "runs must be at least 1");
    try {
      cell.spec.validate();
    } catch (const std::invalid_argument& e) {
      throw GridParseError(line, e.what());
    }
    cells.push_back(std::move(cell));
  }
  if (!header_seen) throw GridParseError(line, std::string("missing header '") + kGridHeader + "'");
  return cells;
}

std::uint64_t cell_seed(std::uint64_t master_seed, std::size_t index) { return derive_seed(master_seed, index); }

std::vector<ResultRow> run_grid(const ExperimentGrid& grid) {
  std::vector<ResultRow> rows(grid.cells.size());
  const std::size_t workers = std::clamp<std::size_t>(grid.threads, 1, std::max<std::size_t>(grid.cells.size(), 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < grid.cells.size(); ++i) rows[i] = run_cell(grid, i);
    return rows;
  }
  std::mutex lock;
  std::size_t next = 0;
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      while (true) {
        std::size_t i;
        {
          std::lock_guard guard(lock);
          if (next == grid.cells.size()) return;
          i = next++;
        }
        rows[i] = run_cell(grid, i);
      }
    });
  }
  for (auto& th : pool) th.join();
  return rows;
}

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows, bool timing) {
  out << kResultsHeader << '\n';
  for (const auto& row : rows) {
    const auto& c = row.cell;
    if (c.superstar) {
      out << c.spec.k << ',' << c.r_text << ',' << c.spec.leaves << ',' << c.spec.reservoir << ',';
    } else {
      out << ',' << c.r_text << ",,,";
    }
    out << c.runs << ',';
    if (row.failed) {
      out << ",,,,,";
    } else {
      out << row.fixations << ',' << fixed(row.p_hat, 6) << ',' << fixed(row.ci.lower, 6) << ','
          << fixed(row.ci.upper, 6) << ',' << fixed(row.extinction_hat, 6) << ',';
    }
    if (c.superstar) out << general(row.reference);
    out << ',' << to_string(row.engine) << ',' << row.seed << ',';
    if (timing) out << fixed(row.wall_seconds, 3);
    out << '\n';
  }
}

void write_results_json_lines(std::ostream& out, const std::vector<ResultRow>& rows, bool timing) {
  for (const auto& row : rows) {
    const auto& c = row.cell;
    nlohmann::ordered_json j;
    if (c.superstar) j["k"] = c.spec.k;
    j["r"] = c.r;
    if (c.superstar) {
      j["leaves"] = c.spec.leaves;
      j["reservoir"] = c.spec.reservoir;
    }
    j["runs"] = c.runs;
    if (row.failed) {
      j["error"] = row.error;
    } else {
      j["fixations"] = row.fixations;
      j["p_hat"] = std::stod(fixed(row.p_hat, 6));
      j["ci_lo"] = std::stod(fixed(row.ci.lower, 6));
      j["ci_hi"] = std::stod(fixed(row.ci.upper, 6));
      j["extinction_hat"] = std::stod(fixed(row.extinction_hat, 6));
    }
    if (c.superstar) j["ref_r_pow_minus_k"] = std::stod(general(row.reference));
    j["engine"] = std::string(to_string(row.engine));
    j["seed"] = row.seed;
    if (timing) j["wall_s"] = std::stod(fixed(row.wall_seconds, 3));
    out << j.dump() << '\n';
  }
}

std::string emit_table(const std::vector<ResultRow>& rows) {
  std::set<RowKey> keys;
  std::vector<std::pair<double, std::string>> columns;
  std::map<std::pair<RowKey, std::string>, const ResultRow*> at;
  for (const auto& row : rows) {
    if (!row.cell.superstar) continue;
    const RowKey key{row.cell.spec.k, row.cell.spec.leaves, row.cell.spec.reservoir};
    keys.insert(key);
    if (std::none_of(columns.begin(), columns.end(), [&](const auto& c) { return c.second == row.cell.r_text; })) {
      columns.emplace_back(row.cell.r, row.cell.r_text);
    }
    at[{key, row.cell.r_text}] = &row;
  }
  std::stable_sort(columns.begin(), columns.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  constexpr int kWidth = 16;
  auto pad = [](std::string s, std::size_t w) {
    if (s.size() < w) s.insert(0, w - s.size(), ' ');
    return s;
  };
  std::string label_head = "k (l, m)";
  std::size_t label_width = label_head.size();
  std::map<RowKey, std::string> labels;
  for (const auto& key : keys) {
    labels[key] = std::to_string(key.k) + " (" + std::to_string(key.leaves) + ", " + std::to_string(key.reservoir) + ")";
    label_width = std::max(label_width, labels[key].size());
  }

  std::ostringstream out;
  out << label_head << std::string(label_width - label_head.size(), ' ');
  for (const auto& col : columns) out << pad("r = " + col.second, kWidth);
  out << '\n';
  for (const auto& key : keys) {
    std::string estimate_line = labels[key] + std::string(label_width - labels[key].size(), ' ');
    std::string interval_line(label_width, ' ');
    for (const auto& col : columns) {
      const auto it = at.find({key, col.second});
      std::string top, bottom;
      if (it == at.end()) {
        top = "-";
      } else if (it->second->failed) {
        top = "failed";
      } else {
        const ResultRow& row = *it->second;
        top = fixed(round_half_even(row.p_hat, 3), 3);
        bottom = "[" + fixed(round_half_even(row.ci.lower, 3), 3) + ", " + fixed(round_half_even(row.ci.upper, 3), 3) + "]";
      }
      estimate_line += pad(top, kWidth);
      interval_line += pad(bottom, kWidth);
    }
    out << trim_right(estimate_line) << '\n' << trim_right(interval_line) << '\n';
  }
  return out.str();
}

std::map<std::uint32_t, std::string> emit_plot_data(const std::vector<ResultRow>& rows) {
  std::map<std::uint32_t, std::vector<const ResultRow*>> by_k;
  for (const auto& row : rows) {
    if (!row.failed && row.cell.superstar) by_k[row.cell.spec.k].push_back(&row);
  }
  std::map<std::uint32_t, std::string> out;
  for (auto& [k, series] : by_k) {
    std::stable_sort(series.begin(), series.end(), [](const ResultRow* a, const ResultRow* b) {
      return std::tie(a->cell.spec.leaves, a->cell.spec.reservoir, a->cell.r) <
             std::tie(b->cell.spec.leaves, b->cell.spec.reservoir, b->cell.r);
    });
    std::ostringstream text;
    text << "r,extinction_hat,ci_lo_ext,ci_hi_ext,ref_r_pow_minus_k,leaves,reservoir\n";
    for (const ResultRow* row : series) {
      text << row->cell.r_text << ',' << fixed(row->extinction_hat, 6) << ',' << fixed(1.0 - row->ci.upper, 6) << ','
           << fixed(1.0 - row->ci.lower, 6) << ',' << general(row->reference) << ',' << row->cell.spec.leaves << ','
           << row->cell.spec.reservoir << '\n';
    }
    out[k] = text.str();
  }
  return out;
}

}  // namespace superstar
