#pragma once

// Experiment grids over superstar cells, their results, and the renderings
// used for the fixation table and the log-log extinction series.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "superstar/estimate.hpp"
#include "superstar/graph.hpp"
#include "superstar/stats.hpp"

namespace superstar {

struct GridCell {
  SuperstarSpec spec;
  /// False for a single estimate on some other graph; its k, leaves,
  /// reservoir and reference fields are then written empty.
  bool superstar = true;
  double r = 1.0;
  std::string r_text;  // the literal as written, echoed in outputs
  std::uint64_t runs = 1;
};

struct ExperimentGrid {
  std::vector<GridCell> cells;
  /// Lazy cells with k = 2 fall back to the lumped engine.
  Engine engine = Engine::Lazy;
  std::uint64_t master_seed = 1;
  double confidence = 0.995;
  IntervalMethod interval = IntervalMethod::AgrestiCoull;
  /// Cells run concurrently on this many threads; each cell is single-threaded.
  unsigned threads = 1;
  std::optional<std::uint64_t> step_budget;
};

struct ResultRow {
  GridCell cell;
  Engine engine = Engine::Lazy;
  std::uint64_t seed = 0;
  bool failed = false;
  std::string error;
  std::uint64_t fixations = 0;
  std::uint64_t trials = 0;
  double p_hat = 0.0;
  ConfidenceInterval ci;
  double extinction_hat = 1.0;
  double reference = 0.0;  // r^-k
  double wall_seconds = 0.0;
};

/// Row for `cell` from a finished estimate; fills the derived fields.
ResultRow make_result_row(const GridCell& cell, const FixationEstimate& estimate, double wall_seconds);

class GridParseError : public std::invalid_argument {
 public:
  GridParseError(std::size_t line, const std::string& message);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Reads cells from CSV with the header `k,leaves,reservoir,r,runs`. Blank
/// lines and lines starting with '#' are skipped. Throws GridParseError on a
/// missing or repeated header, a malformed row, or an invalid cell.
std::vector<GridCell> parse_grid(std::istream& in);

/// Seed of cell `index`: derive_seed(master_seed, index).
std::uint64_t cell_seed(std::uint64_t master_seed, std::size_t index);

/// One row per cell in grid order. A cell that throws is marked failed and
/// the others still run.
std::vector<ResultRow> run_grid(const ExperimentGrid& grid);

inline constexpr const char* kResultsHeader =
    "k,r,leaves,reservoir,runs,fixations,p_hat,ci_lo,ci_hi,extinction_hat,ref_r_pow_minus_k,engine,seed,wall_s";

/// Header plus one line per row. Failed rows leave the measured fields
/// empty; `timing == false` leaves wall_s empty so reruns compare equal.
void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows, bool timing = true);
/// One JSON object per line with the CSV field names; failed rows carry
/// "error".
void write_results_json_lines(std::ostream& out, const std::vector<ResultRow>& rows, bool timing = true);

/// k by r grid: each estimate to 3 decimals with its interval on the line
/// beneath. Rows are keyed by (k, leaves, reservoir), columns by r.
std::string emit_table(const std::vector<ResultRow>& rows);

/// Per-k CSV series
/// `r,extinction_hat,ci_lo_ext,ci_hi_ext,ref_r_pow_minus_k,leaves,reservoir`
/// sorted by (leaves, reservoir, r); the extinction interval reflects the
/// fixation one. Failed rows are left out.
std::map<std::uint32_t, std::string> emit_plot_data(const std::vector<ResultRow>& rows);

}  // namespace superstar
