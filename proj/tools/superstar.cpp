#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "superstar/confined.hpp"
#include "superstar/estimate.hpp"
#include "superstar/exact.hpp"
#include "superstar/experiments.hpp"
#include "superstar/graph.hpp"
#include "superstar/rational.hpp"
#include "superstar/restricted.hpp"

namespace {

using namespace superstar;

constexpr int kOk = 0;
constexpr int kRuntimeFailure = 1;
constexpr int kUsage = 2;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct GraphArgs {
  std::vector<std::uint32_t> superstar;
  std::size_t complete = 0;
  std::size_t star = 0;
  std::string file;

  void attach(CLI::App& cmd) {
    auto* s = cmd.add_option("--superstar", superstar, "Superstar S^k_{l,m} given as: K LEAVES RESERVOIR")->expected(3);
    auto* c = cmd.add_option("--complete", complete, "Complete graph on N vertices");
    auto* t = cmd.add_option("--star", star, "Star on N vertices (centre plus N-1 leaves)");
    auto* f = cmd.add_option("--graph", file, "Arc-list file: 'n <count>' then one 'u v' per line");
    s->excludes(c)->excludes(t)->excludes(f);
    c->excludes(t)->excludes(f);
    t->excludes(f);
  }

  bool is_superstar() const { return !superstar.empty(); }

  SuperstarSpec spec() const {
    SuperstarSpec out{superstar.at(0), superstar.at(1), superstar.at(2)};
    out.validate();
    return out;
  }

  DirectedGraph graph() const {
    if (is_superstar()) return build_superstar(spec());
    if (complete > 0) return build_complete(complete);
    if (star > 0) return build_star(star);
    if (!file.empty()) {
      std::ifstream in(file);
      if (!in) throw UsageError("cannot open graph file '" + file + "'");
      return read_arc_list(in);
    }
    throw UsageError("choose a graph: --superstar, --complete, --star or --graph");
  }
};

Rational parse_r(const std::string& text) {
  const Rational r = parse_rational(text);
  if (sgn(r) <= 0) throw UsageError("r must be positive");
  return r;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("MORAN_SEED"); env != nullptr && *env != '\0') {
    try {
      std::size_t used = 0;
      const std::string text(env);
      const unsigned long long value = std::stoull(text, &used);
      if (used == text.size() && text.front() != '-') return value;
    } catch (const std::exception&) {
    }
    throw UsageError(std::string("MORAN_SEED is not an unsigned integer: '") + env + "'");
  }
  return 1;
}

IntervalMethod parse_interval(const std::string& name) {
  if (name == "agresti-coull") return IntervalMethod::AgrestiCoull;
  if (name == "wald") return IntervalMethod::Wald;
  throw UsageError("unknown interval '" + name + "' (agresti-coull, wald)");
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_.open(path, std::ios::binary);
    if (!file_) throw std::runtime_error("cannot write '" + path + "'");
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

struct SimulateArgs {
  GraphArgs graph;
  std::string r;
  std::uint64_t runs = 1000;
  std::optional<std::uint64_t> seed;
  std::string engine = "event";
  double confidence = 0.995;
  std::string interval = "agresti-coull";
  std::string placement = "uniform";
  unsigned threads = 1;
  std::optional<std::uint64_t> step_budget;
  std::string format = "csv";
  std::string output;
  bool no_timing = false;
};

int cmd_simulate(const SimulateArgs& a) {
  const double r = to_double(parse_r(a.r));
  EstimateOptions options;
  options.r = r;
  options.runs = a.runs;
  options.master_seed = resolve_seed(a.seed);
  options.confidence = a.confidence;
  options.interval = parse_interval(a.interval);
  options.placement = parse_placement(a.placement);
  options.threads = a.threads;
  options.step_budget = a.step_budget;

  GridCell cell;
  cell.r = r;
  cell.r_text = a.r;
  cell.runs = a.runs;
  cell.superstar = a.graph.is_superstar();

  std::optional<DirectedGraph> graph;
  const bool confined = a.engine == "confined";
  if (confined) {
    if (!cell.superstar) throw UsageError("the confined engine needs --superstar");
    cell.spec = a.graph.spec();
    if (cell.spec.k != 5) throw UsageError("the confined engine needs k = 5");
  } else {
    options.engine = parse_engine(a.engine);
    if (cell.superstar) {
      cell.spec = a.graph.spec();
    } else {
      graph = a.graph.graph();
    }
  }
  Output out(a.output);

  const auto start = std::chrono::steady_clock::now();
  FixationEstimate est;
  if (confined) {
    est = estimate_centre_event_probability(cell.spec, r, a.runs, options.master_seed, a.confidence);
  } else if (graph) {
    est = estimate_fixation(*graph, options);
  } else {
    est = estimate_fixation(cell.spec, options);
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const std::vector<ResultRow> rows{make_result_row(cell, est, wall)};

  if (a.format == "csv") {
    write_results_csv(out.stream(), rows, !a.no_timing);
  } else if (a.format == "json") {
    write_results_json_lines(out.stream(), rows, !a.no_timing);
  } else {
    const auto& row = rows.front();
    out.stream() << "p_hat = " << row.p_hat << "  " << row.fixations << "/" << row.trials << "  "
                 << row.ci.confidence * 100 << "% CI [" << row.ci.lower << ", " << row.ci.upper << "]  engine "
                 << (confined ? "confined" : to_string(row.engine)) << "  seed " << row.seed << '\n';
  }
  return kOk;
}

struct ExactArgs {
  GraphArgs graph;
  std::string r;
  std::optional<VertexId> start;
  bool use_float = false;
  bool per_vertex = false;
};

int cmd_exact(const ExactArgs& a) {
  const Rational r = parse_r(a.r);
  const DirectedGraph g = a.graph.graph();
  if (a.start && *a.start >= g.size()) throw UsageError("--start is not a vertex of the graph");
  std::cout.precision(12);
  if (a.use_float) {
    if (a.per_vertex) {
      const auto values = float_fixation_per_vertex(g, to_double(r));
      for (std::size_t v = 0; v < values.size(); ++v) std::cout << v << ' ' << values[v] << '\n';
    } else {
      std::cout << float_fixation_full(g, to_double(r), a.start) << '\n';
    }
    return kOk;
  }
  if (a.per_vertex) {
    const auto values = exact_fixation_per_vertex(g, r);
    for (std::size_t v = 0; v < values.size(); ++v) {
      std::cout << v << ' ' << to_string(values[v]) << " ≈ " << to_decimal(values[v]) << '\n';
    }
  } else {
    const Rational value = exact_fixation_full(g, r, a.start);
    std::cout << to_string(value) << " ≈ " << to_decimal(value) << '\n';
  }
  return kOk;
}

struct RestrictedArgs {
  std::string leaves;
  std::string reservoir;
  std::string r;
  bool limit_only = false;
};

void print_quantity(const char* name, const Rational& value) {
  std::cout << name << " ≈ " << to_decimal(value) << "  exact " << to_string(value) << '\n';
}

int cmd_restricted(const RestrictedArgs& a) {
  const Rational r = parse_r(a.r);
  const Rational h = limit_h(r), j = j_of_r(r);
  if (a.limit_only) {
    print_quantity("h", h);
    print_quantity("j", j);
    return kOk;
  }
  if (a.leaves.empty() || a.reservoir.empty()) throw UsageError("--L and --M are required without --limit-only");
  const Rational leaves = parse_rational(a.leaves), reservoir = parse_rational(a.reservoir);
  const TheoremQuantities t = theorem_bound(leaves, reservoir, r);
  print_quantity("q", t.centre_event);
  print_quantity("h", t.limit);
  print_quantity("j", t.j);
  print_quantity("p", t.off_reservoir);
  print_quantity("bound", t.bound);
  print_quantity("gap", Rational(t.limit - t.centre_event));
  return kOk;
}

struct GridArgs {
  std::string file;
  std::string output;
  std::string format = "csv";
  std::string table;
  std::string plot_dir;
  unsigned threads = 1;
  std::optional<std::uint64_t> seed;
  std::string engine = "lazy";
  double confidence = 0.995;
  std::string interval = "agresti-coull";
  std::optional<std::uint64_t> step_budget;
  bool no_timing = false;
};

int cmd_grid(const GridArgs& a) {
  ExperimentGrid grid;
  {
    std::ifstream in(a.file);
    if (!in) throw UsageError("cannot open grid file '" + a.file + "'");
    grid.cells = parse_grid(in);
  }
  grid.engine = parse_engine(a.engine);
  grid.master_seed = resolve_seed(a.seed);
  if (!(a.confidence > 0.0 && a.confidence < 1.0)) throw UsageError("confidence must lie in (0, 1)");
  grid.confidence = a.confidence;
  grid.interval = parse_interval(a.interval);
  grid.threads = a.threads;
  grid.step_budget = a.step_budget;
  Output out(a.output);

  const auto rows = run_grid(grid);
  if (a.format == "csv") {
    write_results_csv(out.stream(), rows, !a.no_timing);
  } else {
    write_results_json_lines(out.stream(), rows, !a.no_timing);
  }
  if (!a.table.empty()) {
    Output table(a.table);
    table.stream() << emit_table(rows);
  }
  if (!a.plot_dir.empty()) {
    std::filesystem::create_directories(a.plot_dir);
    for (const auto& [k, text] : emit_plot_data(rows)) {
      const auto path = std::filesystem::path(a.plot_dir) / ("extinction_k" + std::to_string(k) + ".csv");
      std::ofstream file(path, std::ios::binary);
      if (!file) throw std::runtime_error("cannot write '" + path.string() + "'");
      file << text;
    }
  }
  int status = kOk;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].failed) continue;
    std::cerr << "cell " << i << " failed: " << rows[i].error << '\n';
    status = kRuntimeFailure;
  }
  return status;
}

struct GraphDumpArgs {
  GraphArgs graph;
  bool validate = false;
  std::string output;
};

int cmd_graph(const GraphDumpArgs& a) {
  const DirectedGraph g = a.graph.graph();
  Output out(a.output);
  if (a.validate) {
    const ValidationReport v = validate_graph(g);
    out.stream() << "vertices " << v.vertex_count << "\narcs " << v.arc_count << "\nmin_out_degree "
                 << v.min_out_degree << "\nzero_out_degree " << v.zero_out_degree_vertices << "\nself_loops "
                 << v.self_loops << "\nduplicate_arcs " << v.duplicate_arcs << "\nstrongly_connected "
                 << (v.strongly_connected ? "yes" : "no") << "\nok " << (v.ok() ? "yes" : "no") << '\n';
    return v.process_well_defined() ? kOk : kRuntimeFailure;
  }
  write_arc_list(out.stream(), g);
  return kOk;
}

template <class Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fixation probabilities of the Moran process on superstars and other directed graphs"};
  app.require_subcommand(1);

  const auto engines = CLI::IsMember({"naive", "event", "event-driven", "lumped", "lazy", "confined"});
  const auto intervals = CLI::IsMember({"agresti-coull", "wald"});

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo fixation estimate from one initial mutant");
  sim.graph.attach(*simulate);
  simulate->add_option("--r", sim.r, "Mutant fitness, decimal or p/q")->required();
  simulate->add_option("--runs", sim.runs, "Number of runs")->capture_default_str()->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim.seed, "Master seed (default: $MORAN_SEED, else 1)");
  simulate->add_option("--engine", sim.engine, "naive, event, lumped, lazy (superstar, k >= 3) or confined (k = 5)")
      ->capture_default_str()
      ->check(engines);
  simulate->add_option("--confidence", sim.confidence, "Interval confidence level")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--interval", sim.interval, "agresti-coull or wald")->capture_default_str()->check(intervals);
  simulate->add_option("--placement", sim.placement, "Initial mutant: uniform, centre, reservoir or chain")
      ->capture_default_str();
  simulate->add_option("--threads", sim.threads, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  simulate->add_option("--step-budget", sim.step_budget, "Abort a run after this many steps");
  simulate->add_option("--format", sim.format, "csv, json (json-lines) or table")
      ->capture_default_str()
      ->check(CLI::IsMember({"csv", "json", "table"}));
  simulate->add_option("--output,-o", sim.output, "Output file (default stdout)");
  simulate->add_flag("--no-timing", sim.no_timing, "Leave wall_s empty so reruns are byte-identical");

  ExactArgs ex;
  auto* exact = app.add_subcommand("exact", "Fixation probability by solving the full Markov chain");
  ex.graph.attach(*exact);
  exact->add_option("--r", ex.r, "Mutant fitness, decimal or p/q")->required();
  exact->add_option("--start", ex.start, "Start vertex (default: uniform average)");
  exact->add_flag("--float", ex.use_float, "Double precision solve (up to " + std::to_string(kFloatVertexCap) +
                                               " vertices instead of " + std::to_string(kExactVertexCap) + ")");
  exact->add_flag("--per-vertex", ex.per_vertex, "Print the value for every start vertex");

  RestrictedArgs rs;
  auto* restricted = app.add_subcommand("restricted", "Centre-event probability q, its limit h, j and the bound");
  restricted->add_option("--L", rs.leaves, "Number of leaves");
  restricted->add_option("--M", rs.reservoir, "Reservoir size");
  restricted->add_option("--r", rs.r, "Mutant fitness, decimal or p/q")->required();
  restricted->add_flag("--limit-only", rs.limit_only, "Print only h(r) and j(r)");

  GridArgs gr;
  auto* grid = app.add_subcommand("grid", "Run a grid of superstar cells");
  grid->add_option("--grid,grid", gr.file, "Grid CSV with header k,leaves,reservoir,r,runs")->required();
  grid->add_option("--output,-o", gr.output, "Results file (default stdout)");
  grid->add_option("--format", gr.format, "csv or json (json-lines)")
      ->capture_default_str()
      ->check(CLI::IsMember({"csv", "json"}));
  grid->add_option("--table", gr.table, "Write the rendered k by r table here ('-' for stdout)");
  grid->add_option("--plot-dir", gr.plot_dir, "Write extinction_k<K>.csv series into this directory");
  grid->add_option("--threads", gr.threads, "Cells run concurrently")->capture_default_str()->check(CLI::PositiveNumber);
  grid->add_option("--seed", gr.seed, "Master seed (default: $MORAN_SEED, else 1)");
  grid->add_option("--engine", gr.engine, "naive, event, lumped or lazy")
      ->capture_default_str()
      ->check(CLI::IsMember({"naive", "event", "event-driven", "lumped", "lazy"}));
  grid->add_option("--confidence", gr.confidence, "Interval confidence level")->capture_default_str();
  grid->add_option("--interval", gr.interval, "agresti-coull or wald")->capture_default_str()->check(intervals);
  grid->add_option("--step-budget", gr.step_budget, "Abort a run after this many steps; the cell is marked failed");
  grid->add_flag("--no-timing", gr.no_timing, "Leave wall_s empty so reruns are byte-identical");

  GraphDumpArgs gd;
  auto* graph = app.add_subcommand("graph", "Write a graph as an arc list, or check it");
  gd.graph.attach(*graph);
  graph->add_flag("--validate", gd.validate, "Print a structural report instead of the arcs");
  graph->add_option("--output,-o", gd.output, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  if (simulate->parsed()) return guarded([&] { return cmd_simulate(sim); });
  if (exact->parsed()) return guarded([&] { return cmd_exact(ex); });
  if (restricted->parsed()) return guarded([&] { return cmd_restricted(rs); });
  if (grid->parsed()) return guarded([&] { return cmd_grid(gr); });
  return guarded([&] { return cmd_graph(gd); });
}
