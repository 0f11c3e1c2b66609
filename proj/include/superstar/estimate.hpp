#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "superstar/graph.hpp"
#include "superstar/moran.hpp"
#include "superstar/stats.hpp"

namespace superstar {

enum class Engine : std::uint8_t { Naive, EventDriven, Lumped, Lazy, Confined };

std::string_view to_string(Engine engine) noexcept;
/// Accepts "naive", "event" / "event-driven", "lumped", "lazy". Throws std::invalid_argument.
Engine parse_engine(std::string_view name);

/// Where the initial single mutant is placed. Class-restricted placements
/// need role tags (generated superstars and stars carry them).
enum class Placement : std::uint8_t { Uniform, Centre, Reservoir, Chain };

std::string_view to_string(Placement placement) noexcept;
Placement parse_placement(std::string_view name);

struct EstimateOptions {
  double r = 1.0;
  std::uint64_t runs = 1;
  std::uint64_t master_seed = 1;
  Engine engine = Engine::EventDriven;
  double confidence = 0.995;
  IntervalMethod interval = IntervalMethod::AgrestiCoull;
  Placement placement = Placement::Uniform;
  unsigned threads = 1;
  std::optional<std::uint64_t> step_budget;
};

struct FixationEstimate {
  std::uint64_t fixations = 0;
  std::uint64_t trials = 0;
  double p_hat = 0.0;
  ConfidenceInterval ci;
  Engine engine = Engine::EventDriven;
  std::uint64_t master_seed = 0;
  /// Sum of AbsorptionOutcome::steps over all runs.
  std::uint64_t total_steps = 0;
};

/// Estimates the fixation probability from a single initial mutant. Run i
/// uses the generator make_rng(master_seed, i) both to place the mutant and
/// to drive the process, so the result does not depend on thread count.
/// Throws std::invalid_argument for runs == 0 or for the lumped and lazy engines,
/// which need a SuperstarSpec.
FixationEstimate estimate_fixation(const DirectedGraph& g, const EstimateOptions& options);

/// As above on S^k_{l,m}. The naive and event-driven engines build the
/// full graph; the lumped and lazy engines work on counts.
FixationEstimate estimate_fixation(const SuperstarSpec& spec, const EstimateOptions& options);

/// One run of the chosen engine from a uniformly (or class-) placed mutant.
AbsorptionOutcome simulate_run(const SuperstarSpec& spec, const EstimateOptions& options, std::uint64_t run_index);
AbsorptionOutcome simulate_run(const DirectedGraph& g, const EstimateOptions& options, std::uint64_t run_index);

}  // namespace superstar
