#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "superstar/graph.hpp"
#include "superstar/rng.hpp"
#include "superstar/stats.hpp"
#include "superstar/sum_tree.hpp"

namespace superstar {

/// Which vertices currently hold mutants.
class OccupancyState {
 public:
  OccupancyState() = default;
  explicit OccupancyState(std::size_t n) : flags_(n, 0) {}

  static OccupancyState single(std::size_t n, VertexId v);
  static OccupancyState all(std::size_t n);

  std::size_t size() const noexcept { return flags_.size(); }
  std::size_t mutant_count() const noexcept { return count_; }
  bool is_mutant(VertexId v) const noexcept { return flags_[v] != 0; }
  std::span<const std::uint8_t> flags() const noexcept { return flags_; }

  void set(VertexId v, bool mutant) noexcept {
    if (is_mutant(v) == mutant) return;
    flags_[v] = mutant ? 1 : 0;
    if (mutant) {
      ++count_;
    } else {
      --count_;
    }
  }

  bool fixated() const noexcept { return count_ == flags_.size(); }
  bool extinct() const noexcept { return count_ == 0; }
  bool absorbed() const noexcept { return fixated() || extinct(); }

  friend bool operator==(const OccupancyState&, const OccupancyState&) = default;

 private:
  std::vector<std::uint8_t> flags_;
  std::size_t count_ = 0;
};

enum class Outcome : std::uint8_t { Extinction, Fixation };

/// Terminal result of one run. `steps` counts raw process steps for the
/// naive engine and state-changing (effective) events for the others.
struct AbsorptionOutcome {
  Outcome result = Outcome::Extinction;
  std::uint64_t steps = 0;
  std::uint64_t seed = 0;
};

class StepBudgetExceeded : public std::runtime_error {
 public:
  explicit StepBudgetExceeded(std::uint64_t budget);
  std::uint64_t budget() const noexcept { return budget_; }

 private:
  std::uint64_t budget_;
};

struct RunOptions {
  /// Unset means run to absorption.
  std::optional<std::uint64_t> step_budget;
};

void check_fitness(double r);

/// Step-by-step process exactly as defined: a reproducer is drawn with
/// probability proportional to fitness, then a uniform out-neighbour copies
/// it. The reproducer is drawn in O(1) by first choosing the class (mutants
/// with total weight r * count, the rest with weight n - count) and then a
/// uniform member of that class.
class NaiveProcess {
 public:
  NaiveProcess(const DirectedGraph& g, OccupancyState initial, double r);

  /// Returns true iff the state changed. Throws std::logic_error on an
  /// absorbed state.
  bool step(Rng& rng);

  const OccupancyState& state() const noexcept { return state_; }

 private:
  void flip(VertexId v);

  const DirectedGraph* graph_;
  OccupancyState state_;
  double r_;
  std::vector<VertexId> members_[2];
  std::vector<std::size_t> slot_;
};

/// Process restricted to state-changing events. Vertex u fires with weight
/// fitness(u) * opp(u) / outdeg(u), where opp(u) counts out-neighbours of
/// the other type, and overwrites a uniform opposite-type out-neighbour.
/// The embedded jump chain of the full process, so absorption
/// probabilities are unchanged.
class EventDrivenProcess {
 public:
  EventDrivenProcess(const DirectedGraph& g, OccupancyState initial, double r);

  /// Applies one effective event. Throws std::logic_error if no event is
  /// possible (absorbed, or a non-strongly-connected dead end).
  void step(Rng& rng);

  const OccupancyState& state() const noexcept { return state_; }
  double total_weight() const noexcept { return weights_.total(); }
  double weight(VertexId v) const noexcept { return weights_.weight(v); }

 private:
  std::size_t opposite_count(VertexId v) const noexcept;
  void refresh(VertexId v);
  VertexId pick_opposite_target(VertexId u, Rng& rng) const;

  const DirectedGraph* graph_;
  OccupancyState state_;
  double r_;
  std::vector<std::uint32_t> mutant_out_;
  std::vector<double> inv_out_degree_;
  SumTree<double> weights_;
};

AbsorptionOutcome run_naive(const DirectedGraph& g, const OccupancyState& initial, double r, Rng& rng,
                            const RunOptions& options = {});

AbsorptionOutcome run_event_driven(const DirectedGraph& g, const OccupancyState& initial, double r,
                                   Rng& rng, const RunOptions& options = {});

}  // namespace superstar
