#pragma once

// Superstar process on the symmetry quotient with the fast variables
// integrated out. Under rates equal to the effective-event weights (a
// continuous-time chain with the same jump chain as the lumped process),
//
//   * the first chain vertex of each leaf is a two-state chain driven only
//     by its reservoir count: up at r a_i, down at m - a_i;
//   * for k >= 4 the centre is a two-state chain driven only by the number
//     E of mutant chain ends: up at r E, down at l - E.
//
// Neither is simulated flip by flip. Events that read them (the second
// chain vertex copying the first, the centre overwriting a reservoir
// vertex) are drawn by thinning against the exact conditional hazard. For
// k = 3 the chain end is itself fast; the centre is then recovered at each
// query by walking back through its copy events, with the first chain
// vertices sampled from two-state bridges. The absorption distribution is
// that of the lumped process; only the work per run changes.

#include <cstdint>
#include <vector>

#include "superstar/graph.hpp"
#include "superstar/lumped.hpp"
#include "superstar/moran.hpp"
#include "superstar/rng.hpp"
#include "superstar/sum_tree.hpp"
#include "superstar/two_state.hpp"

namespace superstar {

class LazySuperstarProcess {
 public:
  /// Requires k >= 3. Throws std::invalid_argument otherwise.
  LazySuperstarProcess(const SuperstarSpec& spec, const LumpedSuperstarState& initial, double r);

  /// Runs to absorption. `steps` counts the events simulated explicitly:
  /// reservoir changes and, for k >= 4, flips of chain vertices past the
  /// first.
  AbsorptionOutcome run(Rng& rng, const RunOptions& options = {});

 private:
  struct Anchor {
    double time;
    std::uint8_t value;
  };

  AbsorptionOutcome run_chained(Rng& rng, const RunOptions& options);
  AbsorptionOutcome run_short(Rng& rng, const RunOptions& options);

  // k >= 4
  TwoStateRates first_rates(std::uint32_t leaf) const;
  TwoStateRates centre_rates() const;
  double chain_rate(std::uint32_t leaf) const;
  bool explicit_mutant(std::uint32_t leaf, std::uint32_t position) const {
    return chain_[std::size_t{leaf} * explicit_len_ + position - 1] != 0;
  }
  void set_explicit(std::uint32_t leaf, std::uint32_t position, bool mutant);
  void change_reservoir(std::uint32_t leaf, bool increase);
  bool settle_chained(Rng& rng, bool& fixated);

  // k = 3
  std::uint8_t first_at(std::uint32_t leaf, double time, Rng& rng);
  std::uint8_t centre_at(double time, Rng& rng);

  SuperstarSpec spec_;
  double r_;
  std::uint64_t lm_;
  std::uint32_t explicit_len_;  // chain vertices tracked explicitly (k - 3)
  double time_ = 0.0;

  std::vector<std::uint32_t> reservoir_;
  std::uint64_t reservoir_total_ = 0;
  SumTree<std::uint64_t> mutant_reservoir_;
  SumTree<std::uint64_t> plain_reservoir_;

  std::vector<std::uint8_t> chain_;  // positions 1 .. k-3, leaf-major
  std::uint64_t explicit_mutants_ = 0;
  std::uint64_t end_mutants_ = 0;
  std::vector<TwoStateBelief> first_;
  TwoStateBelief centre_;
  SumTree<double> first_bounds_;
  SumTree<double> chain_rates_;

  std::vector<std::vector<Anchor>> anchors_;
  double centre_known_time_ = 0.0;
  std::uint8_t centre_known_ = 0;
};

/// Runs the lazy process from `initial` to absorption.
AbsorptionOutcome run_lazy_superstar(const SuperstarSpec& spec, const LumpedSuperstarState& initial, double r,
                                     Rng& rng, const RunOptions& options = {});

}  // namespace superstar
