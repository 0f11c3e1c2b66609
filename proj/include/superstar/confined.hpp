#pragma once

#include <array>
#include <cstdint>

#include "superstar/estimate.hpp"
#include "superstar/graph.hpp"
#include "superstar/rng.hpp"

namespace superstar {

/// The five vertices a k = 5 superstar run can touch before the centre,
/// holding a mutant, is chosen to reproduce: the centre, one reservoir
/// vertex of leaf 0 and the three chain vertices of that leaf.
enum ConfinedVertex : std::uint8_t { kCentre = 0, kSeed = 1, kChain1 = 2, kChain2 = 3, kChain3 = 4 };

/// Process started from a single mutant on a reservoir vertex and stopped
/// either when a mutant centre is selected to reproduce (success) or when
/// no mutant remains (failure). Until success no mutant can leave the five
/// tracked vertices, so every other vertex is a non-mutant; its influence
/// is folded into per-vertex inbound weights read off the actual graph.
class ConfinedCentreProcess {
 public:
  /// Builds S^5_{l,m} and aggregates its arcs into the tracked vertices.
  /// Throws std::invalid_argument unless spec.k == 5.
  ConfinedCentreProcess(const SuperstarSpec& spec, double r);

  /// True iff the run reaches the centre-reproduction event. `steps`
  /// receives the number of state-changing events before termination.
  bool run(Rng& rng, std::uint64_t* steps = nullptr) const;

 private:
  struct Arc {
    std::uint8_t from;
    std::uint8_t to;
    double inv_out_degree;
  };
  double r_;
  std::array<double, 5> outside_in_{};  // sum of 1/outdeg over untracked sources
  std::array<Arc, 8> arcs_{};
  std::size_t arc_count_ = 0;
};

/// Monte Carlo estimate of the probability that, starting from one mutant
/// on a reservoir vertex, a mutant centre is ever chosen to reproduce.
FixationEstimate estimate_centre_event_probability(const SuperstarSpec& spec, double r, std::uint64_t runs,
                                                   std::uint64_t master_seed, double confidence = 0.995);

}  // namespace superstar
