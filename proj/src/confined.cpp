#include "superstar/confined.hpp"

#include <stdexcept>

#include "superstar/moran.hpp"
#include "superstar/stats.hpp"

namespace superstar {

ConfinedCentreProcess::ConfinedCentreProcess(const SuperstarSpec& spec, double r) : r_(r) {
  check_fitness(r);
  spec.validate();
  if (spec.k != 5) throw std::invalid_argument("centre-event estimate is defined for k = 5 superstars");

  const DirectedGraph g = build_superstar(spec);
  const std::array<VertexId, 5> tracked{SuperstarSpec::centre(), spec.reservoir_vertex(0, 0),
                                        spec.chain_vertex(0, 0), spec.chain_vertex(0, 1),
                                        spec.chain_vertex(0, 2)};
  auto index_of = [&](VertexId v) -> int {
    for (int i = 0; i < 5; ++i) {
      if (tracked[i] == v) return i;
    }
    return -1;
  };

  for (std::uint8_t t = 0; t < 5; ++t) {
    for (VertexId u : g.in_neighbors(tracked[t])) {
      const double inv = 1.0 / static_cast<double>(g.out_degree(u));
      if (const int from = index_of(u); from >= 0) {
        if (arc_count_ == arcs_.size()) throw std::logic_error("unexpected arc structure among tracked vertices");
        arcs_[arc_count_++] = {static_cast<std::uint8_t>(from), t, inv};
      } else {
        outside_in_[t] += inv;
      }
    }
  }
}

bool ConfinedCentreProcess::run(Rng& rng, std::uint64_t* steps) const {
  unsigned mutants = 1u << kSeed;
  std::uint64_t events = 0;
  std::array<double, 5> flip{};
  while (mutants != 0) {
    const double centre_event = (mutants & (1u << kCentre)) ? r_ : 0.0;
    for (int t = 0; t < 5; ++t) flip[t] = (mutants & (1u << t)) ? outside_in_[t] : 0.0;
    for (std::size_t a = 0; a < arc_count_; ++a) {
      const auto& arc = arcs_[a];
      const bool from_mutant = (mutants >> arc.from) & 1u;
      const bool to_mutant = (mutants >> arc.to) & 1u;
      if (from_mutant != to_mutant) flip[arc.to] += (from_mutant ? r_ : 1.0) * arc.inv_out_degree;
    }
    double total = centre_event;
    for (double w : flip) total += w;

    double u = uniform01(rng) * total;
    if (u < centre_event) {
      if (steps) *steps = events;
      return true;
    }
    u -= centre_event;
    int chosen = -1;
    for (int t = 0; t < 5; ++t) {
      if (flip[t] > 0.0) {
        chosen = t;
        if (u < flip[t]) break;
        u -= flip[t];
      }
    }
    mutants ^= 1u << chosen;
    ++events;
  }
  if (steps) *steps = events;
  return false;
}

FixationEstimate estimate_centre_event_probability(const SuperstarSpec& spec, double r, std::uint64_t runs,
                                                   std::uint64_t master_seed, double confidence) {
  if (runs == 0) throw std::invalid_argument("runs must be at least 1");
  const ConfinedCentreProcess process(spec, r);
  FixationEstimate est;
  for (std::uint64_t i = 0; i < runs; ++i) {
    Rng rng = make_rng(master_seed, i);
    std::uint64_t steps = 0;
    est.fixations += process.run(rng, &steps) ? 1 : 0;
    est.total_steps += steps;
  }
  est.trials = runs;
  est.p_hat = static_cast<double>(est.fixations) / static_cast<double>(runs);
  est.ci = agresti_coull(est.fixations, runs, confidence);
  est.engine = Engine::Confined;
  est.master_seed = master_seed;
  return est;
}

}  // namespace superstar
