#pragma once

// Superstar process on the symmetry quotient. Reservoir vertices of one
// leaf share their in-neighbour (the centre) and their out-neighbour (the
// first chain vertex), so they are exchangeable and only their mutant
// count matters. The chain and centre are tracked vertex by vertex.

#include <compare>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "superstar/graph.hpp"
#include "superstar/moran.hpp"
#include "superstar/rng.hpp"
#include "superstar/sum_tree.hpp"

namespace superstar {

struct LumpedSuperstarState {
  bool centre_mutant = false;
  std::vector<std::uint32_t> reservoir_mutants;  // one count per leaf
  std::vector<std::uint8_t> chain;               // leaf-major, chain_length() flags per leaf

  static LumpedSuperstarState empty(const SuperstarSpec& spec);
  static LumpedSuperstarState all(const SuperstarSpec& spec);
  /// Single mutant on full-graph vertex v (layout of build_superstar).
  static LumpedSuperstarState single(const SuperstarSpec& spec, VertexId v);

  std::size_t mutant_count() const noexcept;
  bool chain_mutant(const SuperstarSpec& spec, std::uint32_t leaf, std::uint32_t j) const noexcept {
    return chain[std::size_t{leaf} * spec.chain_length() + j] != 0;
  }

  /// Throws std::invalid_argument if sizes or counts are inconsistent with spec.
  void validate(const SuperstarSpec& spec) const;

  auto operator<=>(const LumpedSuperstarState&) const = default;
};

/// Forgets which reservoir vertices of a leaf hold mutants.
LumpedSuperstarState project(const SuperstarSpec& spec, const OccupancyState& state);

enum class LumpedEventKind : std::uint8_t {
  CentreToReservoir,  // centre overwrites one reservoir vertex of `leaf`
  ReservoirToChain,   // reservoir group of `leaf` overwrites the first chain vertex
  ChainToChain,       // chain vertex `position` of `leaf` overwrites position + 1
  FeedbackToCentre,   // a chain end (reservoir vertex when k = 2) overwrites the centre
};

template <class Scalar>
struct LumpedEvent {
  LumpedEventKind kind;
  std::uint32_t leaf = 0;
  std::uint32_t position = 0;
  Scalar weight;
};

/// Effective-event process on LumpedSuperstarState. Weights are
/// fitness(source) / outdeg(source) summed over the source vertices whose
/// offspring would change the state, i.e. the full process's effective
/// weights aggregated over each lumped class:
///
///   centre -> leaf i reservoir   fit(c) (m - a_i) / (l m)  or  a_i / (l m)
///   reservoir i -> chain start   r a_i  (start non-mutant)  or  m - a_i
///   chain j -> chain j + 1       fit(c_{i,j}) on mismatch
///   chain end -> centre          fit(end) on mismatch, aggregated over leaves
///
/// Scalar is double for simulation; an exact rational type works for
/// enumerating transition probabilities.
template <class Scalar>
class BasicLumpedProcess {
 public:
  BasicLumpedProcess(const SuperstarSpec& spec, LumpedSuperstarState initial, Scalar r)
      : spec_(spec), state_(std::move(initial)), r_(std::move(r)) {
    spec_.validate();
    state_.validate(spec_);
    if (!(r_ > Scalar(0))) throw std::invalid_argument("fitness r must be positive");
    total_vertices_ = spec_.vertex_count();
    lm_ = std::uint64_t{spec_.leaves} * spec_.reservoir;
    mutant_reservoir_.reset(spec_.leaves);
    plain_reservoir_.reset(spec_.leaves);
    leaf_weights_.reset(spec_.leaves);
    std::vector<std::uint64_t> a(spec_.leaves), b(spec_.leaves);
    std::vector<Scalar> w(spec_.leaves);
    for (std::uint32_t i = 0; i < spec_.leaves; ++i) {
      a[i] = state_.reservoir_mutants[i];
      b[i] = spec_.reservoir - a[i];
      reservoir_total_ += a[i];
      w[i] = leaf_weight(i);
      if (spec_.k > 2) end_mutants_ += state_.chain_mutant(spec_, i, spec_.chain_length() - 1) ? 1 : 0;
    }
    mutant_reservoir_.assign(a);
    plain_reservoir_.assign(b);
    leaf_weights_.assign(w);
    count_ = state_.mutant_count();
  }

  const SuperstarSpec& spec() const noexcept { return spec_; }
  const LumpedSuperstarState& state() const noexcept { return state_; }
  std::size_t mutant_count() const noexcept { return count_; }
  bool fixated() const noexcept { return count_ == total_vertices_; }
  bool extinct() const noexcept { return count_ == 0; }
  bool absorbed() const noexcept { return fixated() || extinct(); }

  Scalar centre_weight() const {
    return state_.centre_mutant ? Scalar(r_ * Scalar(lm_ - reservoir_total_) / Scalar(lm_))
                                : Scalar(Scalar(reservoir_total_) / Scalar(lm_));
  }

  Scalar feedback_weight() const {
    // Sources of mutant type push a mutant into a plain centre and vice versa.
    const std::uint64_t sources = spec_.k == 2 ? lm_ : spec_.leaves;
    const std::uint64_t mutant_sources = spec_.k == 2 ? reservoir_total_ : end_mutants_;
    return state_.centre_mutant ? Scalar(sources - mutant_sources) : Scalar(r_ * Scalar(mutant_sources));
  }

  Scalar total_weight() const { return Scalar(centre_weight() + feedback_weight() + leaf_weights_.total()); }

  /// Every event with positive weight, resolved per leaf except feedback,
  /// whose effect does not depend on the leaf.
  std::vector<LumpedEvent<Scalar>> events() const {
    std::vector<LumpedEvent<Scalar>> out;
    const Scalar lm(lm_);
    for (std::uint32_t i = 0; i < spec_.leaves; ++i) {
      const auto a = state_.reservoir_mutants[i];
      const Scalar centre_to_leaf = state_.centre_mutant ? Scalar(r_ * Scalar(spec_.reservoir - a) / lm) : Scalar(Scalar(a) / lm);
      if (centre_to_leaf > Scalar(0)) out.push_back({LumpedEventKind::CentreToReservoir, i, 0, centre_to_leaf});
      if (spec_.k > 2) {
        if (Scalar w = reservoir_to_chain_weight(i); w > Scalar(0)) {
          out.push_back({LumpedEventKind::ReservoirToChain, i, 0, w});
        }
        for (std::uint32_t j = 0; j + 1 < spec_.chain_length(); ++j) {
          if (Scalar w = chain_step_weight(i, j); w > Scalar(0)) {
            out.push_back({LumpedEventKind::ChainToChain, i, j, w});
          }
        }
      }
    }
    if (Scalar w = feedback_weight(); w > Scalar(0)) out.push_back({LumpedEventKind::FeedbackToCentre, 0, 0, w});
    return out;
  }

  /// State reached by applying `event` to the current state.
  LumpedSuperstarState after(const LumpedEvent<Scalar>& event) const {
    BasicLumpedProcess copy = *this;
    copy.apply(event.kind, event.leaf, event.position);
    return copy.state_;
  }

  void step(Rng& rng) {
    const Scalar centre = centre_weight();
    const Scalar feedback = feedback_weight();
    const Scalar internal = leaf_weights_.total();
    const Scalar total = centre + feedback + internal;
    if (!(total > Scalar(0))) throw std::logic_error("no state-changing event available");
    const Scalar u = Scalar(uniform01(rng)) * total;
    if (centre > Scalar(0) && (u < centre || (feedback == Scalar(0) && internal == Scalar(0)))) {
      // Leaf chosen proportional to the reservoir vertices the centre can convert.
      const auto& tree = state_.centre_mutant ? plain_reservoir_ : mutant_reservoir_;
      const std::size_t leaf = tree.find(uniform_below(rng, tree.total()));
      apply(LumpedEventKind::CentreToReservoir, static_cast<std::uint32_t>(leaf), 0);
      return;
    }
    if (feedback > Scalar(0) && (u < centre + feedback || internal == Scalar(0))) {
      apply(LumpedEventKind::FeedbackToCentre, 0, 0);
      return;
    }
    const auto leaf = static_cast<std::uint32_t>(leaf_weights_.find(u - centre - feedback));
    // Resolve the event inside the leaf with a fresh draw; rounding past the
    // end falls back to the last positive-weight event.
    Scalar v = Scalar(uniform01(rng)) * leaf_weights_.weight(leaf);
    LumpedEventKind kind = LumpedEventKind::ReservoirToChain;
    std::uint32_t position = 0;
    const Scalar start = reservoir_to_chain_weight(leaf);
    if (start > Scalar(0) && v < start) {
      apply(kind, leaf, position);
      return;
    }
    v -= start;
    for (std::uint32_t j = 0; j + 1 < spec_.chain_length(); ++j) {
      const Scalar w = chain_step_weight(leaf, j);
      if (w > Scalar(0)) {
        kind = LumpedEventKind::ChainToChain;
        position = j;
        if (v < w) break;
        v -= w;
      }
    }
    apply(kind, leaf, position);
  }

 private:
  Scalar fitness(bool mutant) const { return mutant ? r_ : Scalar(1); }

  Scalar reservoir_to_chain_weight(std::uint32_t leaf) const {
    const auto a = state_.reservoir_mutants[leaf];
    return state_.chain_mutant(spec_, leaf, 0) ? Scalar(spec_.reservoir - a) : Scalar(r_ * Scalar(a));
  }

  Scalar chain_step_weight(std::uint32_t leaf, std::uint32_t j) const {
    const bool from = state_.chain_mutant(spec_, leaf, j);
    return from != state_.chain_mutant(spec_, leaf, j + 1) ? fitness(from) : Scalar(0);
  }

  Scalar leaf_weight(std::uint32_t leaf) const {
    if (spec_.k == 2) return Scalar(0);
    Scalar w = reservoir_to_chain_weight(leaf);
    for (std::uint32_t j = 0; j + 1 < spec_.chain_length(); ++j) w += chain_step_weight(leaf, j);
    return w;
  }

  void set_chain(std::uint32_t leaf, std::uint32_t j, bool mutant) {
    auto& flag = state_.chain[std::size_t{leaf} * spec_.chain_length() + j];
    if ((flag != 0) == mutant) return;
    flag = mutant ? 1 : 0;
    if (mutant) {
      ++count_;
    } else {
      --count_;
    }
    if (j + 1 == spec_.chain_length()) {
      if (mutant) {
        ++end_mutants_;
      } else {
        --end_mutants_;
      }
    }
  }

  void apply(LumpedEventKind kind, std::uint32_t leaf, std::uint32_t position) {
    switch (kind) {
      case LumpedEventKind::CentreToReservoir: {
        auto& a = state_.reservoir_mutants[leaf];
        if (state_.centre_mutant) {
          ++a;
          ++reservoir_total_;
          ++count_;
        } else {
          --a;
          --reservoir_total_;
          --count_;
        }
        mutant_reservoir_.set(leaf, a);
        plain_reservoir_.set(leaf, spec_.reservoir - a);
        break;
      }
      case LumpedEventKind::ReservoirToChain:
        set_chain(leaf, 0, !state_.chain_mutant(spec_, leaf, 0));
        break;
      case LumpedEventKind::ChainToChain:
        set_chain(leaf, position + 1, state_.chain_mutant(spec_, leaf, position));
        break;
      case LumpedEventKind::FeedbackToCentre:
        state_.centre_mutant = !state_.centre_mutant;
        if (state_.centre_mutant) {
          ++count_;
        } else {
          --count_;
        }
        return;  // leaf weights do not involve the centre
    }
    leaf_weights_.set(leaf, leaf_weight(leaf));
  }

  SuperstarSpec spec_;
  LumpedSuperstarState state_;
  Scalar r_;
  std::size_t total_vertices_ = 0;
  std::uint64_t lm_ = 0;
  std::uint64_t reservoir_total_ = 0;
  std::uint64_t end_mutants_ = 0;
  std::size_t count_ = 0;
  SumTree<std::uint64_t> mutant_reservoir_;
  SumTree<std::uint64_t> plain_reservoir_;
  SumTree<Scalar> leaf_weights_;
};

using LumpedProcess = BasicLumpedProcess<double>;

/// Runs the lumped process to absorption. Accepts k >= 2.
AbsorptionOutcome run_lumped_superstar(const SuperstarSpec& spec, const LumpedSuperstarState& initial, double r,
                                       Rng& rng, const RunOptions& options = {});

}  // namespace superstar
