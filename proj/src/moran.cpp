#include "superstar/moran.hpp"

#include <cmath>
#include <string>

namespace superstar {

OccupancyState OccupancyState::single(std::size_t n, VertexId v) {
  if (v >= n) throw std::invalid_argument("initial mutant vertex out of range");
  OccupancyState s(n);
  s.set(v, true);
  return s;
}

OccupancyState OccupancyState::all(std::size_t n) {
  OccupancyState s(n);
  for (VertexId v = 0; v < n; ++v) s.set(v, true);
  return s;
}

StepBudgetExceeded::StepBudgetExceeded(std::uint64_t budget)
    : std::runtime_error("step budget of " + std::to_string(budget) + " exhausted before absorption"),
      budget_(budget) {}

void check_fitness(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("fitness r must be positive and finite");
}

namespace {

void check_state_matches(const DirectedGraph& g, const OccupancyState& s) {
  if (s.size() != g.size()) throw std::invalid_argument("state size does not match graph");
  if (g.size() == 0) throw std::invalid_argument("empty graph");
  for (VertexId v = 0; v < g.size(); ++v) {
    if (g.out_degree(v) == 0) {
      throw std::invalid_argument("vertex " + std::to_string(v) + " has no out-neighbour");
    }
  }
}

}  // namespace

// --- naive ---------------------------------------------------------------

NaiveProcess::NaiveProcess(const DirectedGraph& g, OccupancyState initial, double r)
    : graph_(&g), state_(std::move(initial)), r_(r), slot_(g.size()) {
  check_fitness(r);
  check_state_matches(g, state_);
  for (VertexId v = 0; v < g.size(); ++v) {
    auto& bucket = members_[state_.is_mutant(v) ? 1 : 0];
    slot_[v] = bucket.size();
    bucket.push_back(v);
  }
}

void NaiveProcess::flip(VertexId v) {
  const int from = state_.is_mutant(v) ? 1 : 0;
  auto& src = members_[from];
  const VertexId last = src.back();
  src[slot_[v]] = last;
  slot_[last] = slot_[v];
  src.pop_back();
  auto& dst = members_[1 - from];
  slot_[v] = dst.size();
  dst.push_back(v);
  state_.set(v, from == 0);
}

bool NaiveProcess::step(Rng& rng) {
  if (state_.absorbed()) throw std::logic_error("step on an absorbed state");
  const double mutant_weight = r_ * static_cast<double>(members_[1].size());
  const double total = mutant_weight + static_cast<double>(members_[0].size());
  const auto& bucket = members_[uniform01(rng) * total < mutant_weight ? 1 : 0];
  const VertexId u = bucket[uniform_below(rng, bucket.size())];
  const auto out = graph_->out_neighbors(u);
  const VertexId t = out[uniform_below(rng, out.size())];
  if (state_.is_mutant(t) == state_.is_mutant(u)) return false;
  flip(t);
  return true;
}

AbsorptionOutcome run_naive(const DirectedGraph& g, const OccupancyState& initial, double r, Rng& rng,
                            const RunOptions& options) {
  NaiveProcess process(g, initial, r);
  std::uint64_t steps = 0;
  while (!process.state().absorbed()) {
    if (options.step_budget && steps >= *options.step_budget) throw StepBudgetExceeded(*options.step_budget);
    process.step(rng);
    ++steps;
  }
  return {process.state().fixated() ? Outcome::Fixation : Outcome::Extinction, steps, 0};
}

// --- event driven ----------------------------------------------------------

EventDrivenProcess::EventDrivenProcess(const DirectedGraph& g, OccupancyState initial, double r)
    : graph_(&g), state_(std::move(initial)), r_(r), mutant_out_(g.size(), 0),
      inv_out_degree_(g.size()), weights_(g.size()) {
  check_fitness(r);
  check_state_matches(g, state_);
  std::vector<double> w(g.size());
  for (VertexId u = 0; u < g.size(); ++u) {
    inv_out_degree_[u] = 1.0 / static_cast<double>(g.out_degree(u));
    for (VertexId t : g.out_neighbors(u)) mutant_out_[u] += state_.is_mutant(t) ? 1 : 0;
  }
  for (VertexId u = 0; u < g.size(); ++u) {
    w[u] = (state_.is_mutant(u) ? r_ : 1.0) * static_cast<double>(opposite_count(u)) * inv_out_degree_[u];
  }
  weights_.assign(w);
}

std::size_t EventDrivenProcess::opposite_count(VertexId v) const noexcept {
  return state_.is_mutant(v) ? graph_->out_degree(v) - mutant_out_[v] : mutant_out_[v];
}

void EventDrivenProcess::refresh(VertexId v) {
  const double fitness = state_.is_mutant(v) ? r_ : 1.0;
  weights_.set(v, fitness * static_cast<double>(opposite_count(v)) * inv_out_degree_[v]);
}

VertexId EventDrivenProcess::pick_opposite_target(VertexId u, Rng& rng) const {
  const auto out = graph_->out_neighbors(u);
  const bool u_mutant = state_.is_mutant(u);
  // Rejection sampling is exact and cheap while opposite-type targets are
  // common; fall back to a counted scan otherwise.
  for (int attempt = 0; attempt < 16; ++attempt) {
    const VertexId t = out[uniform_below(rng, out.size())];
    if (state_.is_mutant(t) != u_mutant) return t;
  }
  std::size_t pick = uniform_below(rng, opposite_count(u));
  for (VertexId t : out) {
    if (state_.is_mutant(t) != u_mutant && pick-- == 0) return t;
  }
  throw std::logic_error("opposite-type neighbour count out of sync");
}

void EventDrivenProcess::step(Rng& rng) {
  const double total = weights_.total();
  if (!(total > 0.0)) throw std::logic_error("no state-changing event available");
  const VertexId u = static_cast<VertexId>(weights_.find(uniform01(rng) * total));
  const VertexId t = pick_opposite_target(u, rng);
  const bool becomes_mutant = state_.is_mutant(u);
  state_.set(t, becomes_mutant);
  for (VertexId p : graph_->in_neighbors(t)) {
    if (becomes_mutant) {
      ++mutant_out_[p];
    } else {
      --mutant_out_[p];
    }
    refresh(p);
  }
  refresh(t);
}

AbsorptionOutcome run_event_driven(const DirectedGraph& g, const OccupancyState& initial, double r,
                                   Rng& rng, const RunOptions& options) {
  EventDrivenProcess process(g, initial, r);
  std::uint64_t steps = 0;
  while (!process.state().absorbed()) {
    if (options.step_budget && steps >= *options.step_budget) throw StepBudgetExceeded(*options.step_budget);
    process.step(rng);
    ++steps;
  }
  return {process.state().fixated() ? Outcome::Fixation : Outcome::Extinction, steps, 0};
}

}  // namespace superstar
