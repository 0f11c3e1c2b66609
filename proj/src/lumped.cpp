#include "superstar/lumped.hpp"

#include <algorithm>
#include <numeric>

namespace superstar {

LumpedSuperstarState LumpedSuperstarState::empty(const SuperstarSpec& spec) {
  spec.validate();
  LumpedSuperstarState s;
  s.reservoir_mutants.assign(spec.leaves, 0);
  s.chain.assign(std::size_t{spec.leaves} * spec.chain_length(), 0);
  return s;
}

LumpedSuperstarState LumpedSuperstarState::all(const SuperstarSpec& spec) {
  LumpedSuperstarState s = empty(spec);
  s.centre_mutant = true;
  std::fill(s.reservoir_mutants.begin(), s.reservoir_mutants.end(), spec.reservoir);
  std::fill(s.chain.begin(), s.chain.end(), std::uint8_t{1});
  return s;
}

LumpedSuperstarState LumpedSuperstarState::single(const SuperstarSpec& spec, VertexId v) {
  LumpedSuperstarState s = empty(spec);
  if (v >= spec.vertex_count()) throw std::invalid_argument("vertex out of range for superstar");
  if (v == SuperstarSpec::centre()) {
    s.centre_mutant = true;
    return s;
  }
  const std::size_t offset = v - 1;
  const auto leaf = static_cast<std::uint32_t>(offset / spec.leaf_block());
  const std::size_t within = offset % spec.leaf_block();
  if (within < spec.reservoir) {
    s.reservoir_mutants[leaf] = 1;
  } else {
    s.chain[std::size_t{leaf} * spec.chain_length() + (within - spec.reservoir)] = 1;
  }
  return s;
}

std::size_t LumpedSuperstarState::mutant_count() const noexcept {
  std::size_t count = centre_mutant ? 1 : 0;
  count = std::accumulate(reservoir_mutants.begin(), reservoir_mutants.end(), count);
  for (auto flag : chain) count += flag != 0 ? 1 : 0;
  return count;
}

void LumpedSuperstarState::validate(const SuperstarSpec& spec) const {
  if (reservoir_mutants.size() != spec.leaves) {
    throw std::invalid_argument("lumped state has wrong number of leaves");
  }
  if (chain.size() != std::size_t{spec.leaves} * spec.chain_length()) {
    throw std::invalid_argument("lumped state has wrong chain storage size");
  }
  for (auto a : reservoir_mutants) {
    if (a > spec.reservoir) throw std::invalid_argument("reservoir mutant count exceeds reservoir size");
  }
  for (auto flag : chain) {
    if (flag > 1) throw std::invalid_argument("chain flags must be 0 or 1");
  }
}

LumpedSuperstarState project(const SuperstarSpec& spec, const OccupancyState& state) {
  if (state.size() != spec.vertex_count()) throw std::invalid_argument("state size does not match superstar");
  LumpedSuperstarState s = LumpedSuperstarState::empty(spec);
  s.centre_mutant = state.is_mutant(SuperstarSpec::centre());
  for (std::uint32_t i = 0; i < spec.leaves; ++i) {
    for (std::uint32_t j = 0; j < spec.reservoir; ++j) {
      s.reservoir_mutants[i] += state.is_mutant(spec.reservoir_vertex(i, j)) ? 1 : 0;
    }
    for (std::uint32_t j = 0; j < spec.chain_length(); ++j) {
      s.chain[std::size_t{i} * spec.chain_length() + j] = state.is_mutant(spec.chain_vertex(i, j)) ? 1 : 0;
    }
  }
  return s;
}

AbsorptionOutcome run_lumped_superstar(const SuperstarSpec& spec, const LumpedSuperstarState& initial, double r,
                                       Rng& rng, const RunOptions& options) {
  check_fitness(r);
  LumpedProcess process(spec, initial, r);
  std::uint64_t steps = 0;
  while (!process.absorbed()) {
    if (options.step_budget && steps >= *options.step_budget) throw StepBudgetExceeded(*options.step_budget);
    process.step(rng);
    ++steps;
  }
  return {process.fixated() ? Outcome::Fixation : Outcome::Extinction, steps, 0};
}

}  // namespace superstar
