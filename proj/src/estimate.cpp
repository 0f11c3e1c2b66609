#include "superstar/estimate.hpp"

#include <algorithm>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "superstar/lazy.hpp"
#include "superstar/lumped.hpp"
#include "superstar/rng.hpp"

namespace superstar {

std::string_view to_string(Engine engine) noexcept {
  switch (engine) {
    case Engine::Naive: return "naive";
    case Engine::EventDriven: return "event";
    case Engine::Lumped: return "lumped";
    case Engine::Lazy: return "lazy";
    case Engine::Confined: return "confined";
  }
  return "unknown";
}

Engine parse_engine(std::string_view name) {
  if (name == "naive") return Engine::Naive;
  if (name == "event" || name == "event-driven") return Engine::EventDriven;
  if (name == "lumped") return Engine::Lumped;
  if (name == "lazy") return Engine::Lazy;
  throw std::invalid_argument("unknown engine '" + std::string(name) + "' (naive, event, lumped, lazy)");
}

std::string_view to_string(Placement placement) noexcept {
  switch (placement) {
    case Placement::Uniform: return "uniform";
    case Placement::Centre: return "centre";
    case Placement::Reservoir: return "reservoir";
    case Placement::Chain: return "chain";
  }
  return "unknown";
}

Placement parse_placement(std::string_view name) {
  if (name == "uniform") return Placement::Uniform;
  if (name == "centre" || name == "center") return Placement::Centre;
  if (name == "reservoir") return Placement::Reservoir;
  if (name == "chain") return Placement::Chain;
  throw std::invalid_argument("unknown placement '" + std::string(name) + "'");
}

namespace {

Role role_of(Placement p) {
  switch (p) {
    case Placement::Centre: return Role::Centre;
    case Placement::Reservoir: return Role::Reservoir;
    case Placement::Chain: return Role::Chain;
    case Placement::Uniform: break;
  }
  return Role::Plain;
}

std::vector<VertexId> placement_candidates(const DirectedGraph& g, Placement placement) {
  std::vector<VertexId> out;
  if (placement == Placement::Uniform) return out;
  if (!g.has_roles()) throw std::invalid_argument("class placement needs a graph with role tags");
  for (VertexId v = 0; v < g.size(); ++v) {
    if (g.role(v).role == role_of(placement)) out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("graph has no vertex of the requested placement class");
  return out;
}

VertexId draw_start(std::size_t n, const std::vector<VertexId>& candidates, Rng& rng) {
  return candidates.empty() ? static_cast<VertexId>(uniform_below(rng, n))
                            : candidates[uniform_below(rng, candidates.size())];
}

VertexId draw_superstar_start(const SuperstarSpec& spec, Placement placement, Rng& rng) {
  switch (placement) {
    case Placement::Uniform: return static_cast<VertexId>(uniform_below(rng, spec.vertex_count()));
    case Placement::Centre: return SuperstarSpec::centre();
    case Placement::Reservoir: {
      const auto idx = uniform_below(rng, std::uint64_t{spec.leaves} * spec.reservoir);
      return spec.reservoir_vertex(static_cast<std::uint32_t>(idx / spec.reservoir),
                                   static_cast<std::uint32_t>(idx % spec.reservoir));
    }
    case Placement::Chain: {
      if (spec.chain_length() == 0) throw std::invalid_argument("k = 2 superstar has no chain vertices");
      const auto idx = uniform_below(rng, std::uint64_t{spec.leaves} * spec.chain_length());
      return spec.chain_vertex(static_cast<std::uint32_t>(idx / spec.chain_length()),
                               static_cast<std::uint32_t>(idx % spec.chain_length()));
    }
  }
  return 0;
}

void check_options(const EstimateOptions& options) {
  check_fitness(options.r);
  if (options.runs == 0) throw std::invalid_argument("runs must be at least 1");
  if (!(options.confidence > 0.0 && options.confidence < 1.0)) {
    throw std::invalid_argument("confidence must lie in (0, 1)");
  }
  if (options.engine == Engine::Confined) {
    throw std::invalid_argument("the confined engine only estimates the centre-event probability");
  }
}

bool works_on_counts(Engine engine) { return engine == Engine::Lumped || engine == Engine::Lazy; }

void check_counts_engine(const SuperstarSpec& spec, const EstimateOptions& options) {
  if (options.placement == Placement::Chain && spec.chain_length() == 0) {
    throw std::invalid_argument("k = 2 superstar has no chain vertices");
  }
  if (options.engine == Engine::Lazy && spec.k < 3) throw std::invalid_argument("the lazy engine needs k >= 3");
}

AbsorptionOutcome run_on_graph(const DirectedGraph& g, const std::vector<VertexId>& candidates,
                               const EstimateOptions& options, std::uint64_t run_index) {
  const std::uint64_t seed = derive_seed(options.master_seed, run_index);
  Rng rng(seed);
  const auto initial = OccupancyState::single(g.size(), draw_start(g.size(), candidates, rng));
  const RunOptions run_options{options.step_budget};
  AbsorptionOutcome out = options.engine == Engine::Naive
                              ? run_naive(g, initial, options.r, rng, run_options)
                              : run_event_driven(g, initial, options.r, rng, run_options);
  out.seed = seed;
  return out;
}

AbsorptionOutcome run_lumped(const SuperstarSpec& spec, const EstimateOptions& options, std::uint64_t run_index) {
  const std::uint64_t seed = derive_seed(options.master_seed, run_index);
  Rng rng(seed);
  const auto initial = LumpedSuperstarState::single(spec, draw_superstar_start(spec, options.placement, rng));
  const RunOptions run_options{options.step_budget};
  AbsorptionOutcome out = options.engine == Engine::Lazy ? run_lazy_superstar(spec, initial, options.r, rng, run_options)
                                                         : run_lumped_superstar(spec, initial, options.r, rng, run_options);
  out.seed = seed;
  return out;
}

template <class RunFn>
FixationEstimate aggregate(const EstimateOptions& options, RunFn&& run) {
  const auto threads =
      static_cast<unsigned>(std::clamp<std::uint64_t>(options.threads, 1, std::min<std::uint64_t>(options.runs, 256)));
  std::uint64_t fixations = 0;
  std::uint64_t steps = 0;
  if (threads == 1) {
    for (std::uint64_t i = 0; i < options.runs; ++i) {
      const auto out = run(i);
      fixations += out.result == Outcome::Fixation ? 1 : 0;
      steps += out.steps;
    }
  } else {
    std::mutex lock;
    std::exception_ptr failure;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        std::uint64_t local_fix = 0, local_steps = 0;
        try {
          for (std::uint64_t i = t; i < options.runs; i += threads) {
            const auto out = run(i);
            local_fix += out.result == Outcome::Fixation ? 1 : 0;
            local_steps += out.steps;
          }
        } catch (...) {
          std::lock_guard guard(lock);
          if (!failure) failure = std::current_exception();
        }
        std::lock_guard guard(lock);
        fixations += local_fix;
        steps += local_steps;
      });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  FixationEstimate est;
  est.fixations = fixations;
  est.trials = options.runs;
  est.p_hat = static_cast<double>(fixations) / static_cast<double>(options.runs);
  est.ci = binomial_interval(fixations, options.runs, options.confidence, options.interval);
  est.engine = options.engine;
  est.master_seed = options.master_seed;
  est.total_steps = steps;
  return est;
}

}  // namespace

AbsorptionOutcome simulate_run(const DirectedGraph& g, const EstimateOptions& options, std::uint64_t run_index) {
  check_options(options);
  if (works_on_counts(options.engine)) {
    throw std::invalid_argument("the " + std::string(to_string(options.engine)) + " engine needs a superstar spec");
  }
  return run_on_graph(g, placement_candidates(g, options.placement), options, run_index);
}

AbsorptionOutcome simulate_run(const SuperstarSpec& spec, const EstimateOptions& options, std::uint64_t run_index) {
  check_options(options);
  spec.validate();
  if (works_on_counts(options.engine)) {
    check_counts_engine(spec, options);
    return run_lumped(spec, options, run_index);
  }
  const auto g = build_superstar(spec);
  return run_on_graph(g, placement_candidates(g, options.placement), options, run_index);
}

FixationEstimate estimate_fixation(const DirectedGraph& g, const EstimateOptions& options) {
  check_options(options);
  if (works_on_counts(options.engine)) {
    throw std::invalid_argument("the " + std::string(to_string(options.engine)) + " engine needs a superstar spec");
  }
  const auto candidates = placement_candidates(g, options.placement);
  return aggregate(options, [&](std::uint64_t i) { return run_on_graph(g, candidates, options, i); });
}

FixationEstimate estimate_fixation(const SuperstarSpec& spec, const EstimateOptions& options) {
  check_options(options);
  spec.validate();
  if (works_on_counts(options.engine)) {
    check_counts_engine(spec, options);
    return aggregate(options, [&](std::uint64_t i) { return run_lumped(spec, options, i); });
  }
  const auto g = build_superstar(spec);
  return estimate_fixation(g, options);
}

}  // namespace superstar
