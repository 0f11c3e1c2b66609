#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "superstar/graph.hpp"
#include "superstar/rational.hpp"

namespace superstar {

inline constexpr std::size_t kExactVertexCap = 12;
inline constexpr std::size_t kFloatVertexCap = 16;

class VertexCapExceeded : public std::invalid_argument {
 public:
  VertexCapExceeded(std::size_t n, std::size_t cap);
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t cap_;
};

/// Finite-population Moran fixation probability (1 - 1/r) / (1 - 1/r^N),
/// and 1/N at r = 1. Requires N >= 1 and r > 0.
Rational classic_moran(std::size_t population, const Rational& r);
double classic_moran(std::size_t population, double r);

/// Fixation probability from a single mutant on each vertex, obtained by
/// solving the absorbing chain over all 2^n occupancy states. The state
/// index is the occupancy bitmask; the two absorbing states enter as
/// boundary values. Throws VertexCapExceeded above `cap` and
/// std::invalid_argument for a vertex without out-neighbours or r <= 0.
std::vector<Rational> exact_fixation_per_vertex(const DirectedGraph& g, const Rational& r,
                                                std::size_t cap = kExactVertexCap);

/// Uniform average over the start vertex, or the value for `start`.
Rational exact_fixation_full(const DirectedGraph& g, const Rational& r, std::optional<VertexId> start = {},
                             std::size_t cap = kExactVertexCap);

/// Double-precision counterpart. The solve is checked by recomputing the
/// residual of every equation; a residual above 1e-10 (relative to the
/// row's diagonal) throws std::runtime_error.
std::vector<double> float_fixation_per_vertex(const DirectedGraph& g, double r, std::size_t cap = kFloatVertexCap);
double float_fixation_full(const DirectedGraph& g, double r, std::optional<VertexId> start = {},
                           std::size_t cap = kFloatVertexCap);

}  // namespace superstar
