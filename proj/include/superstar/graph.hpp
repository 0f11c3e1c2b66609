#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace superstar {

using VertexId = std::uint32_t;

enum class Role : std::uint8_t { Plain, Centre, Reservoir, Chain };

/// Structural role of a vertex in a generated graph. `leaf` and `position`
/// are zero-based and only meaningful for Reservoir and Chain vertices.
struct RoleTag {
  Role role = Role::Plain;
  std::uint32_t leaf = 0;
  std::uint32_t position = 0;

  friend bool operator==(const RoleTag&, const RoleTag&) = default;
};

/// Immutable directed graph in compressed adjacency form. Both out- and
/// in-neighbour lists are stored; the event-driven engine needs the latter.
class DirectedGraph {
 public:
  DirectedGraph() = default;

  /// Throws std::invalid_argument if a target id is out of range or the
  /// role vector is non-empty and of the wrong size. Duplicate arcs and
  /// self-loops are accepted here and reported by validate_graph.
  DirectedGraph(std::vector<std::vector<VertexId>> out_adjacency,
                std::vector<RoleTag> roles = {});

  std::size_t size() const noexcept { return out_offsets_.empty() ? 0 : out_offsets_.size() - 1; }
  std::size_t arc_count() const noexcept { return out_targets_.size(); }

  std::span<const VertexId> out_neighbors(VertexId v) const noexcept {
    return {out_targets_.data() + out_offsets_[v], out_targets_.data() + out_offsets_[v + 1]};
  }
  std::span<const VertexId> in_neighbors(VertexId v) const noexcept {
    return {in_sources_.data() + in_offsets_[v], in_sources_.data() + in_offsets_[v + 1]};
  }
  std::size_t out_degree(VertexId v) const noexcept { return out_offsets_[v + 1] - out_offsets_[v]; }
  std::size_t in_degree(VertexId v) const noexcept { return in_offsets_[v + 1] - in_offsets_[v]; }

  bool has_roles() const noexcept { return !roles_.empty(); }
  RoleTag role(VertexId v) const noexcept { return roles_.empty() ? RoleTag{} : roles_[v]; }
  std::span<const RoleTag> roles() const noexcept { return roles_; }

  bool has_arc(VertexId from, VertexId to) const noexcept;

 private:
  std::vector<std::size_t> out_offsets_;
  std::vector<VertexId> out_targets_;
  std::vector<std::size_t> in_offsets_;
  std::vector<VertexId> in_sources_;
  std::vector<RoleTag> roles_;
};

/// Parameters of the superstar S^k_{leaves,reservoir}.
///
/// Vertex layout of build_superstar: vertex 0 is the centre, then the
/// leaves in order. Leaf i occupies a contiguous block of
/// `reservoir + chain_length()` ids, reservoir vertices first, then the
/// chain from the vertex fed by the reservoir to the one feeding the centre.
struct SuperstarSpec {
  std::uint32_t k = 5;
  std::uint32_t leaves = 1;
  std::uint32_t reservoir = 1;

  /// Throws std::invalid_argument unless k >= 2, leaves >= 1, reservoir >= 1
  /// and the vertex count fits in a VertexId.
  void validate() const;

  std::uint32_t chain_length() const noexcept { return k - 2; }
  std::size_t leaf_block() const noexcept { return std::size_t{reservoir} + chain_length(); }
  std::size_t vertex_count() const noexcept { return 1 + std::size_t{leaves} * leaf_block(); }
  std::size_t arc_count() const noexcept;

  static constexpr VertexId centre() noexcept { return 0; }
  VertexId reservoir_vertex(std::uint32_t leaf, std::uint32_t j) const noexcept {
    return static_cast<VertexId>(1 + leaf * leaf_block() + j);
  }
  VertexId chain_vertex(std::uint32_t leaf, std::uint32_t j) const noexcept {
    return static_cast<VertexId>(1 + leaf * leaf_block() + reservoir + j);
  }

  friend bool operator==(const SuperstarSpec&, const SuperstarSpec&) = default;
};

/// Centre -> every reservoir vertex, reservoir -> first chain vertex, chain
/// arcs in order, last chain vertex -> centre. For k = 2 there is no chain
/// and the result is the star K_{1, leaves*reservoir} with both arc
/// directions present.
DirectedGraph build_superstar(const SuperstarSpec& spec);

/// Complete graph on n >= 2 vertices, both arc directions.
DirectedGraph build_complete(std::size_t n);

/// Star K_{1,n-1}: vertex 0 is the centre, arcs centre<->leaf.
DirectedGraph build_star(std::size_t n);

struct ValidationReport {
  std::size_t vertex_count = 0;
  std::size_t arc_count = 0;
  std::size_t min_out_degree = 0;
  std::size_t zero_out_degree_vertices = 0;
  std::size_t self_loops = 0;
  std::size_t duplicate_arcs = 0;
  bool strongly_connected = false;

  /// The process is defined when every vertex has an out-neighbour.
  bool process_well_defined() const noexcept { return vertex_count > 0 && min_out_degree >= 1; }
  bool ok() const noexcept {
    return process_well_defined() && strongly_connected && self_loops == 0 && duplicate_arcs == 0;
  }
};

ValidationReport validate_graph(const DirectedGraph& g);

// Debug dump: a header line "n <count>" followed by one "u v" line per arc.
void write_arc_list(std::ostream& out, const DirectedGraph& g);
DirectedGraph read_arc_list(std::istream& in);

}  // namespace superstar
