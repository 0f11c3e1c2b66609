#include "superstar/graph.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace superstar {

DirectedGraph::DirectedGraph(std::vector<std::vector<VertexId>> out_adjacency,
                             std::vector<RoleTag> roles)
    : roles_(std::move(roles)) {
  const std::size_t n = out_adjacency.size();
  if (n > std::numeric_limits<VertexId>::max()) {
    throw std::invalid_argument("graph too large for 32-bit vertex ids");
  }
  if (!roles_.empty() && roles_.size() != n) {
    throw std::invalid_argument("role tag count does not match vertex count");
  }

  out_offsets_.assign(n + 1, 0);
  std::vector<std::size_t> in_count(n, 0);
  for (std::size_t u = 0; u < n; ++u) {
    out_offsets_[u + 1] = out_offsets_[u] + out_adjacency[u].size();
    for (VertexId t : out_adjacency[u]) {
      if (t >= n) {
        throw std::invalid_argument("arc target " + std::to_string(t) + " out of range");
      }
      ++in_count[t];
    }
  }
  out_targets_.reserve(out_offsets_[n]);
  for (auto& list : out_adjacency) {
    out_targets_.insert(out_targets_.end(), list.begin(), list.end());
  }

  in_offsets_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) in_offsets_[v + 1] = in_offsets_[v] + in_count[v];
  in_sources_.resize(in_offsets_[n]);
  std::vector<std::size_t> cursor(in_offsets_.begin(), in_offsets_.end() - 1);
  for (std::size_t u = 0; u < n; ++u) {
    for (VertexId t : out_neighbors(static_cast<VertexId>(u))) {
      in_sources_[cursor[t]++] = static_cast<VertexId>(u);
    }
  }
}

bool DirectedGraph::has_arc(VertexId from, VertexId to) const noexcept {
  auto out = out_neighbors(from);
  return std::find(out.begin(), out.end(), to) != out.end();
}

void SuperstarSpec::validate() const {
  if (k < 2) throw std::invalid_argument("superstar requires k >= 2");
  if (leaves < 1) throw std::invalid_argument("superstar requires at least one leaf");
  if (reservoir < 1) throw std::invalid_argument("superstar requires reservoir size >= 1");
  const auto block = static_cast<unsigned __int128>(reservoir) + (k - 2);
  if (1 + block * leaves > std::numeric_limits<VertexId>::max()) {
    throw std::invalid_argument("superstar too large for 32-bit vertex ids");
  }
}

std::size_t SuperstarSpec::arc_count() const noexcept {
  const std::size_t lm = std::size_t{leaves} * reservoir;
  return k == 2 ? 2 * lm : 2 * lm + std::size_t{leaves} * chain_length();
}

DirectedGraph build_superstar(const SuperstarSpec& spec) {
  spec.validate();
  const std::size_t n = spec.vertex_count();
  std::vector<std::vector<VertexId>> out(n);
  std::vector<RoleTag> roles(n);
  roles[SuperstarSpec::centre()] = {Role::Centre, 0, 0};

  auto& centre_out = out[SuperstarSpec::centre()];
  centre_out.reserve(std::size_t{spec.leaves} * spec.reservoir);
  for (std::uint32_t i = 0; i < spec.leaves; ++i) {
    // k = 2: reservoir vertices feed the centre directly.
    const VertexId feed = spec.k == 2 ? SuperstarSpec::centre() : spec.chain_vertex(i, 0);
    for (std::uint32_t j = 0; j < spec.reservoir; ++j) {
      const VertexId x = spec.reservoir_vertex(i, j);
      roles[x] = {Role::Reservoir, i, j};
      centre_out.push_back(x);
      out[x].push_back(feed);
    }
    for (std::uint32_t j = 0; j < spec.chain_length(); ++j) {
      const VertexId c = spec.chain_vertex(i, j);
      roles[c] = {Role::Chain, i, j};
      out[c].push_back(j + 1 < spec.chain_length() ? spec.chain_vertex(i, j + 1)
                                                   : SuperstarSpec::centre());
    }
  }
  return DirectedGraph(std::move(out), std::move(roles));
}

DirectedGraph build_complete(std::size_t n) {
  if (n < 2) throw std::invalid_argument("complete graph requires n >= 2");
  std::vector<std::vector<VertexId>> out(n);
  for (std::size_t u = 0; u < n; ++u) {
    out[u].reserve(n - 1);
    for (std::size_t v = 0; v < n; ++v) {
      if (u != v) out[u].push_back(static_cast<VertexId>(v));
    }
  }
  return DirectedGraph(std::move(out));
}

DirectedGraph build_star(std::size_t n) {
  if (n < 2) throw std::invalid_argument("star requires n >= 2");
  std::vector<std::vector<VertexId>> out(n);
  std::vector<RoleTag> roles(n);
  roles[0] = {Role::Centre, 0, 0};
  for (std::size_t v = 1; v < n; ++v) {
    out[0].push_back(static_cast<VertexId>(v));
    out[v].push_back(0);
    roles[v] = {Role::Reservoir, 0, static_cast<std::uint32_t>(v - 1)};
  }
  return DirectedGraph(std::move(out), std::move(roles));
}

namespace {

std::size_t reachable_count(std::size_t n, VertexId start, auto&& neighbours) {
  std::vector<char> seen(n, 0);
  std::vector<VertexId> stack{start};
  seen[start] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    const VertexId u = stack.back();
    stack.pop_back();
    for (VertexId w : neighbours(u)) {
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        stack.push_back(w);
      }
    }
  }
  return count;
}

}  // namespace

ValidationReport validate_graph(const DirectedGraph& g) {
  ValidationReport report;
  const std::size_t n = g.size();
  report.vertex_count = n;
  report.arc_count = g.arc_count();
  if (n == 0) return report;

  report.min_out_degree = std::numeric_limits<std::size_t>::max();
  std::vector<VertexId> sorted;
  for (VertexId u = 0; u < n; ++u) {
    const auto out = g.out_neighbors(u);
    report.min_out_degree = std::min(report.min_out_degree, out.size());
    if (out.empty()) ++report.zero_out_degree_vertices;
    sorted.assign(out.begin(), out.end());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      if (sorted[i] == u) ++report.self_loops;
      if (i > 0 && sorted[i] == sorted[i - 1]) ++report.duplicate_arcs;
    }
  }

  const auto forward = reachable_count(n, 0, [&](VertexId u) { return g.out_neighbors(u); });
  const auto backward = reachable_count(n, 0, [&](VertexId u) { return g.in_neighbors(u); });
  report.strongly_connected = forward == n && backward == n;
  return report;
}

void write_arc_list(std::ostream& out, const DirectedGraph& g) {
  out << "n " << g.size() << '\n';
  for (VertexId u = 0; u < g.size(); ++u) {
    for (VertexId v : g.out_neighbors(u)) out << u << ' ' << v << '\n';
  }
}

DirectedGraph read_arc_list(std::istream& in) {
  std::string line;
  std::size_t n = 0;
  bool have_header = false;
  std::vector<std::vector<VertexId>> out;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    if (!have_header) {
      std::string tag;
      if (!(fields >> tag >> n) || tag != "n") {
        throw std::invalid_argument("arc list must start with a header line 'n <count>'");
      }
      out.resize(n);
      have_header = true;
      continue;
    }
    long long u = -1, v = -1;
    std::string extra;
    if (!(fields >> u >> v) || (fields >> extra) || u < 0 || v < 0 ||
        static_cast<std::size_t>(u) >= n || static_cast<std::size_t>(v) >= n) {
      throw std::invalid_argument("malformed arc on line " + std::to_string(line_no));
    }
    out[static_cast<std::size_t>(u)].push_back(static_cast<VertexId>(v));
  }
  if (!have_header) throw std::invalid_argument("empty arc list");
  return DirectedGraph(std::move(out));
}

}  // namespace superstar
