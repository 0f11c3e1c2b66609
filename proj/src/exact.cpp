#include "superstar/exact.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>

#include "superstar/linear_solve.hpp"
#include "superstar/modular.hpp"

namespace superstar {

VertexCapExceeded::VertexCapExceeded(std::size_t n, std::size_t cap)
    : std::invalid_argument("graph has " + std::to_string(n) + " vertices; the full-chain solver is capped at " +
                            std::to_string(cap)),
      cap_(cap) {}

Rational classic_moran(std::size_t population, const Rational& r) {
  if (population < 1) throw std::invalid_argument("population must be positive");
  if (sgn(r) <= 0) throw std::invalid_argument("fitness r must be positive");
  if (r == 1) return Rational(1, population);
  const Rational inv = 1 / r;
  Rational inv_pow = 1;
  for (std::size_t i = 0; i < population; ++i) inv_pow *= inv;
  Rational out = (1 - inv) / (1 - inv_pow);
  out.canonicalize();
  return out;
}

double classic_moran(std::size_t population, double r) {
  if (population < 1) throw std::invalid_argument("population must be positive");
  if (!(r > 0.0)) throw std::invalid_argument("fitness r must be positive");
  if (r == 1.0) return 1.0 / static_cast<double>(population);
  return -std::expm1(-std::log(r)) / -std::expm1(-static_cast<double>(population) * std::log(r));
}

namespace {

void check_graph(const DirectedGraph& g, std::size_t cap) {
  if (g.size() == 0) throw std::invalid_argument("empty graph");
  if (g.size() > cap) throw VertexCapExceeded(g.size(), cap);
  if (cap > 30) throw std::invalid_argument("full-chain cap cannot exceed 30 vertices");
  for (VertexId v = 0; v < g.size(); ++v) {
    if (g.out_degree(v) == 0) {
      throw std::invalid_argument("vertex " + std::to_string(v) + " has no out-neighbour");
    }
  }
}

/// Row for transient state S (variable S - 1): total outflow on the
/// diagonal, minus the flow to each transient successor, with flow into the
/// all-mutant state on the right-hand side. Flow out of vertex u is
/// `mutant_weight[u]` or `plain_weight[u]` per state-changing arc.
template <class Scalar>
std::vector<SparseRow<Scalar>> build_chain(const DirectedGraph& g, const std::vector<Scalar>& mutant_weight,
                                           const std::vector<Scalar>& plain_weight) {
  const std::size_t n = g.size();
  const std::uint32_t full = (std::uint32_t{1} << n) - 1;
  std::vector<SparseRow<Scalar>> rows(full - 1);
  std::vector<std::pair<std::uint32_t, Scalar>> entries;
  for (std::uint32_t s = 1; s < full; ++s) {
    entries.clear();
    Scalar diag(0);
    Scalar rhs(0);
    for (VertexId u = 0; u < n; ++u) {
      const bool u_mutant = (s >> u) & 1u;
      const Scalar& w = u_mutant ? mutant_weight[u] : plain_weight[u];
      for (VertexId t : g.out_neighbors(u)) {
        if (((s >> t) & 1u) == static_cast<std::uint32_t>(u_mutant)) continue;
        const std::uint32_t next = s ^ (std::uint32_t{1} << t);
        diag += w;
        if (next == full) {
          rhs += w;
        } else if (next != 0) {
          entries.emplace_back(next - 1, -w);
        }
      }
    }
    entries.emplace_back(s - 1, diag);
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    auto& row = rows[s - 1];
    for (auto& [col, val] : entries) {
      if (!row.cols.empty() && row.cols.back() == col) {
        row.vals.back() += val;
      } else {
        row.cols.push_back(col);
        row.vals.push_back(std::move(val));
      }
    }
    row.rhs = std::move(rhs);
  }
  return rows;
}

/// Transient states by mutant count. Each transition changes the count by
/// one, so this order confines fill-in to neighbouring levels.
std::vector<std::uint32_t> level_order(std::size_t n) {
  const std::uint32_t full = (std::uint32_t{1} << n) - 1;
  std::vector<std::uint32_t> order(full - 1);
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(), [](std::uint32_t a, std::uint32_t b) {
    return std::popcount(a + 1) < std::popcount(b + 1);
  });
  return order;
}

template <class Scalar>
std::vector<Scalar> single_mutant_values(const std::vector<Scalar>& x, std::size_t n) {
  std::vector<Scalar> out(n);
  for (std::size_t v = 0; v < n; ++v) out[v] = x[(std::size_t{1} << v) - 1];
  return out;
}

/// Direct elimination cost grows with the cube of the middle level of the
/// state hypercube; past this size diagonally preconditioned BiCGSTAB is
/// tried first.
constexpr std::size_t kFloatDirectLimit = 10;
constexpr std::size_t kFloatFallbackLimit = 12;

std::optional<std::vector<double>> solve_iterative(const std::vector<SparseRow<double>>& rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  std::vector<Eigen::Triplet<double>> triplets;
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    for (std::size_t k = 0; k < row.cols.size(); ++k) triplets.emplace_back(i, row.cols[k], row.vals[k]);
    b[i] = row.rhs;
  }
  Eigen::SparseMatrix<double, Eigen::RowMajor> a(n, n);
  a.setFromTriplets(triplets.begin(), triplets.end());

  Eigen::BiCGSTAB<Eigen::SparseMatrix<double, Eigen::RowMajor>> solver;
  solver.setTolerance(1e-14);
  solver.setMaxIterations(20000);
  solver.compute(a);
  const Eigen::VectorXd x = solver.solve(b);
  if (solver.info() != Eigen::Success) return std::nullopt;
  return std::vector<double>(x.data(), x.data() + n);
}

}  // namespace

std::vector<Rational> exact_fixation_per_vertex(const DirectedGraph& g, const Rational& r, std::size_t cap) {
  check_graph(g, cap);
  if (sgn(r) <= 0) throw std::invalid_argument("fitness r must be positive");
  const std::size_t n = g.size();
  if (n == 1) return {Rational(1)};

  // Scale all flows by den(r) * lcm(out-degrees) so the matrix is integral.
  mpz_class lcm = 1;
  for (VertexId u = 0; u < n; ++u) {
    mpz_lcm_ui(lcm.get_mpz_t(), lcm.get_mpz_t(), static_cast<unsigned long>(g.out_degree(u)));
  }
  std::vector<mpz_class> mutant_weight(n), plain_weight(n);
  for (VertexId u = 0; u < n; ++u) {
    const mpz_class share = lcm / static_cast<unsigned long>(g.out_degree(u));
    mutant_weight[u] = r.get_num() * share;
    plain_weight[u] = r.get_den() * share;
  }
  auto x = solve_sparse_exact(build_chain(g, mutant_weight, plain_weight), level_order(n));
  return single_mutant_values(x, n);
}

Rational exact_fixation_full(const DirectedGraph& g, const Rational& r, std::optional<VertexId> start,
                             std::size_t cap) {
  if (start && *start >= g.size()) throw std::invalid_argument("start vertex out of range");
  const auto values = exact_fixation_per_vertex(g, r, cap);
  if (start) return values[*start];
  Rational sum = std::accumulate(values.begin(), values.end(), Rational(0));
  Rational out = sum / static_cast<unsigned long>(values.size());
  out.canonicalize();
  return out;
}

std::vector<double> float_fixation_per_vertex(const DirectedGraph& g, double r, std::size_t cap) {
  check_graph(g, cap);
  if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("fitness r must be positive");
  const std::size_t n = g.size();
  if (n == 1) return {1.0};
  std::vector<double> mutant_weight(n), plain_weight(n);
  for (VertexId u = 0; u < n; ++u) {
    plain_weight[u] = 1.0 / static_cast<double>(g.out_degree(u));
    mutant_weight[u] = r * plain_weight[u];
  }
  auto rows = build_chain(g, mutant_weight, plain_weight);
  std::optional<std::vector<double>> solved;
  if (n > kFloatDirectLimit) solved = solve_iterative(rows);
  if (!solved && n <= kFloatFallbackLimit) solved = solve_sparse_in_order(rows, level_order(n));
  if (!solved) throw std::runtime_error("iterative full-chain solve did not converge");
  const std::vector<double>& x = *solved;

  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    double residual = row.rhs;
    double diag = 0.0;
    for (std::size_t k = 0; k < row.cols.size(); ++k) {
      residual -= row.vals[k] * x[row.cols[k]];
      if (row.cols[k] == i) diag = row.vals[k];
    }
    if (!(std::abs(residual) <= 1e-10 * diag)) {
      throw std::runtime_error("floating-point full-chain solve failed its residual check");
    }
  }
  return single_mutant_values(x, n);
}

double float_fixation_full(const DirectedGraph& g, double r, std::optional<VertexId> start, std::size_t cap) {
  if (start && *start >= g.size()) throw std::invalid_argument("start vertex out of range");
  const auto values = float_fixation_per_vertex(g, r, cap);
  if (start) return values[*start];
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

}  // namespace superstar
