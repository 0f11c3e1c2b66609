#include <gtest/gtest.h>

#include <random>

#include "superstar/exact.hpp"
#include "superstar/graph.hpp"
#include "superstar/linear_solve.hpp"

using namespace superstar;

namespace {

// Dense rational solve of the absorbing chain, straight from the definition
// of one step: pick u with probability fit(u)/W, then a uniform out-neighbour.
std::vector<Rational> dense_oracle(const DirectedGraph& g, const Rational& r) {
  const std::size_t n = g.size();
  const std::size_t states = std::size_t{1} << n;
  const std::size_t full = states - 1;
  const std::size_t t = states - 2;  // transient states 1 .. full-1
  std::vector<std::vector<Rational>> a(t, std::vector<Rational>(t));
  std::vector<Rational> b(t);
  for (std::size_t s = 1; s < full; ++s) {
    const std::size_t row = s - 1;
    Rational total = 0;
    for (VertexId u = 0; u < n; ++u) total += (s >> u & 1) ? r : Rational(1);
    a[row][row] += 1;
    for (VertexId u = 0; u < n; ++u) {
      const Rational fit = (s >> u & 1) ? r : Rational(1);
      const Rational pick = fit / total / Rational(static_cast<long>(g.out_degree(u)));
      for (VertexId v : g.out_neighbors(u)) {
        std::size_t next = (s >> u & 1) ? (s | (std::size_t{1} << v)) : (s & ~(std::size_t{1} << v));
        if (next == full) {
          b[row] += pick;
        } else if (next != 0) {
          a[row][next - 1] -= pick;
        }
      }
    }
  }
  const auto x = solve_dense(a, b);
  std::vector<Rational> out(n);
  for (VertexId v = 0; v < n; ++v) out[v] = x[(std::size_t{1} << v) - 1];
  return out;
}

DirectedGraph random_strong_graph(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::vector<VertexId>> out(n);
  for (VertexId v = 0; v < n; ++v) out[v].push_back(static_cast<VertexId>((v + 1) % n));
  for (VertexId v = 0; v < n; ++v) {
    for (VertexId w = 0; w < n; ++w) {
      if (w != v && w != (v + 1) % n && rng() % 3 == 0) out[v].push_back(w);
    }
  }
  return DirectedGraph(std::move(out));
}

}  // namespace

TEST(ClassicMoran, ClosedForm) {
  EXPECT_EQ(classic_moran(3, Rational(2)), Rational(4, 7));
  EXPECT_EQ(classic_moran(5, Rational(1)), Rational(1, 5));
  EXPECT_EQ(classic_moran(1, Rational(3)), Rational(1));
  EXPECT_EQ(classic_moran(4, Rational(1, 2)), Rational(1, 15));
  EXPECT_NEAR(classic_moran(3, 2.0), 4.0 / 7.0, 1e-15);
  EXPECT_NEAR(classic_moran(10, 1.0), 0.1, 1e-15);
  EXPECT_THROW(classic_moran(0, Rational(2)), std::invalid_argument);
  EXPECT_THROW(classic_moran(3, Rational(0)), std::invalid_argument);
}

TEST(ExactFull, CompleteGraphsMatchClassicMoran) {
  for (std::size_t n = 2; n <= 6; ++n) {
    for (const Rational& r : {Rational(1, 2), Rational(1), Rational(2), Rational(3)}) {
      EXPECT_EQ(exact_fixation_full(build_complete(n), r), classic_moran(n, r)) << n << ' ' << r;
    }
  }
}

TEST(ExactFull, MatchesDenseOracleOnSuperstarsAndRandomGraphs) {
  std::vector<DirectedGraph> graphs{build_superstar({5, 1, 1}), build_superstar({3, 2, 1}),
                                    build_superstar({4, 1, 2}), build_superstar({2, 2, 2}), build_star(5)};
  std::mt19937_64 rng(17);
  for (int i = 0; i < 4; ++i) graphs.push_back(random_strong_graph(4 + i % 3, rng));
  for (const auto& g : graphs) {
    for (const Rational& r : {Rational(2), Rational(3, 2), Rational(1, 3)}) {
      const auto expected = dense_oracle(g, r);
      const auto got = exact_fixation_per_vertex(g, r);
      ASSERT_EQ(got.size(), expected.size());
      for (std::size_t v = 0; v < got.size(); ++v) EXPECT_EQ(got[v], expected[v]) << "n=" << g.size() << " v=" << v;
      Rational mean = 0;
      for (const auto& x : expected) mean += x;
      mean /= Rational(static_cast<long>(g.size()));
      EXPECT_EQ(exact_fixation_full(g, r), mean);
      EXPECT_EQ(exact_fixation_full(g, r, VertexId{0}), expected[0]);
    }
  }
}

TEST(ExactFull, SmallestFiveSuperstar) {
  const auto g = build_superstar({5, 1, 1});
  EXPECT_EQ(dense_oracle(g, Rational(2)), exact_fixation_per_vertex(g, Rational(2)));
  EXPECT_EQ(exact_fixation_full(g, Rational(2)), Rational(16, 31));
}

TEST(FloatFull, AgreesWithExact) {
  for (const SuperstarSpec& spec : {SuperstarSpec{5, 2, 2}, SuperstarSpec{3, 3, 2}, SuperstarSpec{4, 2, 3}}) {
    const auto g = build_superstar(spec);
    const auto exact = exact_fixation_per_vertex(g, Rational(2));
    const auto approx = float_fixation_per_vertex(g, 2.0);
    for (std::size_t v = 0; v < exact.size(); ++v) EXPECT_NEAR(approx[v], to_double(exact[v]), 1e-10);
  }
}

TEST(FloatFull, IterativePathAboveDirectLimit) {
  // 15 vertices: solved iteratively; the mean over start vertices of a
  // complete graph is the classic value.
  EXPECT_NEAR(float_fixation_full(build_complete(13), 2.0), classic_moran(13, 2.0), 1e-10);
  const auto g = build_superstar({5, 2, 3});  // n = 13
  const double value = float_fixation_full(g, 2.0);
  EXPECT_GT(value, 0.0);
  EXPECT_LT(value, 1.0);
}

TEST(Caps, AreEnforced) {
  EXPECT_THROW(exact_fixation_full(build_complete(13), Rational(2)), VertexCapExceeded);
  EXPECT_THROW(float_fixation_full(build_complete(17), 2.0), VertexCapExceeded);
  try {
    exact_fixation_full(build_complete(20), Rational(2));
    FAIL();
  } catch (const VertexCapExceeded& e) {
    EXPECT_EQ(e.cap(), kExactVertexCap);
    EXPECT_NE(std::string(e.what()).find("12"), std::string::npos);
  }
}

TEST(ExactFull, RejectsBadInput) {
  EXPECT_THROW(exact_fixation_full(build_complete(3), Rational(0)), std::invalid_argument);
  const DirectedGraph dead(std::vector<std::vector<VertexId>>{{1}, {}});
  EXPECT_THROW(exact_fixation_full(dead, Rational(2)), std::invalid_argument);
}
