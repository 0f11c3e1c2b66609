#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "golden_system.hpp"
#include "superstar/graph.hpp"
#include "superstar/restricted.hpp"

using namespace superstar;

namespace {

Rational ratio(long num, long den) {
  Rational x(num, den);
  x.canonicalize();
  return x;
}

Rational evaluate_coefficient(const std::string& expr, const RestrictedParameters& p) {
  if (expr == "r") return p.r;
  if (expr == "M") return p.reservoir;
  if (expr == "L") return p.leaves;
  if (expr == "1") return 1;
  if (expr == "1/(L*M)") return 1 / (p.leaves * p.reservoir);
  if (expr == "M-1") return p.reservoir - 1;
  if (expr == "L-1") return p.leaves - 1;
  throw std::runtime_error("unexpected coefficient expression " + expr);
}

RestrictedCoefficient coefficient_named(const std::string& name) {
  for (std::size_t i = 0; i < kRestrictedCoefficientCount; ++i) {
    const auto c = static_cast<RestrictedCoefficient>(i);
    if (to_string(c) == name) return c;
  }
  throw std::runtime_error("unknown coefficient " + name);
}

RestrictedParameters random_parameters(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(1, 40), den(1, 9);
  return {Rational(num(rng)), Rational(num(rng)), ratio(num(rng), den(rng))};
}

}  // namespace

TEST(GoldenListing, CoversEveryNonEmptyStateOnce) {
  const auto listing = golden::parse_listing();
  ASSERT_EQ(listing.equations.size(), 31u);
  std::set<RestrictedState> seen;
  for (const auto& eq : listing.equations) {
    EXPECT_TRUE(seen.insert(golden::mask_of(eq.state)).second) << eq.name;
    EXPECT_EQ(eq.name, "EQ" + eq.state);
  }
  EXPECT_EQ(seen.size(), 31u);
  EXPECT_EQ(seen.count(0), 0u);
  EXPECT_EQ(listing.coefficients.size(), kRestrictedCoefficientCount);
}

TEST(GoldenListing, GeneratedTransitionsMatchEveryEquation) {
  const auto listing = golden::parse_listing();
  for (const auto& eq : listing.equations) {
    const RestrictedState state = golden::mask_of(eq.state);
    const auto generated = restricted_transitions(state);

    std::multiset<std::string> denominator(eq.denominator.begin(), eq.denominator.end());
    std::multiset<std::string> generated_denominator;
    for (const auto& t : generated) generated_denominator.insert(std::string(to_string(t.coefficient)));
    EXPECT_EQ(generated_denominator, denominator) << eq.name;

    std::multiset<std::pair<std::string, int>> numerator, generated_numerator;
    for (const auto& term : eq.numerator) {
      numerator.insert({term.coefficient, term.state.empty() ? -1 : golden::mask_of(term.state)});
    }
    for (const auto& t : generated) {
      if (t.target && *t.target == 0) continue;  // extinction contributes 0
      generated_numerator.insert({std::string(to_string(t.coefficient)), t.target ? int{*t.target} : -1});
    }
    EXPECT_EQ(generated_numerator, numerator) << eq.name;
  }
}

TEST(GoldenListing, CoefficientValuesAgree) {
  const auto listing = golden::parse_listing();
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const auto params = random_parameters(rng);
    for (const auto& [name, expr] : listing.coefficients) {
      EXPECT_EQ(coefficient_value(coefficient_named(name), params), evaluate_coefficient(expr, params)) << name;
    }
  }
}

TEST(GoldenListing, NumericRowsAgreeAfterNormalisation) {
  const auto listing = golden::parse_listing();
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const auto params = random_parameters(rng);
    const auto system = build_restricted_system(params);
    ASSERT_EQ(system.states.size(), 31u);
    for (const auto& eq : listing.equations) {
      const std::size_t i = system.index_of(golden::mask_of(eq.state));
      Rational d = 0;
      for (const auto& c : eq.denominator) d += evaluate_coefficient(listing.coefficients.at(c), params);
      std::vector<Rational> expected(31);
      Rational constant = 0;
      for (const auto& term : eq.numerator) {
        const Rational c = evaluate_coefficient(listing.coefficients.at(term.coefficient), params) / d;
        if (term.state.empty()) {
          constant += c;
        } else {
          expected[system.index_of(golden::mask_of(term.state))] += c;
        }
      }
      const Rational& diag = system.matrix[i][i];
      ASSERT_NE(sgn(diag), 0);
      EXPECT_EQ(system.rhs[i] / diag, constant) << eq.name;
      for (std::size_t j = 0; j < 31; ++j) {
        if (j == i) continue;
        EXPECT_EQ(-system.matrix[i][j] / diag, expected[j]) << eq.name << " column " << j;
      }
      for (const auto& x : system.matrix[i]) EXPECT_EQ(x.get_den(), 1) << "rows are integral";
    }
  }
}

TEST(GoldenListing, SolutionSatisfiesListingAndCentreValue) {
  const auto listing = golden::parse_listing();
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const auto params = random_parameters(rng);
    const auto solution = solve_restricted(params);
    EXPECT_EQ(solution.value(psi::V), params.r / (params.r + params.leaves));
    for (const auto& eq : listing.equations) {
      Rational d = 0, num = 0;
      for (const auto& c : eq.denominator) d += evaluate_coefficient(listing.coefficients.at(c), params);
      for (const auto& term : eq.numerator) {
        const Rational c = evaluate_coefficient(listing.coefficients.at(term.coefficient), params);
        num += term.state.empty() ? c : c * solution.value(golden::mask_of(term.state));
      }
      EXPECT_EQ(solution.value(golden::mask_of(eq.state)), num / d) << eq.name;
    }
  }
}

TEST(Restricted, StateNamesAndTransitions) {
  EXPECT_EQ(restricted_state_name(psi::X), "X");
  EXPECT_EQ(restricted_state_name(psi::V | psi::X | psi::O), "VXO");
  EXPECT_EQ(restricted_state_name(psi::All), "VXOPQ");
  EXPECT_THROW(restricted_transitions(0), std::invalid_argument);
  const auto from_v = restricted_transitions(psi::V);
  ASSERT_EQ(from_v.size(), 2u);
}

TEST(Restricted, ValuesLieInUnitIntervalAndValidate) {
  const auto s = solve_restricted({Rational(3), Rational(4), Rational(2)});
  for (const auto& v : s.values) {
    EXPECT_GE(v, 0);
    EXPECT_LE(v, 1);
  }
  EXPECT_THROW(solve_restricted({Rational(0), Rational(1), Rational(2)}), std::invalid_argument);
  EXPECT_THROW(solve_restricted({Rational(1), Rational(0), Rational(2)}), std::invalid_argument);
  EXPECT_THROW(solve_restricted({Rational(1), Rational(1), Rational(0)}), std::invalid_argument);
}

TEST(Restricted, ConvergesToLimit) {
  for (const Rational& r : {Rational(2), Rational(5)}) {
    const Rational h = limit_h(r);
    double previous = 1.0;
    for (long size : {100L, 1000L, 10000L, 100000L, 1000000L}) {
      const auto q = solve_restricted({Rational(size), Rational(size), r}).from_seed();
      const double gap = std::abs(to_double(Rational(q - h)));
      EXPECT_LT(gap, previous) << size;
      previous = gap;
    }
    EXPECT_LT(previous, 1e-3);
  }
}

TEST(Restricted, LimitIdentities) {
  EXPECT_EQ(limit_h(Rational(2)), Rational(64, 67));
  EXPECT_EQ(j_of_r(Rational(2)), Rational(67, 3));
  EXPECT_EQ(limit_h(Rational(5)), ratio(2 * 3125, 1 + 5 + 2 * 3125));
  for (const Rational& r : {Rational(3, 2), Rational(2), Rational(7)}) {
    EXPECT_EQ(limit_h(r), 1 - 1 / j_of_r(r));
  }
  EXPECT_NEAR(limit_h(2.0), 64.0 / 67.0, 1e-15);
}

TEST(Restricted, OffReservoirProbabilityCountsVertices) {
  for (std::uint32_t l : {1u, 3u, 7u}) {
    for (std::uint32_t m : {1u, 4u}) {
      const auto g = build_superstar({5, l, m});
      long off = 0;
      for (VertexId v = 0; v < g.size(); ++v) off += g.role(v).role != Role::Reservoir;
      EXPECT_EQ(off_reservoir_probability(Rational(l), Rational(m)), ratio(off, static_cast<long>(g.size())));
    }
  }
}

TEST(Restricted, TheoremBoundBelowReference) {
  const auto t = theorem_bound(Rational(10000), Rational(10000), Rational(2));
  EXPECT_EQ(t.bound, t.off_reservoir + t.centre_event);
  EXPECT_LT(t.bound, Rational(31, 32));
  EXPECT_LT(theorem_bound(Rational(200), Rational(200), Rational(2)).bound, Rational(31, 32));
}

TEST(Crossover, RootAndOrdering) {
  const auto c = crossover_root();
  EXPECT_GT(c.root, 1.41);
  EXPECT_LT(c.root, 1.42);
  EXPECT_TRUE(c.ordering_verified);
  const double r = c.root;
  EXPECT_NEAR(std::pow(r, 6) - std::pow(r, 5) - r - 1, 0.0, 1e-8);
}
