#pragma once

// Absorbing chain for a k = 5 superstar restricted to the vertices a run
// seeded on one reservoir vertex can touch before the centre, holding a
// mutant, is selected to reproduce:
//
//   V  the centre
//   X  the seeded reservoir vertex (leaf i)
//   O  first chain vertex of leaf i
//   P  second chain vertex of leaf i
//   Q  third chain vertex of leaf i (feeds the centre)
//
// A state is the subset of {V, X, O, P, Q} holding mutants. For every
// non-empty state the probability of reaching the centre event satisfies one
// linear equation; the empty state has value 0, giving 31 equations in 31
// unknowns. L and M stand for the number of leaves and the reservoir size.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "superstar/rational.hpp"

namespace superstar {

/// Bitmask over the five tracked vertices.
using RestrictedState = std::uint8_t;

namespace psi {
inline constexpr RestrictedState V = 1u << 0;
inline constexpr RestrictedState X = 1u << 1;
inline constexpr RestrictedState O = 1u << 2;
inline constexpr RestrictedState P = 1u << 3;
inline constexpr RestrictedState Q = 1u << 4;
inline constexpr RestrictedState All = V | X | O | P | Q;
}  // namespace psi

/// Rate of each kind of transition, normalised by the total fitness W.
enum class RestrictedCoefficient : std::uint8_t {
  XonO,        // r           mutant X overwrites plain O
  XoffO,       // M           the whole plain reservoir overwrites mutant O
  OonP,        // r
  OoffP,       // 1
  PonQ,        // r
  PoffQ,       // 1
  QonV,        // r           mutant Q overwrites plain V
  QoffV,       // L           all chain ends are plain and overwrite mutant V
  Vgo,         // r           mutant V reproduces: the centre event
  VoffX,       // 1/(L M)     plain V picks X among its L M out-neighbours
  OtherXoffO,  // M - 1       plain reservoir vertices other than X overwrite O
  OtherQoffV,  // L - 1       chain ends of other leaves overwrite V
};

inline constexpr std::size_t kRestrictedCoefficientCount = 12;

std::string_view to_string(RestrictedCoefficient c) noexcept;

/// One outgoing transition. `target` is the next state (0 means extinction,
/// worth 0); an empty optional is the centre event itself, worth 1.
struct RestrictedTransition {
  RestrictedCoefficient coefficient;
  std::optional<RestrictedState> target;
};

/// Enumerates the transitions out of `state` from the arc structure
/// V -> X (1 of L M), X -> O, O -> P, P -> Q, Q -> V, with the M - 1 other
/// reservoir vertices of the leaf feeding O and the L - 1 other chain ends
/// feeding V, all of them non-mutant. Throws for the empty state.
std::vector<RestrictedTransition> restricted_transitions(RestrictedState state);

/// "X", "XO", ..., using the vertex order V X O P Q.
std::string restricted_state_name(RestrictedState state);

struct RestrictedParameters {
  Rational leaves;     // L
  Rational reservoir;  // M
  Rational r;

  /// Throws std::invalid_argument unless L >= 1, M >= 1 and r > 0.
  void validate() const;
};

Rational coefficient_value(RestrictedCoefficient c, const RestrictedParameters& params);

/// Dense system A x = b, one row per non-empty state in increasing mask
/// order. Row S reads D_S x_S - sum c x_{S'} = sum of centre-event rates,
/// scaled by the least common denominator of its entries so every entry is
/// an integer.
struct RestrictedSystem {
  std::vector<RestrictedState> states;
  std::vector<std::vector<Rational>> matrix;
  std::vector<Rational> rhs;

  std::size_t index_of(RestrictedState state) const;
};

RestrictedSystem build_restricted_system(const RestrictedParameters& params);

struct RestrictedSolution {
  std::vector<RestrictedState> states;
  std::vector<Rational> values;

  const Rational& value(RestrictedState state) const;
  /// Probability of the centre event from a single mutant on X.
  const Rational& from_seed() const { return value(psi::X); }
};

/// Exact solve; throws SingularSystem if the system is singular and
/// std::logic_error if a solved value leaves [0, 1].
RestrictedSolution solve_restricted(const RestrictedParameters& params);

/// Limit of the centre-event probability as the superstar grows:
/// 2 r^5 / (1 + r + 2 r^5).
template <class Scalar>
Scalar limit_h(const Scalar& r) {
  const Scalar r5 = r * r * r * r * r;
  return Scalar(2 * r5) / Scalar(1 + r + 2 * r5);
}

/// (2 r^5 + r + 1) / (r + 1), so that limit_h(r) = 1 - 1 / j_of_r(r).
template <class Scalar>
Scalar j_of_r(const Scalar& r) {
  const Scalar r5 = r * r * r * r * r;
  return Scalar(2 * r5 + r + 1) / Scalar(r + 1);
}

/// Probability that the initial mutant of S^5_{l,m} lands off the reservoir,
/// (1 + 3 l) / (1 + l (m + 3)).
Rational off_reservoir_probability(const Rational& leaves, const Rational& reservoir);

struct TheoremQuantities {
  Rational off_reservoir;  // p(l, r)
  Rational centre_event;   // q(l, r)
  Rational limit;          // h(r)
  Rational j;              // j(r)
  Rational bound;          // p + q, an upper bound on fixation (may exceed 1)
};

/// Finite-size upper bound on the fixation probability of S^5_{l,m}.
TheoremQuantities theorem_bound(const Rational& leaves, const Rational& reservoir, const Rational& r);

struct CrossoverResult {
  double root = 0.0;
  /// 1 - 1/j(r) < 1 - r^-5 just above the root and on a grid up to 100, and
  /// the reverse just below it (down to r = 1).
  bool ordering_verified = false;
};

/// Root in (1, 2) of r^6 - r^5 - r - 1, where j(r) = r^5, by bisection to
/// `tolerance`.
CrossoverResult crossover_root(double tolerance = 1e-9);

}  // namespace superstar
