#include "superstar/restricted.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "superstar/linear_solve.hpp"

namespace superstar {

std::string_view to_string(RestrictedCoefficient c) noexcept {
  switch (c) {
    case RestrictedCoefficient::XonO: return "XonO";
    case RestrictedCoefficient::XoffO: return "XoffO";
    case RestrictedCoefficient::OonP: return "OonP";
    case RestrictedCoefficient::OoffP: return "OoffP";
    case RestrictedCoefficient::PonQ: return "PonQ";
    case RestrictedCoefficient::PoffQ: return "PoffQ";
    case RestrictedCoefficient::QonV: return "QonV";
    case RestrictedCoefficient::QoffV: return "QoffV";
    case RestrictedCoefficient::Vgo: return "Vgo";
    case RestrictedCoefficient::VoffX: return "VoffX";
    case RestrictedCoefficient::OtherXoffO: return "otherXoffO";
    case RestrictedCoefficient::OtherQoffV: return "otherQoffV";
  }
  return "?";
}

namespace {

/// The five arcs among the tracked vertices. Each tracked vertex has exactly
/// one tracked in-neighbour; O and V also receive arcs from untracked,
/// necessarily non-mutant vertices (the rest of the reservoir, the other
/// chain ends). The centre as a mutant source is not listed: any
/// reproduction by a mutant centre is the centre event.
struct TrackedArc {
  RestrictedState source;
  RestrictedState target;
  std::optional<RestrictedCoefficient> on;  // source mutant, target plain
  RestrictedCoefficient off;                // source plain, target mutant
  std::optional<RestrictedCoefficient> others_off;  // untracked sources, target mutant, source mutant
};

constexpr std::array<TrackedArc, 5> kArcs{{
    {psi::V, psi::X, std::nullopt, RestrictedCoefficient::VoffX, std::nullopt},
    {psi::X, psi::O, RestrictedCoefficient::XonO, RestrictedCoefficient::XoffO, RestrictedCoefficient::OtherXoffO},
    {psi::O, psi::P, RestrictedCoefficient::OonP, RestrictedCoefficient::OoffP, std::nullopt},
    {psi::P, psi::Q, RestrictedCoefficient::PonQ, RestrictedCoefficient::PoffQ, std::nullopt},
    {psi::Q, psi::V, RestrictedCoefficient::QonV, RestrictedCoefficient::QoffV, RestrictedCoefficient::OtherQoffV},
}};

}  // namespace

std::vector<RestrictedTransition> restricted_transitions(RestrictedState state) {
  if (state == 0 || (state & ~psi::All) != 0) throw std::invalid_argument("restricted state must be a non-empty subset");
  std::vector<RestrictedTransition> out;
  for (const auto& arc : kArcs) {
    const bool source = state & arc.source;
    const bool target = state & arc.target;
    if (source && !target && arc.on) {
      out.push_back({*arc.on, static_cast<RestrictedState>(state | arc.target)});
    } else if (!source && target) {
      // The off rate lumps the plain tracked source with any untracked ones.
      out.push_back({arc.off, static_cast<RestrictedState>(state & ~arc.target)});
    } else if (source && target && arc.others_off) {
      out.push_back({*arc.others_off, static_cast<RestrictedState>(state & ~arc.target)});
    }
  }
  if (state & psi::V) out.push_back({RestrictedCoefficient::Vgo, std::nullopt});
  return out;
}

std::string restricted_state_name(RestrictedState state) {
  static constexpr std::string_view letters = "VXOPQ";
  std::string name;
  for (int i = 0; i < 5; ++i) {
    if (state & (1u << i)) name += letters[i];
  }
  return name.empty() ? "-" : name;
}

void RestrictedParameters::validate() const {
  if (leaves < 1) throw std::invalid_argument("L must be at least 1");
  if (reservoir < 1) throw std::invalid_argument("M must be at least 1");
  if (sgn(r) <= 0) throw std::invalid_argument("r must be positive");
}

Rational coefficient_value(RestrictedCoefficient c, const RestrictedParameters& p) {
  switch (c) {
    case RestrictedCoefficient::XonO:
    case RestrictedCoefficient::OonP:
    case RestrictedCoefficient::PonQ:
    case RestrictedCoefficient::QonV:
    case RestrictedCoefficient::Vgo: return p.r;
    case RestrictedCoefficient::XoffO: return p.reservoir;
    case RestrictedCoefficient::OoffP:
    case RestrictedCoefficient::PoffQ: return Rational(1);
    case RestrictedCoefficient::QoffV: return p.leaves;
    case RestrictedCoefficient::VoffX: {
      Rational v = 1 / (p.leaves * p.reservoir);
      v.canonicalize();
      return v;
    }
    case RestrictedCoefficient::OtherXoffO: return Rational(p.reservoir - 1);
    case RestrictedCoefficient::OtherQoffV: return Rational(p.leaves - 1);
  }
  throw std::logic_error("unknown coefficient");
}

std::size_t RestrictedSystem::index_of(RestrictedState state) const {
  const auto it = std::find(states.begin(), states.end(), state);
  if (it == states.end()) throw std::out_of_range("state not in restricted system");
  return static_cast<std::size_t>(it - states.begin());
}

RestrictedSystem build_restricted_system(const RestrictedParameters& params) {
  params.validate();
  std::array<Rational, kRestrictedCoefficientCount> value;
  for (std::size_t c = 0; c < kRestrictedCoefficientCount; ++c) {
    value[c] = coefficient_value(static_cast<RestrictedCoefficient>(c), params);
  }

  RestrictedSystem sys;
  for (RestrictedState s = 1; s <= psi::All; ++s) sys.states.push_back(s);
  const std::size_t n = sys.states.size();
  sys.matrix.assign(n, std::vector<Rational>(n, Rational(0)));
  sys.rhs.assign(n, Rational(0));

  for (std::size_t i = 0; i < n; ++i) {
    auto& row = sys.matrix[i];
    for (const auto& t : restricted_transitions(sys.states[i])) {
      const Rational& c = value[static_cast<std::size_t>(t.coefficient)];
      row[i] += c;
      if (!t.target) {
        sys.rhs[i] += c;
      } else if (*t.target != 0) {
        row[sys.index_of(*t.target)] -= c;
      }
    }
    mpz_class scale = sys.rhs[i].get_den();
    for (const auto& entry : row) mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), entry.get_den_mpz_t());
    for (auto& entry : row) {
      entry *= scale;
      entry.canonicalize();
    }
    sys.rhs[i] *= scale;
    sys.rhs[i].canonicalize();
  }
  return sys;
}

const Rational& RestrictedSolution::value(RestrictedState state) const {
  const auto it = std::find(states.begin(), states.end(), state);
  if (it == states.end()) throw std::out_of_range("state not in restricted solution");
  return values[static_cast<std::size_t>(it - states.begin())];
}

RestrictedSolution solve_restricted(const RestrictedParameters& params) {
  auto sys = build_restricted_system(params);
  RestrictedSolution sol;
  sol.values = solve_dense(std::move(sys.matrix), std::move(sys.rhs));
  sol.states = std::move(sys.states);
  for (auto& v : sol.values) {
    v.canonicalize();
    if (v < 0 || v > 1) throw std::logic_error("restricted solve produced a value outside [0, 1]");
  }
  return sol;
}

Rational off_reservoir_probability(const Rational& leaves, const Rational& reservoir) {
  Rational p = (1 + 3 * leaves) / (1 + leaves * (reservoir + 3));
  p.canonicalize();
  return p;
}

TheoremQuantities theorem_bound(const Rational& leaves, const Rational& reservoir, const Rational& r) {
  TheoremQuantities out;
  out.off_reservoir = off_reservoir_probability(leaves, reservoir);
  out.centre_event = solve_restricted({leaves, reservoir, r}).from_seed();
  out.limit = limit_h(r);
  out.limit.canonicalize();
  out.j = j_of_r(r);
  out.j.canonicalize();
  out.bound = out.off_reservoir + out.centre_event;
  return out;
}

CrossoverResult crossover_root(double tolerance) {
  auto f = [](double r) { return std::pow(r, 6) - std::pow(r, 5) - r - 1.0; };
  double lo = 1.0, hi = 2.0;
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  CrossoverResult out;
  out.root = 0.5 * (lo + hi);

  auto bound_below_claim = [](double r) { return limit_h(r) < 1.0 - std::pow(r, -5.0); };
  bool ok = bound_below_claim(out.root + 1e-4) && !bound_below_claim(out.root - 1e-4);
  for (double r = out.root + 0.01; r <= 100.0; r *= 1.05) ok = ok && bound_below_claim(r);
  for (double r = 1.0 + 1e-3; r < out.root - 0.01; r += 0.01) ok = ok && !bound_below_claim(r);
  out.ordering_verified = ok;
  return out;
}

}  // namespace superstar
