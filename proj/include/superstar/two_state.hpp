#pragma once

// A two-state continuous-time chain observed only through a killing
// process: state 0 is killed at rate kill0, state 1 at rate kill1. The
// belief P(state = 1 | not killed since the anchor) evolves in closed form
// from the 2x2 matrix exponential, and is monotone in time, so the killing
// hazard is bounded by its values at the anchor and in the limit.

#include <cstdint>

#include "superstar/rng.hpp"

namespace superstar {

struct TwoStateRates {
  double up = 0.0;     // 0 -> 1
  double down = 0.0;   // 1 -> 0
  double kill0 = 0.0;  // killing rate while in state 0
  double kill1 = 0.0;  // killing rate while in state 1
};

class TwoStateBelief {
 public:
  TwoStateBelief() = default;
  TwoStateBelief(double time, double p1, const TwoStateRates& rates) { reset(time, p1, rates); }

  /// Anchors the belief: P(state 1) = p1 at `time`, evolving under `rates`.
  void reset(double time, double p1, const TwoStateRates& rates);
  /// Re-anchors at `time` with the current belief and new rates.
  void rebase(double time, const TwoStateRates& rates) { reset(time, probability_at(time), rates); }

  /// P(state 1 at `time` | no killing in [anchor, time]); `time` >= anchor.
  double probability_at(double time) const;
  double hazard_at(double time) const;
  /// Upper bound on hazard_at over [anchor, infinity).
  double hazard_bound() const noexcept { return bound_; }

  /// Draws the state at `time` and re-anchors on it.
  std::uint8_t reveal(double time, Rng& rng);

  const TwoStateRates& rates() const noexcept { return rates_; }
  double anchor_time() const noexcept { return t0_; }
  double anchor_probability() const noexcept { return p0_; }

 private:
  double hazard(double p1) const noexcept { return rates_.kill0 * (1.0 - p1) + rates_.kill1 * p1; }
  double evaluate(double phi) const noexcept;

  TwoStateRates rates_;
  double t0_ = 0.0;
  double p0_ = 0.0;
  double d_ = 0.0;   // gap between the two eigenvalues
  double g0_ = 0.0;  // u0 (G - lambda1 I), u0 = (1 - p0, p0)
  double g1_ = 0.0;
  double bound_ = 0.0;
};

/// Transition probability P(X_t = 1 | X_0 = x) of the plain chain (no
/// killing) with the given up and down rates.
double two_state_transition(std::uint8_t x, double up, double down, double t);

}  // namespace superstar
