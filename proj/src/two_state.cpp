#include "superstar/two_state.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace superstar {

void TwoStateBelief::reset(double time, double p1, const TwoStateRates& rates) {
  if (!(rates.up >= 0.0 && rates.down >= 0.0 && rates.kill0 >= 0.0 && rates.kill1 >= 0.0)) {
    throw std::invalid_argument("two-state rates must be non-negative");
  }
  rates_ = rates;
  t0_ = time;
  p0_ = std::clamp(p1, 0.0, 1.0);

  // Sub-generator G = [[-(up + kill0), up], [down, -(down + kill1)]] acting
  // on row vectors. With eigenvalues lambda1 >= lambda2 and d their gap,
  // exp(G t) is proportional to I + phi(t) (G - lambda1 I),
  // phi(t) = (1 - exp(-d t)) / d.
  const double a = rates.up, b = rates.down;
  const double g00 = -(a + rates.kill0), g11 = -(b + rates.kill1);
  const double delta = g00 - g11;
  d_ = std::sqrt(delta * delta + 4.0 * a * b);
  // lambda1 - g00 and lambda1 - g11 without cancellation.
  const double above00 = delta > 0.0 ? 2.0 * a * b / (d_ + delta) : 0.5 * (d_ - delta);
  const double above11 = delta < 0.0 ? 2.0 * a * b / (d_ - delta) : 0.5 * (d_ + delta);
  g0_ = -(1.0 - p0_) * above00 + p0_ * b;
  g1_ = (1.0 - p0_) * a - p0_ * above11;

  double limit = p0_;
  if (d_ > 0.0) {
    const double w0 = (1.0 - p0_) + g0_ / d_, w1 = p0_ + g1_ / d_;
    if (w0 + w1 > 1e-300) {
      limit = std::clamp(w1 / (w0 + w1), 0.0, 1.0);
    } else {
      limit = -1.0;
    }
  } else if (g0_ + g1_ > 0.0) {
    limit = std::clamp(g1_ / (g0_ + g1_), 0.0, 1.0);
  }
  if (limit < 0.0) {
    bound_ = std::max(rates.kill0, rates.kill1);
  } else {
    bound_ = std::max(hazard(p0_), hazard(limit)) * (1.0 + 1e-9);
  }
}

double TwoStateBelief::evaluate(double phi) const noexcept {
  const double w0 = std::max(0.0, (1.0 - p0_) + phi * g0_);
  const double w1 = std::max(0.0, p0_ + phi * g1_);
  const double sum = w0 + w1;
  return sum > 0.0 ? w1 / sum : p0_;
}

double TwoStateBelief::probability_at(double time) const {
  const double dt = time - t0_;
  if (dt <= 0.0) return p0_;
  const double phi = d_ > 0.0 ? -std::expm1(-d_ * dt) / d_ : dt;
  return evaluate(phi);
}

double TwoStateBelief::hazard_at(double time) const { return hazard(probability_at(time)); }

std::uint8_t TwoStateBelief::reveal(double time, Rng& rng) {
  const std::uint8_t x = uniform01(rng) < probability_at(time) ? 1 : 0;
  reset(time, x, rates_);
  return x;
}

double two_state_transition(std::uint8_t x, double up, double down, double t) {
  const double total = up + down;
  if (total <= 0.0) return x;
  const double stationary = up / total;
  return stationary + (static_cast<double>(x) - stationary) * std::exp(-total * t);
}

}  // namespace superstar
