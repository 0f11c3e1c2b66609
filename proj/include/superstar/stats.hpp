#pragma once

#include <cstdint>
#include <string_view>

namespace superstar {

enum class IntervalMethod { AgrestiCoull, Wald };

std::string_view to_string(IntervalMethod method) noexcept;

struct ConfidenceInterval {
  double lower = 0.0;
  double upper = 1.0;
  double confidence = 0.995;
  IntervalMethod method = IntervalMethod::AgrestiCoull;

  bool contains(double p) const noexcept { return lower <= p && p <= upper; }
  bool overlaps(const ConfidenceInterval& other) const noexcept {
    return lower <= other.upper && other.lower <= upper;
  }
};

/// Inverse of the standard normal CDF for p in (0, 1). Rational
/// approximation (Acklam) polished by one Halley step against std::erfc;
/// absolute error below 1e-9 over the open interval.
double inverse_normal_cdf(double p);

/// Two-sided critical value z with P(|Z| <= z) = confidence.
double normal_critical_value(double confidence);

/// Adjusted-count interval: n' = n + z^2, p' = (x + z^2/2) / n',
/// p' +- z sqrt(p'(1 - p') / n'), clamped to [0, 1].
/// Throws std::invalid_argument unless 0 <= successes <= trials, trials >= 1
/// and 0 < confidence < 1.
ConfidenceInterval agresti_coull(std::uint64_t successes, std::uint64_t trials, double confidence);

/// Plain normal-approximation interval around the sample proportion.
ConfidenceInterval wald_interval(std::uint64_t successes, std::uint64_t trials, double confidence);

ConfidenceInterval binomial_interval(std::uint64_t successes, std::uint64_t trials, double confidence,
                                     IntervalMethod method);

/// Rounds to `decimals` places, ties to even on the decimal digit.
double round_half_even(double value, int decimals);

}  // namespace superstar
