#include "superstar/stats.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace superstar {

std::string_view to_string(IntervalMethod method) noexcept {
  return method == IntervalMethod::Wald ? "wald" : "agresti-coull";
}

double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("inverse_normal_cdf needs p in (0, 1)");

  static constexpr std::array<double, 6> a{-3.969683028665376e+01, 2.209460984245205e+02,
                                           -2.759285104469687e+02, 1.383577518672690e+02,
                                           -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr std::array<double, 5> b{-5.447609879822406e+01, 1.615858368580409e+02,
                                           -1.556989798598866e+02, 6.680131188771972e+01,
                                           -1.328068155288572e+01};
  static constexpr std::array<double, 6> c{-7.784894002430293e-03, -3.223964580411365e-01,
                                           -2.400758277161838e+00, -2.549732539343734e+00,
                                           4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr std::array<double, 4> d{7.784695709041462e-03, 3.224671290700398e-01,
                                           2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double low = 0.02425;

  double x;
  if (p < low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - low) {
    const double q = p - 0.5;
    const double t = q * q;
    x = (((((a[0] * t + a[1]) * t + a[2]) * t + a[3]) * t + a[4]) * t + a[5]) * q /
        (((((b[0] * t + b[1]) * t + b[2]) * t + b[3]) * t + b[4]) * t + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  // Halley refinement.
  const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

double normal_critical_value(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw std::invalid_argument("confidence must lie in (0, 1)");
  }
  return inverse_normal_cdf(1.0 - (1.0 - confidence) / 2.0);
}

namespace {

void check_counts(std::uint64_t successes, std::uint64_t trials) {
  if (trials == 0) throw std::invalid_argument("binomial interval needs at least one trial");
  if (successes > trials) throw std::invalid_argument("successes exceed trials");
}

double clamp01(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

}  // namespace

ConfidenceInterval agresti_coull(std::uint64_t successes, std::uint64_t trials, double confidence) {
  check_counts(successes, trials);
  const double z = normal_critical_value(confidence);
  const double z2 = z * z;
  const double n_adj = static_cast<double>(trials) + z2;
  const double p_adj = (static_cast<double>(successes) + z2 / 2.0) / n_adj;
  const double half = z * std::sqrt(p_adj * (1.0 - p_adj) / n_adj);
  return {clamp01(p_adj - half), clamp01(p_adj + half), confidence, IntervalMethod::AgrestiCoull};
}

ConfidenceInterval wald_interval(std::uint64_t successes, std::uint64_t trials, double confidence) {
  check_counts(successes, trials);
  const double z = normal_critical_value(confidence);
  const double p = static_cast<double>(successes) / static_cast<double>(trials);
  const double half = z * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
  return {clamp01(p - half), clamp01(p + half), confidence, IntervalMethod::Wald};
}

ConfidenceInterval binomial_interval(std::uint64_t successes, std::uint64_t trials, double confidence,
                                     IntervalMethod method) {
  return method == IntervalMethod::Wald ? wald_interval(successes, trials, confidence)
                                        : agresti_coull(successes, trials, confidence);
}

double round_half_even(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  // nearbyint honours the default FE_TONEAREST mode, which breaks ties to even.
  return std::nearbyint(value * scale) / scale;
}

}  // namespace superstar
