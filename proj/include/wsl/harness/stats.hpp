#pragma once

#include <cstddef>
#include <span>

namespace wsl::stats {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

/// Wilson score interval at 95% (z = 1.959964). trials = 0 gives [0, 1].
Interval wilson95(std::size_t successes, std::size_t trials);

double mean(std::span<const double> xs);
/// Unbiased sample variance; 0 for fewer than two values.
double sample_variance(std::span<const double> xs);

struct KsResult {
  double statistic = 0.0; ///< sup |F_a - F_b|
  double p_value = 1.0;   ///< asymptotic Kolmogorov tail with the Stephens correction
};

/// Two-sample Kolmogorov-Smirnov test. Ties are handled by evaluating both
/// empirical CDFs after each distinct value.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Q(x) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 x^2), clamped to [0, 1].
double kolmogorov_tail(double x);

} // namespace wsl::stats
