#include "wsl/harness/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace wsl::stats {

Interval wilson95(std::size_t successes, std::size_t trials) {
  if (trials == 0)
    return {};
  constexpr double z = 1.959963984540054;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double denom = 1.0 + z * z / n;
  const double centre = (p + z * z / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

double mean(std::span<const double> xs) {
  if (xs.empty())
    return 0.0;
  double sum = 0.0;
  for (double x : xs)
    sum += x;
  return sum / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
  if (xs.size() < 2)
    return 0.0;
  const double mu = mean(xs);
  double acc = 0.0;
  for (double x : xs)
    acc += (x - mu) * (x - mu);
  return acc / static_cast<double>(xs.size() - 1);
}

double kolmogorov_tail(double x) {
  if (x <= 0.0)
    return 1.0;
  // The alternating series converges too slowly below ~0.2, where Q is 1
  // to double precision anyway.
  if (x < 0.2)
    return 1.0;
  double sum = 0.0;
  for (int j = 1; j <= 200; ++j) {
    const double term = std::exp(-2.0 * j * j * x * x);
    sum += (j % 2 == 1 ? term : -term);
    if (term < 1e-300)
      break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  KsResult result;
  if (a.empty() || b.empty())
    return result;
  std::vector<double> xs(a.begin(), a.end());
  std::vector<double> ys(b.begin(), b.end());
  std::ranges::sort(xs);
  std::ranges::sort(ys);
  const double na = static_cast<double>(xs.size());
  const double nb = static_cast<double>(ys.size());
  std::size_t ia = 0;
  std::size_t ib = 0;
  double d = 0.0;
  while (ia < xs.size() && ib < ys.size()) {
    const double v = std::min(xs[ia], ys[ib]);
    while (ia < xs.size() && xs[ia] == v)
      ++ia;
    while (ib < ys.size() && ys[ib] == v)
      ++ib;
    d = std::max(d, std::abs(static_cast<double>(ia) / na - static_cast<double>(ib) / nb));
  }
  result.statistic = d;
  const double en = std::sqrt(na * nb / (na + nb));
  result.p_value = kolmogorov_tail((en + 0.12 + 0.11 / en) * d);
  return result;
}

} // namespace wsl::stats
