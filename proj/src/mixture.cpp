#include "bwreg/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "bwreg/error.hpp"

namespace bwreg {

std::vector<double> mixture_draws(std::span<const double> lambdas, std::size_t draws,
                                  std::uint64_t seed) {
  if (draws < kMinMixtureDraws) {
    throw Error(ErrorKind::InvalidInput, "mixture_draws: at least 1000 draws are required");
  }
  std::vector<double> active;
  for (double l : lambdas) {
    if (!(l >= 0.0) || !std::isfinite(l)) {
      throw Error(ErrorKind::InvalidInput, "mixture_draws: weights must be finite and nonnegative");
    }
    if (l > 0.0) active.push_back(l);
  }
  std::vector<double> out(draws, 0.0);
  if (active.empty()) return out;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (auto& v : out) {
    double acc = 0.0;
    for (double l : active) {
      const double z = normal(rng);
      acc += l * z * z;
    }
    v = acc;
  }
  std::sort(out.begin(), out.end());
  return out;
}

double quantile_from_sorted(std::span<const double> sorted, double alpha) {
  if (sorted.empty()) throw Error(ErrorKind::InvalidInput, "quantile_from_sorted: no draws");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorKind::InvalidInput, "quantile_from_sorted: alpha must lie in (0, 1)");
  }
  const double b = static_cast<double>(sorted.size());
  // The small offset keeps B(1 - alpha) from rounding up past an integer.
  auto k = static_cast<std::size_t>(std::ceil(b * (1.0 - alpha) - 1e-9));
  k = std::clamp<std::size_t>(k, 1, sorted.size());
  return sorted[k - 1];
}

double p_value_from_sorted(std::span<const double> sorted, double t) {
  if (std::isnan(t)) throw Error(ErrorKind::InvalidInput, "p_value: statistic is NaN");
  const auto first = std::lower_bound(sorted.begin(), sorted.end(), t);
  const auto at_least = static_cast<double>(sorted.end() - first);
  return (1.0 + at_least) / (static_cast<double>(sorted.size()) + 1.0);
}

double mixture_quantile(std::span<const double> lambdas, double alpha, std::size_t draws,
                        std::uint64_t seed) {
  const auto sorted = mixture_draws(lambdas, draws, seed);
  return quantile_from_sorted(sorted, alpha);
}

double p_value(double t, std::span<const double> lambdas, std::size_t draws, std::uint64_t seed) {
  const auto sorted = mixture_draws(lambdas, draws, seed);
  return p_value_from_sorted(sorted, t);
}

double ks_distance(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw Error(ErrorKind::InvalidInput, "ks_distance: empty sample");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double best = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    best = std::max(best, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return best;
}

double ks_uniform(std::span<const double> sorted) {
  if (sorted.empty()) throw Error(ErrorKind::InvalidInput, "ks_uniform: empty sample");
  const double n = static_cast<double>(sorted.size());
  double best = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double u = std::clamp(sorted[i], 0.0, 1.0);
    best = std::max({best, static_cast<double>(i + 1) / n - u, u - static_cast<double>(i) / n});
  }
  return best;
}

}  // namespace bwreg
