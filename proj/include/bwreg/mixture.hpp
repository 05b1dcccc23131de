#pragma once

// Monte Carlo calibration of weighted chi-squared mixtures sum_j lambda_j w_j,
// w_j i.i.d. chi-squared(1).

#include <cstdint>
#include <span>
#include <vector>

namespace bwreg {

inline constexpr std::size_t kMinMixtureDraws = 1000;

// B draws of sum_j lambda_j z_j^2 (z standard normal), sorted ascending.
// Deterministic in (lambdas, draws, seed).
std::vector<double> mixture_draws(std::span<const double> lambdas, std::size_t draws,
                                  std::uint64_t seed);

// Order statistic ceil(B (1 - alpha)) of sorted draws.
double quantile_from_sorted(std::span<const double> sorted, double alpha);
// (1 + #{draws >= t}) / (B + 1)
double p_value_from_sorted(std::span<const double> sorted, double t);

double mixture_quantile(std::span<const double> lambdas, double alpha, std::size_t draws,
                        std::uint64_t seed);
double p_value(double t, std::span<const double> lambdas, std::size_t draws, std::uint64_t seed);

// Two-sample Kolmogorov-Smirnov distance between sorted samples.
double ks_distance(std::span<const double> a_sorted, std::span<const double> b_sorted);
// Kolmogorov-Smirnov distance of a sorted sample from Uniform[0,1].
double ks_uniform(std::span<const double> sorted);

}  // namespace bwreg
