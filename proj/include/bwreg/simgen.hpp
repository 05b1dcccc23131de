#pragma once

// Seeded generators for the two simulation designs.
//
// Example 1 (commuting): Q_i = U V_i f(X_i)^2 V_i U^T with one Haar U per
// dataset, f(x)_kk = 1.5 + k/2 + 0.1 sum y + delta_z sum z.
// Example 2 (non-commuting): Q_i = U_i V_i g(X_i)^2 V_i U_i^T with U_i
// block-diagonal of 2x2 Haar blocks drawn per sample,
// g(x)_kk = 1.5 + 0.5 ceil(k/2) + 0.1 sum y + delta_z sum z.
// X ~ Uniform[-1,1]^p, V diagonal with Uniform[-0.9,1.1] entries by default.

#include <cstdint>
#include <random>

#include "bwreg/frechet.hpp"

namespace bwreg {

struct SimConfig {
  int example = 1;
  Index n = 200;
  Index p_y = 3;
  Index p_z = 3;
  Index d = 6;
  double delta_z = 0.0;
  std::uint64_t seed = 1;
  // Range of the V entries.
  double scaling_low = -0.9;
  double scaling_high = 1.1;

  Index p() const { return p_y + p_z; }
  // Throws InvalidConfig.
  void validate() const;
};

struct GroundTruth {
  int example = 1;
  Index p_y = 0;
  Index d = 0;
  double delta_z = 0.0;
  Matrix rotation;  // U for example 1, identity for example 2
  double mean_abs_scaling = 0.505;  // E|V|
};

struct SimulatedData {
  Dataset data;
  GroundTruth truth;
  int resampled = 0;  // responses redrawn after failing PD validation
};

// E|V| for V ~ Uniform[-0.9, 1.1].
inline constexpr double kMeanAbsScaling = 0.505;

// E|V| for V ~ Uniform[lo, hi].
double mean_abs_uniform(double lo, double hi);

Matrix haar_orthogonal(Index d, std::mt19937_64& rng);

// Diagonal of f(x) (example 1) or g(x) (example 2).
Vector design_diagonal(int example, const Vector& x, Index p_y, Index d, double delta_z);

SimulatedData gen_example1(const SimConfig& cfg);
SimulatedData gen_example2(const SimConfig& cfg);
SimulatedData simulate(const SimConfig& cfg);

// The designs' stated regression function: U f(x)^2 U^T or g(x)^2.
SpdMatrix true_qstar(const GroundTruth& truth, const Vector& x);

// Conditional Frechet mean actually implied by the generators. The response
// square root is U |V| f(x) U^T, so the Frechet mean scales the stated
// function by (E|V|)^2, which is 0.255025 for the default range, in both
// designs.
SpdMatrix frechet_qstar(const GroundTruth& truth, const Vector& x);

}  // namespace bwreg
