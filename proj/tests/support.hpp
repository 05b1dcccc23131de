#pragma once

#include <cmath>
#include <random>

#include "bwreg/frechet.hpp"
#include "bwreg/simgen.hpp"

namespace bwreg::testing {

inline Matrix random_orthogonal(Index d, std::mt19937_64& rng) { return haar_orthogonal(d, rng); }

// SPD matrix with log-uniform spectrum in [lo, hi] and a Haar eigenbasis.
inline SpdMatrix random_spd(Index d, std::mt19937_64& rng, double lo = 0.2, double hi = 5.0) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  Vector ev(d);
  for (Index i = 0; i < d; ++i) ev(i) = std::exp(u(rng));
  const Matrix q = random_orthogonal(d, rng);
  return SpdMatrix(q * ev.asDiagonal() * q.transpose());
}

inline SymMatrix random_sym(Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Matrix a(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) a(i, j) = n(rng);
  return SymMatrix(0.5 * (a + a.transpose()));
}

inline double rel_diff(const Matrix& a, const Matrix& b) {
  return (a - b).norm() / std::max({a.norm(), b.norm(), 1e-300});
}

inline double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

inline Dataset small_dataset(int example, Index n, Index p_y, Index p_z, Index d, std::uint64_t seed,
                             double delta = 0.0) {
  SimConfig c;
  c.example = example;
  c.n = n;
  c.p_y = p_y;
  c.p_z = p_z;
  c.d = d;
  c.delta_z = delta;
  c.seed = seed;
  return simulate(c).data;
}

}  // namespace bwreg::testing
