#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bwreg/simgen.hpp"
#include "support.hpp"

namespace bwreg {
namespace {

SimConfig config(int example, Index n, Index d, std::uint64_t seed, double delta = 0.0) {
  SimConfig c;
  c.example = example;
  c.n = n;
  c.d = d;
  c.seed = seed;
  c.delta_z = delta;
  return c;
}

TEST(Design, DiagonalAtOrigin) {
  const Vector zero = Vector::Zero(6);
  const Vector f = design_diagonal(1, zero, 3, 6, 0.0);
  EXPECT_EQ(f(0), 2.0);
  EXPECT_EQ(f(5), 4.5);
  const Vector g = design_diagonal(2, zero, 3, 6, 0.0);
  EXPECT_EQ(g(0), 2.0);
  EXPECT_EQ(g(1), 2.0);
  EXPECT_EQ(g(2), 2.5);
  EXPECT_EQ(g(5), 3.0);
  Vector x(6);
  x << 0.5, 0.5, 0.5, 1.0, -1.0, 1.0;
  EXPECT_NEAR(design_diagonal(1, x, 3, 6, 0.2)(0), 2.0 + 0.15 + 0.2, 1e-15);
}

TEST(Design, StatedRegressionFunction) {
  GroundTruth t2{2, 1, 2, 0.0, Matrix::Identity(2, 2)};
  EXPECT_EQ(true_qstar(t2, Vector::Zero(2)).matrix(), Matrix(Vector::Constant(2, 4.0).asDiagonal()));
  GroundTruth t1{1, 1, 2, 0.0, Matrix::Identity(2, 2)};
  Vector e(2);
  e << 4.0, 6.25;
  EXPECT_EQ(true_qstar(t1, Vector::Zero(2)).matrix(), Matrix(e.asDiagonal()));
  EXPECT_NEAR(frechet_qstar(t1, Vector::Zero(2)).matrix()(1, 1), 0.255025 * 6.25, 1e-13);
}

TEST(Haar, OneDimensionalSigns) {
  std::mt19937_64 rng(1);
  int plus = 0;
  for (int i = 0; i < 4000; ++i) {
    const double v = haar_orthogonal(1, rng)(0, 0);
    ASSERT_EQ(std::abs(v), 1.0);
    plus += v > 0 ? 1 : 0;
  }
  EXPECT_NEAR(plus / 4000.0, 0.5, 4.0 * 0.5 / std::sqrt(4000.0));
}

TEST(Haar, OrthogonalAndIsotropic) {
  std::mt19937_64 rng(2);
  Vector sum = Vector::Zero(4);
  Vector sq = Vector::Zero(4);
  const int reps = 4000;
  for (int i = 0; i < reps; ++i) {
    const Matrix u = haar_orthogonal(4, rng);
    ASSERT_LT((u.transpose() * u - Matrix::Identity(4, 4)).norm(), 1e-12);
    sum += u.col(0);
    sq += u.col(0).cwiseAbs2();
  }
  // U e_1 is uniform on the sphere: mean zero, E u_j^2 = 1/4
  EXPECT_LT((sum / reps).cwiseAbs().maxCoeff(), 4.0 * 0.5 / std::sqrt(double(reps)));
  EXPECT_LT(((sq / reps).array() - 0.25).abs().maxCoeff(), 0.03);
  const Matrix u10 = haar_orthogonal(10, rng);
  EXPECT_LT((u10.transpose() * u10 - Matrix::Identity(10, 10)).norm(), 1e-12);
}

TEST(Example1, ResponsesCommute) {
  const SimulatedData s = simulate(config(1, 100, 6, 3));
  double worst = 0.0;
  for (Index i = 0; i + 1 < 100; ++i) {
    const Matrix& a = s.data.responses[static_cast<std::size_t>(i)].matrix();
    const Matrix& b = s.data.responses[static_cast<std::size_t>(i + 1)].matrix();
    worst = std::max(worst, (a * b - b * a).norm() / (a.norm() * b.norm()));
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(Example2, ResponsesDoNotCommute) {
  const SimulatedData s = simulate(config(2, 101, 6, 4));
  std::vector<double> c;
  for (Index i = 0; i + 1 < 101; ++i) {
    const Matrix& a = s.data.responses[static_cast<std::size_t>(i)].matrix();
    const Matrix& b = s.data.responses[static_cast<std::size_t>(i + 1)].matrix();
    c.push_back((a * b - b * a).norm());
  }
  std::nth_element(c.begin(), c.begin() + 50, c.end());
  EXPECT_GT(c[50], 0.1);
}

TEST(Example1, ScalingMoments) {
  // V_k^2 = (U^T Q U)_kk / f_k(x)^2 recovers the scaling draws.
  const SimulatedData s = simulate(config(1, 4000, 3, 5));
  const Matrix& u = s.truth.rotation;
  double sum_sq = 0.0, sum_abs = 0.0;
  long count = 0;
  for (Index i = 0; i < 4000; ++i) {
    const Vector f = design_diagonal(1, s.data.covariates.row(i).transpose(), 3, 3, 0.0);
    const Matrix m = u.transpose() * s.data.responses[static_cast<std::size_t>(i)].matrix() * u;
    for (Index k = 0; k < 3; ++k) {
      const double v2 = m(k, k) / (f(k) * f(k));
      sum_sq += v2;
      sum_abs += std::sqrt(v2);
      ++count;
    }
  }
  // E V^2 = (1.1^3 + 0.9^3) / 6 = 0.34333, sd of V^2 about 0.31
  EXPECT_NEAR(sum_sq / count, 0.343333, 4.0 * 0.31 / std::sqrt(double(count)));
  EXPECT_NEAR(sum_abs / count, kMeanAbsScaling, 4.0 * 0.3 / std::sqrt(double(count)));
}

TEST(Covariates, UniformMarginals) {
  const SimulatedData s = simulate(config(1, 3000, 2, 6));
  const Matrix& x = s.data.covariates;
  EXPECT_LE(x.maxCoeff(), 1.0);
  EXPECT_GE(x.minCoeff(), -1.0);
  EXPECT_LT(x.colwise().mean().cwiseAbs().maxCoeff(), 4.0 * std::sqrt(1.0 / 3.0 / 3000.0));
  EXPECT_EQ(s.data.p1, 3);
  EXPECT_EQ(s.data.p(), 6);
}

TEST(Simulate, DeterministicAndPrefixStable) {
  const SimulatedData a = simulate(config(2, 50, 4, 7));
  const SimulatedData b = simulate(config(2, 50, 4, 7));
  EXPECT_EQ(a.data.covariates, b.data.covariates);
  for (std::size_t i = 0; i < 50; ++i) EXPECT_EQ(a.data.responses[i].matrix(), b.data.responses[i].matrix());
  const SimulatedData longer = simulate(config(2, 80, 4, 7));
  EXPECT_EQ(longer.data.covariates.topRows(50), a.data.covariates);
  EXPECT_EQ(longer.data.responses[49].matrix(), a.data.responses[49].matrix());
  const SimulatedData other = simulate(config(2, 50, 4, 8));
  EXPECT_NE(other.data.covariates, a.data.covariates);
}

TEST(Simulate, DeltaOnlyMovesResponses) {
  const SimulatedData a = simulate(config(1, 30, 3, 9, 0.0));
  const SimulatedData b = simulate(config(1, 30, 3, 9, 0.2));
  EXPECT_EQ(a.data.covariates, b.data.covariates);
  EXPECT_NE(a.data.responses[0].matrix(), b.data.responses[0].matrix());
}

TEST(Simulate, InvalidConfigs) {
  auto expect_invalid = [](SimConfig c) {
    try {
      simulate(c);
      ADD_FAILURE() << "accepted invalid config";
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::InvalidConfig);
    }
  };
  expect_invalid(config(2, 30, 3, 1));
  expect_invalid(config(3, 30, 2, 1));
  expect_invalid(config(1, 3, 2, 1));
  expect_invalid(config(1, 30, 2, 1, 2.0 / 6.0));
  expect_invalid(config(1, 30, 0, 1));
  EXPECT_THROW(gen_example1(config(2, 30, 2, 1)), Error);
  EXPECT_NO_THROW(gen_example2(config(2, 30, 2, 1)));
}

TEST(Scaling, MeanAbsUniform) {
  EXPECT_NEAR(mean_abs_uniform(-0.9, 1.1), kMeanAbsScaling, 1e-15);
  EXPECT_NEAR(mean_abs_uniform(0.9, 1.1), 1.0, 1e-15);
  EXPECT_NEAR(mean_abs_uniform(-1.0, 1.0), 0.5, 1e-15);
  // positive range: the stated function is the conditional mean
  SimConfig c = config(1, 20, 3, 11);
  c.scaling_low = 0.9;
  const SimulatedData s = simulate(c);
  const Vector x = Vector::Zero(6);
  EXPECT_LT((frechet_qstar(s.truth, x).matrix() - true_qstar(s.truth, x).matrix()).norm(), 1e-12);
  c.scaling_low = 1.2;
  EXPECT_THROW(simulate(c), Error);
}

TEST(Simulate, FitApproachesImpliedMean) {
  // The fitted conditional mean tracks frechet_qstar, not the stated function.
  const SimulatedData s = simulate(config(2, 3000, 2, 10));
  const CovariateMoments m = CovariateMoments::from_rows(s.data.covariates, 3);
  const Vector x = Vector::Zero(6);
  const Matrix fit = frechet_regress(s.data, x, m).mean.matrix();
  const double to_implied = (fit - frechet_qstar(s.truth, x).matrix()).norm();
  const double to_stated = (fit - true_qstar(s.truth, x).matrix()).norm();
  EXPECT_LT(to_implied, 0.1);
  EXPECT_GT(to_stated, 2.0);
}

}  // namespace
}  // namespace bwreg
