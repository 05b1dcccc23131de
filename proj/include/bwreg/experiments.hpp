#pragma once

// Monte Carlo harness: null size, Q-Q tables, power curves and estimator
// consistency. Every trial is a pure function of (config, trial index) and
// summaries are reduced in trial order, so results do not depend on the
// thread count.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bwreg/partial_test.hpp"
#include "bwreg/simgen.hpp"

namespace bwreg {

struct ExperimentConfig {
  SimConfig sim;  // template; seed and delta_z are set per trial
  int trials = 200;
  double alpha = 0.05;
  std::vector<double> delta_grid{0.0};
  std::size_t mc_draws = 100000;
  std::uint64_t root_seed = 1;
  int threads = 1;
  std::vector<Index> n_grid{100, 200, 400, 800};
  SolverOptions solver;
  CovariateEmbedding embedding = CovariateEmbedding::Augmented;
  double max_nonconverged_fraction = 0.05;
  // Q-Q reference sample size.
  std::size_t qq_draws = 100000;

  void validate() const;
};

struct TrialRecord {
  int index = 0;
  std::uint64_t seed = 0;
  bool completed = false;
  std::string failure;
  double statistic = 0.0;
  double p_value = 1.0;
  double quantile = 0.0;
  bool reject = false;
  double eigenvalue_sum = 0.0;
  std::vector<double> eigenvalues;
  Index nonconverged = 0;
  double min_hessian_eigenvalue = 0.0;
};

struct StudySummary {
  int trials = 0;
  int completed = 0;
  int failed = 0;
  int rejections = 0;
  double rate = 0.0;
  // Clopper-Pearson 95% interval for the rejection rate.
  double ci_low = 0.0;
  double ci_high = 1.0;
  double mean_statistic = 0.0;
  double mean_eigenvalue_sum = 0.0;
};

struct StudyResult {
  std::vector<TrialRecord> records;
  StudySummary summary;
};

// Seeds of trial `index`; shared across the delta grid.
std::uint64_t trial_seed(std::uint64_t root, int index);
std::uint64_t calibration_seed(std::uint64_t trial_seed);

using DatasetFactory = std::function<Dataset(std::uint64_t seed, int index)>;

// Runs the test on factory-built datasets. Failures are recorded per trial.
StudyResult run_test_trials(const ExperimentConfig& cfg, const DatasetFactory& factory);

StudySummary summarize(const std::vector<TrialRecord>& records);

StudyResult run_size_study(const ExperimentConfig& cfg);

struct QQTable {
  std::string reference = "pooled-mean-spectrum";
  std::vector<double> pooled_eigenvalues;
  std::vector<double> empirical;    // sorted statistics
  std::vector<double> theoretical;  // matching mixture quantiles
  std::vector<double> reference_sample;  // sorted mixture draws
  double ks_distance = 0.0;
};

// Pairs the sorted statistics with equally ranked quantiles of the mixture
// whose weights are the trial spectra averaged rank by rank.
QQTable qq_data(const std::vector<TrialRecord>& records, std::size_t draws, std::uint64_t seed);

struct PowerRow {
  double delta_z = 0.0;
  StudySummary summary;
};
std::vector<PowerRow> run_power_curve(const ExperimentConfig& cfg);

struct ConsistencyRow {
  Index n = 0;
  int trials = 0;
  double median_error = 0.0;           // against frechet_qstar
  double median_error_stated = 0.0;    // against true_qstar
  std::vector<double> trial_errors;
};

// y-lattice with ||y|| <= 1: {-1/2, 0, 1/2}^{p_y} plus the points +-e_j.
std::vector<Vector> y_lattice(Index p_y);

// Sup over the lattice of ||Qhat_n(xhat) - Q*(xtilde)||_F, median over trials.
std::vector<ConsistencyRow> run_consistency_study(const ExperimentConfig& cfg);

}  // namespace bwreg
