#include "bwreg/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/distributions/beta.hpp>

#include "bwreg/mixture.hpp"
#include "bwreg/seeding.hpp"
#include "parallel.hpp"

namespace bwreg {

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 == 1 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

DatasetFactory simulation_factory(const SimConfig& tmpl) {
  return [tmpl](std::uint64_t seed, int) {
    SimConfig c = tmpl;
    c.seed = seed;
    return simulate(c).data;
  };
}

}  // namespace

void ExperimentConfig::validate() const {
  std::ostringstream os;
  if (trials < 1) os << "trials must be positive; ";
  if (!(alpha > 0.0 && alpha < 1.0)) os << "alpha must lie in (0, 1); ";
  if (mc_draws < kMinMixtureDraws || qq_draws < kMinMixtureDraws) os << "draw counts must be at least 1000; ";
  if (threads < 1) os << "threads must be positive; ";
  if (delta_grid.empty()) os << "delta grid is empty; ";
  const double bound = 2.0 / static_cast<double>(sim.p());
  for (double dz : delta_grid)
    if (!(std::abs(dz) < bound)) os << "delta " << dz << " outside the admissible range; ";
  for (Index n : n_grid)
    if (n < 4) os << "n grid entries must be at least 4; ";
  const std::string msg = os.str();
  if (!msg.empty()) throw Error(ErrorKind::InvalidConfig, "ExperimentConfig: " + msg.substr(0, msg.size() - 2));
  SimConfig probe = sim;
  probe.delta_z = 0.0;
  probe.validate();
  solver.validate();
}

std::uint64_t trial_seed(std::uint64_t root, int index) {
  return derive_seed(root, Stream::Trial, static_cast<std::uint64_t>(index));
}

std::uint64_t calibration_seed(std::uint64_t seed) { return derive_seed(seed, Stream::Calibration); }

StudyResult run_test_trials(const ExperimentConfig& cfg, const DatasetFactory& factory) {
  cfg.validate();
  StudyResult out;
  out.records.resize(static_cast<std::size_t>(cfg.trials));
  detail::parallel_for(cfg.trials, cfg.threads, [&](Index t) {
    TrialRecord& rec = out.records[static_cast<std::size_t>(t)];
    rec.index = static_cast<int>(t);
    rec.seed = trial_seed(cfg.root_seed, rec.index);
    try {
      const Dataset data = factory(rec.seed, rec.index);
      TestOptions opts;
      opts.alpha = cfg.alpha;
      opts.mc_draws = cfg.mc_draws;
      opts.seed = calibration_seed(rec.seed);
      opts.solver = cfg.solver;
      opts.threads = 1;
      opts.max_nonconverged_fraction = cfg.max_nonconverged_fraction;
      opts.embedding = cfg.embedding;
      const TestResult r = run_partial_test(data, opts);
      rec.completed = true;
      rec.statistic = r.statistic;
      rec.p_value = r.p_value;
      rec.quantile = r.quantile;
      rec.reject = r.reject;
      rec.eigenvalue_sum = r.eigenvalue_sum();
      rec.eigenvalues = r.eigenvalues;
      rec.nonconverged = r.diagnostics.nonconverged;
      rec.min_hessian_eigenvalue = r.diagnostics.min_hessian_eigenvalue;
    } catch (const Error& e) {
      rec.completed = false;
      rec.failure = std::string(to_string(e.kind())) + ": " + e.what();
    }
  });
  out.summary = summarize(out.records);
  return out;
}

StudySummary summarize(const std::vector<TrialRecord>& records) {
  StudySummary s;
  s.trials = static_cast<int>(records.size());
  double sum_t = 0.0, sum_l = 0.0;
  for (const auto& r : records) {
    if (!r.completed) {
      ++s.failed;
      continue;
    }
    ++s.completed;
    s.rejections += r.reject ? 1 : 0;
    sum_t += r.statistic;
    sum_l += r.eigenvalue_sum;
  }
  if (s.completed > 0) {
    const double n = s.completed;
    const double k = s.rejections;
    s.rate = k / n;
    s.mean_statistic = sum_t / n;
    s.mean_eigenvalue_sum = sum_l / n;
    using boost::math::beta_distribution;
    s.ci_low = s.rejections == 0 ? 0.0 : quantile(beta_distribution<>(k, n - k + 1.0), 0.025);
    s.ci_high = s.rejections == s.completed ? 1.0 : quantile(beta_distribution<>(k + 1.0, n - k), 0.975);
  }
  return s;
}

StudyResult run_size_study(const ExperimentConfig& cfg) {
  if (cfg.sim.delta_z != 0.0) {
    throw Error(ErrorKind::InvalidConfig, "run_size_study: the size study requires delta_z = 0");
  }
  return run_test_trials(cfg, simulation_factory(cfg.sim));
}

QQTable qq_data(const std::vector<TrialRecord>& records, std::size_t draws, std::uint64_t seed) {
  QQTable t;
  std::size_t len = 0;
  bool first = true;
  for (const auto& r : records) {
    if (!r.completed) continue;
    t.empirical.push_back(r.statistic);
    len = first ? r.eigenvalues.size() : std::min(len, r.eigenvalues.size());
    first = false;
  }
  if (t.empirical.empty()) throw Error(ErrorKind::InvalidInput, "qq_data: no completed trials");
  std::sort(t.empirical.begin(), t.empirical.end());

  t.pooled_eigenvalues.assign(len, 0.0);
  for (const auto& r : records) {
    if (!r.completed) continue;
    for (std::size_t j = 0; j < len; ++j) t.pooled_eigenvalues[j] += r.eigenvalues[j];
  }
  for (auto& l : t.pooled_eigenvalues) l /= static_cast<double>(t.empirical.size());

  t.reference_sample = mixture_draws(t.pooled_eigenvalues, draws, seed);
  const double n = static_cast<double>(t.empirical.size());
  const double b = static_cast<double>(t.reference_sample.size());
  for (std::size_t i = 0; i < t.empirical.size(); ++i) {
    const double prob = (static_cast<double>(i) + 0.5) / n;
    auto k = static_cast<std::size_t>(std::ceil(prob * b));
    k = std::clamp<std::size_t>(k, 1, t.reference_sample.size());
    t.theoretical.push_back(t.reference_sample[k - 1]);
  }
  t.ks_distance = ks_distance(t.empirical, t.reference_sample);
  return t;
}

std::vector<PowerRow> run_power_curve(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<PowerRow> rows;
  for (double dz : cfg.delta_grid) {
    SimConfig sim = cfg.sim;
    sim.delta_z = dz;
    const StudyResult r = run_test_trials(cfg, simulation_factory(sim));
    rows.push_back({dz, r.summary});
  }
  return rows;
}

std::vector<Vector> y_lattice(Index p_y) {
  std::vector<Vector> pts;
  const double levels[] = {-0.5, 0.0, 0.5};
  Index total = 1;
  for (Index j = 0; j < p_y; ++j) total *= 3;
  for (Index code = 0; code < total; ++code) {
    Vector y(p_y);
    Index c = code;
    for (Index j = 0; j < p_y; ++j) {
      y(j) = levels[c % 3];
      c /= 3;
    }
    if (y.norm() <= 1.0) pts.push_back(y);
  }
  for (Index j = 0; j < p_y; ++j) {
    for (double s : {-1.0, 1.0}) {
      Vector y = Vector::Zero(p_y);
      y(j) = s;
      pts.push_back(y);
    }
  }
  return pts;
}

std::vector<ConsistencyRow> run_consistency_study(const ExperimentConfig& cfg) {
  cfg.validate();
  const SimConfig& tmpl = cfg.sim;
  const std::vector<Vector> lattice = y_lattice(tmpl.p_y);
  std::vector<ConsistencyRow> rows;
  for (Index n : cfg.n_grid) {
    ConsistencyRow row;
    row.n = n;
    row.trials = cfg.trials;
    std::vector<double> errs(static_cast<std::size_t>(cfg.trials), 0.0);
    std::vector<double> errs_stated(static_cast<std::size_t>(cfg.trials), 0.0);
    const std::uint64_t n_root = derive_seed(cfg.root_seed, Stream::Trial, static_cast<std::uint64_t>(n));
    detail::parallel_for(cfg.trials, cfg.threads, [&](Index t) {
      SimConfig c = tmpl;
      c.n = n;
      c.delta_z = 0.0;
      c.seed = trial_seed(n_root, static_cast<int>(t));
      const SimulatedData sim = simulate(c);
      const Dataset& data = sim.data;
      const CovariateMoments full = CovariateMoments::from_rows(data.covariates, data.p1);
      const CovariateMoments first =
          CovariateMoments::from_rows(data.covariates.topRows((n + 1) / 2), data.p1);
      const ResponseSample sample(data.responses);
      double sup = 0.0, sup_stated = 0.0;
      for (const Vector& y : lattice) {
        Vector xhat(c.p());
        xhat.head(c.p_y) = y;
        xhat.tail(c.p_z) = first.mean.tail(c.p_z) +
                           first.cov.bottomLeftCorner(c.p_z, c.p_y) *
                               (first.inverse_cov_11 * (y - first.mean.head(c.p_y)));
        // Independent uniform covariates: the population imputation is z = 0.
        Vector xtilde = Vector::Zero(c.p());
        xtilde.head(c.p_y) = y;
        const FrechetFit fit = frechet_regress(data.covariates, sample, xhat, full, cfg.solver);
        sup = std::max(sup, (fit.mean.matrix() - frechet_qstar(sim.truth, xtilde).matrix()).norm());
        sup_stated =
            std::max(sup_stated, (fit.mean.matrix() - true_qstar(sim.truth, xtilde).matrix()).norm());
      }
      errs[static_cast<std::size_t>(t)] = sup;
      errs_stated[static_cast<std::size_t>(t)] = sup_stated;
    });
    row.trial_errors = errs;
    row.median_error = median(errs);
    row.median_error_stated = median(errs_stated);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace bwreg
