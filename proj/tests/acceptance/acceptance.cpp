// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any check fails. `--only <group>` runs a subset:
//   1_2_10  kernels, commuting reduction, mixture calibration (seconds)
//   3       estimator consistency (minutes)
//   4_5_6   null size, Q-Q agreement, trace identity (long)
//   7       power curve (long)
//   8       noise-covariate null (long)
//   9       determinism and thread invariance

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "bwreg/experiments.hpp"
#include "bwreg/io.hpp"
#include "bwreg/mixture.hpp"
#include "bwreg/seeding.hpp"

using namespace bwreg;

namespace {

int failures = 0;
int default_threads = 1;

void report(const std::string& id, bool pass, const std::string& detail) {
  std::printf("criterion %s: %s  %s\n", id.c_str(), pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

SpdMatrix random_spd(Index d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(std::log(0.1), std::log(10.0));
  Vector ev(d);
  for (Index i = 0; i < d; ++i) ev(i) = std::exp(u(rng));
  const Matrix q = haar_orthogonal(d, rng);
  return SpdMatrix(q * ev.asDiagonal() * q.transpose());
}

SymMatrix random_direction(Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Matrix a(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) a(i, j) = n(rng);
  return SymMatrix(0.5 * (a + a.transpose()));
}

void criterion1() {
  std::mt19937_64 rng(20240601);
  double worst_metric = 0.0, worst_map = 0.0, worst_diff = 0.0;
  for (Index d : {2, 6, 10}) {
    for (int rep = 0; rep < 200; ++rep) {
      const SpdMatrix a = random_spd(d, rng), b = random_spd(d, rng), c = random_spd(d, rng);
      const double ab = wasserstein_distance(a, b);
      const double ba = wasserstein_distance(b, a);
      const double aa = wasserstein_distance(a, a);
      const double tri = ab - wasserstein_distance(a, c) - wasserstein_distance(c, b);
      worst_metric = std::max({worst_metric, std::abs(ab - ba), aa, tri, ab < 0.0 ? -ab : 0.0});

      const Matrix t = ot_map(a, b).matrix();
      worst_map = std::max(worst_map, (t * a.matrix() * t - b.matrix()).norm() / b.matrix().norm());

      const SymMatrix h = random_direction(d, rng);
      const double eps = 1e-5;
      const Matrix fd = (ot_map(SpdMatrix(a.matrix() + eps * h.matrix()), b).matrix() -
                         ot_map(SpdMatrix(a.matrix() - eps * h.matrix()), b).matrix()) /
                        (2.0 * eps);
      const Matrix an = ot_map_differential(a, b).apply(h).matrix();
      worst_diff = std::max(worst_diff, (fd - an).norm() / std::max(fd.norm(), 1.0));
    }
  }
  const bool pass = worst_metric <= 1e-10 && worst_map <= 1e-9 && worst_diff <= 1e-6;
  report("1", pass,
         fmt("metric axioms max violation %.2e (<= 1e-10); TQT=S rel %.2e (<= 1e-9); dT vs FD rel %.2e (<= 1e-6)",
             worst_metric, worst_map, worst_diff));
}

void criterion2() {
  SimConfig c;
  c.example = 1;
  c.n = 100;
  c.d = 6;
  c.seed = 77;
  const SimulatedData sim = simulate(c);
  const Dataset& data = sim.data;
  const Matrix& u = sim.truth.rotation;
  // Roots of each response in the shared eigenbasis.
  std::vector<Vector> roots;
  for (const auto& q : data.responses)
    roots.push_back((u.transpose() * q.matrix() * u).diagonal().cwiseSqrt());
  const CovariateMoments m = CovariateMoments::from_rows(data.covariates, data.p1);
  const ResponseSample sample(data.responses);
  double worst = 0.0;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ud(-0.4, 0.4);
  for (int rep = 0; rep < 10; ++rep) {
    Vector x(c.p());
    for (Index j = 0; j < x.size(); ++j) x(j) = ud(rng);
    const Vector w = weights_at(x, data.covariates, m);
    Vector avg = Vector::Zero(c.d);
    for (Index i = 0; i < c.n; ++i) avg += w(i) * roots[static_cast<std::size_t>(i)];
    avg /= static_cast<double>(c.n);
    const Matrix oracle = u * avg.cwiseAbs2().asDiagonal() * u.transpose();
    const Matrix fit = frechet_regress(data.covariates, sample, x, m).mean.matrix();
    worst = std::max(worst, (fit - oracle).norm() / oracle.norm());
  }
  report("2", worst <= 1e-6, fmt("max relative Frobenius error vs root-regression oracle %.2e (<= 1e-6)", worst));
}

void criterion10() {
  const std::vector<double> l{1.0};
  const double q = mixture_quantile(l, 0.05, 1000000, 20240610);
  const double p = p_value(3.8415, l, 1000000, 20240611);
  report("10", std::abs(q - 3.8415) <= 0.02 && std::abs(p - 0.05) <= 0.005,
         fmt("quantile %.4f (3.8415 +- 0.02); p-value %.5f (0.05 +- 0.005)", q, p));
}

ExperimentConfig base_config(int example) {
  ExperimentConfig cfg;
  cfg.sim.example = example;
  cfg.sim.n = 200;
  cfg.sim.p_y = 3;
  cfg.sim.p_z = 3;
  cfg.sim.d = 6;
  cfg.alpha = 0.05;
  cfg.mc_draws = 100000;
  cfg.qq_draws = 1000000;
  cfg.threads = default_threads;
  return cfg;
}

double completed_fraction(const StudySummary& s) {
  return s.trials == 0 ? 0.0 : static_cast<double>(s.completed) / s.trials;
}

void criterion3() {
  ExperimentConfig cfg = base_config(1);
  cfg.trials = 20;
  cfg.n_grid = {100, 200, 400, 800};
  cfg.root_seed = 3003;
  const auto rows = run_consistency_study(cfg);
  bool decreasing = true;
  std::string med;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    med += fmt("%s%lld:%.4f", i ? " " : "", static_cast<long long>(rows[i].n), rows[i].median_error);
    if (i > 0 && !(rows[i].median_error < rows[i - 1].median_error)) decreasing = false;
  }
  const double ratio = rows[1].median_error / rows[3].median_error;
  report("3", decreasing && ratio >= 1.4,
         fmt("median sup-error {%s}; strictly decreasing %s; error(200)/error(800) %.3f (>= 1.4)", med.c_str(),
             decreasing ? "yes" : "no", ratio));
}

void criteria4_5_6() {
  std::vector<StudyResult> results;
  std::string size_detail;
  bool size_ok = true;
  for (int example : {1, 2}) {
    ExperimentConfig cfg = base_config(example);
    cfg.trials = 200;
    cfg.root_seed = 4000 + static_cast<std::uint64_t>(example);
    results.push_back(run_size_study(cfg));
    const StudySummary& s = results.back().summary;
    const bool ok = completed_fraction(s) > 0.98 && s.rate >= 0.01 && s.rate <= 0.10;
    size_ok = size_ok && ok;
    size_detail += fmt("%sexample %d: size %.3f [%d/%d completed, CI %.3f-%.3f]", example == 1 ? "" : "; ",
                       example, s.rate, s.completed, s.trials, s.ci_low, s.ci_high);
  }
  report("4", size_ok, size_detail + " (band [0.01, 0.10])");

  const QQTable qq = qq_data(results[0].records, 1000000, derive_seed(4001, Stream::Reference));
  const QQTable qq2 = qq_data(results[1].records, 1000000, derive_seed(4002, Stream::Reference));
  report("5", qq.ks_distance <= 0.15,
         fmt("KS(statistics, pooled mixture) %.4f (<= 0.15); example 2: %.4f", qq.ks_distance, qq2.ks_distance));

  const StudySummary& s = results[0].summary;
  const double gap = std::abs(s.mean_statistic - s.mean_eigenvalue_sum);
  report("6", gap <= 0.30 * s.mean_eigenvalue_sum,
         fmt("mean T %.4f, mean sum(lambda) %.4f, relative gap %.3f (<= 0.30); example 2: %.4f vs %.4f",
             s.mean_statistic, s.mean_eigenvalue_sum, gap / s.mean_eigenvalue_sum,
             results[1].summary.mean_statistic, results[1].summary.mean_eigenvalue_sum));
}

void criterion7() {
  ExperimentConfig cfg = base_config(1);
  cfg.trials = 100;
  cfg.delta_grid = {0.0, 0.1, 0.2, 0.3};
  cfg.root_seed = 7007;
  const auto rows = run_power_curve(cfg);
  int inversions = 0;
  bool small = true;
  std::string curve;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    curve += fmt("%s%.1f:%.2f", i ? " " : "", rows[i].delta_z, rows[i].summary.rate);
    if (i > 0 && rows[i].summary.rate < rows[i - 1].summary.rate) {
      ++inversions;
      small = small && rows[i - 1].summary.rate - rows[i].summary.rate <= 0.05;
    }
  }
  const double top = rows.back().summary.rate;
  report("7", inversions <= 1 && small && top >= 0.8,
         fmt("power {%s}; inversions %d; power(0.3) %.2f (>= 0.8)", curve.c_str(), inversions, top));
}

void criterion8() {
  ExperimentConfig cfg = base_config(1);
  cfg.trials = 200;
  cfg.root_seed = 8008;
  cfg.sim.p_z = 1;
  const DatasetFactory factory = [](std::uint64_t seed, int) {
    SimConfig c;
    c.example = 1;
    c.n = 200;
    c.p_y = 3;
    c.p_z = 0;
    c.d = 6;
    c.seed = seed;
    Dataset data = simulate(c).data;
    // Z is a fresh uniform column drawn independently of everything else.
    std::mt19937_64 rng(derive_seed(seed, Stream::Noise));
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    data.covariates.conservativeResize(Eigen::NoChange, 4);
    for (Index i = 0; i < data.n(); ++i) data.covariates(i, 3) = u(rng);
    data.p1 = 3;
    return data;
  };
  const StudyResult r = run_test_trials(cfg, factory);
  std::vector<double> p;
  for (const auto& rec : r.records)
    if (rec.completed) p.push_back(rec.p_value);
  std::sort(p.begin(), p.end());
  const double ks = ks_uniform(p);
  const double med = p.empty() ? 0.0 : p[p.size() / 2];
  report("8", completed_fraction(r.summary) > 0.98 && ks <= 0.15,
         fmt("KS(p-values, Uniform) %.4f (<= 0.15); median p %.3f; rejections %d/%d", ks, med,
             r.summary.rejections, r.summary.completed));
}

std::string dump(const StudyResult& r) {
  Json j = Json::array();
  for (const auto& rec : r.records) {
    j.push_back({rec.statistic, rec.p_value, rec.quantile, rec.eigenvalues, rec.reject});
  }
  j.push_back(to_json(r.summary));
  return j.dump();
}

void criterion9() {
  std::vector<std::string> mismatched;
  auto check = [&](const std::string& name, const std::function<std::string(int)>& run) {
    const std::string a = run(1), b = run(4), c = run(1);
    if (a != b || a != c) mismatched.push_back(name);
  };

  SimConfig sc;
  sc.example = 2;
  sc.n = 60;
  sc.p_y = 2;
  sc.p_z = 2;
  sc.d = 4;
  sc.seed = 99;
  const Dataset data = simulate(sc).data;
  check("test", [&](int threads) {
    TestOptions o;
    o.threads = threads;
    o.seed = 5;
    return to_json(run_partial_test(data, o)).dump();
  });

  ExperimentConfig cfg;
  cfg.sim = sc;
  cfg.trials = 6;
  cfg.mc_draws = 5000;
  cfg.qq_draws = 5000;
  cfg.root_seed = 909;
  cfg.delta_grid = {0.0, 0.3};
  cfg.n_grid = {40, 80};
  check("size", [&](int threads) {
    ExperimentConfig c = cfg;
    c.threads = threads;
    return dump(run_size_study(c));
  });
  check("qq", [&](int threads) {
    ExperimentConfig c = cfg;
    c.threads = threads;
    const QQTable t = qq_data(run_size_study(c).records, c.qq_draws, 1);
    return Json{t.empirical, t.theoretical, t.ks_distance}.dump();
  });
  check("power", [&](int threads) {
    ExperimentConfig c = cfg;
    c.threads = threads;
    Json j = Json::array();
    for (const auto& row : run_power_curve(c)) j.push_back(to_json(row.summary));
    return j.dump();
  });
  check("consistency", [&](int threads) {
    ExperimentConfig c = cfg;
    c.threads = threads;
    Json j = Json::array();
    for (const auto& row : run_consistency_study(c)) j.push_back(row.trial_errors);
    return j.dump();
  });
  std::string which;
  for (const auto& m : mismatched) which += " " + m;
  report("9", mismatched.empty(),
         mismatched.empty() ? "test, size, qq, power and consistency outputs bit-identical for threads {1, 4} and reruns"
                            : "mismatch in:" + which);
}

}  // namespace

int main(int argc, char** argv) {
  std::string only;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      only = argv[++i];
    } else if (std::strcmp(argv[i], "--threads") == 0 && i + 1 < argc) {
      default_threads = std::max(1, std::atoi(argv[++i]));
    } else {
      std::fprintf(stderr, "usage: acceptance [--only 1_2_10|3|4_5_6|7|8|9] [--threads N]\n");
      return 2;
    }
  }
  const std::vector<std::pair<std::string, std::function<void()>>> groups{
      {"1_2_10", [] { criterion1(); criterion2(); criterion10(); }},
      {"3", criterion3},
      {"4_5_6", criteria4_5_6},
      {"7", criterion7},
      {"8", criterion8},
      {"9", criterion9},
  };
  bool ran = false;
  for (const auto& [name, fn] : groups) {
    if (!only.empty() && only != name) continue;
    ran = true;
    const auto start = std::chrono::steady_clock::now();
    try {
      fn();
    } catch (const std::exception& e) {
      report(name, false, std::string("aborted: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("  (group %s took %.1f s)\n", name.c_str(), secs);
  }
  if (!ran) {
    std::fprintf(stderr, "unknown group '%s'\n", only.c_str());
    return 2;
  }
  return failures == 0 ? 0 : 1;
}
