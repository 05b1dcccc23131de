// Command-line driver: simulate datasets, run the partial-effect test, fit
// single points and run the Monte Carlo studies.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bwreg/experiments.hpp"
#include "bwreg/io.hpp"
#include "bwreg/seeding.hpp"

namespace fs = std::filesystem;
using namespace bwreg;

namespace {

std::optional<std::string> env(const char* name) {
  const char* v = std::getenv(name);
  if (v == nullptr || *v == '\0') return std::nullopt;
  return std::string(v);
}

std::uint64_t default_seed() {
  if (auto v = env("BWREG_SEED")) {
    try {
      return std::stoull(*v);
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidConfig, "BWREG_SEED is not an unsigned integer: " + *v);
    }
  }
  return 1;
}

int default_threads() {
  if (auto v = env("BWREG_THREADS")) {
    try {
      const int t = std::stoi(*v);
      if (t >= 1) return t;
    } catch (const std::exception&) {
    }
    throw Error(ErrorKind::InvalidConfig, "BWREG_THREADS must be a positive integer: " + *v);
  }
  return 1;
}

Json header(const std::string& command) {
  Json j;
  j["tool"] = "bwreg";
  j["version"] = kLibraryVersion;
  j["command"] = command;
  return j;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

Vector parse_point(const std::string& text, Index p) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      vals.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidInput, "--at: '" + tok + "' is not a number");
    }
  }
  if (static_cast<Index>(vals.size()) != p) {
    throw Error(ErrorKind::InvalidInput, "--at: expected " + std::to_string(p) + " coordinates, got " +
                                             std::to_string(vals.size()));
  }
  return Eigen::Map<Vector>(vals.data(), p);
}

struct SimulateArgs {
  SimConfig cfg;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format = "json";
};

struct TestArgs {
  std::string data;
  std::optional<Index> p1;
  double alpha = 0.05;
  std::size_t mc_draws = 100000;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<int> threads;
  bool no_split = false;
  std::string embedding = "augmented";
  std::optional<std::string> format;
};

struct FitArgs {
  std::string data;
  std::string at;
  std::string out;
  std::optional<std::string> format;
};

struct StudyArgs {
  std::string config;
  std::string out;
  std::optional<int> threads;
};

DatasetFile load(const std::string& path, const std::optional<std::string>& format) {
  return format ? load_dataset(path, parse_dataset_format(*format)) : load_dataset(path);
}

int run_simulate(const SimulateArgs& a) {
  SimConfig cfg = a.cfg;
  cfg.seed = a.seed ? *a.seed : default_seed();
  const SimulatedData sim = simulate(cfg);
  Json meta;
  meta["source"] = "simulate";
  meta["generator"] = to_json(cfg);
  meta["resampled"] = sim.resampled;
  write_dataset(a.out, sim.data, parse_dataset_format(a.format), meta);
  std::cout << "simulate: example " << cfg.example << ", n=" << cfg.n << ", p=" << cfg.p()
            << ", d=" << cfg.d << ", delta_z=" << cfg.delta_z << ", seed=" << cfg.seed << " -> "
            << a.out << "\n";
  return 0;
}

int run_test(const TestArgs& a) {
  DatasetFile file = load(a.data, a.format);
  if (a.p1) file.data.p1 = *a.p1;
  const int threads = a.threads ? *a.threads : default_threads();

  Json doc = header("test");
  Json cfg;
  cfg["data"] = a.data;
  cfg["p1"] = file.data.p1;
  cfg["embedding"] = a.embedding;
  cfg["solver"] = to_json(SolverOptions{});

  if (a.no_split) {
    cfg["diag_no_split"] = true;
    doc["config"] = cfg;
    const double t = full_sample_statistic(file.data, SolverOptions{}, threads);
    Json r;
    r["statistic_full_sample"] = t;
    r["note"] = "diagnostic only: the unsplit statistic has no calibrated null law, no p-value is reported";
    doc["result"] = r;
    write_json(a.out, doc);
    std::cout << "test (no split, diagnostic): T_full=" << fmt(t) << " -> " << a.out << "\n";
    return 0;
  }

  TestOptions opts;
  opts.alpha = a.alpha;
  opts.mc_draws = a.mc_draws;
  opts.seed = a.seed ? *a.seed : default_seed();
  opts.threads = threads;
  opts.embedding = parse_embedding(a.embedding);
  cfg["alpha"] = opts.alpha;
  cfg["mc_draws"] = opts.mc_draws;
  cfg["seed"] = opts.seed;
  doc["config"] = cfg;
  const TestResult r = run_partial_test(file.data, opts);
  doc["result"] = to_json(r);
  write_json(a.out, doc);
  std::cout << "test: T=" << fmt(r.statistic) << " q=" << fmt(r.quantile) << " p=" << fmt(r.p_value)
            << " reject=" << (r.reject ? "true" : "false") << " (n1=" << r.n1 << ", n2=" << r.n2
            << ") -> " << a.out << "\n";
  return 0;
}

int run_fit(const FitArgs& a) {
  const DatasetFile file = load(a.data, a.format);
  const Dataset& data = file.data;
  const Vector x = parse_point(a.at, data.p());
  const CovariateMoments m = CovariateMoments::from_rows(data.covariates, data.p1);
  const FrechetFit fit = frechet_regress(data, x, m, SolverOptions{});

  const SymEigen e = sym_eigen(fit.mean.matrix());
  Json doc = header("fit");
  Json cfg;
  cfg["data"] = a.data;
  cfg["at"] = std::vector<double>(x.data(), x.data() + x.size());
  cfg["solver"] = to_json(SolverOptions{});
  doc["config"] = cfg;
  Json mean = Json::array();
  for (Index r = 0; r < fit.mean.dim(); ++r) {
    Json row = Json::array();
    for (Index c = 0; c < fit.mean.dim(); ++c) row.push_back(fit.mean.matrix()(r, c));
    mean.push_back(std::move(row));
  }
  Json res;
  res["mean"] = std::move(mean);
  std::vector<double> eig(e.values.data(), e.values.data() + e.values.size());
  std::reverse(eig.begin(), eig.end());
  res["eigenvalues"] = eig;
  res["iterations"] = fit.diagnostics.iterations;
  res["grad_norm"] = fit.diagnostics.grad_norm;
  res["converged"] = fit.diagnostics.converged;
  doc["result"] = std::move(res);
  write_json(a.out, doc);
  std::cout << "fit: " << (fit.diagnostics.converged ? "converged" : "NOT converged") << " in "
            << fit.diagnostics.iterations << " iterations, trace=" << fmt(fit.mean.trace())
            << ", eigenvalues " << fmt(eig.back()) << ".." << fmt(eig.front()) << " -> " << a.out << "\n";
  if (!fit.diagnostics.converged) throw Error(ErrorKind::NoConvergence, "fit: solver did not converge");
  return 0;
}

ExperimentConfig study_config(const StudyArgs& a) {
  Json j = read_json(a.config);
  ExperimentConfig cfg = experiment_config_from_json(j);
  if (a.threads) {
    cfg.threads = *a.threads;
  } else if (!j.contains("threads")) {
    cfg.threads = default_threads();
  }
  cfg.validate();
  return cfg;
}

int run_study(const std::string& kind, const StudyArgs& a) {
  const ExperimentConfig cfg = study_config(a);
  const fs::path dir = a.out;
  fs::create_directories(dir);
  Json doc = header(kind);
  doc["config"] = to_json(cfg);

  if (kind == "size" || kind == "qq") {
    const StudyResult r = run_size_study(cfg);
    write_table(dir / "trials.csv", trial_table(r.records));
    doc["summary"] = to_json(r.summary);
    std::cout << kind << ": " << r.summary.completed << "/" << r.summary.trials
              << " trials completed, size=" << fmt(r.summary.rate) << " [" << fmt(r.summary.ci_low)
              << ", " << fmt(r.summary.ci_high) << "]";
    if (kind == "qq") {
      const QQTable qq = qq_data(r.records, cfg.qq_draws, derive_seed(cfg.root_seed, Stream::Reference));
      write_table(dir / "qq.csv", qq_table(qq));
      Json q;
      q["reference"] = qq.reference;
      q["pooled_eigenvalues"] = qq.pooled_eigenvalues;
      q["reference_draws"] = qq.reference_sample.size();
      q["ks_distance"] = qq.ks_distance;
      doc["qq"] = std::move(q);
      std::cout << ", KS=" << fmt(qq.ks_distance);
    }
    std::cout << " -> " << dir.string() << "\n";
  } else if (kind == "power") {
    const std::vector<PowerRow> rows = run_power_curve(cfg);
    write_table(dir / "power.csv", power_table(rows));
    Json arr = Json::array();
    for (const auto& row : rows) {
      Json e;
      e["delta_z"] = row.delta_z;
      e["summary"] = to_json(row.summary);
      arr.push_back(std::move(e));
    }
    doc["rows"] = std::move(arr);
    std::cout << "power:";
    for (const auto& row : rows) std::cout << " " << fmt(row.delta_z) << "->" << fmt(row.summary.rate);
    std::cout << " -> " << dir.string() << "\n";
  } else {
    const std::vector<ConsistencyRow> rows = run_consistency_study(cfg);
    write_table(dir / "consistency.csv", consistency_table(rows));
    Json arr = Json::array();
    for (const auto& row : rows) {
      Json e;
      e["n"] = row.n;
      e["median_error"] = row.median_error;
      e["median_error_stated"] = row.median_error_stated;
      e["trial_errors"] = row.trial_errors;
      arr.push_back(std::move(e));
    }
    doc["rows"] = std::move(arr);
    std::cout << "consistency:";
    for (const auto& row : rows) std::cout << " n=" << row.n << "->" << fmt(row.median_error);
    std::cout << " -> " << dir.string() << "\n";
  }
  write_json(dir / "summary.json", doc);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frechet regression partial-effect test for SPD responses"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "Generate a dataset from a simulation design");
  c_sim->add_option("--example", sim.cfg.example, "Design: 1 (commuting) or 2 (non-commuting)")->required();
  c_sim->add_option("--n", sim.cfg.n, "Sample size")->required();
  c_sim->add_option("--py", sim.cfg.p_y, "Dimension of Y")->required();
  c_sim->add_option("--pz", sim.cfg.p_z, "Dimension of Z")->required();
  c_sim->add_option("--d", sim.cfg.d, "Response dimension")->required();
  c_sim->add_option("--delta-z", sim.cfg.delta_z, "Effect size of Z (0 is the null)");
  c_sim->add_option("--scaling-low", sim.cfg.scaling_low, "Lower end of the V range (default -0.9)");
  c_sim->add_option("--scaling-high", sim.cfg.scaling_high, "Upper end of the V range (default 1.1)");
  c_sim->add_option("--seed", sim.seed, "Seed (default: BWREG_SEED or 1)");
  c_sim->add_option("--out", sim.out, "Output path")->required();
  c_sim->add_option("--format", sim.format, "json or long")->check(CLI::IsMember({"json", "long", "structured-text", "tabular-long"}));

  TestArgs test;
  auto* c_test = app.add_subcommand("test", "Run the partial-effect test on a dataset");
  c_test->add_option("--data", test.data, "Dataset file (json) or directory (long)")->required();
  c_test->add_option("--p1", test.p1, "Number of leading covariates forming Y (default: from file)");
  c_test->add_option("--alpha", test.alpha, "Level");
  c_test->add_option("--mc-draws", test.mc_draws, "Monte Carlo draws for the null mixture");
  c_test->add_option("--seed", test.seed, "Calibration seed (default: BWREG_SEED or 1)");
  c_test->add_option("--out", test.out, "Result file")->required();
  c_test->add_option("--threads", test.threads, "Worker threads (default: BWREG_THREADS or 1)");
  c_test->add_flag("--diag-no-split", test.no_split, "Unsplit statistic only; no p-value");
  c_test->add_option("--embedding", test.embedding, "augmented or centered")->check(CLI::IsMember({"augmented", "centered"}));
  c_test->add_option("--format", test.format, "Force the dataset format: json or long");

  FitArgs fit;
  auto* c_fit = app.add_subcommand("fit", "Frechet regression at one covariate value");
  c_fit->add_option("--data", fit.data, "Dataset file or directory")->required();
  c_fit->add_option("--at", fit.at, "Comma-separated covariate vector")->required();
  c_fit->add_option("--out", fit.out, "Result file")->required();
  c_fit->add_option("--format", fit.format, "Force the dataset format: json or long");

  StudyArgs study;
  std::vector<std::pair<std::string, CLI::App*>> studies;
  for (const char* name : {"size", "power", "qq", "consistency"}) {
    auto* c = app.add_subcommand(name, std::string("Monte Carlo ") + name + " study");
    c->add_option("--config", study.config, "Experiment config (JSON)")->required();
    c->add_option("--out", study.out, "Output directory")->required();
    c->add_option("--threads", study.threads, "Worker threads (default: config, BWREG_THREADS or 1)");
    studies.emplace_back(name, c);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (c_sim->parsed()) return run_simulate(sim);
    if (c_test->parsed()) return run_test(test);
    if (c_fit->parsed()) return run_fit(fit);
    for (const auto& [name, c] : studies)
      if (c->parsed()) return run_study(name, study);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
