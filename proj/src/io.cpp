#include "bwreg/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace bwreg {

namespace fs = std::filesystem;

namespace {

constexpr int kFormatVersion = 1;
constexpr const char* kLongHeader = "# bwreg-tabular-long";

[[noreturn]] void fail_input(const std::string& msg) { throw Error(ErrorKind::InvalidInput, msg); }
[[noreturn]] void fail_config(const std::string& msg) { throw Error(ErrorKind::InvalidConfig, msg); }

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail_input("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail_input("cannot write " + path.string());
  out << text;
  if (!out) fail_input("write failed for " + path.string());
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(start, pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string where(const fs::path& file, std::size_t line) {
  return file.filename().string() + ":" + std::to_string(line);
}

double parse_double(const std::string& s, const fs::path& file, std::size_t line) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = b + s.size();
  if (!s.empty() && *b == '+') ++b;
  const auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e || s.empty()) {
    fail_input(where(file, line) + ": '" + s + "' is not a number");
  }
  if (!std::isfinite(v)) fail_input(where(file, line) + ": non-finite value '" + s + "'");
  return v;
}

long parse_int(const std::string& s, const fs::path& file, std::size_t line) {
  long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    fail_input(where(file, line) + ": '" + s + "' is not an integer");
  }
  return v;
}

struct CsvLine {
  std::size_t number;
  std::string text;
};

std::vector<CsvLine> csv_lines(const fs::path& path) {
  std::istringstream in(read_file(path));
  std::vector<CsvLine> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back({n, line});
  }
  return out;
}

SpdMatrix checked_response(const Matrix& m, const std::string& sample) {
  const Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues()(0);
  const double hi = es.eigenvalues()(es.eigenvalues().size() - 1);
  if (!(hi > 0.0) || lo <= kEpsPd * hi) {
    fail_input("response of sample '" + sample + "' is not positive definite (min eigenvalue " +
               format_double(lo) + ")");
  }
  try {
    return SpdMatrix(m);
  } catch (const Error& e) {
    fail_input("response of sample '" + sample + "': " + e.what());
  }
}

// ---- structured text -------------------------------------------------------

void write_structured(const fs::path& path, const Dataset& data, const Json& metadata) {
  Json doc;
  doc["format"] = "bwreg-dataset";
  doc["version"] = kFormatVersion;
  doc["n"] = data.n();
  doc["p"] = data.p();
  doc["p1"] = data.p1;
  doc["d"] = data.d();
  Json cov = Json::array();
  for (Index i = 0; i < data.n(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < data.p(); ++j) row.push_back(data.covariates(i, j));
    cov.push_back(std::move(row));
  }
  doc["covariates"] = std::move(cov);
  Json resp = Json::array();
  for (const auto& q : data.responses) {
    Json flat = Json::array();
    for (Index r = 0; r < q.dim(); ++r)
      for (Index c = 0; c < q.dim(); ++c) flat.push_back(q.matrix()(r, c));
    resp.push_back(std::move(flat));
  }
  doc["responses"] = std::move(resp);
  doc["metadata"] = metadata;
  write_json(path, doc);
}

template <class T>
T field(const Json& doc, const char* key, const fs::path& path) {
  if (!doc.contains(key)) fail_input(path.string() + ": missing field '" + key + "'");
  try {
    return doc.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    fail_input(path.string() + ": field '" + key + "' has the wrong type");
  }
}

DatasetFile load_structured(const fs::path& path) {
  const Json doc = read_json(path);
  if (!doc.is_object() || doc.value("format", "") != "bwreg-dataset") {
    fail_input(path.string() + ": not a bwreg-dataset document");
  }
  const int version = field<int>(doc, "version", path);
  if (version != kFormatVersion) {
    fail_input(path.string() + ": unsupported format version " + std::to_string(version));
  }
  const auto n = field<Index>(doc, "n", path);
  const auto p = field<Index>(doc, "p", path);
  const auto p1 = field<Index>(doc, "p1", path);
  const auto d = field<Index>(doc, "d", path);
  if (n < 1 || p < 1 || d < 1) fail_input(path.string() + ": n, p and d must be positive");

  const Json& cov = doc.at("covariates");
  const Json& resp = doc.at("responses");
  if (!cov.is_array() || static_cast<Index>(cov.size()) != n) {
    fail_input(path.string() + ": covariates must hold n rows");
  }
  if (!resp.is_array() || static_cast<Index>(resp.size()) != n) {
    fail_input(path.string() + ": responses must hold n matrices");
  }
  DatasetFile out;
  out.data.p1 = p1;
  out.data.covariates.resize(n, p);
  out.data.responses.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    const Json& row = cov[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != p) {
      fail_input(path.string() + ": covariate row " + std::to_string(i) + " does not have p entries");
    }
    for (Index j = 0; j < p; ++j) {
      const Json& v = row[static_cast<std::size_t>(j)];
      if (!v.is_number()) fail_input(path.string() + ": covariate row " + std::to_string(i) + " is not numeric");
      out.data.covariates(i, j) = v.get<double>();
    }
    const Json& flat = resp[static_cast<std::size_t>(i)];
    if (!flat.is_array() || static_cast<Index>(flat.size()) != d * d) {
      fail_input(path.string() + ": response " + std::to_string(i) + " does not have d*d entries");
    }
    Matrix m(d, d);
    for (Index r = 0; r < d; ++r) {
      for (Index c = 0; c < d; ++c) {
        const Json& v = flat[static_cast<std::size_t>(r * d + c)];
        if (!v.is_number()) fail_input(path.string() + ": response " + std::to_string(i) + " is not numeric");
        m(r, c) = v.get<double>();
      }
    }
    out.data.responses.push_back(checked_response(m, std::to_string(i)));
  }
  if (doc.contains("metadata")) out.metadata = doc.at("metadata");
  out.data.validate();
  return out;
}

// ---- tabular long ----------------------------------------------------------

void write_long(const fs::path& dir, const Dataset& data, const Json& metadata) {
  fs::create_directories(dir);
  std::ostringstream cov;
  cov << kLongHeader << " version=" << kFormatVersion << " p1=" << data.p1 << "\n";
  cov << "sample_id";
  for (Index j = 0; j < data.p(); ++j) cov << ",x_" << (j + 1);
  cov << "\n";
  for (Index i = 0; i < data.n(); ++i) {
    cov << (i + 1);
    for (Index j = 0; j < data.p(); ++j) cov << "," << format_double(data.covariates(i, j));
    cov << "\n";
  }
  write_file(dir / "covariates.csv", cov.str());

  std::ostringstream resp;
  resp << "sample_id,row,col,value\n";
  for (Index i = 0; i < data.n(); ++i) {
    const Matrix& q = data.responses[static_cast<std::size_t>(i)].matrix();
    for (Index r = 0; r < q.rows(); ++r)
      for (Index c = r; c < q.cols(); ++c)
        resp << (i + 1) << "," << (r + 1) << "," << (c + 1) << "," << format_double(q(r, c)) << "\n";
  }
  write_file(dir / "responses.csv", resp.str());
  if (!metadata.empty()) write_json(dir / "metadata.json", metadata);
}

DatasetFile load_long(const fs::path& dir) {
  const fs::path cov_path = dir / "covariates.csv";
  const fs::path resp_path = dir / "responses.csv";

  Index p1 = -1;
  std::vector<std::string> ids;
  std::map<std::string, Index> index_of;
  std::vector<std::vector<double>> rows;
  Index p = -1;
  bool header_seen = false;
  for (const auto& [num, text] : csv_lines(cov_path)) {
    const std::string t = trim(text);
    if (t.empty()) continue;
    if (t[0] == '#') {
      if (t.rfind(kLongHeader, 0) == 0) {
        std::istringstream ss(t.substr(std::string(kLongHeader).size()));
        std::string tok;
        while (ss >> tok) {
          const auto eq = tok.find('=');
          if (eq == std::string::npos) continue;
          const std::string key = tok.substr(0, eq);
          const std::string val = tok.substr(eq + 1);
          if (key == "version" && parse_int(val, cov_path, num) != kFormatVersion) {
            fail_input(where(cov_path, num) + ": unsupported format version " + val);
          }
          if (key == "p1") p1 = parse_int(val, cov_path, num);
        }
      }
      continue;
    }
    const auto cells = split_csv(t);
    if (!header_seen) {
      if (cells.empty() || cells[0] != "sample_id") {
        fail_input(where(cov_path, num) + ": expected header 'sample_id,x_1,...'");
      }
      p = static_cast<Index>(cells.size()) - 1;
      if (p < 1) fail_input(where(cov_path, num) + ": no covariate columns");
      header_seen = true;
      continue;
    }
    if (static_cast<Index>(cells.size()) != p + 1) {
      fail_input(where(cov_path, num) + ": expected " + std::to_string(p + 1) + " fields, found " +
                 std::to_string(cells.size()));
    }
    if (cells[0].empty()) fail_input(where(cov_path, num) + ": empty sample_id");
    if (index_of.count(cells[0])) fail_input(where(cov_path, num) + ": duplicate sample_id '" + cells[0] + "'");
    index_of[cells[0]] = static_cast<Index>(ids.size());
    ids.push_back(cells[0]);
    std::vector<double> row;
    for (Index j = 1; j <= p; ++j) row.push_back(parse_double(cells[static_cast<std::size_t>(j)], cov_path, num));
    rows.push_back(std::move(row));
  }
  if (!header_seen || ids.empty()) fail_input(cov_path.string() + ": no samples");
  if (p1 < 0) fail_input(cov_path.string() + ": header line must declare p1");

  struct Entry {
    Index r, c;
    double v;
    std::size_t line;
  };
  std::vector<std::vector<Entry>> entries(ids.size());
  Index d = 0;
  header_seen = false;
  for (const auto& [num, text] : csv_lines(resp_path)) {
    const std::string t = trim(text);
    if (t.empty() || t[0] == '#') continue;
    const auto cells = split_csv(t);
    if (!header_seen) {
      if (cells != std::vector<std::string>{"sample_id", "row", "col", "value"}) {
        fail_input(where(resp_path, num) + ": expected header 'sample_id,row,col,value'");
      }
      header_seen = true;
      continue;
    }
    if (cells.size() != 4) {
      fail_input(where(resp_path, num) + ": expected 4 fields, found " + std::to_string(cells.size()));
    }
    const auto it = index_of.find(cells[0]);
    if (it == index_of.end()) fail_input(where(resp_path, num) + ": unknown sample_id '" + cells[0] + "'");
    const long r = parse_int(cells[1], resp_path, num);
    const long c = parse_int(cells[2], resp_path, num);
    if (r < 1 || c < 1) fail_input(where(resp_path, num) + ": row and col are 1-based");
    const double v = parse_double(cells[3], resp_path, num);
    d = std::max<Index>(d, std::max(r, c));
    entries[static_cast<std::size_t>(it->second)].push_back({r - 1, c - 1, v, num});
  }
  if (d == 0) fail_input(resp_path.string() + ": no response entries");

  DatasetFile out;
  out.data.p1 = p1;
  const Index n = static_cast<Index>(ids.size());
  out.data.covariates.resize(n, p);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < p; ++j) out.data.covariates(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  out.data.responses.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    const std::string& id = ids[static_cast<std::size_t>(i)];
    Matrix m(d, d);
    std::vector<char> seen(static_cast<std::size_t>(d * d), 0);
    for (const Entry& e : entries[static_cast<std::size_t>(i)]) {
      const auto k = static_cast<std::size_t>(e.r * d + e.c);
      if (seen[k]) {
        fail_input(where(resp_path, e.line) + ": duplicate entry (" + std::to_string(e.r + 1) + "," +
                   std::to_string(e.c + 1) + ") for sample '" + id + "'");
      }
      seen[k] = 1;
      m(e.r, e.c) = e.v;
    }
    for (Index r = 0; r < d; ++r) {
      for (Index c = 0; c < d; ++c) {
        if (seen[static_cast<std::size_t>(r * d + c)]) continue;
        if (!seen[static_cast<std::size_t>(c * d + r)]) {
          fail_input(resp_path.string() + ": sample '" + id + "' lacks entry (" + std::to_string(r + 1) +
                     "," + std::to_string(c + 1) + ")");
        }
        m(r, c) = m(c, r);
      }
    }
    out.data.responses.push_back(checked_response(m, id));
  }
  if (fs::exists(dir / "metadata.json")) out.metadata = read_json(dir / "metadata.json");
  out.data.validate();
  return out;
}

// ---- configuration helpers -------------------------------------------------

class Reader {
 public:
  Reader(const Json& j, std::string context) : j_(j), context_(std::move(context)) {
    if (!j_.is_object()) fail_config(context_ + ": expected an object");
  }

  template <class T>
  void get(const char* key, T& out) {
    known_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      fail_config(context_ + ": field '" + key + "' has the wrong type");
    }
  }

  const Json* child(const char* key) {
    known_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

  void finish() const {
    for (const auto& [k, v] : j_.items()) {
      if (!known_.count(k)) fail_config(context_ + ": unknown field '" + k + "'");
    }
  }

 private:
  const Json& j_;
  std::string context_;
  std::set<std::string> known_;
};

const char* to_string(InitMode m) {
  return m == InitMode::RootAverage ? "root-average" : "euclidean-average";
}

}  // namespace

const char* to_string(DatasetFormat f) {
  return f == DatasetFormat::StructuredText ? "structured-text" : "tabular-long";
}

DatasetFormat parse_dataset_format(const std::string& name) {
  if (name == "json" || name == "structured-text") return DatasetFormat::StructuredText;
  if (name == "long" || name == "tabular-long") return DatasetFormat::TabularLong;
  fail_input("unknown dataset format '" + name + "'");
}

DatasetFormat detect_dataset_format(const fs::path& path) {
  return fs::is_directory(path) ? DatasetFormat::TabularLong : DatasetFormat::StructuredText;
}

void write_dataset(const fs::path& path, const Dataset& data, DatasetFormat format, const Json& metadata) {
  data.validate();
  if (format == DatasetFormat::StructuredText) {
    write_structured(path, data, metadata);
  } else {
    write_long(path, data, metadata);
  }
}

DatasetFile load_dataset(const fs::path& path, DatasetFormat format) {
  if (!fs::exists(path)) fail_input(path.string() + ": no such file or directory");
  return format == DatasetFormat::StructuredText ? load_structured(path) : load_long(path);
}

DatasetFile load_dataset(const fs::path& path) { return load_dataset(path, detect_dataset_format(path)); }

Json read_json(const fs::path& path) {
  const std::string text = read_file(path);
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
    const auto nl = text.rfind('\n', upto == 0 ? 0 : upto - 1);
    const std::size_t col = nl == std::string::npos ? upto + 1 : upto - nl;
    fail_input(path.string() + ":" + std::to_string(line) + ":" + std::to_string(col) + ": JSON parse error");
  }
}

void write_json(const fs::path& path, const Json& doc) { write_file(path, doc.dump(2) + "\n"); }

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

Json to_json(const SolverOptions& o) {
  Json j;
  j["max_iters"] = o.max_iters;
  j["grad_tol"] = o.grad_tol;
  j["initial_step"] = o.initial_step;
  j["backtrack"] = o.backtrack;
  j["min_step"] = o.min_step;
  j["init"] = to_string(o.init);
  return j;
}

Json to_json(const SimConfig& c) {
  Json j;
  j["example"] = c.example;
  j["n"] = c.n;
  j["p_y"] = c.p_y;
  j["p_z"] = c.p_z;
  j["d"] = c.d;
  j["delta_z"] = c.delta_z;
  j["seed"] = c.seed;
  j["scaling_low"] = c.scaling_low;
  j["scaling_high"] = c.scaling_high;
  return j;
}

Json to_json(const ExperimentConfig& c) {
  Json j;
  j["sim"] = to_json(c.sim);
  j["trials"] = c.trials;
  j["alpha"] = c.alpha;
  j["delta_grid"] = c.delta_grid;
  j["mc_draws"] = c.mc_draws;
  j["root_seed"] = c.root_seed;
  j["n_grid"] = c.n_grid;
  j["solver"] = to_json(c.solver);
  j["embedding"] = to_string(c.embedding);
  j["max_nonconverged_fraction"] = c.max_nonconverged_fraction;
  j["qq_draws"] = c.qq_draws;
  return j;
}

Json to_json(const TestResult& r) {
  Json j;
  j["statistic"] = r.statistic;
  j["quantile"] = r.quantile;
  j["p_value"] = r.p_value;
  j["reject"] = r.reject;
  j["alpha"] = r.alpha;
  j["mc_draws"] = r.mc_draws;
  j["seed"] = r.seed;
  j["n1"] = r.n1;
  j["n2"] = r.n2;
  j["eigenvalue_sum"] = r.eigenvalue_sum();
  j["eigenvalues"] = r.eigenvalues;
  Json d;
  d["nonconverged"] = r.diagnostics.nonconverged;
  d["total_fits"] = r.diagnostics.total_fits;
  d["min_hessian_eigenvalue"] = r.diagnostics.min_hessian_eigenvalue;
  d["pseudo_inverted_modes"] = r.diagnostics.pseudo_inverted_modes;
  d["kernel_trace"] = r.diagnostics.kernel_trace;
  d["clipped_mass"] = r.diagnostics.clipped_mass;
  j["diagnostics"] = std::move(d);
  return j;
}

Json to_json(const StudySummary& s) {
  Json j;
  j["trials"] = s.trials;
  j["completed"] = s.completed;
  j["failed"] = s.failed;
  j["rejections"] = s.rejections;
  j["rate"] = s.rate;
  j["ci_low"] = s.ci_low;
  j["ci_high"] = s.ci_high;
  j["mean_statistic"] = s.mean_statistic;
  j["mean_eigenvalue_sum"] = s.mean_eigenvalue_sum;
  return j;
}

SolverOptions solver_options_from_json(const Json& j) {
  SolverOptions o;
  Reader r(j, "solver");
  r.get("max_iters", o.max_iters);
  r.get("grad_tol", o.grad_tol);
  r.get("initial_step", o.initial_step);
  r.get("backtrack", o.backtrack);
  r.get("min_step", o.min_step);
  std::string init = to_string(o.init);
  r.get("init", init);
  r.finish();
  if (init == "root-average") {
    o.init = InitMode::RootAverage;
  } else if (init == "euclidean-average") {
    o.init = InitMode::EuclideanAverage;
  } else {
    fail_config("solver: unknown init '" + init + "'");
  }
  o.validate();
  return o;
}

SimConfig sim_config_from_json(const Json& j) {
  SimConfig c;
  Reader r(j, "sim");
  r.get("example", c.example);
  r.get("n", c.n);
  r.get("p_y", c.p_y);
  r.get("p_z", c.p_z);
  r.get("d", c.d);
  r.get("delta_z", c.delta_z);
  r.get("seed", c.seed);
  r.get("scaling_low", c.scaling_low);
  r.get("scaling_high", c.scaling_high);
  r.finish();
  return c;
}

CovariateEmbedding parse_embedding(const std::string& name) {
  if (name == "augmented") return CovariateEmbedding::Augmented;
  if (name == "centered") return CovariateEmbedding::Centered;
  fail_config("unknown embedding '" + name + "'");
}

ExperimentConfig experiment_config_from_json(const Json& j) {
  ExperimentConfig c;
  Reader r(j, "experiment config");
  if (const Json* sim = r.child("sim")) c.sim = sim_config_from_json(*sim);
  r.get("trials", c.trials);
  r.get("alpha", c.alpha);
  r.get("delta_grid", c.delta_grid);
  r.get("mc_draws", c.mc_draws);
  r.get("root_seed", c.root_seed);
  r.get("threads", c.threads);
  r.get("n_grid", c.n_grid);
  if (const Json* s = r.child("solver")) c.solver = solver_options_from_json(*s);
  std::string emb = to_string(c.embedding);
  r.get("embedding", emb);
  c.embedding = parse_embedding(emb);
  r.get("max_nonconverged_fraction", c.max_nonconverged_fraction);
  r.get("qq_draws", c.qq_draws);
  r.finish();
  c.validate();
  return c;
}

void Table::add_row(std::vector<std::string> row) {
  if (row.size() != columns.size()) {
    throw Error(ErrorKind::InvalidInput, "Table: row width does not match the header");
  }
  rows.push_back(std::move(row));
}

void write_table(const fs::path& path, const Table& t) {
  std::ostringstream os;
  for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << t.columns[c];
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << row[c];
    os << "\n";
  }
  write_file(path, os.str());
}

Table trial_table(const std::vector<TrialRecord>& records) {
  Table t{{"trial", "seed", "completed", "statistic", "p_value", "quantile", "reject",
           "eigenvalue_sum", "nonconverged", "min_hessian_eigenvalue", "failure"},
          {}};
  for (const auto& r : records) {
    std::string failure = r.failure;
    std::replace(failure.begin(), failure.end(), ',', ';');
    std::replace(failure.begin(), failure.end(), '\n', ' ');
    t.add_row({std::to_string(r.index), std::to_string(r.seed), r.completed ? "1" : "0",
               format_double(r.statistic), format_double(r.p_value), format_double(r.quantile),
               r.reject ? "1" : "0", format_double(r.eigenvalue_sum), std::to_string(r.nonconverged),
               format_double(r.min_hessian_eigenvalue), failure});
  }
  return t;
}

Table power_table(const std::vector<PowerRow>& rows) {
  Table t{{"delta_z", "trials", "completed", "rejections", "power", "ci_low", "ci_high"}, {}};
  for (const auto& r : rows) {
    const auto& s = r.summary;
    t.add_row({format_double(r.delta_z), std::to_string(s.trials), std::to_string(s.completed),
               std::to_string(s.rejections), format_double(s.rate), format_double(s.ci_low),
               format_double(s.ci_high)});
  }
  return t;
}

Table qq_table(const QQTable& qq) {
  Table t{{"empirical", "theoretical"}, {}};
  for (std::size_t i = 0; i < qq.empirical.size(); ++i)
    t.add_row({format_double(qq.empirical[i]), format_double(qq.theoretical[i])});
  return t;
}

Table consistency_table(const std::vector<ConsistencyRow>& rows) {
  Table t{{"n", "trials", "median_error", "median_error_stated"}, {}};
  for (const auto& r : rows) {
    t.add_row({std::to_string(r.n), std::to_string(r.trials), format_double(r.median_error),
               format_double(r.median_error_stated)});
  }
  return t;
}

}  // namespace bwreg
