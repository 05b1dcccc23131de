#include "bwreg/simgen.hpp"

#include <cmath>
#include <sstream>

#include "bwreg/seeding.hpp"

namespace bwreg {

namespace {

Matrix spd_from(const Matrix& u, const Vector& root_diag) {
  Matrix q = u * root_diag.array().square().matrix().asDiagonal() * u.transpose();
  return 0.5 * (q + q.transpose());
}

Vector draw_covariates(Index p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Vector x(p);
  for (Index j = 0; j < p; ++j) x(j) = unif(rng);
  return x;
}

Vector draw_scaling(Index d, double lo, double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(lo, hi);
  Vector v(d);
  for (Index j = 0; j < d; ++j) v(j) = unif(rng);
  return v;
}

Matrix block_haar(Index d, std::mt19937_64& rng) {
  Matrix u = Matrix::Zero(d, d);
  for (Index b = 0; b + 1 < d; b += 2) u.block(b, b, 2, 2) = haar_orthogonal(2, rng);
  return u;
}

SimulatedData generate(const SimConfig& cfg) {
  cfg.validate();
  std::mt19937_64 cov_rng(derive_seed(cfg.seed, Stream::Covariates));
  std::mt19937_64 rot_rng(derive_seed(cfg.seed, Stream::Rotation));
  std::mt19937_64 scale_rng(derive_seed(cfg.seed, Stream::Scaling));

  SimulatedData out;
  out.truth.example = cfg.example;
  out.truth.p_y = cfg.p_y;
  out.truth.d = cfg.d;
  out.truth.delta_z = cfg.delta_z;
  out.truth.mean_abs_scaling = mean_abs_uniform(cfg.scaling_low, cfg.scaling_high);
  out.truth.rotation =
      cfg.example == 1 ? haar_orthogonal(cfg.d, rot_rng) : Matrix::Identity(cfg.d, cfg.d);

  out.data.p1 = cfg.p_y;
  out.data.covariates.resize(cfg.n, cfg.p());
  out.data.responses.reserve(static_cast<std::size_t>(cfg.n));
  for (Index i = 0; i < cfg.n; ++i) {
    const Vector x = draw_covariates(cfg.p(), cov_rng);
    out.data.covariates.row(i) = x.transpose();
    const Vector f = design_diagonal(cfg.example, x, cfg.p_y, cfg.d, cfg.delta_z);
    const Matrix u = cfg.example == 1 ? out.truth.rotation : block_haar(cfg.d, rot_rng);
    // A near-zero V entry makes Q numerically singular: redraw V once.
    for (int attempt = 0;; ++attempt) {
      const Vector v = draw_scaling(cfg.d, cfg.scaling_low, cfg.scaling_high, scale_rng);
      try {
        out.data.responses.emplace_back(spd_from(u, v.cwiseAbs().cwiseProduct(f)));
        break;
      } catch (const Error&) {
        if (attempt > 0) {
          throw Error(ErrorKind::InvalidConfig, "simulate: degenerate response after resampling");
        }
        ++out.resampled;
      }
    }
  }
  return out;
}

}  // namespace

void SimConfig::validate() const {
  std::ostringstream os;
  if (example != 1 && example != 2) os << "example must be 1 or 2; ";
  if (n < 4) os << "n must be at least 4; ";
  if (p_y < 1 || p_z < 0) os << "need p_y >= 1 and p_z >= 0; ";
  if (d < 1) os << "d must be positive; ";
  if (example == 2 && d % 2 != 0) os << "example 2 requires an even d; ";
  if (!std::isfinite(delta_z) || std::abs(delta_z) >= 2.0 / static_cast<double>(p())) {
    os << "delta_z must satisfy |delta_z| < 2/p = " << 2.0 / static_cast<double>(p()) << "; ";
  }
  if (!(std::isfinite(scaling_low) && std::isfinite(scaling_high) && scaling_low < scaling_high &&
        scaling_high > 0.0)) {
    os << "scaling range must satisfy low < high and high > 0; ";
  }
  const std::string msg = os.str();
  if (!msg.empty()) throw Error(ErrorKind::InvalidConfig, "SimConfig: " + msg.substr(0, msg.size() - 2));
}

double mean_abs_uniform(double lo, double hi) {
  if (lo >= 0.0) return 0.5 * (lo + hi);
  if (hi <= 0.0) return -0.5 * (lo + hi);
  return (lo * lo + hi * hi) / (2.0 * (hi - lo));
}

Matrix haar_orthogonal(Index d, std::mt19937_64& rng) {
  if (d < 1) throw Error(ErrorKind::InvalidInput, "haar_orthogonal: d must be positive");
  std::normal_distribution<double> normal;
  Matrix g(d, d);
  for (Index j = 0; j < d; ++j)
    for (Index i = 0; i < d; ++i) g(i, j) = normal(rng);
  const Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fixing sign(R_ii) > 0 makes Q exactly Haar distributed.
  for (Index j = 0; j < d; ++j)
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  return q;
}

Vector design_diagonal(int example, const Vector& x, Index p_y, Index d, double delta_z) {
  const double shift = 0.1 * x.head(p_y).sum() + delta_z * x.tail(x.size() - p_y).sum();
  Vector f(d);
  for (Index k = 1; k <= d; ++k) {
    const double base = example == 1 ? 1.5 + 0.5 * static_cast<double>(k)
                                     : 1.5 + 0.5 * static_cast<double>((k + 1) / 2);
    f(k - 1) = base + shift;
  }
  if (f.minCoeff() <= 0.0) {
    throw Error(ErrorKind::InvalidConfig, "design_diagonal: nonpositive diagonal entry");
  }
  return f;
}

SimulatedData gen_example1(const SimConfig& cfg) {
  if (cfg.example != 1) throw Error(ErrorKind::InvalidConfig, "gen_example1: example must be 1");
  return generate(cfg);
}

SimulatedData gen_example2(const SimConfig& cfg) {
  if (cfg.example != 2) throw Error(ErrorKind::InvalidConfig, "gen_example2: example must be 2");
  return generate(cfg);
}

SimulatedData simulate(const SimConfig& cfg) { return generate(cfg); }

SpdMatrix true_qstar(const GroundTruth& truth, const Vector& x) {
  const Vector f = design_diagonal(truth.example, x, truth.p_y, truth.d, truth.delta_z);
  return SpdMatrix(spd_from(truth.rotation, f));
}

SpdMatrix frechet_qstar(const GroundTruth& truth, const Vector& x) {
  const Vector f = design_diagonal(truth.example, x, truth.p_y, truth.d, truth.delta_z);
  return SpdMatrix(spd_from(truth.rotation, truth.mean_abs_scaling * f));
}

}  // namespace bwreg
