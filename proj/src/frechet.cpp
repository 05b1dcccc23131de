#include "bwreg/frechet.hpp"

#include <cmath>
#include <sstream>

namespace bwreg {

namespace {

// Relative eigenvalue floor below which a covariance block is treated as
// singular.
constexpr double kSingularCov = 1e-12;

bool invert_spd(const Matrix& a, Matrix& inverse) {
  if (a.size() == 0) {
    inverse.resize(0, 0);
    return true;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
  const double top = es.eigenvalues().maxCoeff();
  if (!(top > 0.0) || es.eigenvalues().minCoeff() <= kSingularCov * top) return false;
  inverse = a.ldlt().solve(Matrix::Identity(a.rows(), a.cols()));
  inverse = 0.5 * (inverse + inverse.transpose());
  return true;
}

struct Evaluation {
  TransportBase base;
  std::vector<TransportFrame> frames;
  Matrix gradient;
  double objective = 0.0;
  double grad_norm = 0.0;
};

Evaluation evaluate(const SpdMatrix& s, const ResponseSample& sample, const Vector& w,
                    double const_term) {
  const Index n = sample.size();
  const Index d = s.dim();
  Evaluation e{TransportBase(s), {}, {}, 0.0, 0.0};
  e.frames.reserve(static_cast<std::size_t>(n));
  Matrix mean_map = Matrix::Zero(d, d);
  double root_acc = 0.0;
  for (Index i = 0; i < n; ++i) {
    TransportFrame f = e.base.frame_to(sample.responses()[static_cast<std::size_t>(i)]);
    root_acc += w(i) * f.root_trace();
    mean_map.noalias() += w(i) * f.map();
    e.frames.push_back(std::move(f));
  }
  mean_map /= static_cast<double>(n);
  e.gradient = 0.5 * (mean_map + mean_map.transpose()) - Matrix::Identity(d, d);
  e.grad_norm = e.gradient.norm();
  e.objective = s.trace() + const_term - 2.0 * root_acc / static_cast<double>(n);
  return e;
}

// Square of a symmetric matrix if it is safely positive definite.
bool square_if_pd(const Matrix& r, Matrix& out) {
  const SymEigen e = sym_eigen(0.5 * (r + r.transpose()));
  const double top = e.values(e.values.size() - 1);
  if (!(top > 0.0) || e.values(0) <= 1e3 * kEpsPd * top) return false;
  out = e.vectors * e.values.array().square().matrix().asDiagonal() * e.vectors.transpose();
  out = 0.5 * (out + out.transpose());
  return true;
}

bool floored_euclidean(const ResponseSample& sample, const Vector& w, Matrix& out) {
  const Index d = sample.dim();
  Matrix avg = Matrix::Zero(d, d);
  for (Index i = 0; i < sample.size(); ++i)
    avg += w(i) * sample.responses()[static_cast<std::size_t>(i)].matrix();
  avg /= static_cast<double>(sample.size());
  const SymEigen e = sym_eigen(0.5 * (avg + avg.transpose()));
  const double top = e.values(e.values.size() - 1);
  if (!(top > 0.0)) return false;
  const double floor = 1e3 * kEpsPd * top;
  Vector v = e.values.unaryExpr([floor](double x) { return std::max(x, floor); });
  out = e.vectors * v.asDiagonal() * e.vectors.transpose();
  out = 0.5 * (out + out.transpose());
  return true;
}

Matrix root_average(const ResponseSample& sample, const Vector& w) {
  const Index d = sample.dim();
  Matrix r = Matrix::Zero(d, d);
  for (Index i = 0; i < sample.size(); ++i) r += w(i) * sample.roots()[static_cast<std::size_t>(i)];
  return r / static_cast<double>(sample.size());
}

SpdMatrix initial_point(const ResponseSample& sample, const Vector& w, InitMode mode) {
  Matrix s;
  if (mode == InitMode::RootAverage) {
    if (square_if_pd(root_average(sample, w), s)) return make_spd_unchecked(std::move(s));
    if (floored_euclidean(sample, w, s)) return make_spd_unchecked(std::move(s));
  } else {
    if (floored_euclidean(sample, w, s)) return make_spd_unchecked(std::move(s));
  }
  // Unweighted mean of square roots, squared: always positive definite.
  const Matrix r = root_average(sample, Vector::Ones(sample.size()));
  Matrix sq = r * r;
  return make_spd_unchecked(0.5 * (sq + sq.transpose()));
}

}  // namespace

CovariateMoments CovariateMoments::from_rows(const Matrix& rows, Index p1) {
  if (rows.rows() < 1) throw Error(ErrorKind::InvalidInput, "CovariateMoments: no rows");
  if (p1 < 0 || p1 > rows.cols()) {
    throw Error(ErrorKind::InvalidInput, "CovariateMoments: p1 out of range");
  }
  CovariateMoments m;
  m.p1 = p1;
  m.mean = rows.colwise().mean().transpose();
  const Matrix centered = rows.rowwise() - m.mean.transpose();
  m.cov = centered.transpose() * centered / static_cast<double>(rows.rows());
  m.cov = 0.5 * (m.cov + m.cov.transpose());
  m.cov_invertible = invert_spd(m.cov, m.inverse_cov);
  m.cov11_invertible = invert_spd(m.cov.topLeftCorner(p1, p1), m.inverse_cov_11);
  return m;
}

double weight(const Vector& x, const Vector& sample, const CovariateMoments& m) {
  if (x.size() != m.p() || sample.size() != m.p()) {
    throw Error(ErrorKind::InvalidInput, "weight: covariate dimension mismatch");
  }
  if (!m.cov_invertible) throw Error(ErrorKind::Singular, "weight: covariate covariance is singular");
  return 1.0 + (x - m.mean).dot(m.inverse_cov * (sample - m.mean));
}

Vector weights_at(const Vector& x, const Matrix& rows, const CovariateMoments& m) {
  if (x.size() != m.p() || rows.cols() != m.p()) {
    throw Error(ErrorKind::InvalidInput, "weights_at: covariate dimension mismatch");
  }
  if (!m.cov_invertible) {
    throw Error(ErrorKind::Singular, "weights_at: covariate covariance is singular");
  }
  const Vector u = m.inverse_cov * (x - m.mean);
  Vector w(rows.rows());
  for (Index i = 0; i < rows.rows(); ++i) w(i) = 1.0 + (rows.row(i).transpose() - m.mean).dot(u);
  return w;
}

void Dataset::validate() const {
  if (static_cast<Index>(responses.size()) != covariates.rows()) {
    std::ostringstream os;
    os << "Dataset: " << covariates.rows() << " covariate rows but " << responses.size()
       << " responses";
    throw Error(ErrorKind::InvalidInput, os.str());
  }
  if (!covariates.allFinite()) throw Error(ErrorKind::InvalidInput, "Dataset: non-finite covariates");
  if (p1 < 0 || p1 > p()) throw Error(ErrorKind::InvalidInput, "Dataset: p1 out of range");
  for (std::size_t i = 0; i < responses.size(); ++i) {
    if (responses[i].dim() != d() || d() == 0) {
      std::ostringstream os;
      os << "Dataset: response " << i << " has dimension " << responses[i].dim() << ", expected "
         << d();
      throw Error(ErrorKind::InvalidInput, os.str());
    }
  }
}

void SolverOptions::validate() const {
  if (max_iters < 1 || !(grad_tol > 0.0) || !(initial_step > 0.0) || !(min_step > 0.0) ||
      !(backtrack > 0.0 && backtrack < 1.0)) {
    throw Error(ErrorKind::InvalidConfig, "SolverOptions: invalid solver settings");
  }
}

ResponseSample::ResponseSample(std::span<const SpdMatrix> qs) : qs_(qs.begin(), qs.end()) {
  roots_.reserve(qs_.size());
  traces_.resize(static_cast<Index>(qs_.size()));
  for (std::size_t i = 0; i < qs_.size(); ++i) {
    if (qs_[i].dim() != qs_.front().dim()) {
      throw Error(ErrorKind::InvalidInput, "ResponseSample: responses differ in dimension");
    }
    roots_.push_back(sym_sqrt(qs_[i]).matrix());
    traces_(static_cast<Index>(i)) = qs_[i].trace();
  }
}

FrechetSolution solve_frechet(const ResponseSample& sample, const Vector& weights,
                              const SolverOptions& opts) {
  opts.validate();
  const Index n = sample.size();
  if (n < 1) throw Error(ErrorKind::InvalidInput, "solve_frechet: empty sample");
  if (weights.size() != n) throw Error(ErrorKind::InvalidInput, "solve_frechet: weight count mismatch");
  if (!weights.allFinite()) throw Error(ErrorKind::InvalidInput, "solve_frechet: non-finite weights");
  const double wsum = weights.sum();
  if (!(wsum > 0.0)) throw Error(ErrorKind::InvalidInput, "solve_frechet: weights must have a positive sum");
  const Vector w = weights * (static_cast<double>(n) / wsum);
  const Index d = sample.dim();

  const double const_term = w.dot(sample.traces()) / static_cast<double>(n);
  const double abs_term = w.cwiseAbs().dot(sample.traces()) / static_cast<double>(n);

  SpdMatrix s = initial_point(sample, w, opts.init);
  Evaluation cur = evaluate(s, sample, w, const_term);
  FitDiagnostics diag;
  const Matrix eye = Matrix::Identity(d, d);

  while (diag.iterations < opts.max_iters) {
    if (cur.grad_norm <= opts.grad_tol * s.trace()) break;
    const double gmin = sym_eigen(cur.gradient).values(0);
    const double ftol = 1e-12 * (s.trace() + abs_term);
    bool accepted = false;
    for (double eta = opts.initial_step; eta >= opts.min_step; eta *= opts.backtrack) {
      if (1.0 + eta * gmin <= kEpsPd) continue;
      const Matrix step = eye + eta * cur.gradient;
      Matrix next_m = step * s.matrix() * step;
      SpdMatrix next_s = make_spd_unchecked(0.5 * (next_m + next_m.transpose()));
      Evaluation next;
      try {
        next = evaluate(next_s, sample, w, const_term);
      } catch (const Error&) {
        continue;
      }
      // Near the optimum the objective change drops below roundoff; accept a
      // step that is flat to roundoff if it still shrinks the gradient.
      if (next.objective < cur.objective ||
          (next.objective <= cur.objective + ftol && next.grad_norm < cur.grad_norm)) {
        s = std::move(next_s);
        cur = std::move(next);
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    ++diag.iterations;
  }

  diag.grad_norm = cur.grad_norm;
  diag.objective = cur.objective;
  diag.converged = cur.grad_norm <= opts.grad_tol * s.trace();
  return FrechetSolution{FrechetFit{s, diag}, std::move(cur.base), std::move(cur.frames)};
}

FrechetFit weighted_frechet_mean(std::span<const SpdMatrix> qs, std::span<const double> weights,
                                 const SolverOptions& opts) {
  if (qs.size() != weights.size()) {
    throw Error(ErrorKind::InvalidInput, "weighted_frechet_mean: list lengths differ");
  }
  const ResponseSample sample(qs);
  const Vector w = Eigen::Map<const Vector>(weights.data(), static_cast<Index>(weights.size()));
  return solve_frechet(sample, w, opts).fit;
}

FrechetFit frechet_regress(const Matrix& covariates, const ResponseSample& sample,
                           const Vector& x, const CovariateMoments& m, const SolverOptions& opts) {
  if (covariates.rows() != sample.size()) {
    throw Error(ErrorKind::InvalidInput, "frechet_regress: covariate and response counts differ");
  }
  return solve_frechet(sample, weights_at(x, covariates, m), opts).fit;
}

FrechetFit frechet_regress(const Dataset& data, const Vector& x, const CovariateMoments& m,
                           const SolverOptions& opts) {
  data.validate();
  return frechet_regress(data.covariates, ResponseSample(data.responses), x, m, opts);
}

Matrix hessian_matrix(std::span<const TransportFrame> frames, const Vector& weights) {
  if (frames.empty()) throw Error(ErrorKind::InvalidInput, "hessian_matrix: no frames");
  const Index n = static_cast<Index>(frames.size());
  if (weights.size() != n) throw Error(ErrorKind::InvalidInput, "hessian_matrix: weight count mismatch");
  const Index m = sym_coord_dim(frames.front().root.size());
  Matrix h = Matrix::Zero(m, m);
  for (Index i = 0; i < n; ++i) h -= weights(i) * frames[static_cast<std::size_t>(i)].differential_matrix();
  return h / static_cast<double>(n);
}

SymMatrix apply_hessian(std::span<const TransportFrame> frames, const Vector& weights,
                        const SymMatrix& h) {
  const Index n = static_cast<Index>(frames.size());
  if (n == 0 || weights.size() != n) {
    throw Error(ErrorKind::InvalidInput, "apply_hessian: weight count mismatch");
  }
  SymMatrix out = SymMatrix::zero(h.dim());
  for (Index i = 0; i < n; ++i)
    out -= weights(i) * frames[static_cast<std::size_t>(i)].apply_differential(h);
  out *= 1.0 / static_cast<double>(n);
  return out;
}

SymOperator hessian_operator(const SpdMatrix& s, std::span<const SpdMatrix> qs,
                             const Vector& weights) {
  const TransportBase base(s);
  std::vector<TransportFrame> frames;
  frames.reserve(qs.size());
  for (const auto& q : qs) frames.push_back(base.frame_to(q));
  return SymOperator(s.dim(), hessian_matrix(frames, weights));
}

SymOperator hessian_operator(const SpdMatrix& s, const Dataset& data, const Vector& x,
                             const CovariateMoments& m) {
  data.validate();
  return hessian_operator(s, data.responses, weights_at(x, data.covariates, m));
}

}  // namespace bwreg
