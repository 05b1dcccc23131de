#pragma once

// Global Frechet regression on the Bures-Wasserstein manifold.

#include <span>
#include <vector>

#include "bwreg/bw_manifold.hpp"

namespace bwreg {

// Mean and covariance (1/n normalization) of a covariate sample, with the
// leading p1 x p1 block inverted separately for imputation.
struct CovariateMoments {
  Vector mean;
  Matrix cov;
  Index p1 = 0;
  Matrix inverse_cov;     // empty unless cov_invertible
  Matrix inverse_cov_11;  // empty unless cov11_invertible
  bool cov_invertible = false;
  bool cov11_invertible = false;

  static CovariateMoments from_rows(const Matrix& rows, Index p1);
  Index p() const { return mean.size(); }
};

// w(x, X) = 1 + (x - mu)^T Sigma^{-1} (X - mu). Can be negative.
double weight(const Vector& x, const Vector& sample, const CovariateMoments& m);
// Weights of x against every row of `rows`.
Vector weights_at(const Vector& x, const Matrix& rows, const CovariateMoments& m);

struct Dataset {
  Matrix covariates;  // n x p
  std::vector<SpdMatrix> responses;
  Index p1 = 0;

  Index n() const { return covariates.rows(); }
  Index p() const { return covariates.cols(); }
  Index d() const { return responses.empty() ? 0 : responses.front().dim(); }

  // Throws InvalidInput on shape mismatch, non-finite covariates or a bad p1.
  void validate() const;
};

enum class InitMode {
  // (mean of w_i Q_i^{1/2})^2, exact when the responses commute.
  RootAverage,
  // Euclidean weighted average, floored onto the PD cone.
  EuclideanAverage,
};

struct SolverOptions {
  int max_iters = 500;
  double grad_tol = 1e-8;  // on ||gradient||_F / tr(S)
  double initial_step = 1.0;
  double backtrack = 0.5;
  double min_step = 1e-8;
  InitMode init = InitMode::RootAverage;

  void validate() const;
};

struct FitDiagnostics {
  int iterations = 0;
  double grad_norm = 0.0;  // ||(1/n) sum w_i (T_i - I)||_F at the returned point
  double objective = 0.0;
  bool converged = false;
};

struct FrechetFit {
  SpdMatrix mean;
  FitDiagnostics diagnostics;
};

// Fit together with the transports from the fitted mean to every response,
// as computed at the final iterate.
struct FrechetSolution {
  FrechetFit fit;
  TransportBase base;
  std::vector<TransportFrame> frames;
};

// Responses with their square roots precomputed; reused across many fits on
// the same sample.
class ResponseSample {
 public:
  ResponseSample() = default;
  explicit ResponseSample(std::span<const SpdMatrix> qs);

  Index size() const { return static_cast<Index>(qs_.size()); }
  Index dim() const { return qs_.empty() ? 0 : qs_.front().dim(); }
  const std::vector<SpdMatrix>& responses() const { return qs_; }
  const std::vector<Matrix>& roots() const { return roots_; }
  const Vector& traces() const { return traces_; }

 private:
  std::vector<SpdMatrix> qs_;
  std::vector<Matrix> roots_;
  Vector traces_;
};

// argmin_S (1/n) sum_i w_i W^2(S, Q_i) by Riemannian gradient descent with
// the update S <- (I + eta G) S (I + eta G), G = (1/n) sum_i w_i (T_S^{Q_i} - I).
// Weights are rescaled to average one; the minimizer is unchanged. A run that
// stalls returns its best iterate with converged = false.
FrechetSolution solve_frechet(const ResponseSample& sample, const Vector& weights,
                              const SolverOptions& opts);
FrechetFit weighted_frechet_mean(std::span<const SpdMatrix> qs, std::span<const double> weights,
                                 const SolverOptions& opts = {});

// Fitted conditional mean at x, with weights from moments of `covariates`.
FrechetFit frechet_regress(const Matrix& covariates, const ResponseSample& sample,
                           const Vector& x, const CovariateMoments& m,
                           const SolverOptions& opts = {});
FrechetFit frechet_regress(const Dataset& data, const Vector& x, const CovariateMoments& m,
                           const SolverOptions& opts = {});

// -(1/n) sum_i w_i dT_S^{Q_i}
SymOperator hessian_operator(const SpdMatrix& s, std::span<const SpdMatrix> qs,
                             const Vector& weights);
SymOperator hessian_operator(const SpdMatrix& s, const Dataset& data, const Vector& x,
                             const CovariateMoments& m);
// Same operator from precomputed frames.
Matrix hessian_matrix(std::span<const TransportFrame> frames, const Vector& weights);
// Applies -(1/n) sum_i w_i dT_i to h without forming the operator.
SymMatrix apply_hessian(std::span<const TransportFrame> frames, const Vector& weights,
                        const SymMatrix& h);

}  // namespace bwreg
