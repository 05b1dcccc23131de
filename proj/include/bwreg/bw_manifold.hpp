#pragma once

// Bures-Wasserstein numerics on symmetric positive-definite matrices.
//
// All symmetric-matrix operators share one orthonormal basis of the space of
// d x d symmetric matrices (trace inner product): the d diagonal units E_ii
// first, then (E_ij + E_ji)/sqrt(2) for i < j in lexicographic order. The
// coordinate dimension is m = d(d+1)/2.

#include <Eigen/Dense>

#include "bwreg/error.hpp"

namespace bwreg {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Positive-definiteness floor, relative to the largest eigenvalue.
inline constexpr double kEpsPd = 1e-10;

inline Index sym_coord_dim(Index d) { return d * (d + 1) / 2; }

class SymMatrix {
 public:
  SymMatrix() = default;
  // Symmetrizes. Throws InvalidInput for non-square, non-finite or clearly
  // asymmetric input.
  explicit SymMatrix(const Matrix& m);

  static SymMatrix zero(Index d);
  static SymMatrix identity(Index d);

  Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  double frobenius_norm() const { return m_.norm(); }

  SymMatrix& operator+=(const SymMatrix& o);
  SymMatrix& operator-=(const SymMatrix& o);
  SymMatrix& operator*=(double c);
  friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
  friend SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
  friend SymMatrix operator*(double c, SymMatrix a) { return a *= c; }

 private:
  struct Unchecked {};
  SymMatrix(Matrix m, Unchecked) : m_(std::move(m)) {}
  friend class SpdMatrix;
  friend SymMatrix make_sym_unchecked(Matrix m);

  Matrix m_;
};

class SpdMatrix {
 public:
  SpdMatrix() = default;
  // Symmetrizes and checks that every eigenvalue exceeds eps_pd times the
  // largest one. Throws InvalidInput otherwise.
  explicit SpdMatrix(const Matrix& m, double eps_pd = kEpsPd);

  static SpdMatrix identity(Index d);

  Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  double trace() const { return m_.trace(); }
  SymMatrix sym() const { return SymMatrix(m_, SymMatrix::Unchecked{}); }

 private:
  struct Unchecked {};
  SpdMatrix(Matrix m, Unchecked) : m_(std::move(m)) {}
  friend SpdMatrix make_spd_unchecked(Matrix m);

  Matrix m_;
};

// Wraps an already-symmetric matrix known to be valid. Internal use by
// solvers whose iterates are positive definite by construction.
SymMatrix make_sym_unchecked(Matrix m);
SpdMatrix make_spd_unchecked(Matrix m);

Vector sym_basis_coords(const SymMatrix& m);
SymMatrix sym_from_coords(Index d, const Vector& coords);
// Coordinates of the identity matrix (ones on the diagonal block).
Vector identity_coords(Index d);

// Linear operator on symmetric matrices, stored as its m x m matrix in the
// shared orthonormal basis.
class SymOperator {
 public:
  SymOperator() = default;
  SymOperator(Index d, Matrix coords);

  static SymOperator zero(Index d);
  static SymOperator identity(Index d);

  Index dim() const { return d_; }
  const Matrix& matrix() const { return mat_; }

  SymMatrix apply(const SymMatrix& h) const;
  Vector apply_coords(const Vector& c) const { return mat_ * c; }
  // (*this) o other
  SymOperator compose(const SymOperator& other) const;
  // Eigenvalues of the symmetric part, ascending.
  Vector symmetric_eigenvalues() const;

 private:
  Index d_ = 0;
  Matrix mat_;
};

// Symmetric eigendecomposition helpers.
struct SymEigen {
  Vector values;   // ascending
  Matrix vectors;  // columns
};
SymEigen sym_eigen(const Matrix& m);

SpdMatrix sym_sqrt(const SpdMatrix& a);
SpdMatrix sym_inv_sqrt(const SpdMatrix& a);

double wasserstein_distance(const SpdMatrix& a, const SpdMatrix& b);
double wasserstein_sq(const SpdMatrix& a, const SpdMatrix& b);

// Optimal transport map pushing N(0, q) to N(0, s):
//   T = q^{-1/2} (q^{1/2} s q^{1/2})^{1/2} q^{-1/2},  T q T = s.
SymMatrix ot_map(const SpdMatrix& q, const SpdMatrix& s);

// Solves X A + B X = C through eigendecompositions of A and B.
// Throws Singular when some eigenvalue pair nearly satisfies a + b = 0.
Matrix solve_sylvester(const Matrix& a, const Matrix& b, const Matrix& c);

// Transport from a fixed base covariance S to one target Q, factored as
//   T = P diag(r) P^T,  P = S^{-1/2} V,
// where V, r^2 are the eigenvectors and eigenvalues of S^{1/2} Q S^{1/2}.
// The same factors give the differential of T in the base point.
struct TransportFrame {
  Matrix frame;  // P
  Vector root;   // r

  Matrix map() const { return frame * root.asDiagonal() * frame.transpose(); }
  // tr (S^{1/2} Q S^{1/2})^{1/2}
  double root_trace() const { return root.sum(); }
  // dT[H] = -P (K o (P^T H P)) P^T with K_ab = r_a r_b / (r_a + r_b).
  SymMatrix apply_differential(const SymMatrix& h) const;
  // Matrix of H -> dT[H] in the shared basis; symmetric negative semidefinite.
  Matrix differential_matrix() const;
};

// Square-root factors of a base covariance, reused for transports to many
// targets.
class TransportBase {
 public:
  TransportBase() = default;
  // Throws IllConditioned when min eigenvalue <= eps_pd * max eigenvalue.
  explicit TransportBase(const SpdMatrix& base);

  const SpdMatrix& base() const { return base_; }
  const Matrix& sqrt() const { return sqrt_; }
  const Matrix& inv_sqrt() const { return inv_sqrt_; }

  TransportFrame frame_to(const SpdMatrix& target) const;

 private:
  SpdMatrix base_;
  Matrix sqrt_;
  Matrix inv_sqrt_;
};

// Differential of the transport map T_S^Q with respect to the base point S,
// defined by implicit differentiation of T S T = Q:
//   dT (S T) + (T S) dT = -T H T.
SymOperator ot_map_differential(const SpdMatrix& s, const SpdMatrix& q);

}  // namespace bwreg
