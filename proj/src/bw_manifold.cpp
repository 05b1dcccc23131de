#include "bwreg/bw_manifold.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

namespace bwreg {

namespace {

constexpr double kAsymmetryTol = 1e-8;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

void require_square_finite(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    std::ostringstream os;
    os << what << ": expected a non-empty square matrix, got " << m.rows() << "x"
       << m.cols();
    throw Error(ErrorKind::InvalidInput, os.str());
  }
  if (!m.allFinite()) {
    throw Error(ErrorKind::InvalidInput, std::string(what) + ": non-finite entries");
  }
}

Matrix symmetrized(const Matrix& m, const char* what) {
  require_square_finite(m, what);
  const double scale = std::max(m.norm(), 1e-300);
  if ((m - m.transpose()).norm() > kAsymmetryTol * scale) {
    throw Error(ErrorKind::InvalidInput, std::string(what) + ": matrix is not symmetric");
  }
  return 0.5 * (m + m.transpose());
}

void require_same_dim(Index a, Index b, const char* what) {
  if (a != b) {
    std::ostringstream os;
    os << what << ": dimension mismatch (" << a << " vs " << b << ")";
    throw Error(ErrorKind::InvalidInput, os.str());
  }
}

template <class F>
Matrix spectral_map(const SymEigen& e, F f) {
  Vector fv = e.values.unaryExpr(f);
  return e.vectors * fv.asDiagonal() * e.vectors.transpose();
}

void require_well_conditioned(const SymEigen& e, const char* what) {
  const double top = e.values(e.values.size() - 1);
  const double bottom = e.values(0);
  if (!(top > 0.0) || bottom <= kEpsPd * top) {
    std::ostringstream os;
    os << what << ": matrix is not safely positive definite (min eigenvalue " << bottom
       << ", max eigenvalue " << top << ")";
    throw Error(ErrorKind::IllConditioned, os.str());
  }
}

}  // namespace

SymMatrix::SymMatrix(const Matrix& m) : m_(symmetrized(m, "SymMatrix")) {}

SymMatrix SymMatrix::zero(Index d) { return SymMatrix(Matrix::Zero(d, d), Unchecked{}); }

SymMatrix SymMatrix::identity(Index d) {
  return SymMatrix(Matrix::Identity(d, d), Unchecked{});
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& o) {
  require_same_dim(dim(), o.dim(), "SymMatrix +");
  m_ += o.m_;
  return *this;
}

SymMatrix& SymMatrix::operator-=(const SymMatrix& o) {
  require_same_dim(dim(), o.dim(), "SymMatrix -");
  m_ -= o.m_;
  return *this;
}

SymMatrix& SymMatrix::operator*=(double c) {
  m_ *= c;
  return *this;
}

SpdMatrix::SpdMatrix(const Matrix& m, double eps_pd) : m_(symmetrized(m, "SpdMatrix")) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
  const Vector& ev = es.eigenvalues();
  const double top = ev(ev.size() - 1);
  if (!(top > 0.0) || ev(0) <= eps_pd * top) {
    std::ostringstream os;
    os << "SpdMatrix: matrix is not positive definite (min eigenvalue " << ev(0)
       << ", max eigenvalue " << top << ")";
    throw Error(ErrorKind::InvalidInput, os.str());
  }
}

SpdMatrix SpdMatrix::identity(Index d) { return SpdMatrix(Matrix::Identity(d, d), Unchecked{}); }

SymMatrix make_sym_unchecked(Matrix m) { return SymMatrix(std::move(m), SymMatrix::Unchecked{}); }

SpdMatrix make_spd_unchecked(Matrix m) { return SpdMatrix(std::move(m), SpdMatrix::Unchecked{}); }

Vector sym_basis_coords(const SymMatrix& m) {
  const Index d = m.dim();
  Vector c(sym_coord_dim(d));
  const Matrix& a = m.matrix();
  for (Index i = 0; i < d; ++i) c(i) = a(i, i);
  Index k = d;
  const double s = std::sqrt(2.0);
  for (Index i = 0; i < d; ++i)
    for (Index j = i + 1; j < d; ++j) c(k++) = s * a(i, j);
  return c;
}

SymMatrix sym_from_coords(Index d, const Vector& coords) {
  if (coords.size() != sym_coord_dim(d)) {
    throw Error(ErrorKind::InvalidInput, "sym_from_coords: coordinate length mismatch");
  }
  Matrix a(d, d);
  for (Index i = 0; i < d; ++i) a(i, i) = coords(i);
  Index k = d;
  for (Index i = 0; i < d; ++i)
    for (Index j = i + 1; j < d; ++j) {
      a(i, j) = a(j, i) = kInvSqrt2 * coords(k++);
    }
  return make_sym_unchecked(std::move(a));
}

Vector identity_coords(Index d) {
  Vector c = Vector::Zero(sym_coord_dim(d));
  c.head(d).setOnes();
  return c;
}

SymOperator::SymOperator(Index d, Matrix coords) : d_(d), mat_(std::move(coords)) {
  const Index m = sym_coord_dim(d);
  if (mat_.rows() != m || mat_.cols() != m) {
    throw Error(ErrorKind::InvalidInput, "SymOperator: matrix size does not match d(d+1)/2");
  }
}

SymOperator SymOperator::zero(Index d) {
  const Index m = sym_coord_dim(d);
  return SymOperator(d, Matrix::Zero(m, m));
}

SymOperator SymOperator::identity(Index d) {
  const Index m = sym_coord_dim(d);
  return SymOperator(d, Matrix::Identity(m, m));
}

SymMatrix SymOperator::apply(const SymMatrix& h) const {
  require_same_dim(d_, h.dim(), "SymOperator::apply");
  return sym_from_coords(d_, mat_ * sym_basis_coords(h));
}

SymOperator SymOperator::compose(const SymOperator& other) const {
  require_same_dim(d_, other.d_, "SymOperator::compose");
  return SymOperator(d_, mat_ * other.mat_);
}

Vector SymOperator::symmetric_eigenvalues() const {
  Matrix s = 0.5 * (mat_ + mat_.transpose());
  return Eigen::SelfAdjointEigenSolver<Matrix>(s, Eigen::EigenvaluesOnly).eigenvalues();
}

SymEigen sym_eigen(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorKind::IllConditioned, "sym_eigen: eigendecomposition failed");
  }
  return {es.eigenvalues(), es.eigenvectors()};
}

SpdMatrix sym_sqrt(const SpdMatrix& a) {
  if (!a.matrix().allFinite()) throw Error(ErrorKind::InvalidInput, "sym_sqrt: non-finite entries");
  const SymEigen e = sym_eigen(a.matrix());
  require_well_conditioned(e, "sym_sqrt");
  Matrix r = spectral_map(e, [](double v) { return std::sqrt(v); });
  return make_spd_unchecked(0.5 * (r + r.transpose()));
}

SpdMatrix sym_inv_sqrt(const SpdMatrix& a) {
  const SymEigen e = sym_eigen(a.matrix());
  require_well_conditioned(e, "sym_inv_sqrt");
  Matrix r = spectral_map(e, [](double v) { return 1.0 / std::sqrt(v); });
  return make_spd_unchecked(0.5 * (r + r.transpose()));
}

double wasserstein_distance(const SpdMatrix& a_in, const SpdMatrix& b_in) {
  require_same_dim(a_in.dim(), b_in.dim(), "wasserstein_distance");
  // Canonical argument order makes the result exactly symmetric.
  const Matrix& ma = a_in.matrix();
  const Matrix& mb = b_in.matrix();
  const bool swap = std::lexicographical_compare(mb.data(), mb.data() + mb.size(), ma.data(),
                                                 ma.data() + ma.size());
  const SpdMatrix& a = swap ? b_in : a_in;
  const SpdMatrix& b = swap ? a_in : b_in;

  // W(A,B) = min over orthogonal U of ||A^{1/2} - B^{1/2} U||_F, attained at the
  // polar factor of B^{1/2} A^{1/2}. Equal to the trace formula but free of
  // its cancellation when A and B are close.
  const Matrix ra = sym_sqrt(a).matrix();
  const Matrix rb = sym_sqrt(b).matrix();
  Eigen::JacobiSVD<Matrix> svd(rb * ra, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Matrix u = svd.matrixU() * svd.matrixV().transpose();
  return (ra - rb * u).norm();
}

double wasserstein_sq(const SpdMatrix& a, const SpdMatrix& b) {
  const double w = wasserstein_distance(a, b);
  return w * w;
}

TransportBase::TransportBase(const SpdMatrix& base) : base_(base) {
  const SymEigen e = sym_eigen(base.matrix());
  require_well_conditioned(e, "TransportBase");
  sqrt_ = spectral_map(e, [](double v) { return std::sqrt(v); });
  inv_sqrt_ = spectral_map(e, [](double v) { return 1.0 / std::sqrt(v); });
}

TransportFrame TransportBase::frame_to(const SpdMatrix& target) const {
  require_same_dim(base_.dim(), target.dim(), "TransportBase::frame_to");
  Matrix m = sqrt_ * target.matrix() * sqrt_;
  m = 0.5 * (m + m.transpose());
  const SymEigen e = sym_eigen(m);
  TransportFrame f;
  f.root = e.values.unaryExpr([](double v) { return std::sqrt(std::max(v, 0.0)); });
  f.frame = inv_sqrt_ * e.vectors;
  return f;
}

SymMatrix TransportFrame::apply_differential(const SymMatrix& h) const {
  const Index d = root.size();
  Matrix inner = frame.transpose() * h.matrix() * frame;
  for (Index a = 0; a < d; ++a)
    for (Index b = 0; b < d; ++b) {
      const double den = root(a) + root(b);
      inner(a, b) *= den > 0.0 ? -root(a) * root(b) / den : 0.0;
    }
  Matrix out = frame * inner * frame.transpose();
  return make_sym_unchecked(0.5 * (out + out.transpose()));
}

Matrix TransportFrame::differential_matrix() const {
  const Index d = root.size();
  const Index m = sym_coord_dim(d);
  // Row a holds vec(P^T B_a P) scaled entrywise by sqrt(K); the operator is
  // then -G G^T.
  Matrix sk(d, d);
  for (Index a = 0; a < d; ++a)
    for (Index b = 0; b < d; ++b) {
      const double den = root(a) + root(b);
      sk(a, b) = den > 0.0 ? std::sqrt(root(a) * root(b) / den) : 0.0;
    }
  Matrix g(m, d * d);
  auto fill = [&](Index row, Index i, Index j, double scale) {
    for (Index b = 0; b < d; ++b)
      for (Index a = 0; a < d; ++a) {
        const double v = i == j ? frame(i, a) * frame(i, b)
                                : frame(i, a) * frame(j, b) + frame(j, a) * frame(i, b);
        g(row, a + b * d) = scale * v * sk(a, b);
      }
  };
  for (Index i = 0; i < d; ++i) fill(i, i, i, 1.0);
  Index k = d;
  for (Index i = 0; i < d; ++i)
    for (Index j = i + 1; j < d; ++j) fill(k++, i, j, kInvSqrt2);
  Matrix op = -(g * g.transpose());
  return 0.5 * (op + op.transpose());
}

SymMatrix ot_map(const SpdMatrix& q, const SpdMatrix& s) {
  require_same_dim(q.dim(), s.dim(), "ot_map");
  const TransportFrame f = TransportBase(q).frame_to(s);
  Matrix t = f.map();
  return make_sym_unchecked(0.5 * (t + t.transpose()));
}

Matrix solve_sylvester(const Matrix& a, const Matrix& b, const Matrix& c) {
  using Complex = std::complex<double>;
  using CMatrix = Eigen::MatrixXcd;
  if (a.rows() != a.cols() || b.rows() != b.cols()) {
    throw Error(ErrorKind::InvalidInput, "solve_sylvester: A and B must be square");
  }
  if (c.rows() != b.rows() || c.cols() != a.rows()) {
    throw Error(ErrorKind::InvalidInput, "solve_sylvester: C has incompatible shape");
  }
  Eigen::EigenSolver<Matrix> ea(a), eb(b);
  if (ea.info() != Eigen::Success || eb.info() != Eigen::Success) {
    throw Error(ErrorKind::Singular, "solve_sylvester: eigendecomposition failed");
  }
  const CMatrix va = ea.eigenvectors();
  const CMatrix vb = eb.eigenvectors();
  const Eigen::VectorXcd la = ea.eigenvalues();
  const Eigen::VectorXcd lb = eb.eigenvalues();
  const double scale =
      std::max({la.cwiseAbs().maxCoeff(), lb.cwiseAbs().maxCoeff(), 1e-300});

  // With A = Va La Va^{-1} and B = Vb Lb Vb^{-1}, Y = Vb^{-1} X Va satisfies
  // Y_ij (lb_i + la_j) = (Vb^{-1} C Va)_ij.
  const Eigen::PartialPivLU<CMatrix> lu_b(vb);
  CMatrix y = lu_b.solve(c.cast<Complex>() * va);
  for (Index i = 0; i < y.rows(); ++i)
    for (Index j = 0; j < y.cols(); ++j) {
      const Complex den = lb(i) + la(j);
      if (std::abs(den) < 1e-12 * scale) {
        throw Error(ErrorKind::Singular, "solve_sylvester: spectra of A and -B intersect");
      }
      y(i, j) /= den;
    }
  const Eigen::PartialPivLU<CMatrix> lu_a(va.transpose());
  // X = Vb Y Va^{-1}  <=>  Va^T X^T = (Vb Y)^T
  const CMatrix x = lu_a.solve((vb * y).transpose()).transpose();
  return x.real();
}

SymOperator ot_map_differential(const SpdMatrix& s, const SpdMatrix& q) {
  require_same_dim(s.dim(), q.dim(), "ot_map_differential");
  return SymOperator(s.dim(), TransportBase(s).frame_to(q).differential_matrix());
}

}  // namespace bwreg
