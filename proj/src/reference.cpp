#include "bwreg/reference.hpp"

namespace bwreg::reference {

namespace {

struct Halves {
  Index n1 = 0;
  Index n2 = 0;
  Index p = 0;
  Index p1 = 0;
  Vector mean;
  Matrix cov;
  std::vector<Vector> x1;
  std::vector<SpdMatrix> q1;
};

Halves halves(const Dataset& data) {
  data.validate();
  Halves h;
  const Index n = data.n();
  h.n1 = (n + 1) / 2;
  h.n2 = n - h.n1;
  h.p = data.p();
  h.p1 = data.p1;
  h.mean = Vector::Zero(h.p);
  for (Index i = 0; i < h.n1; ++i) {
    h.x1.push_back(data.covariates.row(i).transpose());
    h.q1.push_back(data.responses[static_cast<std::size_t>(i)]);
    h.mean += h.x1.back();
  }
  h.mean /= static_cast<double>(h.n1);
  h.cov = Matrix::Zero(h.p, h.p);
  for (const auto& x : h.x1) h.cov += (x - h.mean) * (x - h.mean).transpose();
  h.cov /= static_cast<double>(h.n1);
  return h;
}

double ref_weight(const Halves& h, const Vector& x, const Vector& xi) {
  return 1.0 + (x - h.mean).dot(h.cov.inverse() * (xi - h.mean));
}

Vector ref_impute(const Halves& h, const Vector& x) {
  const Index q = h.p - h.p1;
  const Matrix s11 = h.cov.topLeftCorner(h.p1, h.p1);
  const Matrix s21 = h.cov.bottomLeftCorner(q, h.p1);
  Vector out = x;
  out.tail(q) = h.mean.tail(q) + s21 * s11.inverse() * (x.head(h.p1) - h.mean.head(h.p1));
  return out;
}

std::vector<double> ref_weights(const Halves& h, const Vector& x) {
  std::vector<double> w;
  for (const auto& xi : h.x1) w.push_back(ref_weight(h, x, xi));
  return w;
}

SpdMatrix ref_fit(const Halves& h, const Vector& x, const SolverOptions& opts) {
  const std::vector<double> w = ref_weights(h, x);
  return weighted_frechet_mean(h.q1, w, opts).mean;
}

Matrix ref_hessian(const Halves& h, const SpdMatrix& s, const std::vector<double>& w) {
  const Index m = sym_coord_dim(s.dim());
  Matrix out = Matrix::Zero(m, m);
  for (Index i = 0; i < h.n1; ++i) {
    out -= w[static_cast<std::size_t>(i)] * differential_matrix(s, h.q1[static_cast<std::size_t>(i)]);
  }
  return out / static_cast<double>(h.n1);
}

Vector embed(const Halves& h, const Vector& x, CovariateEmbedding e) {
  if (e == CovariateEmbedding::Centered) return x - h.mean;
  Vector v(h.p + 1);
  v(0) = 1.0;
  v.tail(h.p) = x - h.mean;
  return v;
}

Matrix coords_of(const Matrix& m) { return sym_basis_coords(SymMatrix(m)); }

}  // namespace

Matrix transport_map(const SpdMatrix& s, const SpdMatrix& q) {
  const Matrix r = sym_sqrt(s).matrix();
  const Matrix ri = sym_inv_sqrt(s).matrix();
  const Matrix mid = sym_sqrt(SpdMatrix(r * q.matrix() * r)).matrix();
  const Matrix t = ri * mid * ri;
  return 0.5 * (t + t.transpose());
}

Matrix differential_matrix(const SpdMatrix& s, const SpdMatrix& q) {
  const Index d = s.dim();
  const Index m = sym_coord_dim(d);
  const Matrix t = transport_map(s, q);
  const Matrix st = s.matrix() * t;
  const Matrix ts = t * s.matrix();
  Matrix out(m, m);
  for (Index c = 0; c < m; ++c) {
    Vector e = Vector::Zero(m);
    e(c) = 1.0;
    const Matrix hm = sym_from_coords(d, e).matrix();
    const Matrix x = solve_sylvester(st, ts, -t * hm * t);
    out.col(c) = coords_of(0.5 * (x + x.transpose()));
  }
  return out;
}

double statistic(const Dataset& data, const SolverOptions& opts) {
  const Halves h = halves(data);
  double total = 0.0;
  for (Index k = h.n1; k < data.n(); ++k) {
    const Vector x = data.covariates.row(k).transpose();
    const Vector xhat = ref_impute(h, x);
    const SpdMatrix at_x = ref_fit(h, x, opts);
    const SpdMatrix at_xhat = ref_fit(h, xhat, opts);
    const Matrix hess = ref_hessian(h, at_xhat, ref_weights(h, xhat));
    const Vector gap = coords_of(at_x.matrix() - at_xhat.matrix());
    total += (hess * gap).squaredNorm();
  }
  return total;
}

Matrix a_hat(const Dataset& data, Index k, const SolverOptions& opts) {
  const Halves h = halves(data);
  const Vector xk = h.x1.at(static_cast<std::size_t>(k));
  const std::vector<double> w = ref_weights(h, xk);
  const std::vector<double> what = ref_weights(h, ref_impute(h, xk));
  const SpdMatrix s = ref_fit(h, xk, opts);
  const Index m = sym_coord_dim(s.dim());
  Matrix gap = Matrix::Zero(m, m);
  for (Index i = 0; i < h.n1; ++i) {
    gap += (w[static_cast<std::size_t>(i)] - what[static_cast<std::size_t>(i)]) *
           differential_matrix(s, h.q1[static_cast<std::size_t>(i)]);
  }
  gap /= static_cast<double>(h.n1);
  return gap * ref_hessian(h, s, w).inverse();
}

SymMatrix tau(const Dataset& data, const Vector& x, const SpdMatrix& q, Index k,
              CovariateEmbedding embedding, const SolverOptions& opts) {
  const Halves h = halves(data);
  const Index d = q.dim();
  const Vector xk = h.x1.at(static_cast<std::size_t>(k));
  const SpdMatrix s = ref_fit(h, xk, opts);
  const Matrix eye = Matrix::Identity(d, d);

  const Index dim = embedding == CovariateEmbedding::Augmented ? h.p + 1 : h.p;
  const Index dim_y = embedding == CovariateEmbedding::Augmented ? h.p1 + 1 : h.p1;
  Matrix xi = Matrix::Zero(dim, dim);
  for (const auto& xi_row : h.x1) {
    const Vector v = embed(h, xi_row, embedding);
    xi += v * v.transpose();
  }
  xi /= static_cast<double>(h.n1);
  const Matrix xi_inv = xi.inverse();
  const Matrix xi_y = xi.topLeftCorner(dim_y, dim_y);
  const Matrix xi_y_inv = xi_y.inverse();

  // M_j = (1/n1) sum_i v(X_i)_j (T_i - I)
  std::vector<Matrix> mj(static_cast<std::size_t>(dim), Matrix::Zero(d, d));
  for (Index i = 0; i < h.n1; ++i) {
    const Vector v = embed(h, h.x1[static_cast<std::size_t>(i)], embedding);
    const Matrix ti = transport_map(s, h.q1[static_cast<std::size_t>(i)]) - eye;
    for (Index j = 0; j < dim; ++j) mj[static_cast<std::size_t>(j)] += v(j) * ti / static_cast<double>(h.n1);
  }

  const Vector vx = embed(h, x, embedding);
  const Vector vk = embed(h, xk, embedding);
  const Matrix t = transport_map(s, q) - eye;

  const Vector a = xi_inv * (vx * vx.transpose() - xi) * xi_inv * vk;
  Matrix tau0 = vk.dot(xi_inv * vx) * t;
  for (Index j = 0; j < dim; ++j) tau0 -= a(j) * mj[static_cast<std::size_t>(j)];

  const Vector vxy = vx.head(dim_y);
  const Vector vky = vk.head(dim_y);
  const Vector b = xi_y_inv * (vxy * vxy.transpose() - xi_y) * xi_y_inv * vky;
  Matrix tau1 = vky.dot(xi_y_inv * vxy) * t;
  for (Index j = 0; j < dim_y; ++j) tau1 -= b(j) * mj[static_cast<std::size_t>(j)];

  const Vector c0 = coords_of(tau0);
  const Vector total = c0 - coords_of(tau1) + a_hat(data, k, opts) * c0;
  return sym_from_coords(d, total);
}

Matrix kernel(const Dataset& data, CovariateEmbedding embedding, const SolverOptions& opts) {
  const Halves h = halves(data);
  const Index n1 = h.n1;
  const Index n2 = h.n2;
  Matrix k = Matrix::Zero(n2, n2);
  for (Index node = 0; node < n1; ++node) {
    std::vector<Matrix> taus;
    for (Index i = 0; i < n2; ++i) {
      const Vector x = data.covariates.row(n1 + i).transpose();
      taus.push_back(tau(data, x, data.responses[static_cast<std::size_t>(n1 + i)], node, embedding, opts).matrix());
    }
    for (Index i = 0; i < n2; ++i)
      for (Index j = 0; j < n2; ++j)
        k(i, j) += (taus[static_cast<std::size_t>(i)].array() * taus[static_cast<std::size_t>(j)].array()).sum();
  }
  return k / (static_cast<double>(n1) * static_cast<double>(n2));
}

}  // namespace bwreg::reference
