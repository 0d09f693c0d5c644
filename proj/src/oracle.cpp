#include "pfspec/oracle.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "pfspec/state_io.hpp"

namespace pfspec {

std::shared_ptr<const QuadratureGrid> build_grid(int n_rho, int n_t, int n_phi,
                                                 const ModelParams& params) {
  if (n_rho < 2 || n_t < 2 || n_phi < 2)
    throw std::invalid_argument("build_grid: all counts must be >= 2");
  auto g = std::make_shared<QuadratureGrid>();
  g->n_rho = n_rho;
  g->n_t = n_t;
  g->n_phi = n_phi;
  g->R = params.R;
  g->nodes.reserve(static_cast<std::size_t>(n_rho) * n_t * n_phi);
  g->weights.reserve(g->nodes.capacity());

  const GaussRule& gr = gauss_legendre(n_rho);
  const GaussRule& gt = gauss_legendre(n_t);
  const double two_pi = 2.0 * std::numbers::pi;
  const double w_phi = two_pi / n_phi;
  for (int a = 0; a < n_rho; ++a) {
    const double rho = 0.5 * params.R * (gr.nodes[a] + 1.0);
    const double w_rho = 0.5 * params.R * gr.weights[a];
    for (int b = 0; b < n_t; ++b) {
      const double t = gt.nodes[b];
      const double st = std::sqrt(1.0 - t * t);
      for (int c = 0; c < n_phi; ++c) {
        const double phi = two_pi * (c + 0.5) / n_phi;
        g->nodes.push_back(Vec3{rho * st * std::cos(phi),
                                rho * st * std::sin(phi), rho * t});
        g->weights.push_back(w_rho * gt.weights[b] * w_phi * rho * rho);
      }
    }
  }
  return g;
}

bool same_grid(const QuadratureGrid& a, const QuadratureGrid& b) {
  if (&a == &b) return true;
  if (a.nodes.size() != b.nodes.size()) return false;
  for (std::size_t i = 0; i < a.nodes.size(); ++i) {
    const Vec3 d = a.nodes[i] - b.nodes[i];
    if (d.x != 0.0 || d.y != 0.0 || d.z != 0.0) return false;
    if (a.weights[i] != b.weights[i]) return false;
  }
  return true;
}

namespace {

struct NodeData {
  std::vector<Vec3> G;      // 2M vectors, lambda-major
  std::vector<double> sqw;  // sqrt(w_m)
  std::vector<double> ltil; // tilde_l(p, k_m)
};

NodeData precompute(const Momentum& p, const QuadratureGrid& g,
                    const ModelParams& prm) {
  const int M = g.size();
  NodeData d;
  d.G.resize(2 * static_cast<std::size_t>(M));
  d.sqw.resize(M);
  d.ltil.resize(M);
  for (int m = 0; m < M; ++m) {
    const Vec3& k = g.nodes[m];
    d.G[m] = coupling_G(k, 1, prm);
    d.G[M + m] = coupling_G(k, 2, prm);
    d.sqw[m] = std::sqrt(g.weights[m]);
    d.ltil[m] = tilde_l(p, k, prm);
  }
  return d;
}

template <bool Parallel>
DiscretizedHamiltonian assemble(const Momentum& p,
                                std::shared_ptr<const QuadratureGrid> grid,
                                const ModelParams& params) {
  if (!grid) throw std::invalid_argument("build_discrete_h: null grid");
  const QuadratureGrid& g = *grid;
  const int M = g.size();
  const int dim = 1 + 2 * M;
  const NodeData nd = precompute(p, g, params);
  const double half_e2 = 0.5 * params.e * params.e;
  const double coup_pre = -params.e / std::numbers::sqrt2;

  DiscretizedHamiltonian hd;
  hd.grid = std::move(grid);
  hd.p = p;
  hd.params = params;
  hd.matrix.resize(dim, dim);
  Eigen::MatrixXd& H = hd.matrix;

  H(0, 0) = tilde_t(p, params);
  // Upper triangle by column, mirrored; every cell has a unique writer.
#pragma omp parallel for schedule(dynamic, 64) if (Parallel)
  for (int j = 1; j < dim; ++j) {
    const int jn = (j - 1) % M;  // node index of column j
    const double cj = coup_pre * dot(p, nd.G[j - 1]) * nd.sqw[jn];
    H(0, j) = cj;
    H(j, 0) = cj;
    for (int i = 1; i <= j; ++i) {
      const int in = (i - 1) % M;
      double v = half_e2 * dot(nd.G[i - 1], nd.G[j - 1]) * nd.sqw[in] *
                 nd.sqw[jn];
      if (i == j) v += nd.ltil[in];
      H(i, j) = v;
      H(j, i) = v;
    }
  }
  return hd;
}

}  // namespace

DiscretizedHamiltonian build_discrete_h(
    const Momentum& p, std::shared_ptr<const QuadratureGrid> grid,
    const ModelParams& params) {
  return assemble<true>(p, std::move(grid), params);
}

DiscretizedHamiltonian build_discrete_h_serial(
    const Momentum& p, std::shared_ptr<const QuadratureGrid> grid,
    const ModelParams& params) {
  return assemble<false>(p, std::move(grid), params);
}

void symv(const Eigen::MatrixXd& H, const Eigen::VectorXd& x,
          Eigen::VectorXd& y) {
  const int n = static_cast<int>(H.rows());
  y.resize(n);
  // Symmetry lets each output component read one contiguous column.
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) y[i] = H.col(i).dot(x);
}

void symv_serial(const Eigen::MatrixXd& H, const Eigen::VectorXd& x,
                 Eigen::VectorXd& y) {
  const int n = static_cast<int>(H.rows());
  y.resize(n);
  for (int i = 0; i < n; ++i) y[i] = H.col(i).dot(x);
}

double ground_eigenvalue_dense(const DiscretizedHamiltonian& hd) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hd.matrix,
                                                    Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

LanczosResult ground_eigenpair_lanczos(const DiscretizedHamiltonian& hd,
                                       double tol, int max_iter) {
  const Eigen::MatrixXd& H = hd.matrix;
  const int n = static_cast<int>(H.rows());
  const int kmax = std::min(max_iter, n);

  std::mt19937 rng(20240917u);
  std::normal_distribution<double> gauss;
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = gauss(rng);
  v.normalize();

  Eigen::MatrixXd V(n, kmax);
  Eigen::VectorXd alpha(kmax), beta(kmax), w(n);
  LanczosResult out;

  for (int k = 0; k < kmax; ++k) {
    V.col(k) = v;
    symv(H, v, w);
    alpha[k] = v.dot(w);
    w -= alpha[k] * v;
    if (k > 0) w -= beta[k - 1] * V.col(k - 1);
    // Full reorthogonalization, two passes.
    for (int pass = 0; pass < 2; ++pass)
      w.noalias() -=
          V.leftCols(k + 1) * (V.leftCols(k + 1).transpose() * w);
    const double b = w.norm();

    const bool check = k < 150 || k % 5 == 4 || k == kmax - 1 || b < 1e-14;
    if (check) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
      es.computeFromTridiagonal(alpha.head(k + 1), beta.head(k),
                                Eigen::ComputeEigenvectors);
      const double theta = es.eigenvalues()(0);
      const double res = b * std::abs(es.eigenvectors()(k, 0));
      if (res <= tol * std::max(1.0, std::abs(theta)) || b < 1e-14) {
        out.value = theta;
        out.vector = V.leftCols(k + 1) * es.eigenvectors().col(0);
        out.iterations = k + 1;
        out.residual = res;
        return out;
      }
    }
    beta[k] = b;
    v = w / b;
  }
  std::ostringstream msg;
  msg << "ground_eigenpair_lanczos: no convergence in " << kmax
      << " iterations (dim " << n << ")";
  throw std::runtime_error(msg.str());
}

double ground_eigenvalue(const DiscretizedHamiltonian& hd) {
  if (hd.dim() <= 1500) return ground_eigenvalue_dense(hd);
  return ground_eigenpair_lanczos(hd).value;
}

StateVector apply_h_minus_z(const DiscretizedHamiltonian& hd, Complex z,
                            const StateVector& f) {
  if (!f.grid || !same_grid(*f.grid, *hd.grid))
    throw std::invalid_argument("apply_h_minus_z: state grid mismatch");
  const int M = hd.grid->size();
  const int dim = hd.dim();
  Eigen::VectorXd xr(dim), xi(dim);
  xr[0] = f.f0.real();
  xi[0] = f.f0.imag();
  for (int l = 1; l <= 2; ++l)
    for (int m = 0; m < M; ++m) {
      const double sw = std::sqrt(hd.grid->weights[m]);
      const Complex c = f.at(m, l) * sw;
      xr[1 + (l - 1) * M + m] = c.real();
      xi[1 + (l - 1) * M + m] = c.imag();
    }
  Eigen::VectorXd yr(dim), yi(dim);
  symv(hd.matrix, xr, yr);
  symv(hd.matrix, xi, yi);

  StateVector out(f.grid);
  const auto comp = [&](int idx) {
    return Complex{yr[idx], yi[idx]} - z * Complex{xr[idx], xi[idx]};
  };
  out.f0 = comp(0);
  for (int l = 1; l <= 2; ++l)
    for (int m = 0; m < M; ++m) {
      const double sw = std::sqrt(hd.grid->weights[m]);
      out.at(m, l) = comp(1 + (l - 1) * M + m) / sw;
    }
  return out;
}

void dump_matrix_triplets(const DiscretizedHamiltonian& hd, std::ostream& os) {
  os << "i,j,value\n";
  const int n = hd.dim();
  for (int j = 0; j < n; ++j)
    for (int i = 0; i <= j; ++i)
      os << i << ',' << j << ',' << format_double(hd.matrix(i, j)) << '\n';
}

double residual(const DiscretizedHamiltonian& hd, Complex z,
                const StateVector& f, const StateVector& u) {
  const StateVector r = apply_h_minus_z(hd, z, f) - u;
  const double num = r.norm();
  const double den = u.norm();
  if (den == 0.0) return num == 0.0 ? 0.0 : num;
  return num / den;
}

}  // namespace pfspec
