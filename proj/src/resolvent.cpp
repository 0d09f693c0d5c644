#include "pfspec/resolvent.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pfspec {

namespace {

void require_same_grid(const StateVector& a, const StateVector& b) {
  if (!a.grid || !b.grid || !same_grid(*a.grid, *b.grid))
    throw std::invalid_argument("StateVector: grids do not match");
}

}  // namespace

double StateVector::norm() const {
  double acc = std::norm(f0);
  const int M = n_nodes();
  for (int l = 1; l <= 2; ++l)
    for (int m = 0; m < M; ++m)
      acc += grid->weights[m] * std::norm(at(m, l));
  return std::sqrt(acc);
}

StateVector StateVector::operator+(const StateVector& o) const {
  require_same_grid(*this, o);
  StateVector r(grid);
  r.f0 = f0 + o.f0;
  for (std::size_t i = 0; i < f1.size(); ++i) r.f1[i] = f1[i] + o.f1[i];
  return r;
}

StateVector StateVector::operator-(const StateVector& o) const {
  require_same_grid(*this, o);
  StateVector r(grid);
  r.f0 = f0 - o.f0;
  for (std::size_t i = 0; i < f1.size(); ++i) r.f1[i] = f1[i] - o.f1[i];
  return r;
}

StateVector StateVector::operator*(Complex s) const {
  StateVector r(grid);
  r.f0 = f0 * s;
  for (std::size_t i = 0; i < f1.size(); ++i) r.f1[i] = f1[i] * s;
  return r;
}

double b_lambda(const Momentum& p, const Vec3& k, int lambda,
                const ModelParams& params) {
  const Vec3 G = coupling_G(k, lambda, params);
  return -(params.e / std::numbers::sqrt2) * dot(p, G);
}

Vec3c n_vector(const Momentum& p, const Vec3& k, int lambda, Complex T,
               const ModelParams& params) {
  const Vec3 G = coupling_G(k, lambda, params);
  const double bl = -(params.e / std::numbers::sqrt2) * dot(p, G);
  return Complex{bl} * Vec3c(p) +
         (T * params.e / std::numbers::sqrt2) * Vec3c(G);
}

Vec3c s_vector(const Momentum& p, Complex z, const StateVector& u,
               const ModelParams& params) {
  if (!u.grid) throw std::invalid_argument("s_vector: state has no grid");
  const Complex T = tilde_t(p, params) - z;
  if (T == Complex{})
    throw std::domain_error("s_vector: pole at z = tilde_t(p)");
  const auto& g = *u.grid;
  const double pre = params.e / std::numbers::sqrt2;
  Vec3c S;
  for (int m = 0; m < g.size(); ++m) {
    const Vec3& k = g.nodes[m];
    const Complex L = tilde_l(p, k, params) - z;
    for (int l = 1; l <= 2; ++l) {
      const Vec3 G = coupling_G(k, l, params);
      const double bl = -pre * dot(p, G);
      const Complex term = u.at(m, l) / L - bl * u.f0 / (T * L);
      S = S + (pre * g.weights[m] * term) * Vec3c(G);
    }
  }
  return S;
}

std::pair<Complex, Complex> u_coeffs(const Momentum& p, Complex z,
                                     const ModelParams& params,
                                     const QuadratureSpec& quad) {
  const Complex T = tilde_t(p, params) - z;
  if (T == Complex{})
    throw std::domain_error("u_coeffs: pole at z = tilde_t(p)");
  const double p_abs = p.norm();
  const Complex D1 = d1(p_abs, z, params, quad).value;
  const Complex D2 = d2(p_abs, z, params, quad).value;
  const Complex a = (2.0 + D1 + D2) / 2.0;
  const double p2 = p.norm_sq();
  if (p2 == 0.0) return {a, Complex{}};
  return {a, (D1 - 3.0 * D2) / (2.0 * p2) - (D1 - D2) / T};
}

std::pair<Complex, Complex> u_coeffs_on_grid(const Momentum& p, Complex z,
                                             const QuadratureGrid& grid,
                                             const ModelParams& params) {
  const Complex T = tilde_t(p, params) - z;
  if (T == Complex{})
    throw std::domain_error("u_coeffs_on_grid: pole at z = tilde_t(p)");
  const double p2 = p.norm_sq();
  const double half_e2 = 0.5 * params.e * params.e;
  Complex D1g{}, D2g{};
  for (int m = 0; m < grid.size(); ++m) {
    const Vec3& k = grid.nodes[m];
    const double g = coupling_g(k, params);
    const Complex L = tilde_l(p, k, params) - z;
    const Complex c = half_e2 * grid.weights[m] * g * g / L;
    D1g += c;
    if (p2 > 0.0) {
      const double pk = dot(p, k) / (p.norm() * k.norm());
      D2g += c * (pk * pk);
    }
  }
  if (p2 == 0.0) D2g = D1g / 3.0;
  const Complex a = (2.0 + D1g + D2g) / 2.0;
  if (p2 == 0.0) return {a, Complex{}};
  return {a, (D1g - 3.0 * D2g) / (2.0 * p2) - (D1g - D2g) / T};
}

Vec3c solve_q(Complex a, Complex b, const Momentum& p, const Vec3c& S) {
  const double p2 = p.norm_sq();
  const Complex corner = a + b * p2;
  if (a == Complex{} || corner == Complex{})
    throw std::runtime_error("solve_q: U singular (z at the point spectrum)");
  const Complex sp = dot(p, S);
  return (1.0 / a) * (S - (b * sp / corner) * Vec3c(p));
}

ReducedSystem reduce(const Momentum& p, Complex z, const StateVector& u,
                     const ModelParams& params) {
  ReducedSystem sys;
  sys.T = tilde_t(p, params) - z;
  const auto [a, b] = u_coeffs_on_grid(p, z, *u.grid, params);
  sys.a = a;
  sys.b = b;
  sys.S = s_vector(p, z, u, params);
  sys.Q = solve_q(a, b, p, sys.S);
  return sys;
}

StateVector apply_resolvent(const Momentum& p, Complex z, const StateVector& u,
                            const ModelParams& params,
                            const ResolventOptions& opts,
                            ResolventStats* stats) {
  if (!u.grid)
    throw std::invalid_argument("apply_resolvent: state has no grid");
  const double edge = z0(p.norm(), params);

  double dist;
  if (z.imag() == 0.0) {
    const double x = z.real();
    if (x >= edge - opts.real_z_margin)
      throw std::domain_error(
          "apply_resolvent: real z within margin of the essential spectrum");
    std::optional<double> zs = opts.z_star;
    if (!zs) zs = solve_ground(p, params, QuadratureSpec{}, 1e-12);
    dist = edge - x;
    if (zs) {
      if (std::abs(x - *zs) < opts.real_z_margin)
        throw std::domain_error(
            "apply_resolvent: real z within margin of the eigenvalue");
      dist = std::min(dist, std::abs(x - *zs));
    }
  } else {
    dist = (z.real() >= edge) ? std::abs(z.imag())
                              : std::hypot(edge - z.real(), z.imag());
    if (opts.z_star)
      dist = std::min(dist, std::abs(z - Complex{*opts.z_star, 0.0}));
    else
      dist = std::min(dist, std::abs(z.imag()));
  }

  const ReducedSystem sys = reduce(p, z, u, params);
  const Complex T = sys.T;

  StateVector f(u.grid);
  f.f0 = (u.f0 + dot(p, sys.Q)) / T;
  const auto& g = *u.grid;
  const int M = g.size();
#pragma omp parallel for schedule(static)
  for (int m = 0; m < M; ++m) {
    const Vec3& k = g.nodes[m];
    const Complex L = tilde_l(p, k, params) - z;
    for (int l = 1; l <= 2; ++l) {
      const double bl = b_lambda(p, k, l, params);
      const Vec3c N = n_vector(p, k, l, T, params);
      f.at(m, l) = (T * u.at(m, l) - bl * u.f0 - dot(N, sys.Q)) / (T * L);
    }
  }

  if (stats) {
    stats->dist_to_spectrum = dist;
    stats->accuracy_warning = dist < 1e-7;
  }
  return f;
}

StateVector discretize_eigenfunction(const Eigenfunction& psi,
                                     std::shared_ptr<const QuadratureGrid> grid,
                                     bool normalize) {
  StateVector v(std::move(grid));
  v.f0 = psi.zero_photon;
  for (int m = 0; m < v.n_nodes(); ++m)
    for (int l = 1; l <= 2; ++l)
      v.at(m, l) = psi.one_photon(v.grid->nodes[m], l);
  if (normalize) {
    const double n = v.norm();
    if (n == 0.0) {
      if (psi.p.norm_sq() == 0.0) {
        v.f0 = 1.0;  // vacuum direction, the p -> 0 limit
        return v;
      }
      throw std::domain_error("discretize_eigenfunction: zero vector");
    }
    return v * Complex{1.0 / n};
  }
  return v;
}

}  // namespace pfspec
