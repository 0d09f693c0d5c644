#include "reference.hpp"

#include <cmath>
#include <numbers>

#include "pfspec/quadrature.hpp"

namespace pfspec::testref {

Complex tensor_kernel(Weight w, double p_abs, Complex z,
                      const ModelParams& params, int n_rho, int n_t) {
  const GaussRule& gr = gauss_legendre(n_rho);
  const GaussRule& gt = gauss_legendre(n_t);
  Complex acc{};
  for (int a = 0; a < n_rho; ++a) {
    const double rho = 0.5 * params.R * (gr.nodes[a] + 1.0);
    const double wr = 0.5 * params.R * gr.weights[a];
    const double rp = std::pow(rho, 1.0 + 2.0 * params.sigma);
    for (int b = 0; b < n_t; ++b) {
      const double t = gt.nodes[b];
      double wt = gt.weights[b];
      if (w == Weight::t_sq) wt *= t * t;
      if (w == Weight::one_minus_tsq) wt *= 1.0 - t * t;
      acc += wr * wt * rp / denom(p_abs, rho, t, z, params);
    }
  }
  return acc;
}

Complex d1_tensor(double p_abs, Complex z, const ModelParams& params,
                  int n_rho, int n_t) {
  return std::numbers::pi * params.e * params.e *
         tensor_kernel(Weight::one, p_abs, z, params, n_rho, n_t);
}

Complex d2_tensor(double p_abs, Complex z, const ModelParams& params,
                  int n_rho, int n_t) {
  return std::numbers::pi * params.e * params.e *
         tensor_kernel(Weight::t_sq, p_abs, z, params, n_rho, n_t);
}

Complex d12_tensor(double p_abs, Complex z, const ModelParams& params,
                   int n_rho, int n_t) {
  return tensor_kernel(Weight::one_minus_tsq, p_abs, z, params, n_rho, n_t);
}

Mat3c c_matrix_bruteforce(const Momentum& p, Complex z,
                          const ModelParams& params, const QuadratureGrid& g) {
  Mat3c C{};
  const double half_e2 = 0.5 * params.e * params.e;
  for (int m = 0; m < g.size(); ++m) {
    const Vec3& k = g.nodes[m];
    const double gk = coupling_g(k, params);
    // Same denominator as the D kernels: (p-k)^2/2 + |k| + gamma0 - z.
    const Complex L =
        0.5 * (p - k).norm_sq() + k.norm() + params.gamma0 - z;
    const double k2 = k.norm_sq();
    const Complex c = half_e2 * g.weights[m] * gk * gk / (L * k2);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) C[i][j] += c * k[i] * k[j];
  }
  return C;
}

double norm_g_bruteforce(const ModelParams& params, const QuadratureGrid& g) {
  double acc = 0.0;
  for (int m = 0; m < g.size(); ++m) {
    const Vec3& k = g.nodes[m];
    const double gk = coupling_g(k, params);
    const auto [e1, e2] = polarization(k);
    acc += g.weights[m] * gk * gk * (dot(e1, e1) + dot(e2, e2));
  }
  return acc;
}

Complex det3(const Mat3c& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

}  // namespace pfspec::testref
