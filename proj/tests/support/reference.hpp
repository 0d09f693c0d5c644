#pragma once

#include <random>

#include "pfspec/grid.hpp"
#include "pfspec/kernels.hpp"

// Independent reference routes used only by tests. These deliberately share
// no code with the semi-analytic kernel path: the t integral is done
// numerically on a tensor-product rule, and the C matrix is integrated as
// a raw 3D sum over a ball grid.

namespace pfspec::testref {

// Raw 2D tensor-product Gauss-Legendre evaluation of
// int_0^R int_{-1}^1 w(t) rho^(1+2sigma) / (p^2/2 - |p| rho t + rho^2/2 +
// rho + gamma0 - z) dt drho, with w(t) = 1, t^2 or 1 - t^2.
enum class Weight { one, t_sq, one_minus_tsq };
Complex tensor_kernel(Weight w, double p_abs, Complex z,
                      const ModelParams& params, int n_rho, int n_t);

// D1, D2 (with the pi e^2 prefactor) and D12 through the tensor rule.
Complex d1_tensor(double p_abs, Complex z, const ModelParams& params,
                  int n_rho = 200, int n_t = 200);
Complex d2_tensor(double p_abs, Complex z, const ModelParams& params,
                  int n_rho = 200, int n_t = 200);
Complex d12_tensor(double p_abs, Complex z, const ModelParams& params,
                   int n_rho = 200, int n_t = 200);

// (e^2/2) int g^2(k) k_i k_j / (L(p,k) - z) / |k|^2 dk as a plain sum over
// a ball quadrature grid.
Mat3c c_matrix_bruteforce(const Momentum& p, Complex z,
                          const ModelParams& params, const QuadratureGrid& g);

// sum_lambda int |e(k,lambda)|^2 g^2(k) dk over a ball grid.
double norm_g_bruteforce(const ModelParams& params, const QuadratureGrid& g);

// Direct 3x3 determinant.
Complex det3(const Mat3c& m);

inline std::mt19937 rng(unsigned seed) { return std::mt19937(seed); }

}  // namespace pfspec::testref
