#pragma once

#include "pfspec/model.hpp"
#include "pfspec/quadrature.hpp"
#include "pfspec/vec3.hpp"

// Scalar integrals D1(p,z), D2(p,z), D12(p,z) and the 3x3 matrix C.
//
// All three share the integrand rho^(1+2sigma) W(t) / (A - B t) over
// (rho, t) in [0,R] x [-1,1], with A = p^2/2 + rho^2/2 + rho + gamma0 - z
// and B = |p| rho. The t integral is rational and is done in closed form,
// leaving a 1D rho integral evaluated adaptively. D12 uses its own
// (1 - t^2) weight so it stays exact at e = 0.

namespace pfspec {

struct KernelValue {
  Complex value{0.0, 0.0};
  double est_error = 0.0;  // absolute quadrature error estimate
  bool converged = true;   // est_error <= abs_tol reached

  double real() const { return value.real(); }
};

// Integrand denominator A - B t. Total in complex arithmetic.
Complex denom(double p_abs, double rho, double t, Complex z,
              const ModelParams& params);

// D1 = pi e^2 * integral with weight 1.
// Real z must lie strictly below z0(|p|); use d1_at_edge for z = z0.
KernelValue d1(double p_abs, Complex z, const ModelParams& params,
               const QuadratureSpec& quad);

// D2 = pi e^2 * integral with weight t^2.
KernelValue d2(double p_abs, Complex z, const ModelParams& params,
               const QuadratureSpec& quad);

// D12 = integral with weight (1 - t^2), no pi e^2 prefactor.
KernelValue d12(double p_abs, Complex z, const ModelParams& params,
                const QuadratureSpec& quad);

// Band-edge evaluation at z = z0(|p|) exactly. The denominator at the
// edge is computed from cancellation-free forms and the panel seeding
// clusters near the singular rho. D12 is finite on the edge for all |p|;
// D1/D2 carry an integrable log singularity for |p| > 1 and converge
// more slowly there.
KernelValue d1_at_edge(double p_abs, const ModelParams& params,
                       const QuadratureSpec& quad);
KernelValue d2_at_edge(double p_abs, const ModelParams& params,
                       const QuadratureSpec& quad);
KernelValue d12_at_edge(double p_abs, const ModelParams& params,
                        const QuadratureSpec& quad);

// C matrix (closed form):
//   c_ii = [D1 (p^2 - p_i^2) + D2 (3 p_i^2 - p^2)] / (2 p^2)
//   c_ij = -p_i p_j (D1 - 3 D2) / (2 p^2),  i != j
// At p = 0 returns (D1/3) * identity by continuity.
Mat3c c_matrix(const Momentum& p, Complex z, const ModelParams& params,
               const QuadratureSpec& quad);

}  // namespace pfspec
