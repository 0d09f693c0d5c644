#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace pfspec {

// Controls for the semi-analytic kernel integrals: the closed-form t
// integration leaves a 1D rho integral evaluated adaptively.
//   n_rho      : cap on the number of adaptive panels
//   n_t        : node count for tensor-product reference rules
//   abs_tol    : absolute error target for the adaptive integral
//   max_refine : cap on refinement steps
struct QuadratureSpec {
  int n_rho = 256;
  int n_t = 64;
  double abs_tol = 1e-10;
  int max_refine = 2048;

  void validate() const;
};

// Nodes/weights of the n-point Gauss-Legendre rule on [-1, 1].
// Computed once per order and cached; thread-safe.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre(int n);

struct AdaptiveResult {
  std::complex<double> value{0.0, 0.0};
  double est_error = 0.0;
  bool converged = false;
  int panels = 0;
};

// Adaptive Gauss-Legendre integration of f over [a, b]. Panels are split
// at the largest error estimate (|GL30 - GL15| per panel) until the total
// estimate drops below abs_tol or the panel/refinement caps are hit.
// initial_breakpoints seeds the panel set (useful to cluster panels near
// an integrable singularity); endpoints of panels are never evaluated.
AdaptiveResult integrate_adaptive(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    double abs_tol, int panel_cap, int max_refine,
    std::span<const double> initial_breakpoints = {});

}  // namespace pfspec
