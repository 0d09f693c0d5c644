#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pfspec/kernels.hpp"

// Secular function F(p,z), determinant K(p,z) = det U, the ground-state
// solver, dispersion sweeps, the eigenfunction, effective mass and the
// bound audits. All bound checks are soft: they are reported as flags,
// never enforced.

namespace pfspec {

struct BoundFlags {
  bool upper_bound = true;    // 0 < z* <= 7/2 + 4 pi e^2 R^(1+2s)/(1+2s) + gamma0
  bool edge_kernel = true;         // D12(p, z0(|p|)) <= d12_edge_bound(|p|)
  bool positivity = true;  // z* > 0
  bool all() const { return upper_bound && edge_kernel && positivity; }
};

struct SpectrumReport {
  double p_abs = 0.0;
  double ess_edge = 0.0;            // z0(|p|)
  std::optional<double> eigenvalue; // z*(p), absent when no root below band
  double f_at_edge = 0.0;           // sign diagnostic F(p, z0)
  BoundFlags bounds_ok;
  std::string note;                 // solver diagnostics; empty when clean
};

// F(p,z) = p^2/2 - z + gamma0 - pi e^2 (p^2/2 + z - gamma0) D12(p,z),
// for real z <= z0(|p|). z = z0 exactly routes through the edge path.
double secular_f(double p_abs, double z, const ModelParams& params,
                 const QuadratureSpec& quad);

// K(p,z) = det U = (D1 + D2 + 2)^2 / (4T) * F(p,z), T = tilde_t(p) - z.
double k_det(double p_abs, double z, const ModelParams& params,
             const QuadratureSpec& quad);

// Ground eigenvalue below the band. Returns the unique root of F(p, .) in
// (max(0, gamma0 - p^2/2 - 1), z0(|p|)] when F(p, z0) < 0; returns z0
// itself when F(p, z0) = 0 (p = 0, and the decoupled e = 0 case); absent
// when F(p, z0) > 0. Bracketed bisection to width <= tol, then secant
// polish of the residual.
std::optional<double> solve_ground(const Momentum& p, const ModelParams& params,
                                   const QuadratureSpec& quad, double tol);

// Per-point reports over a sorted |p| grid along a fixed unit direction.
// Point failures are recorded in the row note, never abort the sweep.
// The parallel version distributes points over OpenMP threads; output
// order is the input order either way.
std::vector<SpectrumReport> dispersion_curve(const std::vector<double>& p_grid,
                                             const Vec3& direction,
                                             const ModelParams& params,
                                             const QuadratureSpec& quad,
                                             double tol);
std::vector<SpectrumReport> dispersion_curve_serial(
    const std::vector<double>& p_grid, const Vec3& direction,
    const ModelParams& params, const QuadratureSpec& quad, double tol);

// Un-normalized eigenvector of H(p) at a verified root z*:
//   zero_photon = p^2 / T
//   one_photon(k,l) = (e/sqrt2) (p.G(k,l)) (p^2/T - 1) / L(p,k)
// with T = tilde_t(p) - z*, L = tilde_l(p,k) - z*. At p = 0 both
// components of the displayed vector vanish identically.
struct Eigenfunction {
  Momentum p;
  double z_star = 0.0;
  double zero_photon = 0.0;
  double one_photon(const Vec3& k, int lambda) const;
  double one_photon(const PhotonMode& mode) const {
    return one_photon(mode.k, mode.lambda);
  }

  ModelParams params;
  double T = 0.0;  // tilde_t(p) - z_star
};

Eigenfunction eigenfunction(const Momentum& p, double z_star,
                            const ModelParams& params);

// Edge estimate for D12 (holds on z = z0(|p|)):
//   4 R^(1+2s) / (3 (1+2s) (1-|p|))  for |p| < 1/2
//   4 R^(1+2s) / ((1+2s) |p|)        for |p| >= 1/2
double d12_edge_bound(double p_abs, const ModelParams& params);

// Upper bound for every eigenvalue: 7/2 + 4 pi e^2 R^(1+2s)/(1+2s) + gamma0.
double eigenvalue_upper_bound(const ModelParams& params);

// No root exists beyond |p| = 4 + 4 pi e^2 R^(1+2s)/(1+2s).
double no_root_momentum_bound(const ModelParams& params);

struct EffectiveMassResult {
  enum class Method { formula, finite_difference, sigma_limit };
  double inv_mass = 1.0;
  std::optional<double> mass;  // absent when inv_mass <= 0
  Method method = Method::formula;
};

// 1/m = (1 - pi e^2 D12(0,gamma0)) / (1 + pi e^2 D12(0,gamma0)).
EffectiveMassResult effective_mass(const ModelParams& params,
                                   const QuadratureSpec& quad);

// Central second difference 2 (E(h) - E(0)) / h^2 along a fixed direction
// (E is even in |p|). Requires 0 < h < 1/2.
EffectiveMassResult effective_mass_fd(const ModelParams& params,
                                      const QuadratureSpec& quad, double h);

// Richardson step (4 D(h/2) - D(h)) / 3; the dispersion is analytic in
// p^2 at 0 so the difference quotient has a pure h^2 error expansion.
EffectiveMassResult effective_mass_fd_extrapolated(const ModelParams& params,
                                                   const QuadratureSpec& quad,
                                                   double h);

// sigma -> 0 closed form: (1 - (8/3) pi e^2 ln(R/2+1)) / (1 + ...).
double effective_mass_sigma0(double e, double R);

}  // namespace pfspec
