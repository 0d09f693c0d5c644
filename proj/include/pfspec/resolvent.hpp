#pragma once

#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "pfspec/grid.hpp"
#include "pfspec/kernels.hpp"
#include "pfspec/spectrum.hpp"

// Explicit resolvent f = (H(p) - z)^{-1} u on a discretized state space
// C + L^2 + L^2. The reduction eliminates the one-photon amplitudes
// through a 3x3 system Q U = S with U = a I + b p p^T; on a shared grid
// the formulas invert the discretized operator exactly.

namespace pfspec {

// Element of C + L^2 + L^2: vacuum amplitude plus one complex sample per
// (node, polarization) on a shared grid. f1 is lambda-major:
// f1[(lambda-1)*M + m]. Discrete norm: |f0|^2 + sum_l sum_m w_m |f1|^2.
struct StateVector {
  std::shared_ptr<const QuadratureGrid> grid;
  Complex f0{0.0, 0.0};
  std::vector<Complex> f1;

  explicit StateVector(std::shared_ptr<const QuadratureGrid> g = nullptr)
      : grid(std::move(g)) {
    if (grid) f1.assign(2 * grid->size(), Complex{});
  }

  int n_nodes() const { return grid ? grid->size() : 0; }
  Complex& at(int m, int lambda) { return f1[(lambda - 1) * n_nodes() + m]; }
  const Complex& at(int m, int lambda) const {
    return f1[(lambda - 1) * n_nodes() + m];
  }

  double norm() const;
  StateVector operator+(const StateVector& o) const;
  StateVector operator-(const StateVector& o) const;
  StateVector operator*(Complex s) const;
};

// b_lambda = -(e/sqrt2) p.G(k,lambda)
double b_lambda(const Momentum& p, const Vec3& k, int lambda,
                const ModelParams& params);

// N = b_lambda p + (T e/sqrt2) G(k,lambda)
Vec3c n_vector(const Momentum& p, const Vec3& k, int lambda, Complex T,
               const ModelParams& params);

// S = (e/sqrt2) sum_l int G(k,l) [u1/L - b_l u0/(T L)] dk, as a grid sum.
Vec3c s_vector(const Momentum& p, Complex z, const StateVector& u,
               const ModelParams& params);

// Coefficients of U = a I + b p p^T:
//   a = (2 + D1 + D2)/2,  b = (D1 - 3 D2)/(2 p^2) - (D1 - D2)/T.
// At p = 0 returns (a, 0): U is a multiple of the identity there.
std::pair<Complex, Complex> u_coeffs(const Momentum& p, Complex z,
                                     const ModelParams& params,
                                     const QuadratureSpec& quad);

// Same coefficients with D1, D2 evaluated as sums over the given grid,
// so that Q U = S is the exact reduction of the discretized operator.
std::pair<Complex, Complex> u_coeffs_on_grid(const Momentum& p, Complex z,
                                             const QuadratureGrid& grid,
                                             const ModelParams& params);

// Q = S U^{-1} through the rank-one inverse
// U^{-1} = (1/a)(I - b/(a + b p^2) p p^T). Throws when det U = 0.
Vec3c solve_q(Complex a, Complex b, const Momentum& p, const Vec3c& S);

// Intermediates of one resolvent application, exposed for inspection.
struct ReducedSystem {
  Complex T;
  Complex a, b;
  Vec3c S;
  Vec3c Q;
};
ReducedSystem reduce(const Momentum& p, Complex z, const StateVector& u,
                     const ModelParams& params);

struct ResolventOptions {
  // Minimal distance kept between a real z and the spectrum.
  double real_z_margin = 1e-9;
  // Known ground eigenvalue; when absent and z is real it is solved for.
  std::optional<double> z_star;
};

struct ResolventStats {
  double dist_to_spectrum = 0.0;
  bool accuracy_warning = false;
};

// f0 = (u0 + p.Q)/T, f1 = [T u1 - b_l u0 - N.Q]/(T L) per node.
// Valid for Im z != 0 and for real z below the spectrum (with margin).
StateVector apply_resolvent(const Momentum& p, Complex z, const StateVector& u,
                            const ModelParams& params,
                            const ResolventOptions& opts = {},
                            ResolventStats* stats = nullptr);

// Samples of an eigenfunction on a grid, optionally L2-normalized.
StateVector discretize_eigenfunction(const Eigenfunction& psi,
                                     std::shared_ptr<const QuadratureGrid> grid,
                                     bool normalize = false);

}  // namespace pfspec
