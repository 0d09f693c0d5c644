#pragma once

#include <Eigen/Dense>

#include "pfspec/grid.hpp"
#include "pfspec/resolvent.hpp"

// Independent ground truth: the dense discretization of H(p) on a
// quadrature grid. Amplitudes carry sqrt(w_m) so the discrete operator is
// a plain symmetric matrix and the discrete inner product is Euclidean.
//
// Index layout: 0 is the photon vacuum component; node m with
// polarization lambda sits at 1 + (lambda-1)*M + m, M = grid size.

namespace pfspec {

struct DiscretizedHamiltonian {
  std::shared_ptr<const QuadratureGrid> grid;
  Momentum p;
  ModelParams params;
  Eigen::MatrixXd matrix;

  int dim() const { return static_cast<int>(matrix.rows()); }
};

// Assembly: entry (0,0) = tilde_t(p); coupling column
// -(e/sqrt2)(p.G(k_m,l)) sqrt(w_m); one-photon block
// delta L~(p,k_m) + (e^2/2)(G(k_m,l).G(k_n,mu)) sqrt(w_m w_n).
// The OpenMP version and the serial reference produce identical matrices.
DiscretizedHamiltonian build_discrete_h(
    const Momentum& p, std::shared_ptr<const QuadratureGrid> grid,
    const ModelParams& params);
DiscretizedHamiltonian build_discrete_h_serial(
    const Momentum& p, std::shared_ptr<const QuadratureGrid> grid,
    const ModelParams& params);

// Symmetric matrix-vector product y = H x; the OpenMP kernel splits rows
// across threads, the serial twin is the reference.
void symv(const Eigen::MatrixXd& H, const Eigen::VectorXd& x,
          Eigen::VectorXd& y);
void symv_serial(const Eigen::MatrixXd& H, const Eigen::VectorXd& x,
                 Eigen::VectorXd& y);

// Smallest eigenvalue. Dense solve for moderate dimensions, Lanczos with
// full reorthogonalization above (the ground state is isolated, so the
// extremal Ritz value converges fast; validated against the dense route
// in the tests).
double ground_eigenvalue(const DiscretizedHamiltonian& hd);
double ground_eigenvalue_dense(const DiscretizedHamiltonian& hd);

struct LanczosResult {
  double value = 0.0;
  Eigen::VectorXd vector;
  int iterations = 0;
  double residual = 0.0;
};
LanczosResult ground_eigenpair_lanczos(const DiscretizedHamiltonian& hd,
                                       double tol = 1e-11, int max_iter = 500);

// (H - z) f for a state on the same grid; f holds function samples, the
// sqrt(w) scaling is applied internally.
StateVector apply_h_minus_z(const DiscretizedHamiltonian& hd, Complex z,
                            const StateVector& f);

// Columnar triplet dump (i, j, value) of the upper triangle, for external
// inspection of the assembled operator.
void dump_matrix_triplets(const DiscretizedHamiltonian& hd, std::ostream& os);

// ||(H - z) f - u|| / ||u||; zero when both f and u vanish.
double residual(const DiscretizedHamiltonian& hd, Complex z,
                const StateVector& f, const StateVector& u);

}  // namespace pfspec
