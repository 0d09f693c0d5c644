#pragma once

#include <memory>
#include <vector>

#include "pfspec/model.hpp"
#include "pfspec/vec3.hpp"

namespace pfspec {

// Product quadrature over the ball |k| <= R: Gauss-Legendre in rho and
// t = cos(theta), uniform midpoint rule in phi. Nodes are strictly inside
// the ball and never at k = 0, so the coupling g(k) is finite on every
// node. Ordering is rho-major, then t, then phi (deterministic).
struct QuadratureGrid {
  std::vector<Vec3> nodes;
  std::vector<double> weights;
  int n_rho = 0, n_t = 0, n_phi = 0;
  double R = 0.0;

  int size() const { return static_cast<int>(nodes.size()); }
};

std::shared_ptr<const QuadratureGrid> build_grid(int n_rho, int n_t, int n_phi,
                                                 const ModelParams& params);

// Grids are interchangeable when they hold the same node/weight set.
bool same_grid(const QuadratureGrid& a, const QuadratureGrid& b);

}  // namespace pfspec
