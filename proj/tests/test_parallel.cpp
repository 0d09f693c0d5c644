#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "pfspec/oracle.hpp"
#include "pfspec/spectrum.hpp"

// The OpenMP kernels must be bit-identical to their serial references:
// parallelism only distributes independent outputs, never reassociates a
// reduction.

using namespace pfspec;

TEST_CASE("symv: OpenMP kernel equals the serial reference bitwise") {
  const auto prm = ModelParams::with_default_gamma0(1.0, 1.0, 0.0);
  const auto hd =
      build_discrete_h(Momentum{0, 0, 0.5}, build_grid(8, 8, 6, prm), prm);
  std::mt19937 rng(99);
  std::normal_distribution<double> nd;
  Eigen::VectorXd x(hd.dim());
  for (int i = 0; i < hd.dim(); ++i) x[i] = nd(rng);
  Eigen::VectorXd y1, y2;
  symv(hd.matrix, x, y1);
  symv_serial(hd.matrix, x, y2);
  CHECK((y1 - y2).norm() == 0.0);
}

TEST_CASE("assembly: OpenMP equals serial bitwise") {
  const auto prm = ModelParams::with_default_gamma0(0.7, 1.5, 0.25);
  const auto g = build_grid(7, 5, 6, prm);
  const Momentum p{0.1, -0.6, 0.2};
  CHECK((build_discrete_h(p, g, prm).matrix -
         build_discrete_h_serial(p, g, prm).matrix)
            .norm() == 0.0);
}

TEST_CASE("dispersion sweep: parallel equals serial bitwise") {
  const auto prm = ModelParams::with_default_gamma0(1.0, 1.0, 0.0);
  const QuadratureSpec quad{};
  std::vector<double> grid;
  for (int i = 0; i <= 8; ++i) grid.push_back(0.25 * i);
  const auto a = dispersion_curve(grid, Vec3{0, 0, 1}, prm, quad, 1e-11);
  const auto b = dispersion_curve_serial(grid, Vec3{0, 0, 1}, prm, quad, 1e-11);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].eigenvalue.has_value() == b[i].eigenvalue.has_value());
    if (a[i].eigenvalue) CHECK(*a[i].eigenvalue == *b[i].eigenvalue);
    CHECK(a[i].f_at_edge == b[i].f_at_edge);
    CHECK(a[i].ess_edge == b[i].ess_edge);
    CHECK(a[i].bounds_ok.all() == b[i].bounds_ok.all());
  }
}
