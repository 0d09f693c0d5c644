#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "pfspec/grid.hpp"
#include "pfspec/kernels.hpp"
#include "pfspec/spectrum.hpp"
#include "support/reference.hpp"

using namespace pfspec;
using std::numbers::pi;

namespace {

const QuadratureSpec kQuad{};  // defaults: 256 panels, 1e-10

double rand_in(std::mt19937& rng, double a, double b) {
  return std::uniform_real_distribution<double>(a, b)(rng);
}

}  // namespace

TEST_CASE("denom: arithmetic, edge location, positivity below the edge") {
  const auto prm = ModelParams::with_default_gamma0(1.0, 1.0, 0.0);
  // p=0, rho=1, z=gamma0: 1/2 + 1 = 3/2 for any t
  for (double t : {-1.0, 0.0, 0.7})
    CHECK(denom(0.0, 1.0, t, Complex{prm.gamma0, 0.0}, prm).real() ==
          doctest::Approx(1.5).epsilon(1e-15));

  // |p|=1, t=1, z=z0(1): vanishes linearly as rho -> 0
  const double edge1 = z0(1.0, prm);
  for (double rho : {1e-3, 1e-5, 1e-7}) {
    const double v = denom(1.0, rho, 1.0, Complex{edge1, 0.0}, prm).real();
    CHECK(v > 0.0);
    CHECK(v < 2.0 * rho);
  }

  // real z < z0: denominator positive on the whole (rho, t) range
  auto rng = testref::rng(17);
  for (int it = 0; it < 20; ++it) {
    const double p = rand_in(rng, 0.0, 2.5);
    const double z = z0(p, prm) - rand_in(rng, 1e-6, 3.0);
    double dmin = 1e300;
    for (int a = 0; a <= 100; ++a)
      for (int b = 0; b <= 100; ++b) {
        const double rho = prm.R * a / 100.0;
        const double t = -1.0 + 2.0 * b / 100.0;
        dmin = std::min(dmin, denom(p, rho, t, Complex{z, 0.0}, prm).real());
      }
    CHECK(dmin > 0.0);
  }
}

TEST_CASE("d1/d2/d12 against the raw 2D tensor rule") {
  auto rng = testref::rng(23);
  for (double sigma : {0.0, 0.25}) {
    const auto prm = ModelParams::with_default_gamma0(0.9, 1.3, sigma);
    for (int it = 0; it < 6; ++it) {
      const double p = rand_in(rng, 0.0, 2.0);
      Complex z;
      if (it % 2 == 0)
        z = Complex{z0(p, prm) - rand_in(rng, 0.3, 2.0), 0.0};
      else
        z = Complex{z0(p, prm) + rand_in(rng, -1.0, 2.0),
                    rand_in(rng, 0.3, 2.0)};
      const auto v1 = d1(p, z, prm, kQuad);
      const auto v2 = d2(p, z, prm, kQuad);
      const auto v12 = d12(p, z, prm, kQuad);
      CHECK(std::abs(v1.value - testref::d1_tensor(p, z, prm)) < 1e-8);
      CHECK(std::abs(v2.value - testref::d2_tensor(p, z, prm)) < 1e-8);
      CHECK(std::abs(v12.value - testref::d12_tensor(p, z, prm)) < 1e-8);
      CHECK(v1.est_error >= 0.0);
    }
  }
}

TEST_CASE("kernel structure: e=0, d2 <= d1, difference identity, reality") {
  const auto free0 = ModelParams::with_default_gamma0(0.0, 1.0, 0.0);
  CHECK(d1(0.5, Complex{-1.0, 0.0}, free0, kQuad).value == Complex{});
  CHECK(d2(0.5, Complex{-1.0, 0.0}, free0, kQuad).value == Complex{});
  CHECK(d12(0.5, Complex{-1.0, 0.0}, free0, kQuad).value.real() > 0.0);

  auto rng = testref::rng(31);
  const auto prm = ModelParams::with_default_gamma0(1.1, 1.0, 0.1);
  for (int it = 0; it < 8; ++it) {
    const double p = rand_in(rng, 0.0, 1.8);
    const double z = z0(p, prm) - rand_in(rng, 1e-3, 2.0);
    const auto v1 = d1(p, Complex{z, 0.0}, prm, kQuad);
    const auto v2 = d2(p, Complex{z, 0.0}, prm, kQuad);
    const auto v12 = d12(p, Complex{z, 0.0}, prm, kQuad);
    // real z below the edge: real positive values
    CHECK(v1.value.imag() == 0.0);
    CHECK(v1.value.real() > 0.0);
    CHECK(std::abs(v2.value) <= std::abs(v1.value));
    // d12 = (d1 - d2)/(pi e^2) within combined error
    const double lhs = v12.value.real();
    const double rhs =
        (v1.value.real() - v2.value.real()) / (pi * prm.e * prm.e);
    CHECK(std::abs(lhs - rhs) <
          1e-9 + (v1.est_error + v2.est_error) / (pi * prm.e * prm.e));
  }
}

TEST_CASE("monotonicity in z and Schwarz reflection") {
  const auto prm = ModelParams::with_default_gamma0(0.7, 1.0, 0.0);
  auto rng = testref::rng(37);
  for (int it = 0; it < 10; ++it) {
    const double p = rand_in(rng, 0.0, 1.5);
    const double zhi = z0(p, prm) - rand_in(rng, 1e-2, 0.5);
    const double zlo = zhi - rand_in(rng, 1e-2, 2.0);
    CHECK(d1(p, Complex{zlo, 0}, prm, kQuad).real() <
          d1(p, Complex{zhi, 0}, prm, kQuad).real());
    CHECK(d12(p, Complex{zlo, 0}, prm, kQuad).real() <
          d12(p, Complex{zhi, 0}, prm, kQuad).real());

    const Complex zc{z0(p, prm) - 0.5, rand_in(rng, 0.1, 2.0)};
    const Complex a = d1(p, zc, prm, kQuad).value;
    const Complex b = d1(p, std::conj(zc), prm, kQuad).value;
    CHECK(std::abs(b - std::conj(a)) < 1e-12);
  }
}

TEST_CASE("domain errors on and above the essential spectrum") {
  const auto prm = ModelParams::with_default_gamma0(1.0, 1.0, 0.0);
  CHECK_THROWS_AS(d1(0.5, Complex{z0(0.5, prm), 0.0}, prm, kQuad),
                  std::domain_error);
  CHECK_THROWS_AS(d12(0.5, Complex{z0(0.5, prm) + 1.0, 0.0}, prm, kQuad),
                  std::domain_error);
  // complex z with the same real part is fine
  CHECK_NOTHROW(d12(0.5, Complex{z0(0.5, prm) + 1.0, 0.5}, prm, kQuad));
}

TEST_CASE("band-edge evaluation: closed forms at p = 0") {
  for (double R : {1.0, 2.0, 5.0}) {
    for (double e : {0.7, 1.0}) {
      const auto prm = ModelParams::with_default_gamma0(e, R, 0.0);
      const double lg = std::log(0.5 * R + 1.0);
      CHECK(std::abs(d1_at_edge(0.0, prm, kQuad).real() -
                     4.0 * pi * e * e * lg) < 1e-10);
      CHECK(std::abs(d2_at_edge(0.0, prm, kQuad).real() -
                     4.0 * pi * e * e * lg / 3.0) < 1e-10);
      CHECK(std::abs(d12_at_edge(0.0, prm, kQuad).real() - (8.0 / 3.0) * lg) <
            1e-10);
    }
  }
  // spec number: R=2 gives (8/3) ln 2
  const auto prm2 = ModelParams::with_default_gamma0(1.0, 2.0, 0.0);
  CHECK(d12_at_edge(0.0, prm2, kQuad).real() ==
        doctest::Approx((8.0 / 3.0) * std::log(2.0)).epsilon(1e-10));
}

TEST_CASE("band-edge d12: finite, refines, continuous from below") {
  const auto prm = ModelParams::with_default_gamma0(1.0, 1.0, 0.25);
  for (double p : {0.3, 0.9, 1.0, 1.5, 2.5}) {
    QuadratureSpec lo = kQuad;
    lo.n_rho = 64;
    QuadratureSpec hi = kQuad;
    hi.n_rho = 512;
    hi.abs_tol = 1e-12;
    const auto a = d12_at_edge(p, prm, lo);
    const auto b = d12_at_edge(p, prm, hi);
    CHECK(std::isfinite(a.real()));
    // refinement keeps the value stable and simultaneously tightens est_error
    CHECK(std::abs(a.value - b.value) <= 10.0 * (a.est_error + b.est_error));
    CHECK(b.est_error <= a.est_error + 1e-13);
    // edge estimate holds
    CHECK(b.real() <= d12_edge_bound(p, prm));
  }
  // approach from below matches the edge value
  const double p = 0.6;
  const double edge = z0(p, prm);
  const double below = d12(p, Complex{edge - 1e-7, 0.0}, prm, kQuad).real();
  CHECK(std::abs(below - d12_at_edge(p, prm, kQuad).real()) < 1e-4);
}

TEST_CASE("c_matrix: trace, symmetry, axis-aligned form, brute force, rotation") {
  const auto prm = ModelParams::with_default_gamma0(0.8, 1.0, 0.0);
  auto rng = testref::rng(41);
  const auto grid = build_grid(64, 48, 48, prm);

  for (int it = 0; it < 4; ++it) {
    Momentum p{rand_in(rng, -1, 1), rand_in(rng, -1, 1), rand_in(rng, -1, 1)};
    if (p.norm() < 0.1) p.z += 0.5;
    Complex z{z0(p.norm(), prm) - rand_in(rng, 0.3, 1.0),
              it % 2 ? rand_in(rng, 0.2, 1.0) : 0.0};
    const Mat3c C = c_matrix(p, z, prm, kQuad);
    // symmetric by construction
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) CHECK(C[i][j] == C[j][i]);
    // trace equals D1 exactly (the D2 terms cancel)
    const Complex D1 = d1(p.norm(), z, prm, kQuad).value;
    CHECK(std::abs(C[0][0] + C[1][1] + C[2][2] - D1) < 1e-9);
    // brute-force 3D quadrature of the defining integral
    const Mat3c B = testref::c_matrix_bruteforce(p, z, prm, *grid);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) CHECK(std::abs(C[i][j] - B[i][j]) < 1e-6);
  }

  // p along the z axis: diagonal with c11 = c22 = (D1-D2)/2, c33 = D2
  const Momentum pz{0.0, 0.0, 0.8};
  const Complex z{1.0, 0.7};
  const Mat3c C = c_matrix(pz, z, prm, kQuad);
  const Complex D1 = d1(0.8, z, prm, kQuad).value;
  const Complex D2 = d2(0.8, z, prm, kQuad).value;
  CHECK(std::abs(C[0][1]) == 0.0);
  CHECK(std::abs(C[0][2]) == 0.0);
  CHECK(std::abs(C[0][0] - 0.5 * (D1 - D2)) < 1e-10);
  CHECK(std::abs(C[1][1] - C[0][0]) == 0.0);
  CHECK(std::abs(C[2][2] - D2) < 1e-10);

  // rotation covariance: C(Rp) = R C(p) R^T for a z-rotation
  const double th = 0.731;
  const double cs = std::cos(th), sn = std::sin(th);
  const Momentum p{0.4, -0.2, 0.5};
  const Momentum rp{cs * p.x - sn * p.y, sn * p.x + cs * p.y, p.z};
  const Mat3c Cp = c_matrix(p, z, prm, kQuad);
  const Mat3c Crp = c_matrix(rp, z, prm, kQuad);
  const double Rm[3][3] = {{cs, -sn, 0}, {sn, cs, 0}, {0, 0, 1}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Complex acc{};
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) acc += Rm[i][a] * Cp[a][b] * Rm[j][b];
      CHECK(std::abs(Crp[i][j] - acc) < 1e-9);
    }

  // p = 0 continuity: (D1/3) identity
  const Mat3c C0 = c_matrix(Momentum{}, z, prm, kQuad);
  const Complex D10 = d1(0.0, z, prm, kQuad).value;
  CHECK(std::abs(C0[0][0] - D10 / 3.0) < 1e-12);
  CHECK(C0[0][1] == Complex{});
}
