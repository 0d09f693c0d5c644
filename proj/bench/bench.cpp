// Timing harness: OpenMP kernels against their serial references.
// Usage: pfspec_bench [n_rho n_t n_phi]   (default 16 12 8)

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pfspec/oracle.hpp"
#include "pfspec/spectrum.hpp"

using namespace pfspec;
using Clock = std::chrono::steady_clock;

namespace {

template <typename F>
double time_best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = Clock::now();
    f();
    best = std::min(best,
                    std::chrono::duration<double>(Clock::now() - t0).count());
  }
  return best;
}

void row(const char* name, double serial_s, double omp_s, double maxdiff) {
  std::printf("%-22s %10.4f %10.4f %8.2fx   %.1e\n", name, serial_s, omp_s,
              serial_s / omp_s, maxdiff);
}

}  // namespace

int main(int argc, char** argv) {
  int n_rho = 16, n_t = 12, n_phi = 8;
  if (argc == 4) {
    n_rho = std::atoi(argv[1]);
    n_t = std::atoi(argv[2]);
    n_phi = std::atoi(argv[3]);
  }
#ifdef _OPENMP
  std::printf("OpenMP: %d thread(s)\n", omp_get_max_threads());
#else
  std::printf("OpenMP: disabled at build time\n");
#endif

  const auto prm = ModelParams::with_default_gamma0(1.0, 1.0, 0.0);
  const Momentum p{0.0, 0.0, 0.5};
  const auto grid = build_grid(n_rho, n_t, n_phi, prm);
  std::printf("grid %dx%dx%d -> dim %d\n\n", n_rho, n_t, n_phi,
              1 + 2 * grid->size());
  std::printf("%-22s %10s %10s %9s   %s\n", "kernel", "serial[s]", "omp[s]",
              "speedup", "max|diff|");

  // Hamiltonian assembly
  DiscretizedHamiltonian hs, ho;
  const double t_as =
      time_best_of(2, [&] { hs = build_discrete_h_serial(p, grid, prm); });
  const double t_ao =
      time_best_of(2, [&] { ho = build_discrete_h(p, grid, prm); });
  row("assemble_hamiltonian", t_as, t_ao,
      (hs.matrix - ho.matrix).cwiseAbs().maxCoeff());

  // symmetric matvec
  std::mt19937 rng(5);
  std::normal_distribution<double> nd;
  Eigen::VectorXd x(ho.dim()), y1, y2;
  for (int i = 0; i < ho.dim(); ++i) x[i] = nd(rng);
  const double t_ms =
      time_best_of(3, [&] { for (int r = 0; r < 8; ++r) symv_serial(ho.matrix, x, y1); });
  const double t_mo =
      time_best_of(3, [&] { for (int r = 0; r < 8; ++r) symv(ho.matrix, x, y2); });
  row("symv (x8)", t_ms, t_mo, (y1 - y2).cwiseAbs().maxCoeff());

  // dispersion sweep
  std::vector<double> pgrid;
  for (int i = 0; i <= 12; ++i) pgrid.push_back(0.1 * i);
  const QuadratureSpec quad{};
  std::vector<SpectrumReport> ra, rb;
  const double t_ds = time_best_of(
      1, [&] { ra = dispersion_curve_serial(pgrid, Vec3{0, 0, 1}, prm, quad, 1e-11); });
  const double t_do = time_best_of(
      1, [&] { rb = dispersion_curve(pgrid, Vec3{0, 0, 1}, prm, quad, 1e-11); });
  double dmax = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i)
    if (ra[i].eigenvalue && rb[i].eigenvalue)
      dmax = std::max(dmax, std::abs(*ra[i].eigenvalue - *rb[i].eigenvalue));
  row("dispersion_sweep", t_ds, t_do, dmax);

  // Lanczos ground state (parallel matvec inside)
  const double t_l = time_best_of(1, [&] { ground_eigenpair_lanczos(ho); });
  std::printf("%-22s %10s %10.4f\n", "lanczos_ground", "-", t_l);
  return 0;
}
