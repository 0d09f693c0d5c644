#include "pfspec/spectrum.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace pfspec {

namespace {

double pi_e_sq(const ModelParams& prm) {
  return std::numbers::pi * prm.e * prm.e;
}

// Kernel tolerance for root solving: the root is located to ~tol, so the
// kernel noise must sit well below it.
QuadratureSpec solver_quad(const QuadratureSpec& quad, double tol) {
  QuadratureSpec q = quad;
  q.abs_tol = std::max(std::min(quad.abs_tol, 0.01 * tol), 1e-14);
  return q;
}

}  // namespace

double secular_f(double p_abs, double z, const ModelParams& params,
                 const QuadratureSpec& quad) {
  const double edge = z0(p_abs, params);
  if (z > edge)
    throw std::domain_error("secular_f: z above the band edge z0(|p|)");
  const KernelValue D = (z == edge)
                            ? d12_at_edge(p_abs, params, quad)
                            : d12(p_abs, Complex{z, 0.0}, params, quad);
  const double half_p2 = 0.5 * p_abs * p_abs;
  return half_p2 - z + params.gamma0 -
         pi_e_sq(params) * (half_p2 + z - params.gamma0) * D.real();
}

double k_det(double p_abs, double z, const ModelParams& params,
             const QuadratureSpec& quad) {
  const double T = tilde_t(Momentum{0.0, 0.0, p_abs}, params) - z;
  if (T == 0.0) throw std::domain_error("k_det: pole at z = tilde_t(p)");
  const double edge = z0(p_abs, params);
  const double D1 = (z == edge) ? d1_at_edge(p_abs, params, quad).real()
                                : d1(p_abs, Complex{z, 0.0}, params, quad).real();
  const double D2 = (z == edge) ? d2_at_edge(p_abs, params, quad).real()
                                : d2(p_abs, Complex{z, 0.0}, params, quad).real();
  const double s = D1 + D2 + 2.0;
  return s * s / (4.0 * T) * secular_f(p_abs, z, params, quad);
}

std::optional<double> solve_ground(const Momentum& p, const ModelParams& params,
                                   const QuadratureSpec& quad, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("solve_ground: tol must be > 0");
  const double p_abs = p.norm();
  const double edge = z0(p_abs, params);
  const QuadratureSpec q = solver_quad(quad, tol);

  const double f_edge = secular_f(p_abs, edge, params, q);
  // Exact-zero edge root covers p = 0 (F factorizes through z - gamma0)
  // and the decoupled e = 0 case; a small snap absorbs rounding residue.
  const double snap = 64.0 * std::numeric_limits<double>::epsilon() *
                      std::max(1.0, std::abs(edge));
  if (std::abs(f_edge) <= snap) return edge;
  if (f_edge > 0.0) return std::nullopt;

  double lo = std::max(0.0, params.gamma0 - 0.5 * p_abs * p_abs - 1.0);
  double f_lo = secular_f(p_abs, lo, params, q);
  if (f_lo <= 0.0) {
    std::ostringstream msg;
    msg << "solve_ground: no sign change on bracket [" << lo << ", " << edge
        << "]: F(lo) = " << f_lo << " (positivity of F below gamma0 - p^2/2 "
        << "violated)";
    throw std::runtime_error(msg.str());
  }

  // Bisection on [lo, edge]: F > 0 on the left, F < 0 at the edge.
  double hi = edge, f_hi = f_edge;
  double best = hi, f_best = f_hi;
  for (int it = 0; it < 200 && (hi - lo) > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    const double f_mid = secular_f(p_abs, mid, params, q);
    if (std::abs(f_mid) < std::abs(f_best)) {
      best = mid;
      f_best = f_mid;
    }
    if (f_mid > 0.0) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
      f_hi = f_mid;
    }
  }

  // Secant polish keeps iterates inside the bracket and drives |F| toward
  // the kernel noise floor.
  double za = lo, fa = f_lo, zb = hi, fb = f_hi;
  for (int it = 0; it < 12; ++it) {
    if (fb == fa) break;
    double zc = zb - fb * (zb - za) / (fb - fa);
    if (!(zc > lo && zc < hi)) zc = 0.5 * (lo + hi);
    const double fc = secular_f(p_abs, zc, params, q);
    if (std::abs(fc) < std::abs(f_best)) {
      best = zc;
      f_best = fc;
    }
    if (fc > 0.0) {
      lo = zc;
    } else {
      hi = zc;
    }
    za = zb;
    fa = fb;
    zb = zc;
    fb = fc;
    if (std::abs(fc) <= 0.5 * tol || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(hi))
      break;
  }
  return best;
}

namespace {

SpectrumReport report_point(double p_abs, const Vec3& direction,
                            const ModelParams& params,
                            const QuadratureSpec& quad, double tol) {
  SpectrumReport rep;
  rep.p_abs = p_abs;
  rep.ess_edge = z0(p_abs, params);
  try {
    rep.f_at_edge = secular_f(p_abs, rep.ess_edge, params, quad);
    rep.eigenvalue = solve_ground(direction * p_abs, params, quad, tol);

    const KernelValue d12e = d12_at_edge(p_abs, params, quad);
    rep.bounds_ok.edge_kernel =
        d12e.real() <= d12_edge_bound(p_abs, params) + 10.0 * d12e.est_error;
    if (rep.eigenvalue) {
      rep.bounds_ok.upper_bound = *rep.eigenvalue <= eigenvalue_upper_bound(params);
      rep.bounds_ok.positivity = *rep.eigenvalue > 0.0;
    }
  } catch (const std::exception& ex) {
    rep.note = ex.what();
  }
  return rep;
}

void require_unit(const Vec3& direction) {
  if (std::abs(direction.norm() - 1.0) > 1e-12)
    throw std::invalid_argument(
        "dispersion_curve: direction must be a unit vector");
}

}  // namespace

std::vector<SpectrumReport> dispersion_curve(const std::vector<double>& p_grid,
                                             const Vec3& direction,
                                             const ModelParams& params,
                                             const QuadratureSpec& quad,
                                             double tol) {
  require_unit(direction);
  std::vector<SpectrumReport> out(p_grid.size());
  const int n = static_cast<int>(p_grid.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i)
    out[i] = report_point(p_grid[i], direction, params, quad, tol);
  return out;
}

std::vector<SpectrumReport> dispersion_curve_serial(
    const std::vector<double>& p_grid, const Vec3& direction,
    const ModelParams& params, const QuadratureSpec& quad, double tol) {
  require_unit(direction);
  std::vector<SpectrumReport> out(p_grid.size());
  for (std::size_t i = 0; i < p_grid.size(); ++i)
    out[i] = report_point(p_grid[i], direction, params, quad, tol);
  return out;
}

double Eigenfunction::one_photon(const Vec3& k, int lambda) const {
  const double p2 = p.norm_sq();
  if (p2 == 0.0) return 0.0;
  if (k.norm() > params.R) return 0.0;
  const double L = tilde_l(p, k, params) - z_star;
  if (L <= 0.0)
    throw std::domain_error("Eigenfunction: L(p,k) - z* not positive");
  const Vec3 G = coupling_G(k, lambda, params);
  return (params.e / std::numbers::sqrt2) * dot(p, G) * (p2 / T - 1.0) / L;
}

Eigenfunction eigenfunction(const Momentum& p, double z_star,
                            const ModelParams& params) {
  Eigenfunction psi;
  psi.p = p;
  psi.z_star = z_star;
  psi.params = params;
  psi.T = tilde_t(p, params) - z_star;
  const double p2 = p.norm_sq();
  if (p2 == 0.0) {
    psi.zero_photon = 0.0;  // degenerate: displayed vector vanishes at p = 0
    return psi;
  }
  if (psi.T == 0.0)
    throw std::domain_error("eigenfunction: T(p, z*) = 0");
  if (z_star > z0(p.norm(), params))
    throw std::domain_error("eigenfunction: z* above the band edge");
  psi.zero_photon = p2 / psi.T;
  return psi;
}

double d12_edge_bound(double p_abs, const ModelParams& params) {
  const double s = params.sigma;
  const double r = std::pow(params.R, 1.0 + 2.0 * s);
  if (p_abs < 0.5) return 4.0 / (3.0 * (1.0 + 2.0 * s)) * r / (1.0 - p_abs);
  return 4.0 / (1.0 + 2.0 * s) * r / p_abs;
}

double eigenvalue_upper_bound(const ModelParams& params) {
  const double s = params.sigma;
  return 3.5 +
         4.0 * std::numbers::pi * params.e * params.e *
             std::pow(params.R, 1.0 + 2.0 * s) / (1.0 + 2.0 * s) +
         params.gamma0;
}

double no_root_momentum_bound(const ModelParams& params) {
  const double s = params.sigma;
  return 4.0 + 4.0 * std::numbers::pi * params.e * params.e *
                   std::pow(params.R, 1.0 + 2.0 * s) / (1.0 + 2.0 * s);
}

EffectiveMassResult effective_mass(const ModelParams& params,
                                   const QuadratureSpec& quad) {
  const double D = d12_at_edge(0.0, params, quad).real();
  const double mu = pi_e_sq(params) * D;
  EffectiveMassResult res;
  res.method = EffectiveMassResult::Method::formula;
  res.inv_mass = (1.0 - mu) / (1.0 + mu);
  if (res.inv_mass > 0.0) res.mass = 1.0 / res.inv_mass;
  return res;
}

EffectiveMassResult effective_mass_fd(const ModelParams& params,
                                      const QuadratureSpec& quad, double h) {
  if (!(h > 0.0 && h < 0.5))
    throw std::invalid_argument("effective_mass_fd: need 0 < h < 1/2");
  // E(h) - E(0) is O(h^2), so the roots must be located well below that.
  const double tol = 3e-13;
  const auto e0 = solve_ground(Momentum{}, params, quad, tol);
  const auto eh = solve_ground(Momentum{h, 0.0, 0.0}, params, quad, tol);
  if (!e0 || !eh)
    throw std::runtime_error("effective_mass_fd: ground state absent");
  EffectiveMassResult res;
  res.method = EffectiveMassResult::Method::finite_difference;
  res.inv_mass = 2.0 * (*eh - *e0) / (h * h);
  if (res.inv_mass > 0.0) res.mass = 1.0 / res.inv_mass;
  return res;
}

EffectiveMassResult effective_mass_fd_extrapolated(const ModelParams& params,
                                                   const QuadratureSpec& quad,
                                                   double h) {
  const double dh = effective_mass_fd(params, quad, h).inv_mass;
  const double dh2 = effective_mass_fd(params, quad, 0.5 * h).inv_mass;
  EffectiveMassResult res;
  res.method = EffectiveMassResult::Method::finite_difference;
  res.inv_mass = (4.0 * dh2 - dh) / 3.0;
  if (res.inv_mass > 0.0) res.mass = 1.0 / res.inv_mass;
  return res;
}

double effective_mass_sigma0(double e, double R) {
  if (!(R > 0.0))
    throw std::invalid_argument("effective_mass_sigma0: R must be > 0");
  const double mu =
      (8.0 / 3.0) * std::numbers::pi * e * e * std::log(0.5 * R + 1.0);
  return (1.0 - mu) / (1.0 + mu);
}

}  // namespace pfspec
