#include "pfspec/kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace pfspec {

Complex denom(double p_abs, double rho, double t, Complex z,
              const ModelParams& params) {
  return 0.5 * p_abs * p_abs - p_abs * rho * t + 0.5 * rho * rho + rho +
         params.gamma0 - z;
}

namespace {

enum class Weight { one, t_sq, one_minus_tsq };

// Closed-form t integral: int_{-1}^{1} W(t) / (A - B t) dt.
// AmB is A - B supplied by the caller (cancellation-free at the edge).
// A series in beta = B/A is used when B is small relative to A.
Complex t_integral(Weight w, Complex A, double B, Complex AmB) {
  if (B <= 0.25 * std::abs(A)) {
    const Complex beta2 = (B / A) * (B / A);
    Complex term{1.0, 0.0};
    Complex s1{0.0, 0.0};  // sum beta^(2n) / (2n+1)
    Complex s2{0.0, 0.0};  // sum beta^(2n) / (2n+3)
    for (int n = 0; n <= 16; ++n) {
      s1 += term / double(2 * n + 1);
      s2 += term / double(2 * n + 3);
      term *= beta2;
    }
    const Complex pre = 2.0 / A;
    switch (w) {
      case Weight::one:
        return pre * s1;
      case Weight::t_sq:
        return pre * s2;
      case Weight::one_minus_tsq:
        return pre * (s1 - s2);
    }
  }
  const Complex ApB = A + B;
  const Complex LgB = std::log(ApB / AmB) / B;
  const double B2 = B * B;
  switch (w) {
    case Weight::one:
      return LgB;
    case Weight::t_sq:
      return (A * A * LgB - 2.0 * A) / B2;
    case Weight::one_minus_tsq:
      return (2.0 * A - ApB * AmB * LgB) / B2;
  }
  return {};
}

Complex rho_integrand(Weight w, double p_abs, double rho, Complex z,
                      const ModelParams& prm, bool edge) {
  const double B = p_abs * rho;
  Complex A, AmB;
  if (edge) {
    // z = z0(|p|): both A and A - B reduce to gamma0-free positive forms.
    if (p_abs <= 1.0) {
      A = 0.5 * rho * rho + rho;
      AmB = rho * (0.5 * rho + (1.0 - p_abs));
    } else {
      const double d = rho - (p_abs - 1.0);
      A = 0.5 * (p_abs - 1.0) * (p_abs - 1.0) + 0.5 * rho * rho + rho;
      AmB = 0.5 * d * d;
    }
  } else {
    A = 0.5 * p_abs * p_abs + 0.5 * rho * rho + rho + prm.gamma0 - z;
    AmB = A - B;
  }
  return std::pow(rho, 1.0 + 2.0 * prm.sigma) * t_integral(w, A, B, AmB);
}

std::vector<double> edge_breakpoints(double p_abs, double R) {
  // Cluster panels where the edge denominator degenerates: rho = 0 for
  // |p| <= 1 (and for fractional-power integrands), rho = |p| - 1 inside
  // the interval for |p| > 1. Singular points sit on panel boundaries so
  // interior Gauss nodes never touch them.
  std::vector<double> pts;
  for (int j = 26; j >= 2; j -= 2) pts.push_back(R * std::ldexp(1.0, -j));
  if (p_abs > 1.0) {
    const double rs = p_abs - 1.0;
    if (rs < R) {
      pts.push_back(rs);
      for (int j = 2; j <= 26; j += 2) {
        const double off = rs * std::ldexp(1.0, -j);
        pts.push_back(rs - off);
        pts.push_back(rs + off);
      }
    }
  }
  pts.push_back(R * 0.5);
  return pts;
}

KernelValue eval_kernel(Weight w, double prefactor, double p_abs, Complex z,
                        const ModelParams& prm, const QuadratureSpec& quad,
                        bool edge) {
  quad.validate();
  if (p_abs < 0.0) throw std::domain_error("kernel: p_abs must be >= 0");
  if (!edge && z.imag() == 0.0 && z.real() >= z0(p_abs, prm))
    throw std::domain_error(
        "kernel: real z on the essential spectrum; use the band-edge entry "
        "point for z = z0(|p|)");

  std::vector<double> seeds =
      edge ? edge_breakpoints(p_abs, prm.R) : std::vector<double>{0.5 * prm.R};
  auto f = [&](double rho) { return rho_integrand(w, p_abs, rho, z, prm, edge); };
  const double raw_tol = quad.abs_tol / std::max(prefactor, 1e-300);
  AdaptiveResult r = integrate_adaptive(f, 0.0, prm.R, raw_tol, quad.n_rho,
                                        quad.max_refine, seeds);
  return KernelValue{prefactor * r.value, prefactor * r.est_error, r.converged};
}

double pi_e_sq(const ModelParams& prm) {
  return std::numbers::pi * prm.e * prm.e;
}

}  // namespace

KernelValue d1(double p_abs, Complex z, const ModelParams& params,
               const QuadratureSpec& quad) {
  if (params.e == 0.0) return {};
  return eval_kernel(Weight::one, pi_e_sq(params), p_abs, z, params, quad,
                     false);
}

KernelValue d2(double p_abs, Complex z, const ModelParams& params,
               const QuadratureSpec& quad) {
  if (params.e == 0.0) return {};
  return eval_kernel(Weight::t_sq, pi_e_sq(params), p_abs, z, params, quad,
                     false);
}

KernelValue d12(double p_abs, Complex z, const ModelParams& params,
                const QuadratureSpec& quad) {
  return eval_kernel(Weight::one_minus_tsq, 1.0, p_abs, z, params, quad,
                     false);
}

KernelValue d1_at_edge(double p_abs, const ModelParams& params,
                       const QuadratureSpec& quad) {
  if (params.e == 0.0) return {};
  return eval_kernel(Weight::one, pi_e_sq(params), p_abs, Complex{}, params,
                     quad, true);
}

KernelValue d2_at_edge(double p_abs, const ModelParams& params,
                       const QuadratureSpec& quad) {
  if (params.e == 0.0) return {};
  return eval_kernel(Weight::t_sq, pi_e_sq(params), p_abs, Complex{}, params,
                     quad, true);
}

KernelValue d12_at_edge(double p_abs, const ModelParams& params,
                        const QuadratureSpec& quad) {
  return eval_kernel(Weight::one_minus_tsq, 1.0, p_abs, Complex{}, params,
                     quad, true);
}

Mat3c c_matrix(const Momentum& p, Complex z, const ModelParams& params,
               const QuadratureSpec& quad) {
  const double p_abs = p.norm();
  const Complex D1 = d1(p_abs, z, params, quad).value;
  Mat3c C{};
  if (p_abs == 0.0) {
    for (int i = 0; i < 3; ++i) C[i][i] = D1 / 3.0;
    return C;
  }
  const Complex D2 = d2(p_abs, z, params, quad).value;
  const double p2 = p.norm_sq();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double pi_ = p[i], pj_ = p[j];
      if (i == j)
        C[i][j] = (D1 * (p2 - pi_ * pi_) + D2 * (3.0 * pi_ * pi_ - p2)) /
                  (2.0 * p2);
      else
        C[i][j] = -pi_ * pj_ * (D1 - 3.0 * D2) / (2.0 * p2);
    }
  }
  return C;
}

}  // namespace pfspec
