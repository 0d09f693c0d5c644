#include "pfspec/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pfspec {

void ModelParams::validate() const {
  if (!(R > 0.0)) throw std::invalid_argument("ModelParams: R must be > 0");
  if (!(sigma >= 0.0 && sigma < 0.5))
    throw std::invalid_argument("ModelParams: sigma must be in [0, 1/2)");
  if (!(gamma0 >= 0.0))
    throw std::invalid_argument("ModelParams: gamma0 must be >= 0");
  if (!(e >= 0.0)) throw std::invalid_argument("ModelParams: e must be >= 0");
}

ModelParams ModelParams::with_default_gamma0(double e, double R, double sigma) {
  ModelParams p{e, R, sigma, 0.0};
  p.gamma0 = default_gamma0(e, R, sigma);
  p.validate();
  return p;
}

double coupling_g(const Vec3& k, const ModelParams& params) {
  const double w = k.norm();
  if (w == 0.0)
    throw std::domain_error("coupling_g: |k| = 0 is a singular point");
  if (w > params.R) return 0.0;
  return std::pow(w, params.sigma - 0.5);
}

std::pair<Vec3, Vec3> polarization(const Vec3& k) {
  const double kn = k.norm();
  if (kn == 0.0)
    throw std::domain_error("polarization: undefined at k = 0");
  const Vec3 khat = k / kn;
  Vec3 e1 = cross(khat, Vec3{0.0, 0.0, 1.0});
  double n1 = e1.norm();
  if (n1 < 1e-12) {
    // k along the z axis: fall back to the x axis reference.
    e1 = cross(khat, Vec3{1.0, 0.0, 0.0});
    n1 = e1.norm();
  }
  e1 = e1 / n1;
  const Vec3 e2 = cross(khat, e1);
  return {e1, e2};
}

Vec3 coupling_G(const Vec3& k, int lambda, const ModelParams& params) {
  const auto [e1, e2] = polarization(k);
  const double g = coupling_g(k, params);
  return (lambda == 1 ? e1 : e2) * g;
}

double norm_g_sq(const ModelParams& params) {
  return 4.0 * std::numbers::pi *
         std::pow(params.R, 2.0 + 2.0 * params.sigma) / (1.0 + params.sigma);
}

double default_gamma0(double e, double R, double sigma) {
  ModelParams tmp{e, R, sigma, 0.0};
  return (e * e / 4.0) * norm_g_sq(tmp);
}

double z0(double p_abs, const ModelParams& params) {
  if (p_abs <= 1.0) return 0.5 * p_abs * p_abs + params.gamma0;
  return p_abs - 0.5 + params.gamma0;
}

double tilde_t(const Momentum& p, const ModelParams& params) {
  return 0.5 * p.norm_sq() + (params.e * params.e / 4.0) * norm_g_sq(params);
}

double tilde_l(const Momentum& p, const Vec3& k, const ModelParams& params) {
  return 0.5 * (p - k).norm_sq() + k.norm() +
         (params.e * params.e / 4.0) * norm_g_sq(params);
}

}  // namespace pfspec
