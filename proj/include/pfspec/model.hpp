#pragma once

#include <utility>

#include "pfspec/vec3.hpp"

// Physical model: coupling function, polarization gauge, essential-spectrum
// edge and the diagonal symbols of the fiber operator. Natural units m = c = 1.

namespace pfspec {

using Momentum = Vec3;

struct ModelParams {
  double e = 1.0;       // coupling constant
  double R = 1.0;       // ultraviolet cutoff radius, > 0
  double sigma = 0.0;   // infrared parameter, in [0, 1/2)
  double gamma0 = 0.0;  // energy shift, >= 0

  void validate() const;

  // gamma0 tied to the diagonal shift: gamma0 = (e^2/4)*||G||^2 exactly.
  static ModelParams with_default_gamma0(double e, double R, double sigma);
};

struct PhotonMode {
  Vec3 k;
  int lambda = 1;  // polarization index, 1 or 2
};

// g(k) = |k|^(sigma-1/2) for 0 < |k| <= R, 0 outside the cutoff.
// |k| = 0 is a genuine singular point: domain error.
double coupling_g(const Vec3& k, const ModelParams& params);

// Orthonormal transversal pair e(k,1), e(k,2); deterministic gauge:
// e1 = normalize(khat x zhat), e2 = khat x e1, with xhat as fallback axis
// when k is (nearly) parallel to zhat. k = 0 is a domain error.
std::pair<Vec3, Vec3> polarization(const Vec3& k);

// G(k,lambda) = e(k,lambda) g(k)
Vec3 coupling_G(const Vec3& k, int lambda, const ModelParams& params);

// ||G||^2 = 4 pi R^(2+2sigma) / (1+sigma)
double norm_g_sq(const ModelParams& params);

// pi e^2 R^(2+2sigma) / (1+sigma), equal to (e^2/4)*norm_g_sq.
double default_gamma0(double e, double R, double sigma);

// Bottom of the essential spectrum:
//   z0(|p|) = p^2/2 + gamma0         for |p| <= 1
//           = |p| - 1/2 + gamma0     for |p| > 1
double z0(double p_abs, const ModelParams& params);

// Diagonal symbols of the fiber operator (shift is (e^2/4)||G||^2, which
// equals gamma0 only for the default choice).
double tilde_t(const Momentum& p, const ModelParams& params);
double tilde_l(const Momentum& p, const Vec3& k, const ModelParams& params);

}  // namespace pfspec
