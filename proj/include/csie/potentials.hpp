#pragma once

#include "csie/common.hpp"

#include <algorithm>
#include <cmath>

namespace csie {

/// Closed-form static potential integrals over a flat triangle (a, b, c),
/// evaluated at an arbitrary observation point r:
///   scalar   = iint_T 1/R ds'
///   vector   = iint_T (r' - rho)/R ds'     (rho: projection of r on the plane)
///   gradient = grad_r iint_T 1/R ds'        (principal value in the plane)
/// The 1/(4 pi) factor is not included. Edge contributions follow the standard
/// line-integral reduction of the surface integrals.
struct StaticPotentials {
  double scalar = 0.0;
  Vec3 vector = Vec3::Zero();
  Vec3 gradient = Vec3::Zero();
  Vec3 projection = Vec3::Zero();
};

inline StaticPotentials static_potentials(const Vec3 &a, const Vec3 &b, const Vec3 &c, const Vec3 &r) {
  const Vec3 *v[3] = {&a, &b, &c};
  Vec3 nrm = (b - a).cross(c - a);
  nrm.normalize();
  double d = nrm.dot(r - a);
  Vec3 rho = r - d * nrm;
  double ad = std::abs(d);
  double scale = std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
  double tiny = 1e-13 * scale;
  double sgn = ad > tiny ? (d > 0.0 ? 1.0 : -1.0) : 0.0;

  StaticPotentials out;
  out.projection = rho;
  double solid = 0.0;
  for (int i = 0; i < 3; ++i) {
    const Vec3 &p0 = *v[i];
    const Vec3 &p1 = *v[(i + 1) % 3];
    Vec3 edge = p1 - p0;
    double len = edge.norm();
    Vec3 lhat = edge / len;
    Vec3 uhat = lhat.cross(nrm); // outward in-plane edge normal
    double lp = (p1 - r).dot(lhat);
    double lm = (p0 - r).dot(lhat);
    double p = (p0 - rho).dot(uhat);
    double R0sq = p * p + d * d;
    double Rp = (p1 - r).norm();
    double Rm = (p0 - r).norm();

    // f = ln((Rp + lp)/(Rm + lm)) = integral of 1/R along the edge.
    double f;
    if (std::sqrt(R0sq) < tiny) {
      // r on the edge line: only finite if outside the segment
      f = (lm > 0.0 || lp < 0.0) ? std::log(std::max(Rp, Rm) / std::min(Rp, Rm)) : 0.0;
    } else if (lm >= 0.0) {
      f = std::log((Rp + lp) / (Rm + lm));
    } else if (lp <= 0.0) {
      f = std::log((Rm - lm) / (Rp - lp));
    } else {
      f = std::log((Rp + lp) * (Rm - lm) / R0sq);
    }

    double beta = 0.0;
    if (std::abs(p) > tiny)
      beta = std::atan(p * lp / (R0sq + ad * Rp)) - std::atan(p * lm / (R0sq + ad * Rm));

    out.scalar += p * f;
    solid += beta;
    out.vector += 0.5 * uhat * (R0sq * f + lp * Rp - lm * Rm);
    out.gradient -= uhat * f;
  }
  out.scalar -= ad * solid;
  out.gradient -= nrm * (sgn * solid);
  return out;
}

/// iint_T 1/(4 pi R) ds'.
inline double singular_static_potential(const Vec3 &a, const Vec3 &b, const Vec3 &c, const Vec3 &r) {
  return static_potentials(a, b, c, r).scalar / (4.0 * pi);
}

/// iint_T (r' - p)/(4 pi R) ds' for an arbitrary reference point p.
inline Vec3 singular_static_vector_potential(const Vec3 &a, const Vec3 &b, const Vec3 &c, const Vec3 &r,
                                             const Vec3 &p) {
  auto s = static_potentials(a, b, c, r);
  return (s.vector + (s.projection - p) * s.scalar) / (4.0 * pi);
}

} // namespace csie
