#pragma once

#include "csie/common.hpp"
#include "csie/quadrature.hpp"
#include "csie/rwg.hpp"

#include <cmath>

namespace csie {

/// E_inc(r) = E0 * e * exp(-j k0 khat . r),  H_inc = khat x E_inc / Z0.
struct PlaneWave {
  Vec3 direction = Vec3::UnitZ();
  Vec3 polarization = Vec3::UnitX();
  double amplitude = 1.0;
  double k0 = 1.0;

  PlaneWave() = default;
  PlaneWave(Vec3 khat, Vec3 ehat, double e0, double wavenumber)
      : direction(std::move(khat)), polarization(std::move(ehat)), amplitude(e0), k0(wavenumber) {
    validate();
  }

  void validate() const {
    if (std::abs(direction.norm() - 1.0) > 1e-12 || std::abs(polarization.norm() - 1.0) > 1e-12)
      throw ConfigError("plane-wave direction and polarization must be unit vectors");
    if (std::abs(direction.dot(polarization)) > 1e-12)
      throw ConfigError("plane-wave polarization must be orthogonal to the propagation direction");
    if (!(k0 > 0.0))
      throw ConfigError("plane-wave wavenumber must be positive");
  }

  CVec3 e_field(const Vec3 &r) const {
    return polarization.cast<cplx>() * std::polar(amplitude, -k0 * direction.dot(r));
  }
  CVec3 h_field(const Vec3 &r) const {
    return direction.cross(polarization).cast<cplx>() * (std::polar(amplitude, -k0 * direction.dot(r)) / Z0);
  }
};

/// G^E_m = iint (n x beta_m) . (n x E_inc) ds = iint beta_m . E_inc ds.
inline ComplexVector assemble_rhs(const RwgSpace &space, const PlaneWave &wave, int quad_order = 3) {
  const auto &mesh = space.mesh();
  auto rule = triangle_rule(quad_order);
  ComplexVector rhs = ComplexVector::Zero(space.size());
  for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t) {
    auto pts = rule.map(mesh.corner(t, 0), mesh.corner(t, 1), mesh.corner(t, 2));
    for (std::size_t q = 0; q < pts.size(); ++q) {
      CVec3 e = wave.e_field(pts[q]) * (rule.weights[q] * mesh.area(t));
      for (const auto &b : space.local(t))
        if (b.index >= 0)
          rhs(b.index) += (b.coef * (pts[q] - b.free_vertex)).cast<cplx>().dot(e);
    }
  }
  return rhs;
}

/// iint beta_m . (n x H_inc) ds, the tested MFIE excitation.
inline ComplexVector assemble_rhs_mfie(const RwgSpace &space, const PlaneWave &wave, int quad_order = 3) {
  const auto &mesh = space.mesh();
  auto rule = triangle_rule(quad_order);
  ComplexVector rhs = ComplexVector::Zero(space.size());
  for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t) {
    auto pts = rule.map(mesh.corner(t, 0), mesh.corner(t, 1), mesh.corner(t, 2));
    CVec3 nrm = mesh.normal(t).cast<cplx>();
    for (std::size_t q = 0; q < pts.size(); ++q) {
      CVec3 nh = cross(nrm, wave.h_field(pts[q])) * (rule.weights[q] * mesh.area(t));
      for (const auto &b : space.local(t))
        if (b.index >= 0)
          rhs(b.index) += (b.coef * (pts[q] - b.free_vertex)).cast<cplx>().dot(nh);
    }
  }
  return rhs;
}

} // namespace csie
