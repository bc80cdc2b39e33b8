#pragma once

#include "csie/common.hpp"

#include <cmath>

namespace csie {

/// Free-space Helmholtz kernel under the exp(+j omega t) convention:
///   G(r, r') = exp(-j k R) / (4 pi R),  R = |r - r'|.
/// k0 = 0 gives the static kernel and is meant for tests.
class KernelEvaluator {
public:
  static constexpr double min_distance = 1e-15;

  explicit KernelEvaluator(double k0) : k0_(k0) {
    if (!(k0 >= 0.0) || !std::isfinite(k0))
      throw ConfigError("wavenumber must be finite and non-negative");
  }

  double k0() const { return k0_; }

  cplx green(const Vec3 &r, const Vec3 &rp) const {
    double R = (r - rp).norm();
    if (R < min_distance)
      throw DomainError("Green's function evaluated at coincident points");
    return std::polar(1.0 / (4.0 * pi * R), -k0_ * R);
  }

  /// Gradient with respect to r: -(1 + j k R) exp(-j k R) / (4 pi R^2) * Rhat.
  CVec3 grad_green(const Vec3 &r, const Vec3 &rp) const {
    Vec3 d = r - rp;
    double R = d.norm();
    if (R < min_distance)
      throw DomainError("Green's function gradient evaluated at coincident points");
    cplx f = -(1.0 + j_unit * (k0_ * R)) * std::polar(1.0 / (4.0 * pi * R * R * R), -k0_ * R);
    return d.cast<cplx>() * f;
  }

  /// G - 1/(4 pi R), bounded as R -> 0 with limit -j k / (4 pi).
  cplx green_smooth(double R) const {
    double x = k0_ * R;
    if (x < 1e-12)
      return -j_unit * k0_ / (4.0 * pi);
    double s = std::sin(0.5 * x);
    // exp(-jx) - 1 = -2 sin^2(x/2) - j sin(x), free of cancellation
    return cplx(-2.0 * s * s, -std::sin(x)) / (4.0 * pi * R);
  }

  /// Scalar factor f such that grad G - grad(1/(4 pi R)) = f * (r - r').
  /// Bounded in magnitude times R; zero at R = 0 where the direction is undefined.
  cplx grad_green_smooth_factor(double R) const {
    double x = k0_ * R;
    if (R < min_distance || x == 0.0)
      return 0.0;
    cplx num; // 1 - (1 + jx) exp(-jx)
    if (x < 1e-2) {
      double x2 = x * x;
      num = cplx(-0.5 * x2 + x2 * x2 / 8.0 - x2 * x2 * x2 / 144.0, x2 * x / 3.0 - x2 * x2 * x / 30.0);
    } else {
      double s = std::sin(0.5 * x);
      num = cplx(2.0 * s * s - x * std::sin(x), std::sin(x) - x * std::cos(x));
    }
    return num / (4.0 * pi * R * R * R);
  }

private:
  double k0_;
};

} // namespace csie
