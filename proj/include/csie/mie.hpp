#pragma once

#include "csie/common.hpp"
#include "csie/excitation.hpp"
#include "csie/farfield.hpp"

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

namespace csie {

/// Plane-wave scattering by a PEC sphere of radius a centred at the origin.
/// Series coefficients use the Riccati-Bessel functions psi_n = x j_n(x),
/// xi_n = x h_n^(2)(x) appropriate for exp(+j omega t).
class MieReference {
public:
  MieReference(double radius, double k0, int terms = 0) : radius_(radius), k0_(k0) {
    if (!(radius > 0.0) || !(k0 > 0.0))
      throw ConfigError("Mie reference needs positive radius and wavenumber");
    const double x = k0 * radius;
    terms_ = terms > 0 ? terms : min_terms(x);
    if (terms_ < min_terms(x))
      throw ConfigError("Mie series truncated at " + std::to_string(terms_) + " terms; need at least " +
                        std::to_string(min_terms(x)) + " for ka = " + std::to_string(x));
    coefficients(x);
  }

  /// Truncation rule L = ceil(ka) + 10.
  static int min_terms(double ka) { return static_cast<int>(std::ceil(ka)) + 10; }

  double radius() const { return radius_; }
  double k0() const { return k0_; }
  double ka() const { return k0_ * radius_; }
  int terms() const { return terms_; }
  const std::vector<cplx> &a() const { return a_; }
  const std::vector<cplx> &b() const { return b_; }

  /// Scattering amplitudes S1, S2 at scattering angle theta (from the propagation
  /// direction). Far field in the local frame (z along k, x along E):
  ///   r E_theta = -j E0/k cos(phi) S2,  r E_phi = +j E0/k sin(phi) S1.
  std::pair<cplx, cplx> amplitudes(double theta) const {
    const double mu = std::cos(theta);
    double pi_prev = 0.0, pi_cur = 1.0;
    cplx s1 = 0.0, s2 = 0.0;
    for (int n = 1; n <= terms_; ++n) {
      double dn = n;
      double tau = dn * mu * pi_cur - (dn + 1.0) * pi_prev;
      double en = (2.0 * dn + 1.0) / (dn * (dn + 1.0));
      s1 += en * (a_[n] * pi_cur + b_[n] * tau);
      s2 += en * (a_[n] * tau + b_[n] * pi_cur);
      double pi_next = ((2.0 * dn + 1.0) * mu * pi_cur - (dn + 1.0) * pi_prev) / dn;
      pi_prev = pi_cur;
      pi_cur = pi_next;
    }
    return {s1, s2};
  }

  /// Scattered far field (r E, exp(-j k r) removed) for an arbitrary plane wave.
  CVec3 far_field(const Vec3 &rhat, const PlaneWave &wave) const {
    const Vec3 &z = wave.direction;
    const Vec3 &x = wave.polarization;
    const Vec3 y = z.cross(x);
    double lx = rhat.dot(x), ly = rhat.dot(y), lz = rhat.dot(z);
    double theta = std::acos(std::clamp(lz, -1.0, 1.0));
    double phi = std::atan2(ly, lx);
    auto [s1, s2] = amplitudes(theta);
    Vec3 th = std::cos(theta) * std::cos(phi) * x + std::cos(theta) * std::sin(phi) * y - std::sin(theta) * z;
    Vec3 ph = -std::sin(phi) * x + std::cos(phi) * y;
    const double scale = wave.amplitude / k0_;
    cplx et = -j_unit * scale * std::cos(phi) * s2;
    cplx ep = j_unit * scale * std::sin(phi) * s1;
    return th.cast<cplx>() * et + ph.cast<cplx>() * ep;
  }

  /// Backscatter RCS normalised by the geometric cross-section pi a^2.
  double backscatter_normalized() const {
    auto [s1, s2] = amplitudes(pi);
    (void)s2;
    return 4.0 * std::norm(s1) / (ka() * ka());
  }

private:
  void coefficients(double x) {
    a_.assign(terms_ + 1, 0.0);
    b_.assign(terms_ + 1, 0.0);
    // psi_n = x j_n, chi_n = x y_n, xi_n = psi_n - j chi_n; derivatives via f_{n-1} - n f_n / x
    auto psi = [x](int n) { return x * std::sph_bessel(static_cast<unsigned>(n), x); };
    auto chi = [x](int n) { return x * std::sph_neumann(static_cast<unsigned>(n), x); };
    for (int n = 1; n <= terms_; ++n) {
      double p = psi(n), dp = psi(n - 1) - n * p / x;
      double c = chi(n), dc = chi(n - 1) - n * c / x;
      cplx xi(p, -c), dxi(dp, -dc);
      a_[n] = dp / dxi;
      b_[n] = p / xi;
    }
  }

  double radius_;
  double k0_;
  int terms_ = 0;
  std::vector<cplx> a_, b_;
};

/// Mie far field on a direction list, with sigma filled in.
inline FarFieldPattern mie_bistatic(const MieReference &ref, const std::vector<Direction> &directions,
                                    const PlaneWave &wave) {
  FarFieldPattern pat;
  pat.directions = directions;
  pat.e_theta.resize(directions.size());
  pat.e_phi.resize(directions.size());
  for (std::size_t i = 0; i < directions.size(); ++i) {
    CVec3 e = ref.far_field(directions[i].rhat(), wave);
    pat.e_theta[i] = directions[i].theta_hat().cast<cplx>().dot(e);
    pat.e_phi[i] = directions[i].phi_hat().cast<cplx>().dot(e);
  }
  rcs(pat, wave);
  return pat;
}

// ---------------------------------------------------------------------------
// Interior resonances of a PEC spherical cavity of radius a (ka values).
//   TE_1: j_1(ka) = 0          TM_1: d/dx [x j_1(x)] = x j_0(x) - j_1(x) = 0

enum class CavityMode { lowest, lowest_te, lowest_tm };

inline double cavity_te_condition(double x) { return std::sph_bessel(1u, x); }
inline double cavity_tm_condition(double x) { return x * std::sph_bessel(0u, x) - std::sph_bessel(1u, x); }

namespace detail {

/// k-th positive root (k = 1, 2, ...) of f by scanning for sign changes and refining with TOMS 748.
template <class F>
double nth_root(F f, int k, double start = 0.5, double step = 0.05) {
  int found = 0;
  double lo = start, flo = f(lo);
  for (double hi = lo + step; hi < 200.0; lo = hi, hi += step) {
    double fhi = f(hi);
    if ((flo < 0.0) != (fhi < 0.0)) {
      if (++found == k) {
        std::uintmax_t iters = 200;
        auto [r0, r1] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi,
                                                           boost::math::tools::eps_tolerance<double>(52), iters);
        return 0.5 * (r0 + r1);
      }
    }
    flo = fhi;
  }
  throw std::runtime_error("cavity root not bracketed");
}

} // namespace detail

/// ka of a PEC spherical-cavity resonance of the dipole (n = 1) families.
/// `order` selects the k-th root of the TE or TM condition; `lowest` is the
/// smaller of the two first roots and accepts order 1 only.
inline double sphere_cavity_resonance(CavityMode mode = CavityMode::lowest, int order = 1) {
  if (order < 1)
    throw ConfigError("cavity resonance order starts at 1");
  switch (mode) {
  case CavityMode::lowest_te:
    return detail::nth_root(cavity_te_condition, order);
  case CavityMode::lowest_tm:
    return detail::nth_root(cavity_tm_condition, order);
  case CavityMode::lowest:
    break;
  }
  if (order != 1)
    throw ConfigError("CavityMode::lowest only defines the first resonance");
  return std::min(detail::nth_root(cavity_te_condition, 1), detail::nth_root(cavity_tm_condition, 1));
}

} // namespace csie
