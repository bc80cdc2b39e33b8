#pragma once

#include "csie/common.hpp"
#include "csie/excitation.hpp"
#include "csie/quadrature.hpp"
#include "csie/rwg.hpp"
#include "csie/system.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace csie {

inline constexpr double db_floor = -300.0;

inline double to_db20(double x) { return x > 0.0 ? std::max(db_floor, 20.0 * std::log10(x)) : db_floor; }
inline double to_db10(double x) { return x > 0.0 ? std::max(db_floor, 10.0 * std::log10(x)) : db_floor; }
inline double deg2rad(double d) { return d * pi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / pi; }

/// Observation direction. Angles follow the usual spherical formulas but theta
/// may run over [0, 2 pi] so that a fixed-phi cut is one continuous great
/// circle; the unit vectors below are used consistently for every pattern.
struct Direction {
  double theta = 0.0;
  double phi = 0.0;

  Vec3 rhat() const {
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
  }
  Vec3 theta_hat() const {
    return {std::cos(theta) * std::cos(phi), std::cos(theta) * std::sin(phi), -std::sin(theta)};
  }
  Vec3 phi_hat() const { return {-std::sin(phi), std::cos(phi), 0.0}; }
};

/// Full 360-degree cut at 1/step resolution, endpoints included.
enum class CutAxis { fixed_phi, fixed_theta };

struct CutSpec {
  CutAxis axis = CutAxis::fixed_phi;
  double fixed_deg = 0.0;
  double step_deg = 1.0;

  std::vector<Direction> directions() const {
    if (!(step_deg > 0.0))
      throw ConfigError("cut step must be positive");
    const int count = static_cast<int>(std::floor(360.0 / step_deg + 1e-9)) + 1;
    std::vector<Direction> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
      double sweep = deg2rad(i * step_deg);
      if (axis == CutAxis::fixed_phi)
        out.push_back({sweep, deg2rad(fixed_deg)});
      else
        out.push_back({deg2rad(fixed_deg), sweep});
    }
    return out;
  }

  std::string to_string() const {
    std::ostringstream os;
    os << (axis == CutAxis::fixed_phi ? "phi=" : "theta=") << fixed_deg;
    return os.str();
  }
};

/// Parse "phi=90" or "theta=90".
inline CutSpec parse_cut(const std::string &text, double step_deg = 1.0) {
  auto eq = text.find('=');
  if (eq == std::string::npos)
    throw ConfigError("cut must look like phi=<deg> or theta=<deg>, got '" + text + "'");
  std::string key = text.substr(0, eq);
  CutSpec c;
  c.step_deg = step_deg;
  if (key == "phi")
    c.axis = CutAxis::fixed_phi;
  else if (key == "theta")
    c.axis = CutAxis::fixed_theta;
  else
    throw ConfigError("cut axis must be phi or theta, got '" + key + "'");
  try {
    c.fixed_deg = std::stod(text.substr(eq + 1));
  } catch (const std::exception &) {
    throw ConfigError("cut angle is not a number in '" + text + "'");
  }
  return c;
}

/// Far field r E(r) with exp(-j k0 r) removed, sampled on a direction list.
struct FarFieldPattern {
  std::vector<Direction> directions;
  std::vector<cplx> e_theta;
  std::vector<cplx> e_phi;
  std::vector<double> sigma; // m^2, filled by rcs()

  std::size_t size() const { return directions.size(); }
};

/// Radiation integrals of J = sum I beta and M = sum V beta:
///   r E = -j k0 / (4 pi) [ Z0 N_J,perp - rhat x N_M ],  N = iint X(r') exp(j k0 rhat . r') ds'.
inline FarFieldPattern far_field(const RwgSpace &space, double k0, const SolutionCoefficients &sol,
                                 const std::vector<Direction> &directions, int quad_order = 5) {
  const int n = space.size();
  if (sol.I.size() != n || (sol.V.size() != 0 && sol.V.size() != n))
    throw ContractViolation("far_field: coefficient lengths do not match the RWG space");
  const auto &mesh = space.mesh();
  auto rule = triangle_rule(quad_order);
  const int nt = static_cast<int>(mesh.num_triangles());
  const bool has_m = sol.V.size() == n && sol.V.cwiseAbs().maxCoeff() > 0.0;

  // Current densities at every quadrature point, computed once.
  std::vector<Vec3> pts;
  std::vector<CVec3> jw, mw;
  pts.reserve(nt * rule.size());
  for (int t = 0; t < nt; ++t) {
    auto tp = rule.map(mesh.corner(t, 0), mesh.corner(t, 1), mesh.corner(t, 2));
    for (std::size_t q = 0; q < tp.size(); ++q) {
      CVec3 jv = CVec3::Zero(), mv = CVec3::Zero();
      for (const auto &b : space.local(t)) {
        if (b.index < 0)
          continue;
        CVec3 f = (b.coef * (tp[q] - b.free_vertex)).cast<cplx>();
        jv += sol.I(b.index) * f;
        if (has_m)
          mv += sol.V(b.index) * f;
      }
      double w = rule.weights[q] * mesh.area(t);
      pts.push_back(tp[q]);
      jw.push_back(jv * w);
      mw.push_back(mv * w);
    }
  }

  FarFieldPattern pat;
  pat.directions = directions;
  pat.e_theta.resize(directions.size());
  pat.e_phi.resize(directions.size());
  const cplx pref = -j_unit * k0 / (4.0 * pi);
  for (std::size_t d = 0; d < directions.size(); ++d) {
    const Vec3 rh = directions[d].rhat();
    CVec3 nj = CVec3::Zero(), nm = CVec3::Zero();
    for (std::size_t p = 0; p < pts.size(); ++p) {
      cplx ph = std::polar(1.0, k0 * rh.dot(pts[p]));
      nj += jw[p] * ph;
      if (has_m)
        nm += mw[p] * ph;
    }
    CVec3 e = pref * (Z0 * nj - cross(rh.cast<cplx>(), nm));
    // transverse projection; the radial part of Z0 N_J is discarded
    pat.e_theta[d] = directions[d].theta_hat().cast<cplx>().dot(e);
    pat.e_phi[d] = directions[d].phi_hat().cast<cplx>().dot(e);
  }
  return pat;
}

/// Bistatic RCS sigma = 4 pi (|E_theta|^2 + |E_phi|^2) / |E0|^2, stored in the pattern.
inline std::vector<double> rcs(FarFieldPattern &pattern, const PlaneWave &wave) {
  if (wave.amplitude == 0.0)
    throw ContractViolation("rcs: incident amplitude is zero");
  const double e0sq = wave.amplitude * wave.amplitude;
  pattern.sigma.resize(pattern.size());
  for (std::size_t i = 0; i < pattern.size(); ++i)
    pattern.sigma[i] = 4.0 * pi * (std::norm(pattern.e_theta[i]) + std::norm(pattern.e_phi[i])) / e0sq;
  return pattern.sigma;
}

/// Per-direction error relative to the global peak of the reference:
///   eps_i = |E_i,ref - E_i| / max over samples of max(|E_theta,ref|, |E_phi,ref|).
struct ErrorMetric {
  std::vector<double> eps_theta;
  std::vector<double> eps_phi;
  double normalizer = 0.0;

  double max_theta() const { return eps_theta.empty() ? 0.0 : *std::max_element(eps_theta.begin(), eps_theta.end()); }
  double max_phi() const { return eps_phi.empty() ? 0.0 : *std::max_element(eps_phi.begin(), eps_phi.end()); }
  double max() const { return std::max(max_theta(), max_phi()); }
  double max_db() const { return to_db20(max()); }

  /// Root mean square over all samples and both components.
  double rms() const {
    double s = 0.0;
    for (double e : eps_theta)
      s += e * e;
    for (double e : eps_phi)
      s += e * e;
    std::size_t count = eps_theta.size() + eps_phi.size();
    return count ? std::sqrt(s / static_cast<double>(count)) : 0.0;
  }
  double rms_db() const { return to_db20(rms()); }
};

inline void require_same_grid(const FarFieldPattern &a, const FarFieldPattern &b) {
  if (a.size() != b.size())
    throw ContractViolation("pattern grids differ in length");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a.directions[i].theta - b.directions[i].theta) > 1e-9 ||
        std::abs(a.directions[i].phi - b.directions[i].phi) > 1e-9)
      throw ContractViolation("pattern grids differ at sample " + std::to_string(i));
}

inline ErrorMetric error_metric(const FarFieldPattern &pattern, const FarFieldPattern &reference) {
  require_same_grid(pattern, reference);
  ErrorMetric m;
  for (std::size_t i = 0; i < reference.size(); ++i)
    m.normalizer = std::max({m.normalizer, std::abs(reference.e_theta[i]), std::abs(reference.e_phi[i])});
  if (m.normalizer == 0.0)
    throw ContractViolation("error_metric: reference pattern is identically zero");
  m.eps_theta.resize(reference.size());
  m.eps_phi.resize(reference.size());
  for (std::size_t i = 0; i < reference.size(); ++i) {
    m.eps_theta[i] = std::abs(reference.e_theta[i] - pattern.e_theta[i]) / m.normalizer;
    m.eps_phi[i] = std::abs(reference.e_phi[i] - pattern.e_phi[i]) / m.normalizer;
  }
  return m;
}

/// RMS of the dB difference of two RCS curves (sigma must be filled).
inline double rcs_rms_db_difference(const FarFieldPattern &a, const FarFieldPattern &b) {
  require_same_grid(a, b);
  if (a.sigma.size() != a.size() || b.sigma.size() != b.size())
    throw ContractViolation("rcs values missing; call rcs() first");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = to_db10(a.sigma[i]) - to_db10(b.sigma[i]);
    s += d * d;
  }
  return std::sqrt(s / static_cast<double>(a.size()));
}

// ---------------------------------------------------------------------------
// Pattern CSV: theta_deg,phi_deg,sigma_dbsm,etheta_re,etheta_im,ephi_re,ephi_im

inline constexpr const char *pattern_csv_header = "theta_deg,phi_deg,sigma_dbsm,etheta_re,etheta_im,ephi_re,ephi_im";

inline void write_pattern_csv(std::ostream &os, const FarFieldPattern &p) {
  os << pattern_csv_header << '\n';
  os << std::setprecision(17);
  for (std::size_t i = 0; i < p.size(); ++i) {
    double sigma = i < p.sigma.size() ? p.sigma[i] : 0.0;
    os << rad2deg(p.directions[i].theta) << ',' << rad2deg(p.directions[i].phi) << ',' << to_db10(sigma) << ','
       << p.e_theta[i].real() << ',' << p.e_theta[i].imag() << ',' << p.e_phi[i].real() << ','
       << p.e_phi[i].imag() << '\n';
  }
}

inline FarFieldPattern read_pattern_csv(std::istream &in) {
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line))
    throw FormatError("empty pattern file", 1);
  ++line_no;
  if (!line.empty() && line.back() == '\r')
    line.pop_back();
  if (line != pattern_csv_header)
    throw FormatError("unexpected pattern CSV header '" + line + "'", line_no);
  FarFieldPattern p;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty())
      continue;
    std::istringstream ls(line);
    double v[7];
    char sep;
    for (int k = 0; k < 7; ++k) {
      if (!(ls >> v[k]))
        throw FormatError("malformed pattern row", line_no);
      if (k < 6 && !(ls >> sep && sep == ','))
        throw FormatError("malformed pattern row", line_no);
    }
    p.directions.push_back({deg2rad(v[0]), deg2rad(v[1])});
    p.sigma.push_back(v[2] <= db_floor ? 0.0 : std::pow(10.0, v[2] / 10.0));
    p.e_theta.emplace_back(v[3], v[4]);
    p.e_phi.emplace_back(v[5], v[6]);
  }
  return p;
}

inline void save_pattern_csv(const std::string &path, const FarFieldPattern &p) {
  std::ofstream os(path);
  if (!os)
    throw std::runtime_error("cannot write '" + path + "'");
  write_pattern_csv(os, p);
}

inline FarFieldPattern load_pattern_csv(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw FormatError("cannot open pattern file '" + path + "'", 0);
  return read_pattern_csv(in);
}

} // namespace csie
