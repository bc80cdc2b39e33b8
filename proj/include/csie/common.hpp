#pragma once

#include <Eigen/Dense>

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace csie {

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;
using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx j_unit{0.0, 1.0};

/// Speed of light in vacuum (m/s).
inline constexpr double c0 = 299792458.0;
/// Vacuum permeability (H/m), CODATA 2018.
inline constexpr double mu0 = 1.25663706212e-6;
/// Free-space wave impedance (Ohm).
inline constexpr double Z0 = mu0 * c0;

/// Bilinear cross product of complex vectors (Eigen's cross() conjugates).
inline CVec3 cross(const CVec3 &a, const CVec3 &b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline double wavenumber_from_frequency(double freq_hz) { return 2.0 * pi * freq_hz / c0; }

// Error taxonomy. Each module throws the narrowest one that applies.

/// Malformed input file; carries the 1-based line number where parsing failed.
class FormatError : public std::runtime_error {
public:
  FormatError(const std::string &what, int line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  int line() const noexcept { return line_; }

private:
  int line_;
};

/// Geometry that cannot be discretized (degenerate triangles, open surfaces).
class GeometryError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Evaluation point outside the support of a function or a kernel singularity.
class DomainError : public std::domain_error {
  using std::domain_error::domain_error;
};

/// Invalid user-facing configuration value.
class ConfigError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Caller broke a documented precondition (mismatched sizes, zero normalizer).
class ContractViolation : public std::logic_error {
  using std::logic_error::logic_error;
};

} // namespace csie
