#pragma once

#include "csie/assembly.hpp"
#include "csie/common.hpp"
#include "csie/excitation.hpp"

#include <string>

namespace csie {

enum class FormulationKind { efie, mfie, cfie, csie };

inline const char *to_string(FormulationKind k) {
  switch (k) {
  case FormulationKind::efie:
    return "efie";
  case FormulationKind::mfie:
    return "mfie";
  case FormulationKind::cfie:
    return "cfie";
  case FormulationKind::csie:
    return "csie";
  }
  return "?";
}

inline FormulationKind parse_formulation(const std::string &s) {
  if (s == "efie")
    return FormulationKind::efie;
  if (s == "mfie")
    return FormulationKind::mfie;
  if (s == "cfie")
    return FormulationKind::cfie;
  if (s == "csie")
    return FormulationKind::csie;
  throw ConfigError("unknown formulation '" + s + "' (expected efie, mfie, cfie or csie)");
}

struct Formulation {
  FormulationKind kind = FormulationKind::efie;
  /// Combined-source weight, csie only: M = alpha Z0 (n x J).
  double alpha = 1.0;
  /// EFIE share of the CFIE row combination, cfie only.
  double cfie_beta = 0.5;

  static Formulation efie() { return {FormulationKind::efie, 0.0, 0.0}; }
  static Formulation mfie() { return {FormulationKind::mfie, 0.0, 0.0}; }
  static Formulation cfie(double beta) { return {FormulationKind::cfie, 0.0, beta}; }
  static Formulation csie(double alpha) { return {FormulationKind::csie, alpha, 0.0}; }

  void validate() const {
    if (kind == FormulationKind::cfie && !(cfie_beta >= 0.0 && cfie_beta <= 1.0))
      throw ConfigError("cfie_beta must lie in [0, 1]");
    if (kind == FormulationKind::csie && !(alpha > 0.0))
      throw ConfigError("csie alpha must be positive (non-positive values do not give outward-radiating combined sources)");
  }

  unsigned required_blocks() const {
    switch (kind) {
    case FormulationKind::efie:
      return block_B | block_C;
    case FormulationKind::mfie:
      return block_K;
    case FormulationKind::cfie:
      return block_B | block_C | block_K;
    case FormulationKind::csie:
      return block_B | block_C | block_D;
    }
    return block_all;
  }
};

/// Dense moment-method system. EFIE, MFIE and CFIE use only `z11` (N x N).
/// The CSIE is the 2N x 2N block system
///
///   [ j k0 Z0 (B + C/k0^2)    Z0 (A/2 + D) ] [ I ]   [ G^E ]
///   [ alpha Z0 A              Z0 A'        ] [ W ] = [  0  ]
///
/// with the magnetic unknowns scaled as W = V / Z0. The first row is the
/// n x RWG tested EFIE with both current types; the second is the weak
/// combined-source condition A' V + alpha Z0 A I = 0 multiplied by Z0.
struct LinearSystem {
  Formulation formulation;
  int n = 0; // RWG functions
  ComplexMatrix z11, z12, z21, z22;
  ComplexVector rhs;

  int dimension() const { return formulation.kind == FormulationKind::csie ? 2 * n : n; }
  bool blocked() const { return formulation.kind == FormulationKind::csie; }

  /// Monolithic copy of the system matrix.
  ComplexMatrix dense() const {
    if (!blocked())
      return z11;
    ComplexMatrix m(2 * n, 2 * n);
    m << z11, z12, z21, z22;
    return m;
  }

  ComplexVector diagonal() const {
    if (!blocked())
      return z11.diagonal();
    ComplexVector d(2 * n);
    d << z11.diagonal(), z22.diagonal();
    return d;
  }
};

/// Blockwise product y = M x.
inline ComplexVector matvec(const LinearSystem &sys, const ComplexVector &x) {
  if (x.size() != sys.dimension())
    throw ContractViolation("matvec: vector length " + std::to_string(x.size()) + " does not match system dimension " +
                            std::to_string(sys.dimension()));
  if (!sys.blocked())
    return sys.z11 * x;
  const int n = sys.n;
  ComplexVector y(2 * n);
  y.head(n).noalias() = sys.z11 * x.head(n);
  y.head(n).noalias() += sys.z12 * x.tail(n);
  y.tail(n).noalias() = sys.z21 * x.head(n);
  y.tail(n).noalias() += sys.z22 * x.tail(n);
  return y;
}

/// Compose the formulation from assembled blocks and tested excitations.
/// `rhs_e` is <beta_m, E_inc>, `rhs_h` is <beta_m, n x H_inc>.
inline LinearSystem build_system(const SystemBlocks &blocks, const ComplexVector &rhs_e, const ComplexVector &rhs_h,
                                 const Formulation &f) {
  f.validate();
  LinearSystem sys;
  sys.formulation = f;
  const double k0 = blocks.k0;
  const cplx efie_scale = j_unit * k0 * Z0;

  auto efie = [&] {
    if (!(k0 > 0.0))
      throw ConfigError("driven formulations need k0 > 0");
    return ComplexMatrix(efie_scale * (blocks.B + blocks.C / (k0 * k0)));
  };
  auto mfie = [&] { return ComplexMatrix(0.5 * blocks.Aprime.cast<cplx>() + blocks.K); };

  switch (f.kind) {
  case FormulationKind::efie:
    sys.z11 = efie();
    sys.rhs = rhs_e;
    break;
  case FormulationKind::mfie:
    sys.z11 = mfie();
    sys.rhs = rhs_h;
    break;
  case FormulationKind::cfie: {
    const double b = f.cfie_beta;
    if (b == 1.0) {
      sys.z11 = efie();
      sys.rhs = rhs_e;
    } else {
      sys.z11 = b * efie() + ((1.0 - b) * Z0) * mfie();
      sys.rhs = b * rhs_e + ((1.0 - b) * Z0) * rhs_h;
    }
    break;
  }
  case FormulationKind::csie:
    sys.z11 = efie();
    sys.z12 = Z0 * (0.5 * blocks.A.cast<cplx>() + blocks.D);
    sys.z21 = (f.alpha * Z0) * blocks.A.cast<cplx>();
    sys.z22 = Z0 * blocks.Aprime.cast<cplx>();
    sys.rhs.resize(2 * rhs_e.size());
    sys.rhs << rhs_e, ComplexVector::Zero(rhs_e.size());
    break;
  }
  sys.n = static_cast<int>(sys.z11.rows());
  return sys;
}

/// Assemble only the blocks the formulation needs and compose the system.
inline LinearSystem build_system(const RwgSpace &space, const KernelEvaluator &eval, const PlaneWave &wave,
                                 const Formulation &f, const AssemblyOptions &opts = {}) {
  f.validate();
  auto blocks = assemble_kernel_blocks(space, eval, opts, f.required_blocks());
  if (f.kind == FormulationKind::csie)
    blocks.A = assemble_gram_A(space);
  if (f.kind != FormulationKind::efie)
    blocks.Aprime = assemble_gram_Aprime(space);
  ComplexVector rhs_e = assemble_rhs(space, wave, opts.quad_obs);
  ComplexVector rhs_h = f.kind == FormulationKind::mfie || f.kind == FormulationKind::cfie
                            ? assemble_rhs_mfie(space, wave, opts.quad_obs)
                            : ComplexVector::Zero(space.size());
  return build_system(blocks, rhs_e, rhs_h, f);
}

/// Expansion coefficients of J = sum I_n beta_n and M = sum V_n beta_n.
struct SolutionCoefficients {
  ComplexVector I;
  ComplexVector V; // zero for EFIE, MFIE, CFIE
};

/// Split a solved system vector into physical coefficients (undoing W = V/Z0).
inline SolutionCoefficients unpack_solution(const LinearSystem &sys, const ComplexVector &x) {
  if (x.size() != sys.dimension())
    throw ContractViolation("solution length does not match system dimension");
  SolutionCoefficients s;
  s.I = x.head(sys.n);
  s.V = sys.blocked() ? ComplexVector(Z0 * x.tail(sys.n)) : ComplexVector::Zero(sys.n);
  return s;
}

} // namespace csie
