#pragma once

#include "csie/common.hpp"
#include "csie/system.hpp"

#include <chrono>
#include <cmath>
#include <ostream>
#include <vector>

namespace csie {

struct SolverConfig {
  double tolerance = 1e-4; // relative residual ||b - Mx|| / ||b||
  int restart = 200;
  int max_iterations = 5000;
  /// Right Jacobi scaling: solve (M D^-1) y = b, x = D^-1 y. Right scaling
  /// leaves the minimised residual equal to the true residual.
  bool diagonal_scaling = true;
  /// CSIE only: eliminate the magnetic unknowns through the Gram block and
  /// iterate on I alone. W = -Z22^-1 Z21 I is recovered with a Cholesky
  /// solve, so the residual of the reduced system equals the full residual.
  bool eliminate_magnetic = true;

  void validate() const {
    if (!(tolerance > 0.0 && tolerance < 1.0))
      throw ConfigError("solver tolerance must lie in (0, 1)");
    if (restart < 1)
      throw ConfigError("GMRES restart length must be at least 1");
    if (max_iterations < 1)
      throw ConfigError("max_iterations must be at least 1");
  }
};

struct SolveReport {
  int iterations = 0;
  /// Relative residual after each inner iteration.
  std::vector<double> residual_history;
  bool converged = false;
  /// Krylov space became invariant without reaching the tolerance.
  bool breakdown = false;
  double final_residual = 1.0;
  double wall_seconds = 0.0;
};

/// Convergence log as "iter,residual" CSV lines.
inline void write_convergence_csv(std::ostream &os, const SolveReport &rep) {
  os << "iter,residual\n";
  os.precision(10);
  for (std::size_t i = 0; i < rep.residual_history.size(); ++i)
    os << i + 1 << ',' << rep.residual_history[i] << '\n';
}

/// Restarted GMRES for a general complex operator `apply(x) -> M x`.
/// Modified Gram-Schmidt with a second pass when the new direction keeps more
/// than 1e-8 of its norm along the existing basis. `x` holds the initial guess
/// on entry and the solution on exit.
template <class Apply>
SolveReport gmres(Apply &&apply, const ComplexVector &b, ComplexVector &x, const SolverConfig &cfg,
                  const ComplexVector *diagonal = nullptr) {
  cfg.validate();
  using clock = std::chrono::steady_clock;
  auto t0 = clock::now();
  const Eigen::Index n = b.size();
  if (x.size() != n)
    x = ComplexVector::Zero(n);

  SolveReport rep;
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    x.setZero();
    rep.converged = true;
    rep.final_residual = 0.0;
    return rep;
  }

  ComplexVector inv_diag;
  if (diagonal) {
    inv_diag.resize(n);
    for (Eigen::Index i = 0; i < n; ++i)
      inv_diag(i) = std::abs((*diagonal)(i)) > 0.0 ? 1.0 / (*diagonal)(i) : cplx(1.0);
  }
  auto precond = [&](const ComplexVector &v) -> ComplexVector {
    return diagonal ? ComplexVector(inv_diag.cwiseProduct(v)) : v;
  };

  const int m = std::min<int>(cfg.restart, static_cast<int>(n));
  std::vector<ComplexVector> basis(m + 1);
  ComplexMatrix H = ComplexMatrix::Zero(m + 1, m);
  std::vector<cplx> cs(m), sn(m);
  ComplexVector g(m + 1);

  ComplexVector r = b - apply(x);
  double beta = r.norm();
  rep.final_residual = beta / bnorm;
  if (rep.final_residual <= cfg.tolerance) {
    rep.converged = true;
    rep.wall_seconds = std::chrono::duration<double>(clock::now() - t0).count();
    return rep;
  }

  while (rep.iterations < cfg.max_iterations) {
    basis[0] = r / beta;
    g.setZero();
    g(0) = beta;
    int k = 0;
    bool happy = false;
    for (; k < m && rep.iterations < cfg.max_iterations; ++k) {
      ComplexVector w = apply(precond(basis[k]));
      const double wnorm0 = w.norm();
      double loss = 0.0;
      for (int i = 0; i <= k; ++i) {
        cplx h = basis[i].dot(w);
        H(i, k) = h;
        w -= h * basis[i];
      }
      double wnorm = w.norm();
      for (int i = 0; i <= k; ++i)
        loss = std::max(loss, std::abs(basis[i].dot(w)));
      if (wnorm > 0.0 && loss > 1e-8 * wnorm) {
        for (int i = 0; i <= k; ++i) {
          cplx h = basis[i].dot(w);
          H(i, k) += h;
          w -= h * basis[i];
        }
        wnorm = w.norm();
      }
      H(k + 1, k) = wnorm;

      for (int i = 0; i < k; ++i) {
        cplx t = std::conj(cs[i]) * H(i, k) + std::conj(sn[i]) * H(i + 1, k);
        H(i + 1, k) = -sn[i] * H(i, k) + cs[i] * H(i + 1, k);
        H(i, k) = t;
      }
      double denom = std::hypot(std::abs(H(k, k)), std::abs(H(k + 1, k)));
      if (denom == 0.0) {
        cs[k] = 1.0;
        sn[k] = 0.0;
      } else {
        cs[k] = H(k, k) / denom;
        sn[k] = H(k + 1, k) / denom;
      }
      H(k, k) = denom;
      H(k + 1, k) = 0.0;
      g(k + 1) = -sn[k] * g(k);
      g(k) = std::conj(cs[k]) * g(k);

      ++rep.iterations;
      double res = std::abs(g(k + 1)) / bnorm;
      rep.residual_history.push_back(res);
      if (res <= cfg.tolerance) {
        ++k;
        break;
      }
      if (wnorm <= 1e-14 * wnorm0 || wnorm == 0.0) {
        happy = true;
        ++k;
        break;
      }
      basis[k + 1] = w / wnorm;
    }

    // y = H(0:k,0:k)^-1 g(0:k), back substitution
    ComplexVector y(k);
    for (int i = k - 1; i >= 0; --i) {
      cplx s = g(i);
      for (int l = i + 1; l < k; ++l)
        s -= H(i, l) * y(l);
      y(i) = H(i, i) == cplx(0.0) ? cplx(0.0) : s / H(i, i);
    }
    ComplexVector update = ComplexVector::Zero(n);
    for (int i = 0; i < k; ++i)
      update += y(i) * basis[i];
    x += precond(update);

    r = b - apply(x);
    beta = r.norm();
    rep.final_residual = beta / bnorm;
    if (rep.final_residual <= cfg.tolerance) {
      rep.converged = true;
      break;
    }
    if (happy) {
      rep.breakdown = true;
      break;
    }
  }
  rep.wall_seconds = std::chrono::duration<double>(clock::now() - t0).count();
  return rep;
}

/// Solve a moment-method system and split the result into current coefficients.
inline std::pair<SolutionCoefficients, SolveReport> gmres_solve(const LinearSystem &sys, const SolverConfig &cfg) {
  if (sys.blocked() && cfg.eliminate_magnetic) {
    const int n = sys.n;
    Eigen::LLT<RealMatrix> gram(sys.z22.real());
    if (gram.info() != Eigen::Success)
      throw DomainError("CSIE Gram block is not positive definite");
    // T = Z22^-1 Z21 (real Gram factor applied to both parts of a complex block)
    ComplexMatrix T(n, n);
    T.real() = gram.solve(sys.z21.real());
    T.imag() = gram.solve(sys.z21.imag());
    auto apply = [&](const ComplexVector &v) -> ComplexVector {
      ComplexVector y = sys.z11 * v;
      y.noalias() -= sys.z12 * (T * v);
      return y;
    };
    ComplexVector diag;
    if (cfg.diagonal_scaling)
      diag = sys.z11.diagonal() - (sys.z12.cwiseProduct(T.transpose())).rowwise().sum();
    ComplexVector I = ComplexVector::Zero(n);
    const ComplexVector b = sys.rhs.head(n);
    auto rep = gmres(apply, b, I, cfg, cfg.diagonal_scaling ? &diag : nullptr);
    ComplexVector x(2 * n);
    x << I, -(T * I);
    return {unpack_solution(sys, x), rep};
  }
  ComplexVector x = ComplexVector::Zero(sys.dimension());
  ComplexVector diag;
  if (cfg.diagonal_scaling)
    diag = sys.diagonal();
  auto rep = gmres([&](const ComplexVector &v) { return matvec(sys, v); }, sys.rhs, x, cfg,
                   cfg.diagonal_scaling ? &diag : nullptr);
  return {unpack_solution(sys, x), rep};
}

/// Dense LU reference solve for tests and small problems.
inline SolutionCoefficients direct_solve(const LinearSystem &sys) {
  ComplexVector x = sys.dense().partialPivLu().solve(sys.rhs);
  return unpack_solution(sys, x);
}

} // namespace csie
