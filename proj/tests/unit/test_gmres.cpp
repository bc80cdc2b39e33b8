#include "csie/gmres.hpp"
#include "csie/shapes.hpp"

#include <catch_amalgamated.hpp>

#include <random>
#include <sstream>

using namespace csie;

namespace {

ComplexMatrix random_matrix(int n, unsigned seed, double shift) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> nd;
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      m(i, k) = cplx(nd(rng), nd(rng)) / std::sqrt(double(n));
  m.diagonal().array() += shift;
  return m;
}

ComplexVector random_vector(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> nd;
  ComplexVector v(n);
  for (int i = 0; i < n; ++i)
    v(i) = cplx(nd(rng), nd(rng));
  return v;
}

double relres(const ComplexMatrix &m, const ComplexVector &x, const ComplexVector &b) {
  return (b - m * x).norm() / b.norm();
}

} // namespace

TEST_CASE("GMRES reaches the tolerance and agrees with LU", "[gmres]") {
  const int n = 60;
  ComplexMatrix m = random_matrix(n, 1, 3.0);
  ComplexVector b = random_vector(n, 2);
  ComplexVector ref = m.partialPivLu().solve(b);
  for (bool scaling : {false, true}) {
    SolverConfig cfg;
    cfg.tolerance = 1e-12;
    cfg.diagonal_scaling = scaling;
    ComplexVector diag = m.diagonal();
    ComplexVector x;
    auto rep = gmres([&](const ComplexVector &v) { return ComplexVector(m * v); }, b, x, cfg,
                     scaling ? &diag : nullptr);
    CHECK(rep.converged);
    CHECK_FALSE(rep.breakdown);
    CHECK(relres(m, x, b) <= 1e-12);
    CHECK((x - ref).norm() < 1e-10 * ref.norm());
    CHECK(rep.residual_history.size() == static_cast<std::size_t>(rep.iterations));
    CHECK(std::abs(rep.final_residual - relres(m, x, b)) < 1e-14);
  }
}

TEST_CASE("restarted GMRES converges with a non-increasing residual", "[gmres]") {
  const int n = 80;
  ComplexMatrix m = random_matrix(n, 5, 2.5);
  ComplexVector b = random_vector(n, 6);
  SolverConfig cfg;
  cfg.tolerance = 1e-10;
  cfg.restart = 7;
  ComplexVector x;
  auto rep = gmres([&](const ComplexVector &v) { return ComplexVector(m * v); }, b, x, cfg);
  CHECK(rep.converged);
  CHECK(rep.iterations > cfg.restart);
  CHECK(relres(m, x, b) <= 1e-10);
  for (std::size_t i = 1; i < rep.residual_history.size(); ++i)
    CHECK(rep.residual_history[i] <= rep.residual_history[i - 1] * (1.0 + 1e-12));
}

TEST_CASE("iteration limit is reported as non-convergence", "[gmres]") {
  const int n = 50;
  ComplexMatrix m = random_matrix(n, 9, 0.2);
  ComplexVector b = random_vector(n, 10);
  SolverConfig cfg;
  cfg.tolerance = 1e-12;
  cfg.max_iterations = 3;
  ComplexVector x;
  auto rep = gmres([&](const ComplexVector &v) { return ComplexVector(m * v); }, b, x, cfg);
  CHECK_FALSE(rep.converged);
  CHECK(rep.iterations == 3);
  CHECK(rep.final_residual > cfg.tolerance);
}

TEST_CASE("identity and zero right-hand side", "[gmres]") {
  ComplexVector b = random_vector(10, 4);
  ComplexVector x;
  auto rep = gmres([](const ComplexVector &v) { return v; }, b, x, SolverConfig{});
  CHECK(rep.converged);
  CHECK(rep.iterations == 1);
  CHECK((x - b).norm() < 1e-14 * b.norm());

  ComplexVector zero = ComplexVector::Zero(10), y = ComplexVector::Ones(10);
  auto rz = gmres([](const ComplexVector &v) { return v; }, zero, y, SolverConfig{});
  CHECK(rz.converged);
  CHECK(rz.iterations == 0);
  CHECK(y.isZero(0.0));
}

TEST_CASE("solver settings are validated", "[gmres]") {
  ComplexVector b = ComplexVector::Ones(3), x;
  auto id = [](const ComplexVector &v) { return v; };
  SolverConfig bad;
  bad.tolerance = 0.0;
  CHECK_THROWS_AS(gmres(id, b, x, bad), ConfigError);
  bad = SolverConfig{};
  bad.restart = 0;
  CHECK_THROWS_AS(gmres(id, b, x, bad), ConfigError);
  bad = SolverConfig{};
  bad.max_iterations = 0;
  CHECK_THROWS_AS(gmres(id, b, x, bad), ConfigError);
}

TEST_CASE("CSIE with eliminated magnetic unknowns matches the monolithic solve", "[gmres]") {
  auto space = build_rwg(shapes::cube(1.0, 2));
  KernelEvaluator eval(1.5);
  PlaneWave wave(Vec3::UnitZ(), Vec3::UnitX(), 1.0, 1.5);
  auto sys = build_system(space, eval, wave, Formulation::csie(1.0));
  auto ref = direct_solve(sys);
  SolverConfig cfg;
  cfg.tolerance = 1e-11;
  for (bool eliminate : {true, false}) {
    cfg.eliminate_magnetic = eliminate;
    auto [sol, rep] = gmres_solve(sys, cfg);
    INFO("eliminate " << eliminate);
    CHECK(rep.converged);
    CHECK((sol.I - ref.I).norm() < 1e-8 * ref.I.norm());
    CHECK((sol.V - ref.V).norm() < 1e-8 * ref.V.norm());
    ComplexVector x(2 * sys.n);
    x << sol.I, sol.V / Z0;
    CHECK((sys.rhs - matvec(sys, x)).norm() <= 1.01 * cfg.tolerance * sys.rhs.norm());
  }
}

TEST_CASE("convergence log format", "[gmres]") {
  SolveReport rep;
  rep.residual_history = {0.5, 0.25};
  std::ostringstream os;
  write_convergence_csv(os, rep);
  CHECK(os.str() == "iter,residual\n1,0.5\n2,0.25\n");
}
