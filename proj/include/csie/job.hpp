#pragma once

#include "csie/assembly.hpp"
#include "csie/common.hpp"
#include "csie/excitation.hpp"
#include "csie/farfield.hpp"
#include "csie/gmres.hpp"
#include "csie/mesh.hpp"
#include "csie/rwg.hpp"
#include "csie/system.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace csie {

/// One scattering job. Every field has a text key used by config files and
/// command-line overrides; `to_text()` writes the fully resolved set.
struct JobConfig {
  std::string mesh;
  std::string format = "auto"; // auto | off | gmsh
  double freq = 0.0;           // Hz
  std::string formulation = "efie";
  std::optional<double> alpha;     // csie only
  std::optional<double> cfie_beta; // cfie only
  double inc_theta = 180.0;        // wave arrives from this direction (deg)
  double inc_phi = 0.0;
  std::string pol = "x"; // theta | phi | x | y | z
  double amplitude = 1.0;
  std::string cut = "phi=0";
  double step = 1.0;
  double tol = 1e-4;
  int restart = 200;
  int max_iter = 5000;
  bool diag_scaling = true;
  bool eliminate_magnetic = true; // csie: iterate on I with the Gram block factored out
  int quad_obs = 3;
  int quad_src = 5;
  int threads = 0;
  std::string out = "out";
  std::string reference;
  std::string log_convergence;

  /// Apply one key=value setting. Keys use underscores; dashes are accepted.
  void set(std::string key, const std::string &value) {
    for (auto &ch : key)
      if (ch == '-')
        ch = '_';
    auto to_d = [&](const std::string &v) {
      try {
        std::size_t used = 0;
        double d = std::stod(v, &used);
        if (used != v.size())
          throw std::invalid_argument(v);
        return d;
      } catch (const std::exception &) {
        throw ConfigError("'" + key + "' expects a number, got '" + v + "'");
      }
    };
    auto to_i = [&](const std::string &v) {
      double d = to_d(v);
      if (d != static_cast<int>(d))
        throw ConfigError("'" + key + "' expects an integer, got '" + v + "'");
      return static_cast<int>(d);
    };
    auto to_b = [&](const std::string &v) {
      if (v == "1" || v == "true" || v == "yes" || v == "on")
        return true;
      if (v == "0" || v == "false" || v == "no" || v == "off")
        return false;
      throw ConfigError("'" + key + "' expects a boolean, got '" + v + "'");
    };
    if (key == "mesh")
      mesh = value;
    else if (key == "format")
      format = value;
    else if (key == "freq")
      freq = to_d(value);
    else if (key == "formulation")
      formulation = value;
    else if (key == "alpha")
      alpha = to_d(value);
    else if (key == "cfie_beta")
      cfie_beta = to_d(value);
    else if (key == "inc_theta")
      inc_theta = to_d(value);
    else if (key == "inc_phi")
      inc_phi = to_d(value);
    else if (key == "pol")
      pol = value;
    else if (key == "amplitude")
      amplitude = to_d(value);
    else if (key == "cut")
      cut = value;
    else if (key == "step")
      step = to_d(value);
    else if (key == "tol")
      tol = to_d(value);
    else if (key == "restart")
      restart = to_i(value);
    else if (key == "max_iter")
      max_iter = to_i(value);
    else if (key == "diag_scaling")
      diag_scaling = to_b(value);
    else if (key == "eliminate_magnetic")
      eliminate_magnetic = to_b(value);
    else if (key == "quad_obs")
      quad_obs = to_i(value);
    else if (key == "quad_src")
      quad_src = to_i(value);
    else if (key == "threads")
      threads = to_i(value);
    else if (key == "out")
      out = value;
    else if (key == "reference")
      reference = value;
    else if (key == "log_convergence")
      log_convergence = value;
    else
      throw ConfigError("unknown configuration key '" + key + "'");
  }

  /// Read key=value lines; '#' starts a comment. Relative mesh and reference
  /// paths are resolved against the config file's directory.
  void load(const std::string &path) {
    std::ifstream in(path);
    if (!in)
      throw ConfigError("cannot open config file '" + path + "'");
    const auto base = std::filesystem::path(path).parent_path();
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (auto hash = line.find('#'); hash != std::string::npos)
        line.erase(hash);
      auto trim = [](std::string s) {
        auto b = s.find_first_not_of(" \t\r");
        auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
      };
      line = trim(line);
      if (line.empty())
        continue;
      auto eq = line.find('=');
      if (eq == std::string::npos)
        throw FormatError("config line is not key=value", line_no);
      std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
      if ((key == "mesh" || key == "reference") && !value.empty() && std::filesystem::path(value).is_relative())
        value = (base / value).lexically_normal().string();
      set(key, value);
    }
  }

  Formulation resolved_formulation() const {
    auto kind = parse_formulation(formulation);
    if (kind == FormulationKind::csie) {
      if (!alpha)
        throw ConfigError("formulation csie requires alpha");
      if (cfie_beta)
        throw ConfigError("cfie_beta is only valid with formulation cfie");
      return Formulation::csie(*alpha);
    }
    if (alpha)
      throw ConfigError("alpha is only valid with formulation csie");
    if (kind == FormulationKind::cfie) {
      if (!cfie_beta)
        throw ConfigError("formulation cfie requires cfie_beta");
      return Formulation::cfie(*cfie_beta);
    }
    if (cfie_beta)
      throw ConfigError("cfie_beta is only valid with formulation cfie");
    return kind == FormulationKind::efie ? Formulation::efie() : Formulation::mfie();
  }

  void validate() const {
    if (mesh.empty())
      throw ConfigError("no mesh given");
    if (!(freq > 0.0))
      throw ConfigError("frequency must be positive");
    resolved_formulation().validate();
    solver().validate();
    parse_cut(cut, step);
    if (!(step > 0.0))
      throw ConfigError("cut step must be positive");
    triangle_rule(quad_obs);
    triangle_rule(quad_src);
  }

  SolverConfig solver() const { return {tol, restart, max_iter, diag_scaling, eliminate_magnetic}; }

  AssemblyOptions assembly() const {
    AssemblyOptions o;
    o.quad_obs = quad_obs;
    o.quad_src = quad_src;
    o.workers = threads;
    return o;
  }

  MeshFormat mesh_format() const { return format == "auto" ? mesh_format_from_path(mesh) : parse_mesh_format(format); }

  double k0() const { return wavenumber_from_frequency(freq); }

  /// Incident plane wave arriving from (inc_theta, inc_phi).
  PlaneWave wave() const {
    Direction from{deg2rad(inc_theta), deg2rad(inc_phi)};
    Vec3 khat = -from.rhat();
    Vec3 e;
    if (pol == "theta")
      e = from.theta_hat();
    else if (pol == "phi")
      e = from.phi_hat();
    else if (pol == "x")
      e = Vec3::UnitX();
    else if (pol == "y")
      e = Vec3::UnitY();
    else if (pol == "z")
      e = Vec3::UnitZ();
    else
      throw ConfigError("polarization must be theta, phi, x, y or z");
    // exact zeros for axis-aligned incidence
    for (int i = 0; i < 3; ++i)
      if (std::abs(khat[i]) < 1e-15)
        khat[i] = 0.0;
    khat.normalize();
    if (std::abs(khat.dot(e)) > 1e-12)
      throw ConfigError("polarization '" + pol + "' is not transverse to the incidence direction");
    return PlaneWave(khat, e.normalized(), amplitude, k0());
  }

  std::string to_text() const {
    std::ostringstream os;
    os.precision(17);
    os << "mesh=" << mesh << '\n'
       << "format=" << format << '\n'
       << "freq=" << freq << '\n'
       << "formulation=" << formulation << '\n';
    if (alpha)
      os << "alpha=" << *alpha << '\n';
    if (cfie_beta)
      os << "cfie_beta=" << *cfie_beta << '\n';
    os << "inc_theta=" << inc_theta << '\n'
       << "inc_phi=" << inc_phi << '\n'
       << "pol=" << pol << '\n'
       << "amplitude=" << amplitude << '\n'
       << "cut=" << cut << '\n'
       << "step=" << step << '\n'
       << "tol=" << tol << '\n'
       << "restart=" << restart << '\n'
       << "max_iter=" << max_iter << '\n'
       << "diag_scaling=" << (diag_scaling ? "true" : "false") << '\n'
       << "eliminate_magnetic=" << (eliminate_magnetic ? "true" : "false") << '\n'
       << "quad_obs=" << quad_obs << '\n'
       << "quad_src=" << quad_src << '\n'
       << "threads=" << threads << '\n'
       << "out=" << out << '\n'
       << "reference=" << reference << '\n'
       << "log_convergence=" << log_convergence << '\n';
    return os.str();
  }
};

enum ExitCode : int { exit_ok = 0, exit_error = 1, exit_not_converged = 2 };

struct JobResult {
  int exit_code = exit_ok;
  int rwg_functions = 0;
  int unknowns = 0;
  SolveReport solve;
  FarFieldPattern pattern;
  std::optional<ErrorMetric> error;
  std::string pattern_path, convergence_path, report_path;
  double assembly_seconds = 0.0;
};

/// Load and prepare the mesh: closed surfaces only, winding repaired outward.
inline std::shared_ptr<const TriangleMesh> prepare_mesh(const std::string &path, MeshFormat format) {
  auto mesh = load_mesh(path, format);
  auto report = validate_mesh(mesh);
  if (!report.closed)
    throw GeometryError("mesh '" + path + "' is not a closed surface (" + std::to_string(report.boundary_edges) +
                        " boundary edges)");
  orient_outward(mesh);
  return std::make_shared<const TriangleMesh>(std::move(mesh));
}

/// Assemble, solve and post-process one job, writing pattern.csv,
/// convergence.csv and report.txt into the output directory.
inline JobResult run_job(const JobConfig &cfg) {
  cfg.validate();
  using clock = std::chrono::steady_clock;
  JobResult res;
  auto mesh = prepare_mesh(cfg.mesh, cfg.mesh_format());
  auto space = build_rwg(mesh);
  const auto wave = cfg.wave();
  const auto formulation = cfg.resolved_formulation();
  KernelEvaluator eval(cfg.k0());

  auto t0 = clock::now();
  auto system = build_system(space, eval, wave, formulation, cfg.assembly());
  res.assembly_seconds = std::chrono::duration<double>(clock::now() - t0).count();

  auto [solution, report] = gmres_solve(system, cfg.solver());
  res.solve = report;
  res.rwg_functions = space.size();
  res.unknowns = system.dimension();

  auto cut = parse_cut(cfg.cut, cfg.step);
  res.pattern = far_field(space, cfg.k0(), solution, cut.directions());
  rcs(res.pattern, wave);

  if (!cfg.reference.empty()) {
    auto ref = load_pattern_csv(cfg.reference);
    res.error = error_metric(res.pattern, ref);
  }

  namespace fs = std::filesystem;
  fs::create_directories(cfg.out);
  res.pattern_path = (fs::path(cfg.out) / "pattern.csv").string();
  res.convergence_path = cfg.log_convergence.empty() ? (fs::path(cfg.out) / "convergence.csv").string() : cfg.log_convergence;
  res.report_path = (fs::path(cfg.out) / "report.txt").string();

  save_pattern_csv(res.pattern_path, res.pattern);
  {
    std::ofstream os(res.convergence_path);
    if (!os)
      throw std::runtime_error("cannot write '" + res.convergence_path + "'");
    write_convergence_csv(os, report);
  }
  {
    std::ofstream os(res.report_path);
    if (!os)
      throw std::runtime_error("cannot write '" + res.report_path + "'");
    os.precision(10);
    os << "formulation=" << to_string(formulation.kind) << '\n'
       << "triangles=" << mesh->num_triangles() << '\n'
       << "rwg_functions=" << space.size() << '\n'
       << "unknowns=" << system.dimension() << '\n'
       << "k0=" << cfg.k0() << '\n'
       << "mean_edge_wavelengths=" << mesh->mean_edge_length() * cfg.k0() / (2.0 * pi) << '\n'
       << "iterations=" << report.iterations << '\n'
       << "converged=" << (report.converged ? "true" : "false") << '\n'
       << "final_residual=" << report.final_residual << '\n'
       << "assembly_seconds=" << res.assembly_seconds << '\n'
       << "solve_seconds=" << report.wall_seconds << '\n';
    if (res.error)
      os << "max_error_db=" << res.error->max_db() << '\n'
         << "max_error_theta_db=" << to_db20(res.error->max_theta()) << '\n'
         << "max_error_phi_db=" << to_db20(res.error->max_phi()) << '\n';
    os << "# resolved configuration\n" << cfg.to_text();
  }
  res.exit_code = report.converged ? exit_ok : exit_not_converged;
  return res;
}

struct CompareSummary {
  ErrorMetric metric;
  double max_theta_db = db_floor;
  double max_phi_db = db_floor;
  double max_db = db_floor;
};

/// Error metric of `candidate` against `reference`; optionally writes the
/// per-direction CSV theta_deg,phi_deg,eps_theta_db,eps_phi_db.
inline CompareSummary compare_runs(const std::string &reference_csv, const std::string &candidate_csv,
                                   const std::string &out_csv = {}) {
  auto ref = load_pattern_csv(reference_csv);
  auto cand = load_pattern_csv(candidate_csv);
  CompareSummary s;
  s.metric = error_metric(cand, ref);
  s.max_theta_db = to_db20(s.metric.max_theta());
  s.max_phi_db = to_db20(s.metric.max_phi());
  s.max_db = s.metric.max_db();
  if (!out_csv.empty()) {
    std::ofstream os(out_csv);
    if (!os)
      throw std::runtime_error("cannot write '" + out_csv + "'");
    os << "theta_deg,phi_deg,eps_theta_db,eps_phi_db\n";
    os.precision(10);
    for (std::size_t i = 0; i < ref.size(); ++i)
      os << rad2deg(ref.directions[i].theta) << ',' << rad2deg(ref.directions[i].phi) << ','
         << to_db20(s.metric.eps_theta[i]) << ',' << to_db20(s.metric.eps_phi[i]) << '\n';
  }
  return s;
}

} // namespace csie
