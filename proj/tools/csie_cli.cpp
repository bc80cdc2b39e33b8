// Command-line driver: run one scattering job, compare two pattern files, or
// inspect a mesh.

#include "csie/csie.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>
#include <vector>

namespace {

struct Override {
  const char *flag;
  const char *key;
  const char *help;
};

const std::vector<Override> run_flags = {
    {"--mesh", "mesh", "Mesh file (OFF or Gmsh v2 ASCII)"},
    {"--format", "format", "Mesh format: auto, off, gmsh"},
    {"--freq", "freq", "Frequency in Hz"},
    {"--formulation", "formulation", "efie, mfie, cfie or csie"},
    {"--alpha", "alpha", "CSIE weighting factor (> 0)"},
    {"--cfie-beta", "cfie_beta", "CFIE EFIE weight in [0, 1]"},
    {"--inc-theta", "inc_theta", "Incidence: wave arrives from this polar angle (deg)"},
    {"--inc-phi", "inc_phi", "Incidence azimuth (deg)"},
    {"--pol", "pol", "Polarization: theta, phi, x, y, z"},
    {"--cut", "cut", "Pattern cut, e.g. phi=0 or theta=90"},
    {"--step", "step", "Cut step in degrees"},
    {"--tol", "tol", "GMRES relative residual tolerance"},
    {"--restart", "restart", "GMRES restart length"},
    {"--max-iter", "max_iter", "GMRES iteration limit"},
    {"--diag-scaling", "diag_scaling", "Jacobi scaling in GMRES (true/false)"},
    {"--eliminate-magnetic", "eliminate_magnetic", "CSIE: factor out the Gram block and iterate on I (true/false)"},
    {"--quad-obs", "quad_obs", "Observation quadrature order (1, 2, 3, 5, 7)"},
    {"--quad-src", "quad_src", "Source quadrature order (1, 2, 3, 5, 7)"},
    {"--threads", "threads", "Assembly threads (0 = all cores)"},
    {"--out", "out", "Output directory"},
    {"--reference", "reference", "Reference pattern CSV for the error metric"},
    {"--log-convergence", "log_convergence", "Convergence CSV path"},
};

int run_command(const std::string &config_path, const std::map<std::string, std::string> &overrides) {
  csie::JobConfig cfg;
  if (!config_path.empty())
    cfg.load(config_path);
  for (const auto &o : run_flags) {
    auto it = overrides.find(o.key);
    if (it != overrides.end())
      cfg.set(o.key, it->second);
  }
  auto res = csie::run_job(cfg);
  std::cout << "unknowns " << res.unknowns << ", iterations " << res.solve.iterations << ", residual "
            << res.solve.final_residual << '\n';
  if (res.error)
    std::cout << "max error " << res.error->max_db() << " dB\n";
  std::cout << "pattern written to " << res.pattern_path << '\n';
  if (res.exit_code == csie::exit_not_converged)
    std::cerr << "warning: GMRES did not reach tolerance " << cfg.tol << " within " << cfg.max_iter
              << " iterations\n";
  return res.exit_code;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Method-of-moments PEC scattering solver (EFIE, MFIE, CFIE, CSIE)"};
  app.require_subcommand(1);

  auto *run = app.add_subcommand("run", "Assemble and solve one scattering job");
  std::string config_path;
  run->add_option("--config", config_path, "key=value configuration file")->check(CLI::ExistingFile);
  std::map<std::string, std::string> overrides;
  std::vector<std::pair<CLI::Option *, std::string>> options;
  std::map<std::string, std::string> storage;
  for (const auto &o : run_flags)
    options.emplace_back(run->add_option(o.flag, storage[o.key], o.help), o.key);

  auto *cmp = app.add_subcommand("compare", "Error metric of a candidate pattern against a reference");
  std::string ref_csv, cand_csv, err_csv;
  cmp->add_option("reference", ref_csv, "Reference pattern CSV")->required()->check(CLI::ExistingFile);
  cmp->add_option("candidate", cand_csv, "Candidate pattern CSV")->required()->check(CLI::ExistingFile);
  cmp->add_option("--out", err_csv, "Per-direction error CSV");

  auto *info = app.add_subcommand("mesh-info", "Validate a mesh and print its topology");
  std::string info_mesh, info_format = "auto";
  info->add_option("mesh", info_mesh, "Mesh file")->required()->check(CLI::ExistingFile);
  info->add_option("--format", info_format, "auto, off, gmsh");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      for (auto &[opt, key] : options)
        if (opt->count() > 0)
          overrides[key] = storage[key];
      return run_command(config_path, overrides);
    }
    if (*cmp) {
      auto s = csie::compare_runs(ref_csv, cand_csv, err_csv);
      std::cout << "max eps_theta " << s.max_theta_db << " dB\n"
                << "max eps_phi " << s.max_phi_db << " dB\n"
                << "max eps " << s.max_db << " dB\n";
      return csie::exit_ok;
    }
    if (*info) {
      auto fmt = info_format == "auto" ? csie::mesh_format_from_path(info_mesh) : csie::parse_mesh_format(info_format);
      auto mesh = csie::load_mesh(info_mesh, fmt);
      std::cout << csie::validate_mesh(mesh) << '\n';
      std::cout << "mean edge length " << mesh.mean_edge_length() << '\n';
      return csie::exit_ok;
    }
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return csie::exit_error;
  }
  return csie::exit_ok;
}
