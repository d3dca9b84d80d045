// mcf: simulator and checker for the regularized level-set flow on the
// periodic strip.  Subcommands mirror the pipeline stages; `run` chains
// them from a single config file.
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 config or I/O error.

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <CLI11.hpp>

#include "mcf/config.hpp"
#include "mcf/snapshot.hpp"

namespace fs = std::filesystem;
using namespace mcf;

namespace {

ExperimentConfig load(const std::string& path) { return parse_config(path); }

void print_reports(const std::vector<IdentityReport>& reports) {
  for (const auto& r : reports)
    std::printf("%-38s lhs=%-13.6g rhs=%-13.6g rel=%-10.3g %s\n", r.name.c_str(),
                r.lhs, r.rhs, r.rel_residual, r.pass ? "pass" : "FAIL");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"regularized mean curvature flow on the periodic strip"};
  app.require_subcommand(1);

  std::string config_path, in_dir, out_path, snap_path;

  auto* cmd_initial = app.add_subcommand("make-initial",
                                         "build the initial datum snapshot");
  cmd_initial->add_option("-c,--config", config_path, "config file")->required();
  cmd_initial->add_option("-o,--output", out_path, "output .snap path");

  auto* cmd_evolve = app.add_subcommand("evolve", "integrate the flow");
  cmd_evolve->add_option("-c,--config", config_path, "config file")->required();
  double eps_override = -1.0;
  cmd_evolve->add_option("--epsilon", eps_override,
                         "single epsilon (default: all from config)");
  cmd_evolve->add_option("-o,--output", out_path, "output directory");

  auto* cmd_diag = app.add_subcommand("diagnose", "identity checks on snapshots");
  cmd_diag->add_option("-c,--config", config_path, "config file")->required();
  cmd_diag->add_option("-i,--input", in_dir, "snapshot directory")->required();

  auto* cmd_level = app.add_subcommand("levelsets",
                                       "varifold-level checks on snapshots");
  cmd_level->add_option("-c,--config", config_path, "config file")->required();
  cmd_level->add_option("-i,--input", in_dir, "snapshot directory")->required();

  auto* cmd_report = app.add_subcommand("report",
                                        "aggregate a finished run directory");
  cmd_report->add_option("-i,--input", in_dir, "run output directory")->required();

  auto* cmd_run = app.add_subcommand("run", "full pipeline from a config");
  cmd_run->add_option("-c,--config", config_path, "config file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_run->parsed()) {
      auto cfg = load(config_path);
      RunManifest m = run_experiment(cfg);
      for (const auto& s : m.stages)
        std::printf("%-24s %s  %.2fs  %s\n", s.name.c_str(),
                    s.ran ? (s.ok ? "pass" : "FAIL") : "skip", s.seconds,
                    s.detail.c_str());
      std::printf("overall: %s\n", m.all_pass ? "pass" : "FAIL");
      return m.all_pass ? 0 : 1;
    }

    if (cmd_initial->parsed()) {
      auto cfg = load(config_path);
      if (out_path.empty()) out_path = cfg.output_dir + "/initial.snap";
      fs::create_directories(fs::path(out_path).parent_path());
      auto datum = build_initial_datum(cfg.initial, cfg.domain, cfg.cutoffs,
                                       cfg.appendix);
      write_snapshot(out_path, {datum.g, 0.0, 0.0});
      auto rep = check_initial_datum(datum, cfg);
      write_initial_report(out_path + ".report.csv", rep);
      std::printf("interface residual %.3g, neumann residual %.3g, slope %.3g: %s\n",
                  rep.interface_residual, rep.neumann_residual, rep.sweep.slope,
                  rep.pass ? "pass" : "FAIL");
      return rep.pass ? 0 : 1;
    }

    if (cmd_evolve->parsed()) {
      auto cfg = load(config_path);
      if (eps_override > 0.0) cfg.epsilons = {eps_override};
      if (out_path.empty()) out_path = cfg.output_dir;
      auto datum = build_initial_datum(cfg.initial, cfg.domain, cfg.cutoffs,
                                       cfg.appendix);
      for (double eps : cfg.epsilons) {
        char label[48];
        std::snprintf(label, sizeof label, "%s/eps_%g", out_path.c_str(), eps);
        fs::create_directories(label);
        SolverConfig sc{eps, cfg.cfl, cfg.t_end, cfg.effective_snapshot_every()};
        Trajectory traj = run(datum.g, sc);
        char name[96];
        for (size_t k = 0; k < traj.snapshots.size(); ++k) {
          std::snprintf(name, sizeof name, "%s/snap_%04zu.snap", label, k);
          write_snapshot(name, traj.snapshots[k]);
        }
        write_stats_csv(std::string(label) + "/stats.csv", traj);
        std::printf("eps=%g: %zu snapshots -> %s\n", eps, traj.snapshots.size(),
                    label);
      }
      return 0;
    }

    if (cmd_diag->parsed()) {
      auto cfg = load(config_path);
      Trajectory traj = read_trajectory(in_dir);
      auto reports = diagnose_trajectory(traj, cfg.checks);
      write_identities_csv(in_dir + "/identities.csv", reports);
      print_reports(reports);
      for (const auto& r : reports)
        if (!r.pass) return 1;
      return 0;
    }

    if (cmd_level->parsed()) {
      auto cfg = load(config_path);
      Trajectory traj = read_trajectory(in_dir);
      auto res = varifold_stage(traj, cfg.checks);
      write_varifold_csv(in_dir + "/varifold_report.csv", res);
      write_curves(in_dir + "/curves", res.family);
      for (const auto& row : res.rows)
        std::printf("gamma=%+.3f%s mass_excess=%-10.3g conormal=%-8.3g deg "
                    "brakke=%-10.3g semidec=%-10.3g %s\n",
                    row.gamma, row.outlier ? " (outlier)" : "          ",
                    row.worst_mass_excess, row.max_conormal_deg,
                    row.brakke_margin, row.semidec_worst,
                    row.outlier ? "-" : (row.mass_pass && row.conormal_pass &&
                                         row.brakke_pass && row.semidec_pass
                                             ? "pass"
                                             : "FAIL"));
      std::printf("coarea t0 rel=%.3g %s, tend rel=%.3g %s; tv=%.6g bound=%.6g %s\n",
                  res.coarea_t0.rel_residual, res.coarea_t0.pass ? "pass" : "FAIL",
                  res.coarea_tend.rel_residual, res.coarea_tend.pass ? "pass" : "FAIL",
                  res.tv.tv, res.tv.bound, res.tv.pass ? "pass" : "FAIL");
      return res.all_pass ? 0 : 1;
    }

    if (cmd_report->parsed()) {
      // re-read the manifest of a finished run and restate the verdict
      std::ifstream in(in_dir + "/manifest.txt");
      if (!in) throw std::runtime_error("no manifest in " + in_dir);
      std::string line;
      bool pass = false, found = false;
      while (std::getline(in, line)) {
        std::printf("%s\n", line.c_str());
        if (line.rfind("all_pass=", 0) == 0) {
          found = true;
          pass = line == "all_pass=1";
        }
      }
      if (!found) throw std::runtime_error("manifest missing all_pass");
      return pass ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
