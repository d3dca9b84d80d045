#pragma once

// Experiment configuration (strict key=value sections), the pipeline
// orchestrator, and CSV/report emission.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mcf/diagnostics.hpp"
#include "mcf/evolve.hpp"
#include "mcf/initial_data.hpp"
#include "mcf/levelset.hpp"

namespace mcf {

struct ChecksConfig {
  int gamma_count = 17;
  double gamma_lo = -0.9;
  double gamma_hi = 0.9;
  double l1_jitter_frac = 1e-3;
  double dissipation_rel_tol = 0.01;
  double first_variation_tol = 0.02;
  double brakke_field_tol = 0.02;
  double coarea_tol = 0.02;
  double mass_tol = 0.02;
  double conormal_max_deg = 2.0;
  double brakke_curve_tol = 0.03;
  double semidecreasing_jitter = 0.02;
  unsigned seed = 12345;
  bool run_initial = true;
  bool run_evolve = true;
  bool run_diagnostics = true;
  bool run_varifold = true;
};

struct ExperimentConfig {
  GridSpec domain{1.0, 1.0, 256, 257};
  DiskSet initial{{0.5, 0.0}, 0.25};
  CutoffProfile cutoffs;
  AppendixConfig appendix;
  std::vector<double> epsilons{1e-1, 1e-2, 1e-3};
  double cfl = 0.2;
  double t_end = 0.015625;
  double snapshot_every = 0.0;  // 0 -> t_end / 256
  ChecksConfig checks;
  std::string output_dir = "out";

  double effective_snapshot_every() const {
    // dense enough that (a) trapezoid-in-t of the stiff early dissipation
    // integrand stays well under the 1% identity tolerance and (b) the
    // early mesh-induced wiggle of int |H_eps| spreads across many
    // snapshot pairs, keeping each rise below the monotonicity jitter
    return snapshot_every > 0.0 ? snapshot_every : t_end / 256.0;
  }
};

// Parses and validates; throws std::runtime_error whose message lists
// every violation (unknown keys included), not just the first.
ExperimentConfig parse_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

// canonical serialization written into every output directory
std::string serialize_config(const ExperimentConfig& cfg);

struct StageResult {
  std::string name;
  bool ok = true;
  bool ran = false;
  double seconds = 0.0;
  std::string detail;
};

struct RunManifest {
  std::string config_hash;
  std::string tool_version;
  std::vector<StageResult> stages;
  std::vector<std::string> produced_files;
  bool all_pass = false;
};

// make-initial -> evolve -> diagnose -> levelsets -> report, per epsilon
RunManifest run_experiment(const ExperimentConfig& cfg);

void write_manifest(const std::string& path, const RunManifest& m);

// shared stage helpers (also used by the CLI subcommands)
void write_stats_csv(const std::string& path, const Trajectory& traj);
Trajectory read_trajectory(const std::string& dir);

struct InitialReport {
  double interface_residual = 0.0;  // max |g| on the initial curve
  double neumann_residual = 0.0;    // max |grad g . nu| on the boundary rows
  CurvatureSweepReport sweep;
  bool pass = false;
};

InitialReport check_initial_datum(const InitialDatumResult& datum,
                                  const ExperimentConfig& cfg);
void write_initial_report(const std::string& path, const InitialReport& r);

std::vector<IdentityReport> diagnose_trajectory(const Trajectory& traj,
                                                const ChecksConfig& checks);
void write_identities_csv(const std::string& path,
                          const std::vector<IdentityReport>& reports);

struct VarifoldRow {
  double gamma = 0.0;
  bool outlier = false;
  double initial_mass = 0.0;
  double worst_mass_excess = 0.0;
  bool mass_pass = false;
  double max_conormal_deg = 0.0;
  bool conormal_pass = false;
  double brakke_margin = 0.0;  // rhs - lhs, scaled; >= -tol passes
  bool brakke_pass = false;
  double semidec_worst = 0.0;
  bool semidec_pass = false;
};

struct VarifoldStageResult {
  std::vector<VarifoldRow> rows;
  IdentityReport coarea_t0, coarea_tend;
  TotalVariationReport tv;
  CurveFamily family;
  bool all_pass = false;
};

VarifoldStageResult varifold_stage(const Trajectory& traj,
                                   const ChecksConfig& checks);
void write_varifold_csv(const std::string& path, const VarifoldStageResult& r);
void write_curves(const std::string& dir, const CurveFamily& family);

// Brakke/coarea/semidecreasing test functions shared by the stages
std::vector<SpaceTimeScalar> default_brakke_functions(const GridSpec& g);
SpaceTimeScalar positive_curve_weight(const GridSpec& g);       // for the curve-level check
SmoothScalar semidecreasing_weight(const GridSpec& g, double& sup_ratio);

std::string output_root_override();  // MCF_OUTPUT_ROOT, empty if unset

}  // namespace mcf
