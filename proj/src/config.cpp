#include "mcf/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "mcf/diagnostics.hpp"
#include "mcf/snapshot.hpp"

namespace mcf {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

bool to_double(const std::string& s, double& out) {
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end && *end == '\0' && !s.empty() && std::isfinite(out);
}

bool to_int(const std::string& s, long& out) {
  char* end = nullptr;
  out = std::strtol(s.c_str(), &end, 10);
  return end && *end == '\0' && !s.empty();
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

struct KV {
  std::string section, key, value;
  int line;
};

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  std::vector<KV> entries;
  std::vector<std::string> errors;
  {
    std::stringstream ss(text);
    std::string line;
    std::string section;
    int ln = 0;
    while (std::getline(ss, line)) {
      ++ln;
      line = trim(line);
      if (line.empty() || line[0] == '#' || line[0] == ';') continue;
      if (line.front() == '[') {
        if (line.back() != ']') {
          errors.push_back("line " + std::to_string(ln) + ": malformed section header");
          continue;
        }
        section = trim(line.substr(1, line.size() - 2));
        continue;
      }
      size_t eq = line.find('=');
      if (eq == std::string::npos) {
        errors.push_back("line " + std::to_string(ln) + ": expected key=value");
        continue;
      }
      entries.push_back({section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)), ln});
    }
  }

  ExperimentConfig cfg;
  double period_x = 1.0, height_y = 1.0;
  long nx = 256, ny = 257;
  bool epsilons_set = false;

  static const std::set<std::string> sections = {"domain", "initial", "solver",
                                                 "checks", "output"};
  auto bad = [&](const KV& kv, const std::string& why) {
    errors.push_back("line " + std::to_string(kv.line) + ": [" + kv.section + "] " +
                     kv.key + ": " + why);
  };
  auto want_double = [&](const KV& kv, double& dst) {
    double v;
    if (to_double(kv.value, v))
      dst = v;
    else
      bad(kv, "not a finite number: '" + kv.value + "'");
  };
  auto want_int = [&](const KV& kv, auto& dst) {
    long v;
    if (to_int(kv.value, v))
      dst = v;
    else
      bad(kv, "not an integer: '" + kv.value + "'");
  };

  std::set<std::string> seen;
  for (const auto& kv : entries) {
    if (!sections.count(kv.section)) {
      bad(kv, "unknown section");
      continue;
    }
    std::string id = kv.section + "." + kv.key;
    if (!seen.insert(id).second) {
      bad(kv, "duplicate key");
      continue;
    }
    if (kv.section == "domain") {
      if (kv.key == "period_x")
        want_double(kv, period_x);
      else if (kv.key == "height_y")
        want_double(kv, height_y);
      else if (kv.key == "nx")
        want_int(kv, nx);
      else if (kv.key == "ny")
        want_int(kv, ny);
      else
        bad(kv, "unknown key");
    } else if (kv.section == "initial") {
      if (kv.key == "center_x")
        want_double(kv, cfg.initial.center.x());
      else if (kv.key == "center_y")
        want_double(kv, cfg.initial.center.y());
      else if (kv.key == "radius")
        want_double(kv, cfg.initial.radius);
      else if (kv.key == "delta")
        want_double(kv, cfg.cutoffs.delta);
      else if (kv.key == "cutoff_R")
        want_double(kv, cfg.cutoffs.R);
      else if (kv.key == "cutoff_r")
        want_double(kv, cfg.cutoffs.r);
      else if (kv.key == "s0")
        want_double(kv, cfg.appendix.s0);
      else if (kv.key == "ode_step")
        want_double(kv, cfg.appendix.ode_step);
      else if (kv.key == "root_tol")
        want_double(kv, cfg.appendix.root_tol);
      else
        bad(kv, "unknown key");
    } else if (kv.section == "solver") {
      if (kv.key == "epsilon") {
        std::vector<double> eps;
        for (const auto& tok : split_list(kv.value)) {
          double v;
          if (to_double(tok, v))
            eps.push_back(v);
          else
            bad(kv, "not a finite number: '" + tok + "'");
        }
        if (!eps.empty()) {
          cfg.epsilons = eps;
          epsilons_set = true;
        } else if (!epsilons_set) {
          bad(kv, "empty epsilon list");
        }
      } else if (kv.key == "cfl")
        want_double(kv, cfg.cfl);
      else if (kv.key == "t_end")
        want_double(kv, cfg.t_end);
      else if (kv.key == "snapshot_every")
        want_double(kv, cfg.snapshot_every);
      else
        bad(kv, "unknown key");
    } else if (kv.section == "checks") {
      auto& c = cfg.checks;
      if (kv.key == "gamma_count")
        want_int(kv, c.gamma_count);
      else if (kv.key == "gamma_lo")
        want_double(kv, c.gamma_lo);
      else if (kv.key == "gamma_hi")
        want_double(kv, c.gamma_hi);
      else if (kv.key == "l1_jitter_frac")
        want_double(kv, c.l1_jitter_frac);
      else if (kv.key == "dissipation_rel_tol")
        want_double(kv, c.dissipation_rel_tol);
      else if (kv.key == "first_variation_tol")
        want_double(kv, c.first_variation_tol);
      else if (kv.key == "brakke_field_tol")
        want_double(kv, c.brakke_field_tol);
      else if (kv.key == "coarea_tol")
        want_double(kv, c.coarea_tol);
      else if (kv.key == "mass_tol")
        want_double(kv, c.mass_tol);
      else if (kv.key == "conormal_max_deg")
        want_double(kv, c.conormal_max_deg);
      else if (kv.key == "brakke_curve_tol")
        want_double(kv, c.brakke_curve_tol);
      else if (kv.key == "semidecreasing_jitter")
        want_double(kv, c.semidecreasing_jitter);
      else if (kv.key == "seed") {
        long v;
        if (to_int(kv.value, v) && v >= 0)
          c.seed = static_cast<unsigned>(v);
        else
          bad(kv, "not a non-negative integer: '" + kv.value + "'");
      } else if (kv.key == "suites") {
        c.run_initial = c.run_evolve = c.run_diagnostics = c.run_varifold = false;
        for (const auto& tok : split_list(kv.value)) {
          if (tok == "all")
            c.run_initial = c.run_evolve = c.run_diagnostics = c.run_varifold = true;
          else if (tok == "initial")
            c.run_initial = true;
          else if (tok == "evolve")
            c.run_evolve = true;
          else if (tok == "diagnostics")
            c.run_diagnostics = true;
          else if (tok == "varifold")
            c.run_varifold = true;
          else
            bad(kv, "unknown suite '" + tok + "'");
        }
      } else
        bad(kv, "unknown key");
    } else {  // output
      if (kv.key == "directory")
        cfg.output_dir = kv.value;
      else
        bad(kv, "unknown key");
    }
  }

  // semantic validation (still collect everything)
  auto require = [&](bool ok, const std::string& msg) {
    if (!ok) errors.push_back(msg);
  };
  require(period_x > 0.0, "domain.period_x must be positive");
  require(height_y > 0.0, "domain.height_y must be positive");
  require(nx >= 8 && nx <= 1 << 16, "domain.nx must be in [8, 65536]");
  require(ny >= 8 && ny <= 1 << 16, "domain.ny must be in [8, 65536]");
  require(cfg.initial.radius > 0.0 && cfg.initial.radius < height_y,
          "initial.radius must lie in (0, height_y)");
  require(cfg.cutoffs.R > 0.0, "initial.cutoff_R must be positive");
  require(cfg.cutoffs.r > 0.0 && cfg.cutoffs.r < cfg.cutoffs.R,
          "initial.cutoff_r must lie in (0, cutoff_R)");
  require(cfg.cutoffs.delta > 0.0, "initial.delta must be positive");
  require(cfg.appendix.s0 > 0.0, "initial.s0 must be positive");
  require(cfg.appendix.ode_step > 0.0, "initial.ode_step must be positive");
  require(cfg.appendix.root_tol > 0.0, "initial.root_tol must be positive");
  for (double e : cfg.epsilons)
    require(e > 0.0 && e < 1.0, "solver.epsilon entries must lie in (0, 1)");
  require(cfg.cfl > 0.0 && cfg.cfl <= 0.5, "solver.cfl must lie in (0, 0.5]");
  // t_end = 0 is allowed: initial-datum checks only
  require(cfg.t_end >= 0.0, "solver.t_end must be non-negative");
  require(cfg.snapshot_every >= 0.0, "solver.snapshot_every must be non-negative");
  require(cfg.checks.gamma_count >= 1, "checks.gamma_count must be >= 1");
  require(cfg.checks.gamma_lo > -1.0 && cfg.checks.gamma_hi < 1.0 &&
              cfg.checks.gamma_lo <= cfg.checks.gamma_hi,
          "checks gamma range must satisfy -1 < gamma_lo <= gamma_hi < 1");
  require(!cfg.output_dir.empty(), "output.directory must be non-empty");

  if (!errors.empty()) {
    std::string msg = "config errors:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw std::runtime_error(msg);
  }

  cfg.domain = GridSpec(period_x, height_y, static_cast<int>(nx), static_cast<int>(ny));
  return cfg;
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
  char buf[512];
  std::string out;
  auto put = [&](const char* fmt, auto... args) {
    std::snprintf(buf, sizeof buf, fmt, args...);
    out += buf;
  };
  put("[domain]\nperiod_x=%.17g\nheight_y=%.17g\nnx=%d\nny=%d\n\n",
      cfg.domain.period_x, cfg.domain.height_y, cfg.domain.nx, cfg.domain.ny);
  put("[initial]\ncenter_x=%.17g\ncenter_y=%.17g\nradius=%.17g\n",
      cfg.initial.center.x(), cfg.initial.center.y(), cfg.initial.radius);
  put("delta=%.17g\ncutoff_R=%.17g\ncutoff_r=%.17g\n", cfg.cutoffs.delta,
      cfg.cutoffs.R, cfg.cutoffs.r);
  put("s0=%.17g\node_step=%.17g\nroot_tol=%.17g\n\n", cfg.appendix.s0,
      cfg.appendix.ode_step, cfg.appendix.root_tol);
  out += "[solver]\nepsilon=";
  for (size_t i = 0; i < cfg.epsilons.size(); ++i) {
    put(i ? ",%.17g" : "%.17g", cfg.epsilons[i]);
  }
  put("\ncfl=%.17g\nt_end=%.17g\nsnapshot_every=%.17g\n\n", cfg.cfl, cfg.t_end,
      cfg.snapshot_every);
  const auto& c = cfg.checks;
  put("[checks]\ngamma_count=%d\ngamma_lo=%.17g\ngamma_hi=%.17g\n", c.gamma_count,
      c.gamma_lo, c.gamma_hi);
  put("l1_jitter_frac=%.17g\ndissipation_rel_tol=%.17g\nfirst_variation_tol=%.17g\n",
      c.l1_jitter_frac, c.dissipation_rel_tol, c.first_variation_tol);
  put("brakke_field_tol=%.17g\ncoarea_tol=%.17g\nmass_tol=%.17g\n", c.brakke_field_tol,
      c.coarea_tol, c.mass_tol);
  put("conormal_max_deg=%.17g\nbrakke_curve_tol=%.17g\nsemidecreasing_jitter=%.17g\n",
      c.conormal_max_deg, c.brakke_curve_tol, c.semidecreasing_jitter);
  put("seed=%u\nsuites=%s%s%s%s\n\n", c.seed, c.run_initial ? "initial," : "",
      c.run_evolve ? "evolve," : "", c.run_diagnostics ? "diagnostics," : "",
      c.run_varifold ? "varifold" : "");
  out += "[output]\ndirectory=" + cfg.output_dir + "\n";
  return out;
}

void write_manifest(const std::string& path, const RunManifest& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write manifest: " + path);
  out << "config_hash=" << m.config_hash << "\n";
  out << "tool_version=" << m.tool_version << "\n";
  out << "all_pass=" << (m.all_pass ? 1 : 0) << "\n";
  for (const auto& s : m.stages) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", s.seconds);
    out << "stage." << s.name << "=" << (s.ran ? (s.ok ? "pass" : "FAIL") : "skipped")
        << " " << buf << "s";
    if (!s.detail.empty()) out << " " << s.detail;
    out << "\n";
  }
  for (const auto& f : m.produced_files) out << "file=" << f << "\n";
}

void write_stats_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "t,energy,l1_curvature,sup_grad,dissipation_cum\n";
  char buf[256];
  for (const auto& s : traj.stats) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", s.t, s.energy,
                  s.l1_curvature, s.sup_grad, s.dissipation_cum);
    out << buf;
  }
}

Trajectory read_trajectory(const std::string& dir) {
  namespace fs = std::filesystem;
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() == ".snap") names.push_back(e.path().string());
  }
  if (names.empty()) throw std::runtime_error("no .snap files in " + dir);
  std::sort(names.begin(), names.end());
  Trajectory traj;
  for (const auto& n : names) traj.snapshots.push_back(read_snapshot(n));
  std::sort(traj.snapshots.begin(), traj.snapshots.end(),
            [](const Snapshot& a, const Snapshot& b) { return a.time < b.time; });
  double diss = 0.0;
  double prev_l2 = 0.0, prev_t = 0.0;
  for (size_t k = 0; k < traj.snapshots.size(); ++k) {
    const auto& s = traj.snapshots[k];
    StatsRecord rec = compute_stats(s.field, s.time, s.epsilon);
    if (k > 0) diss += 0.5 * (s.time - prev_t) * (rec.l2_curvature + prev_l2);
    rec.dissipation_cum = diss;
    prev_l2 = rec.l2_curvature;
    prev_t = s.time;
    traj.stats.push_back(rec);
  }
  return traj;
}

std::string output_root_override() {
  const char* v = std::getenv("MCF_OUTPUT_ROOT");
  return v ? std::string(v) : std::string();
}

}  // namespace mcf
