#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "mcf/config.hpp"
#include "mcf/snapshot.hpp"

namespace fs = std::filesystem;

namespace mcf {

namespace {

double now_seconds() {
  using clk = std::chrono::steady_clock;
  return std::chrono::duration<double>(clk::now().time_since_epoch()).count();
}

std::string fnv1a(const std::string& s) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string eps_label(double eps) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "eps_%g", eps);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

}  // namespace

InitialReport check_initial_datum(const InitialDatumResult& datum,
                                  const ExperimentConfig& cfg) {
  InitialReport rep;
  const auto& an = datum.analytic;
  const GridSpec& g = cfg.domain;

  // g vanishes on the initial curve: sample the anchored circle densely
  const int n_theta = 4 * g.nx;
  for (int k = 1; k < n_theta; ++k) {
    const double th = M_PI * k / n_theta;
    Vec2 p = cfg.initial.center +
             cfg.initial.radius * Vec2(std::cos(th), std::sin(th));
    if (p.y() <= 0.0 || p.y() >= g.height_y) continue;
    rep.interface_residual = std::max(rep.interface_residual, std::abs(an.g(p)));
  }

  // Neumann trace of the analytic gradient on both rows
  for (int i = 0; i < g.nx; ++i) {
    for (BoundaryRow row : {BoundaryRow::Bottom, BoundaryRow::Top}) {
      Vec2 p = g.node(i, row == BoundaryRow::Bottom ? 0 : g.ny - 1);
      double tr = std::abs(an.grad_g(p).dot(GridSpec::outer_normal(row)));
      rep.neumann_residual = std::max(rep.neumann_residual, tr);
    }
  }

  rep.sweep = verify_initial_datum(datum.g, cfg.epsilons);
  bool slope_ok = true;
  if (rep.sweep.l1.size() >= 2)
    slope_ok = std::abs(rep.sweep.slope) <= 0.05 * rep.sweep.l1.front();
  rep.pass = rep.interface_residual <= 1e-10 && rep.neumann_residual <= 1e-8 &&
             slope_ok;
  return rep;
}

void write_initial_report(const std::string& path, const InitialReport& r) {
  auto out = open_out(path);
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "interface_residual,%.17g\nneumann_residual,%.17g\nslope,%.17g\n",
                r.interface_residual, r.neumann_residual, r.sweep.slope);
  out << buf;
  for (size_t k = 0; k < r.sweep.eps.size(); ++k) {
    std::snprintf(buf, sizeof buf, "l1_curvature[%.17g],%.17g\n", r.sweep.eps[k],
                  r.sweep.l1[k]);
    out << buf;
  }
  out << "pass," << (r.pass ? 1 : 0) << "\n";
}

std::vector<SpaceTimeScalar> default_brakke_functions(const GridSpec& g) {
  const double kx = 2.0 * M_PI / g.period_x;
  const double ly = g.height_y;
  std::vector<SpaceTimeScalar> out;

  SpaceTimeScalar one;
  one.value = [](const Vec2&, double) { return 1.0; };
  one.gradient = [](const Vec2&, double) { return Vec2::Zero().eval(); };
  one.dt = [](const Vec2&, double) { return 0.0; };
  out.push_back(one);

  SpaceTimeScalar lat;  // tangential gradient on the rows
  lat.value = [kx](const Vec2& p, double) { return 2.0 + std::sin(kx * p.x()); };
  lat.gradient = [kx](const Vec2& p, double) {
    return Vec2(kx * std::cos(kx * p.x()), 0.0);
  };
  lat.dt = [](const Vec2&, double) { return 0.0; };
  out.push_back(lat);

  SpaceTimeScalar vert;  // grad phi . nu_bdry != 0 on both rows
  vert.value = [ly](const Vec2& p, double) { return 1.0 + p.y() / ly; };
  vert.gradient = [ly](const Vec2&, double) { return Vec2(0.0, 1.0 / ly); };
  vert.dt = [](const Vec2&, double) { return 0.0; };
  out.push_back(vert);

  SpaceTimeScalar tdep;  // time-dependent, non-tangential gradient
  tdep.value = [kx, ly](const Vec2& p, double t) {
    return (1.0 + t) * (2.0 + std::cos(kx * p.x())) + p.y() * p.y() / (ly * ly);
  };
  tdep.gradient = [kx, ly](const Vec2& p, double t) {
    return Vec2(-(1.0 + t) * kx * std::sin(kx * p.x()), 2.0 * p.y() / (ly * ly));
  };
  tdep.dt = [kx](const Vec2& p, double) { return 2.0 + std::cos(kx * p.x()); };
  out.push_back(tdep);

  return out;
}

SpaceTimeScalar positive_curve_weight(const GridSpec& g) {
  const double kx = 2.0 * M_PI / g.period_x;
  SpaceTimeScalar phi;
  phi.value = [kx](const Vec2& p, double) {
    return 1.5 + 0.5 * std::cos(kx * p.x());
  };
  phi.gradient = [kx](const Vec2& p, double) {
    return Vec2(-0.5 * kx * std::sin(kx * p.x()), 0.0);
  };
  phi.dt = [](const Vec2&, double) { return 0.0; };
  return phi;
}

SmoothScalar semidecreasing_weight(const GridSpec& g, double& sup_ratio) {
  const double kx = 2.0 * M_PI / g.period_x;
  // phi = (1 + cos kx)/2: |grad phi|^2/phi = kx^2 (1 - cos kx)/2 <= kx^2
  sup_ratio = kx * kx;
  SmoothScalar phi;
  phi.value = [kx](const Vec2& p) { return 0.5 * (1.0 + std::cos(kx * p.x())); };
  phi.gradient = [kx](const Vec2& p) {
    return Vec2(-0.5 * kx * std::sin(kx * p.x()), 0.0);
  };
  phi.hessian = [kx](const Vec2& p) {
    Mat2 h = Mat2::Zero();
    h(0, 0) = -0.5 * kx * kx * std::cos(kx * p.x());
    return h;
  };
  return phi;
}

std::vector<IdentityReport> diagnose_trajectory(const Trajectory& traj,
                                                const ChecksConfig& checks) {
  if (traj.snapshots.empty()) throw std::runtime_error("empty trajectory");
  const GridSpec& g = traj.snapshots.front().field.grid;
  std::vector<IdentityReport> reports;

  reports.push_back(l1_monotonicity_check(traj, checks.l1_jitter_frac));
  reports.push_back(dissipation_identity_check(traj, checks.dissipation_rel_tol));

  const auto fields = default_test_fields(g);
  const size_t nsnap = traj.snapshots.size();
  // evaluate on evolved snapshots: the constructed datum carries
  // bump-function shoulders a few cells wide whose quadrature error
  // dominates the identity residual before the flow smooths them
  const size_t picks[3] = {std::max<size_t>(std::min<size_t>(1, nsnap - 1), nsnap / 16),
                           nsnap / 2, nsnap - 1};
  for (size_t pi = 0; pi < 3; ++pi) {
    size_t si = picks[pi];
    if (pi > 0 && si == picks[pi - 1]) continue;
    const auto& snap = traj.snapshots[si];
    for (size_t fi = 0; fi < fields.size(); ++fi) {
      auto rep = first_variation_check(snap.field, snap.epsilon, fields[fi],
                                       checks.first_variation_tol);
      char buf[80];
      std::snprintf(buf, sizeof buf, "first_variation[X%zu,t=%.6g]", fi, snap.time);
      rep.name = buf;
      reports.push_back(rep);
    }
  }

  const auto phis = default_brakke_functions(g);
  for (size_t k = 0; k < phis.size(); ++k) {
    auto rep = brakke_field_check(traj, phis[k], checks.brakke_field_tol);
    rep.name = "brakke_field[phi" + std::to_string(k) + "]";
    reports.push_back(rep);
  }
  return reports;
}

void write_identities_csv(const std::string& path,
                          const std::vector<IdentityReport>& reports) {
  auto out = open_out(path);
  out << "name,lhs,rhs,abs_residual,rel_residual,tolerance,one_sided,pass\n";
  char buf[400];
  for (const auto& r : reports) {
    std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%d\n",
                  r.name.c_str(), r.lhs, r.rhs, r.abs_residual, r.rel_residual,
                  r.tolerance, r.one_sided ? 1 : 0, r.pass ? 1 : 0);
    out << buf;
  }
}

VarifoldStageResult varifold_stage(const Trajectory& traj,
                                   const ChecksConfig& checks) {
  VarifoldStageResult res;
  const GridSpec& g = traj.snapshots.front().field.grid;
  const auto gammas =
      uniform_gammas(checks.gamma_count, checks.gamma_lo, checks.gamma_hi);
  CurveFamily family = build_family(traj, gammas);
  const auto outliers = mass_outliers(family);
  const auto mono = mass_monotonicity_check(family, checks.mass_tol);

  const auto phi_curve = positive_curve_weight(g);
  double sup_ratio = 0.0;
  const auto phi_semi = semidecreasing_weight(g, sup_ratio);

  res.all_pass = true;
  for (int gi = 0; gi < static_cast<int>(gammas.size()); ++gi) {
    VarifoldRow row;
    row.gamma = gammas[gi];
    row.outlier = outliers[gi];
    row.initial_mass = mono.initial_mass[gi];
    row.worst_mass_excess = mono.worst_excess[gi];
    row.mass_pass = mono.pass[gi];

    row.max_conormal_deg = 0.0;
    for (const auto& per_t : family.curves[gi])
      for (const auto& c : per_t) {
        if (c.closed) continue;
        auto ang = conormal_angles(c);
        row.max_conormal_deg = std::max({row.max_conormal_deg, ang[0], ang[1]});
      }
    row.conormal_pass = row.max_conormal_deg <= checks.conormal_max_deg;

    auto brep = brakke_curve_check(traj, family, gi, phi_curve,
                                   checks.brakke_curve_tol);
    row.brakke_margin = brep.rel_residual;
    row.brakke_pass = brep.pass;

    auto srep = semidecreasing_check(family, gi, phi_semi, sup_ratio,
                                     checks.semidecreasing_jitter);
    row.semidec_worst = srep.abs_residual;
    row.semidec_pass = srep.pass;

    if (!row.outlier)
      res.all_pass = res.all_pass && row.mass_pass && row.conormal_pass &&
                     row.brakke_pass && row.semidec_pass;
    res.rows.push_back(row);
  }

  const double kx = 2.0 * M_PI / g.period_x;
  auto phi_coarea = [kx, ly = g.height_y](const Vec2& p) {
    return 1.0 + 0.5 * std::sin(kx * p.x()) * std::cos(M_PI * p.y() / ly);
  };
  res.coarea_t0 = coarea_check(traj.snapshots.front().field, phi_coarea, gammas,
                               checks.coarea_tol);
  res.coarea_t0.name = "coarea[t=0]";
  res.coarea_tend = coarea_check(traj.snapshots.back().field, phi_coarea, gammas,
                                 checks.coarea_tol);
  res.coarea_tend.name = "coarea[t=end]";

  // total variation bound on the zero level (largest curve, initial time)
  int gi0 = 0;
  for (int gi = 1; gi < static_cast<int>(gammas.size()); ++gi)
    if (std::abs(gammas[gi]) < std::abs(gammas[gi0])) gi0 = gi;
  const auto& curves0 = family.curves[gi0][0];
  if (!curves0.empty()) {
    int best = 0;
    for (int k = 1; k < static_cast<int>(curves0.size()); ++k)
      if (curve_mass(curves0[k]) > curve_mass(curves0[best])) best = k;
    res.tv = total_variation_estimate(curves0[best],
                                      traj.snapshots.front().field,
                                      traj.snapshots.front().epsilon);
  } else {
    res.tv.pass = true;  // nothing to bound
  }

  res.all_pass = res.all_pass && res.coarea_t0.pass && res.coarea_tend.pass &&
                 res.tv.pass;
  res.family = std::move(family);
  return res;
}

void write_varifold_csv(const std::string& path, const VarifoldStageResult& r) {
  auto out = open_out(path);
  out << "gamma,outlier,initial_mass,worst_mass_excess,mass_pass,"
         "max_conormal_deg,conormal_pass,brakke_margin,brakke_pass,"
         "semidec_worst,semidec_pass\n";
  char buf[400];
  for (const auto& row : r.rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%d,%.17g,%.17g,%d,%.17g,%d,%.17g,%d,%.17g,%d\n",
                  row.gamma, row.outlier ? 1 : 0, row.initial_mass,
                  row.worst_mass_excess, row.mass_pass ? 1 : 0,
                  row.max_conormal_deg, row.conormal_pass ? 1 : 0,
                  row.brakke_margin, row.brakke_pass ? 1 : 0, row.semidec_worst,
                  row.semidec_pass ? 1 : 0);
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "# coarea_t0 rel_residual=%.17g pass=%d\n",
                r.coarea_t0.rel_residual, r.coarea_t0.pass ? 1 : 0);
  out << buf;
  std::snprintf(buf, sizeof buf, "# coarea_tend rel_residual=%.17g pass=%d\n",
                r.coarea_tend.rel_residual, r.coarea_tend.pass ? 1 : 0);
  out << buf;
  std::snprintf(buf, sizeof buf, "# total_variation tv=%.17g bound=%.17g pass=%d\n",
                r.tv.tv, r.tv.bound, r.tv.pass ? 1 : 0);
  out << buf;
}

void write_curves(const std::string& dir, const CurveFamily& family) {
  fs::create_directories(dir);
  char name[96], buf[160];
  for (size_t gi = 0; gi < family.gammas.size(); ++gi) {
    for (size_t ti = 0; ti < family.times.size(); ++ti) {
      std::snprintf(name, sizeof name, "%s/g%02zu_t%03zu.csv", dir.c_str(), gi, ti);
      auto out = open_out(name);
      std::snprintf(buf, sizeof buf, "# gamma=%.17g t=%.17g n_curves=%zu\n",
                    family.gammas[gi], family.times[ti],
                    family.curves[gi][ti].size());
      out << buf << "x,y\n";
      for (size_t ci = 0; ci < family.curves[gi][ti].size(); ++ci) {
        const auto& c = family.curves[gi][ti][ci];
        std::snprintf(buf, sizeof buf, "# curve=%zu closed=%d\n", ci,
                      c.closed ? 1 : 0);
        out << buf;
        for (const auto& v : c.vertices) {
          std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", v.x(), v.y());
          out << buf;
        }
      }
    }
  }
}

RunManifest run_experiment(const ExperimentConfig& cfg) {
  RunManifest m;
  m.tool_version = "mcf-1.0";

  std::string out = cfg.output_dir;
  const std::string root = output_root_override();
  if (!root.empty() && !fs::path(out).is_absolute())
    out = root + "/" + cfg.output_dir;
  fs::create_directories(out);

  const std::string cfg_text = serialize_config(cfg);
  m.config_hash = fnv1a(cfg_text);
  open_out(out + "/config.ini") << cfg_text;
  m.produced_files.push_back(out + "/config.ini");

  auto stage = [&](const std::string& name, bool enabled, auto&& body) {
    StageResult s;
    s.name = name;
    if (enabled) {
      s.ran = true;
      const double t0 = now_seconds();
      try {
        s.ok = body(s);
      } catch (const std::exception& e) {
        s.ok = false;
        s.detail = e.what();
      }
      s.seconds = now_seconds() - t0;
    }
    m.stages.push_back(s);
    return s.ok || !s.ran;
  };

  std::optional<InitialDatumResult> datum;
  stage("make-initial", true, [&](StageResult&) {
    datum.emplace(
        build_initial_datum(cfg.initial, cfg.domain, cfg.cutoffs, cfg.appendix));
    write_snapshot(out + "/initial.snap", {datum->g, 0.0, 0.0});
    m.produced_files.push_back(out + "/initial.snap");
    return true;
  });

  if (datum && cfg.checks.run_initial) {
    stage("check-initial", true, [&](StageResult& s) {
      auto rep = check_initial_datum(*datum, cfg);
      write_initial_report(out + "/initial_report.csv", rep);
      m.produced_files.push_back(out + "/initial_report.csv");
      char buf[96];
      std::snprintf(buf, sizeof buf, "interface=%.3g neumann=%.3g slope=%.3g",
                    rep.interface_residual, rep.neumann_residual, rep.sweep.slope);
      s.detail = buf;
      return rep.pass;
    });
  }

  for (double eps : cfg.epsilons) {
    if (!datum) break;
    if (cfg.t_end <= 0.0) break;  // initial-datum checks only
    const std::string label = eps_label(eps);
    const std::string dir = out + "/" + label;

    std::optional<Trajectory> traj;
    if (cfg.checks.run_evolve) {
      stage("evolve-" + label, true, [&](StageResult&) {
        fs::create_directories(dir);
        SolverConfig sc;
        sc.epsilon = eps;
        sc.cfl = cfg.cfl;
        sc.t_end = cfg.t_end;
        sc.snapshot_every = cfg.effective_snapshot_every();
        traj = run(datum->g, sc);
        char name[64];
        for (size_t k = 0; k < traj->snapshots.size(); ++k) {
          std::snprintf(name, sizeof name, "/snap_%04zu.snap", k);
          write_snapshot(dir + name, traj->snapshots[k]);
        }
        write_stats_csv(dir + "/stats.csv", *traj);
        m.produced_files.push_back(dir + "/stats.csv");
        return true;
      });
    }
    if (!traj) continue;

    if (cfg.checks.run_diagnostics) {
      stage("diagnose-" + label, true, [&](StageResult& s) {
        auto reports = diagnose_trajectory(*traj, cfg.checks);
        write_identities_csv(dir + "/identities.csv", reports);
        m.produced_files.push_back(dir + "/identities.csv");
        int fails = 0;
        for (const auto& r : reports)
          if (!r.pass) ++fails;
        if (fails) s.detail = std::to_string(fails) + " identity failures";
        return fails == 0;
      });
    }

    if (cfg.checks.run_varifold) {
      stage("levelsets-" + label, true, [&](StageResult& s) {
        auto res = varifold_stage(*traj, cfg.checks);
        write_varifold_csv(dir + "/varifold_report.csv", res);
        write_curves(dir + "/curves", res.family);
        m.produced_files.push_back(dir + "/varifold_report.csv");
        m.produced_files.push_back(dir + "/curves/");
        if (!res.all_pass) s.detail = "varifold check failures";
        return res.all_pass;
      });
    }
  }

  m.all_pass = true;
  for (const auto& s : m.stages)
    if (s.ran && !s.ok) m.all_pass = false;
  write_manifest(out + "/manifest.txt", m);
  return m;
}

}  // namespace mcf
