#include "mcf/levelset.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mcf {

namespace {

double wrap_coord(double x, double period) {
  if (period <= 0.0) return x;
  x = std::fmod(x, period);
  if (x < 0.0) x += period;
  return x;
}

double wrap_delta(double dx, double period) {
  if (period <= 0.0) return dx;
  dx = std::fmod(dx, period);
  if (dx < -0.5 * period) dx += period;
  if (dx >= 0.5 * period) dx -= period;
  return dx;
}

Vec2 seg_delta(const LevelCurve& c, size_t k) {
  const Vec2& a = c.vertices[k];
  const Vec2& b = c.vertices[k + 1];
  return {wrap_delta(b.x() - a.x(), c.period_x), b.y() - a.y()};
}

Vec2 seg_midpoint(const LevelCurve& c, size_t k) {
  const Vec2 d = seg_delta(c, k);
  Vec2 m = c.vertices[k] + 0.5 * d;
  m.x() = wrap_coord(m.x(), c.period_x);
  return m;
}

}  // namespace

double bilinear(const ScalarField& f, const Vec2& p) {
  const GridSpec& g = f.grid;
  const double fx = wrap_coord(p.x(), g.period_x) / g.hx();
  double fy = p.y() / g.hy();
  fy = std::min(std::max(fy, 0.0), static_cast<double>(g.ny - 1));
  const int i0 = std::min(static_cast<int>(fx), g.nx - 1);
  const int j0 = std::min(static_cast<int>(fy), g.ny - 2);
  const int i1 = (i0 + 1) % g.nx;
  const double tx = fx - i0, ty = fy - j0;
  return (1 - tx) * (1 - ty) * f(i0, j0) + tx * (1 - ty) * f(i1, j0) +
         (1 - tx) * ty * f(i0, j0 + 1) + tx * ty * f(i1, j0 + 1);
}

std::vector<LevelCurve> extract_level(const ScalarField& u, double gamma) {
  const GridSpec& g = u.grid;
  const int nx = g.nx, ny = g.ny;
  const double hx = g.hx(), hy = g.hy();

  // symbolic perturbation of nodes exactly on the level
  Array2D v = u.values;
  int perturbed = 0;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      if (v(i, j) == gamma) {
        v(i, j) = gamma + 1e-13 * std::max(1.0, std::abs(gamma));
        ++perturbed;
      }

  // edge ids: horizontal (i,j)-(i+1,j): j*nx+i; vertical (i,j)-(i,j+1):
  // nx*ny + j*nx + i
  const int n_edges = 2 * nx * ny;
  auto hedge = [nx](int i, int j) { return j * nx + i; };
  auto vedge = [nx, ny](int i, int j) { return nx * ny + j * nx + i; };

  std::vector<Vec2> crossing(n_edges);
  std::vector<char> crossed(n_edges, 0);
  auto cross_h = [&](int i, int j) {
    const int e = hedge(i, j);
    if (!crossed[e]) {
      const int ip = (i + 1) % nx;
      const double t = (gamma - v(i, j)) / (v(ip, j) - v(i, j));
      crossing[e] = {wrap_coord(g.x(i) + t * hx, g.period_x), g.y(j)};
      crossed[e] = 1;
    }
    return e;
  };
  auto cross_v = [&](int i, int j) {
    const int e = vedge(i, j);
    if (!crossed[e]) {
      const double t = (gamma - v(i, j)) / (v(i, j + 1) - v(i, j));
      crossing[e] = {g.x(i), g.y(j) + t * hy};
      crossed[e] = 1;
    }
    return e;
  };

  std::vector<std::array<int, 2>> segments;
  std::vector<std::array<int, 2>> incident(n_edges, {-1, -1});
  auto add_segment = [&](int e0, int e1) {
    const int s = static_cast<int>(segments.size());
    segments.push_back({e0, e1});
    for (int e : {e0, e1}) {
      if (incident[e][0] < 0) incident[e][0] = s;
      else incident[e][1] = s;
    }
  };

  for (int j = 0; j + 1 < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int ip = (i + 1) % nx;
      const bool b00 = v(i, j) > gamma, b10 = v(ip, j) > gamma;
      const bool b11 = v(ip, j + 1) > gamma, b01 = v(i, j + 1) > gamma;
      int crossed_edges[4];
      int nc = 0;
      if (b00 != b10) crossed_edges[nc++] = cross_h(i, j);        // bottom
      if (b10 != b11) crossed_edges[nc++] = cross_v(ip, j);       // right
      if (b01 != b11) crossed_edges[nc++] = cross_h(i, j + 1);    // top
      if (b00 != b01) crossed_edges[nc++] = cross_v(i, j);        // left
      if (nc == 0) continue;
      if (nc == 2) {
        add_segment(crossed_edges[0], crossed_edges[1]);
      } else {
        // saddle; order in crossed_edges is bottom, right, top, left
        const double center =
            0.25 * (v(i, j) + v(ip, j) + v(ip, j + 1) + v(i, j + 1));
        if ((center > gamma) == b00) {
          add_segment(crossed_edges[0], crossed_edges[1]);  // bottom-right
          add_segment(crossed_edges[2], crossed_edges[3]);  // top-left
        } else {
          add_segment(crossed_edges[3], crossed_edges[0]);  // left-bottom
          add_segment(crossed_edges[1], crossed_edges[2]);  // right-top
        }
      }
    }

  std::vector<char> visited(segments.size(), 0);
  std::vector<LevelCurve> out;

  auto endpoint_info = [&](int e) -> CurveEndpoint {
    CurveEndpoint ep;
    ep.on_boundary = true;
    ep.component = e < nx ? BoundaryRow::Bottom : BoundaryRow::Top;
    return ep;
  };

  auto walk = [&](int start_edge) -> LevelCurve {
    LevelCurve c;
    c.period_x = g.period_x;
    c.perturbed_nodes = perturbed;
    int e = start_edge;
    c.vertices.push_back(crossing[e]);
    for (;;) {
      int next_seg = -1;
      for (int s : incident[e])
        if (s >= 0 && !visited[s]) {
          next_seg = s;
          break;
        }
      if (next_seg < 0) break;
      visited[next_seg] = 1;
      e = segments[next_seg][0] == e ? segments[next_seg][1] : segments[next_seg][0];
      c.vertices.push_back(crossing[e]);
      if (e == start_edge) break;
    }
    // drop degenerate segments
    std::vector<Vec2> clean;
    for (const Vec2& p : c.vertices) {
      if (!clean.empty()) {
        const double dx = wrap_delta(p.x() - clean.back().x(), g.period_x);
        const double dy = p.y() - clean.back().y();
        if (std::hypot(dx, dy) < 1e-12) continue;
      }
      clean.push_back(p);
    }
    c.vertices = std::move(clean);
    return c;
  };

  // open chains, started from boundary-row edges in deterministic order
  for (int j : {0, ny - 1})
    for (int i = 0; i < nx; ++i) {
      const int e = hedge(i, j);
      if (!crossed[e]) continue;
      bool has_unvisited = false;
      for (int s : incident[e])
        if (s >= 0 && !visited[s]) has_unvisited = true;
      if (!has_unvisited) continue;
      LevelCurve c = walk(e);
      if (c.vertices.size() < 2) continue;
      c.closed = false;
      c.start = endpoint_info(e);
      // the last vertex lies on a boundary edge as well
      const double y_last = c.vertices.back().y();
      c.end.on_boundary = true;
      c.end.component =
          y_last < 0.5 * g.height_y ? BoundaryRow::Bottom : BoundaryRow::Top;
      out.push_back(std::move(c));
    }

  // closed loops from the remaining segments
  for (size_t s = 0; s < segments.size(); ++s) {
    if (visited[s]) continue;
    LevelCurve c = walk(segments[s][0]);
    if (c.vertices.size() < 3) continue;
    c.closed = true;
    // ensure first == last even after degenerate-vertex cleanup
    if ((c.vertices.front() - c.vertices.back()).norm() > 1e-12)
      c.vertices.push_back(c.vertices.front());
    out.push_back(std::move(c));
  }
  return out;
}

double curve_mass(const LevelCurve& c) {
  double len = 0.0;
  for (size_t k = 0; k + 1 < c.vertices.size(); ++k) len += seg_delta(c, k).norm();
  return len;
}

double curve_first_variation(const LevelCurve& c, const SmoothVectorField& X) {
  double acc = 0.0;
  for (size_t k = 0; k + 1 < c.vertices.size(); ++k) {
    const Vec2 d = seg_delta(c, k);
    const double len = d.norm();
    if (len <= 0.0) continue;
    const Vec2 tangent = d / len;
    const Vec2 normal(tangent.y(), -tangent.x());
    const Mat2 proj = Mat2::Identity() - normal * normal.transpose();
    acc += (proj * X.jacobian(seg_midpoint(c, k))).trace() * len;
  }
  return acc;
}

double curve_integral(const LevelCurve& c,
                      const std::function<double(const Vec2&)>& f) {
  double acc = 0.0;
  for (size_t k = 0; k + 1 < c.vertices.size(); ++k)
    acc += f(seg_midpoint(c, k)) * seg_delta(c, k).norm();
  return acc;
}

std::array<double, 2> conormal_angles(const LevelCurve& c) {
  if (c.closed || c.vertices.size() < 2)
    throw std::invalid_argument("conormal_angles: need an open curve");
  if (!c.start.on_boundary || !c.end.on_boundary)
    throw std::invalid_argument("conormal_angles: endpoint not on boundary");
  const size_t n = c.vertices.size();
  // tangent at an endpoint from a least-squares quadratic in arclength
  // over the first few vertices: a single marching-squares segment wobbles
  // at cell scale, and a long chord picks up curvature bias
  auto end_tangent = [&](bool at_start) -> Vec2 {
    const size_t m = std::min<size_t>(n, 7);
    std::vector<Vec2> pts(1, at_start ? c.vertices.front() : c.vertices.back());
    std::vector<double> s(1, 0.0);
    for (size_t k = 1; k < m; ++k) {
      const Vec2 d = at_start ? seg_delta(c, k - 1) : -seg_delta(c, n - 1 - k);
      pts.push_back(pts.back() + d);
      s.push_back(s.back() + d.norm());
    }
    if (m < 4) return (pts.back() - pts.front()).normalized();
    Eigen::MatrixXd A(m, 3);
    Eigen::MatrixXd b(m, 2);
    for (size_t k = 0; k < m; ++k) {
      A(k, 0) = 1.0;
      A(k, 1) = s[k];
      A(k, 2) = s[k] * s[k];
      b.row(k) = pts[k].transpose();
    }
    Eigen::MatrixXd coef = A.colPivHouseholderQr().solve(b);
    Vec2 t(coef(1, 0), coef(1, 1));  // dp/ds at s = 0
    return t.normalized();
  };
  const Vec2 co_start = -end_tangent(true);
  const Vec2 co_end = -end_tangent(false);
  auto angle = [](const Vec2& co, const Vec2& nu) {
    const double ct = std::clamp(co.dot(nu), -1.0, 1.0);
    return std::acos(ct) * 180.0 / M_PI;
  };
  return {angle(co_start, GridSpec::outer_normal(c.start.component)),
          angle(co_end, GridSpec::outer_normal(c.end.component))};
}

bool curve_self_intersects(const LevelCurve& c) {
  // O(n^2) segment-pair test on unwrapped coordinates; test-scale curves only
  const size_t n = c.vertices.size();
  if (n < 4) return false;
  std::vector<Vec2> pts(1, c.vertices[0]);
  for (size_t k = 0; k + 1 < n; ++k) pts.push_back(pts.back() + seg_delta(c, k));
  auto orient = [](const Vec2& a, const Vec2& b, const Vec2& p) {
    return (b.x() - a.x()) * (p.y() - a.y()) - (b.y() - a.y()) * (p.x() - a.x());
  };
  for (size_t a = 0; a + 1 < n; ++a)
    for (size_t b = a + 2; b + 1 < n; ++b) {
      if (a == 0 && b + 2 == n && c.closed) continue;  // shared loop vertex
      const Vec2 &p1 = pts[a], &p2 = pts[a + 1], &q1 = pts[b], &q2 = pts[b + 1];
      const double o1 = orient(p1, p2, q1), o2 = orient(p1, p2, q2);
      const double o3 = orient(q1, q2, p1), o4 = orient(q1, q2, p2);
      if (((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0))) return true;
    }
  return false;
}

double CurveFamily::mass(int gi, int ti) const {
  double m = 0.0;
  for (const LevelCurve& c : curves[gi][ti]) m += curve_mass(c);
  return m;
}

CurveFamily build_family(const Trajectory& traj, const std::vector<double>& gammas) {
  CurveFamily fam;
  fam.gammas = gammas;
  for (const Snapshot& s : traj.snapshots) fam.times.push_back(s.time);
  fam.curves.resize(gammas.size());
  for (size_t gi = 0; gi < gammas.size(); ++gi) {
    fam.curves[gi].resize(traj.snapshots.size());
    for (size_t ti = 0; ti < traj.snapshots.size(); ++ti)
      fam.curves[gi][ti] = extract_level(traj.snapshots[ti].field, gammas[gi]);
  }
  return fam;
}

std::vector<double> uniform_gammas(int count, double lo, double hi) {
  std::vector<double> g(count);
  for (int k = 0; k < count; ++k)
    g[k] = count == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * k / (count - 1);
  return g;
}

std::vector<bool> mass_outliers(const CurveFamily& family) {
  const int n = static_cast<int>(family.gammas.size());
  std::vector<double> m0(n);
  for (int k = 0; k < n; ++k) m0[k] = family.mass(k, 0);
  auto jump = [](double a, double b) {
    return std::abs(a - b) / std::max(std::max(std::abs(a), std::abs(b)), 1e-300);
  };
  std::vector<bool> outlier(n, false);
  for (int k = 0; k < n; ++k) {
    const bool left = k > 0 ? jump(m0[k], m0[k - 1]) > 0.5 : true;
    const bool right = k + 1 < n ? jump(m0[k], m0[k + 1]) > 0.5 : true;
    outlier[k] = left && right && n > 1;
  }
  return outlier;
}

IdentityReport coarea_check(const ScalarField& u,
                            const std::function<double(const Vec2&)>& phi,
                            const std::vector<double>& gamma_grid,
                            double rel_tol) {
  if (gamma_grid.size() < 2)
    throw std::invalid_argument("coarea_check: need >= 2 levels");
  const double dgamma = gamma_grid[1] - gamma_grid[0];
  // the level grid samples midpoint cells [gamma - dgamma/2, gamma + dgamma/2];
  // restrict the area integral to the matching band so the two sides cover
  // the same range of u (the interior sweep misses |u| near 1 otherwise)
  // tiny slack so node values sitting exactly on a band edge are kept
  // regardless of roundoff in the gamma grid
  const double slack = 1e-9 * dgamma;
  const double band_lo = gamma_grid.front() - 0.5 * dgamma - slack;
  const double band_hi = gamma_grid.back() + 0.5 * dgamma + slack;

  VectorField2 g = gradient(u);
  // the mirror ghosts force g.y = 0 on the boundary rows even when the
  // sampled data is not Neumann-compatible; use one-sided differences there
  // so the area side does not drop the two half-cell strips
  const int ny = u.grid.ny;
  const double hy = u.grid.hy();
  for (int i = 0; i < u.grid.nx; ++i) {
    g.y(i, 0) = (u(i, 1) - u(i, 0)) / hy;
    g.y(i, ny - 1) = (u(i, ny - 1) - u(i, ny - 2)) / hy;
  }
  ScalarField integrand(u.grid);
  for (int j = 0; j < u.grid.ny; ++j)
    for (int i = 0; i < u.grid.nx; ++i) {
      const double uij = u(i, j);
      integrand(i, j) = (uij >= band_lo && uij <= band_hi)
                            ? phi(u.grid.node(i, j)) *
                                  std::hypot(g.x(i, j), g.y(i, j))
                            : 0.0;
    }

  IdentityReport rep;
  rep.name = "coarea";
  rep.lhs = integrate(integrand);
  rep.rhs = 0.0;
  for (double gamma : gamma_grid)
    for (const LevelCurve& c : extract_level(u, gamma))
      rep.rhs += dgamma * curve_integral(c, phi);
  rep.abs_residual = std::abs(rep.lhs - rep.rhs);
  const double scale = std::max(std::abs(rep.lhs), std::abs(rep.rhs));
  rep.rel_residual = scale > 0.0 ? rep.abs_residual / scale : 0.0;
  rep.tolerance = rel_tol * scale;
  rep.pass = rep.abs_residual <= rep.tolerance;
  return rep;
}

MassMonotonicityReport mass_monotonicity_check(const CurveFamily& family,
                                               double tol_frac) {
  MassMonotonicityReport rep;
  const int ng = static_cast<int>(family.gammas.size());
  const int nt = static_cast<int>(family.times.size());
  rep.all_pass = true;
  for (int gi = 0; gi < ng; ++gi) {
    const double m0 = family.mass(gi, 0);
    double worst = 0.0;
    bool pairwise = true;
    double prev = m0;
    for (int ti = 1; ti < nt; ++ti) {
      const double m = family.mass(gi, ti);
      worst = std::max(worst, m - m0);
      if (m > prev + tol_frac * std::max(m0, 1e-300)) pairwise = false;
      prev = m;
    }
    const bool ok = worst <= tol_frac * std::max(m0, 1e-300);
    rep.initial_mass.push_back(m0);
    rep.worst_excess.push_back(worst);
    rep.pass.push_back(ok);
    rep.pairwise_monotone.push_back(pairwise);
    if (!ok) rep.all_pass = false;
  }
  return rep;
}

IdentityReport brakke_curve_check(const Trajectory& traj,
                                  const CurveFamily& family, int gamma_index,
                                  const SpaceTimeScalar& phi, double tol_frac) {
  const int nt = static_cast<int>(family.times.size());
  if (nt < 2) throw std::invalid_argument("brakke_curve_check: need >= 2 times");
  const double eps = traj.snapshots.front().epsilon;

  std::vector<double> weighted(nt, 0.0), balance(nt, 0.0);
  double sup_dtphi = 0.0;
  for (int ti = 0; ti < nt; ++ti) {
    const double t = family.times[ti];
    const ScalarField& u = traj.snapshots[ti].field;
    ScalarField h = h_eps(u, eps);
    VectorField2 nu = nu_eps(u, eps);
    ScalarField nux{u.grid, nu.x}, nuy{u.grid, nu.y};
    for (const LevelCurve& c : family.curves[gamma_index][ti]) {
      weighted[ti] += curve_integral(c, [&](const Vec2& p) {
        const double ph = phi.value(p, t);
        if (ph < 0.0) throw std::invalid_argument("brakke_curve_check: phi < 0");
        return ph;
      });
      balance[ti] += curve_integral(c, [&](const Vec2& p) {
        const double hh = bilinear(h, p);
        const Vec2 n(bilinear(nux, p), bilinear(nuy, p));
        const double dph = phi.dt(p, t);
        sup_dtphi = std::max(sup_dtphi, std::abs(dph));
        return dph - hh * n.dot(phi.gradient(p, t)) -
               phi.value(p, t) * hh * hh;
      });
    }
  }

  IdentityReport rep;
  rep.name = "brakke_curve";
  rep.one_sided = true;
  rep.lhs = weighted.back() - weighted.front();
  rep.rhs = 0.0;
  for (int ti = 1; ti < nt; ++ti)
    rep.rhs += 0.5 * (family.times[ti] - family.times[ti - 1]) *
               (balance[ti] + balance[ti - 1]);
  rep.abs_residual = rep.lhs - rep.rhs;  // signed; negative is the good side
  const double span = family.times.back() - family.times.front();
  const double scale = std::abs(rep.lhs) + std::abs(rep.rhs) +
                       family.mass(gamma_index, 0) * sup_dtphi * span * 0.01;
  rep.rel_residual = scale > 0.0 ? (rep.rhs - rep.lhs) / scale : 0.0;
  rep.tolerance = tol_frac * scale;
  rep.pass = rep.rhs - rep.lhs >= -rep.tolerance;
  return rep;
}

IdentityReport semidecreasing_check(const CurveFamily& family, int gamma_index,
                                    const SmoothScalar& phi, double sup_ratio,
                                    double jitter_frac) {
  const int nt = static_cast<int>(family.times.size());
  std::vector<double> w(nt, 0.0);
  for (int ti = 0; ti < nt; ++ti)
    for (const LevelCurve& c : family.curves[gamma_index][ti])
      w[ti] += curve_integral(c, [&](const Vec2& p) { return phi.value(p); });
  const double c_phi = family.mass(gamma_index, 0) * sup_ratio;

  IdentityReport rep;
  rep.name = "semidecreasing";
  rep.one_sided = true;
  rep.tolerance = jitter_frac * std::max(w[0], 1e-300);
  double worst = 0.0;
  for (int ti = 1; ti < nt; ++ti) {
    const double allowed = c_phi * (family.times[ti] - family.times[ti - 1]);
    const double rise = w[ti] - w[ti - 1] - allowed;
    worst = std::max(worst, rise);
    if (rise > rep.tolerance) rep.violation_times.push_back(family.times[ti]);
  }
  rep.lhs = w.back();
  rep.rhs = w.front();
  rep.abs_residual = worst;
  rep.rel_residual = w[0] > 0.0 ? worst / w[0] : 0.0;
  rep.pass = rep.violation_times.empty();
  return rep;
}

TotalVariationReport total_variation_estimate(const LevelCurve& c,
                                              const ScalarField& u, double eps) {
  const GridSpec& grid = u.grid;
  // unwrapped polyline for the fitted radial field
  std::vector<Vec2> pts(1, c.vertices[0]);
  for (size_t k = 0; k + 1 < c.vertices.size(); ++k)
    pts.push_back(pts.back() + seg_delta(c, k));

  // delta V over unwrapped points for an arbitrary analytic field
  auto variation = [&](auto&& jac) {
    double acc = 0.0;
    for (size_t k = 0; k + 1 < pts.size(); ++k) {
      const Vec2 d = pts[k + 1] - pts[k];
      const double len = d.norm();
      if (len <= 0.0) continue;
      const Vec2 tangent = d / len;
      const Vec2 normal(tangent.y(), -tangent.x());
      const Mat2 proj = Mat2::Identity() - normal * normal.transpose();
      const Vec2 mid = 0.5 * (pts[k] + pts[k + 1]);
      acc += (proj * jac(mid)).trace() * len;
    }
    return acc;
  };

  TotalVariationReport rep;

  // library fields, normalized to sup |X| <= 1 on the grid
  for (const SmoothVectorField& X : default_test_fields(grid)) {
    double sup = 0.0;
    for (int j = 0; j < grid.ny; j += 4)
      for (int i = 0; i < grid.nx; i += 4)
        sup = std::max(sup, X.value(grid.node(i, j)).norm());
    if (sup <= 0.0) continue;
    const double dv = variation(X.jacobian) / sup;
    rep.tv = std::max(rep.tv, std::abs(dv));
  }

  // Kasa circle fit; the radial unit field from the fitted center is the
  // near-optimal deformation for circular arcs
  {
    const size_t n = pts.size();
    Eigen::MatrixXd A(n, 3);
    Eigen::VectorXd b(n);
    for (size_t k = 0; k < n; ++k) {
      A(k, 0) = pts[k].x();
      A(k, 1) = pts[k].y();
      A(k, 2) = 1.0;
      b(k) = -(pts[k].squaredNorm());
    }
    Eigen::Vector3d sol = (A.transpose() * A)
                              .ldlt()
                              .solve(A.transpose() * b);
    const Vec2 center(-0.5 * sol(0), -0.5 * sol(1));
    const double rad2 = center.squaredNorm() - sol(2);
    if (rad2 > 0.0 && std::isfinite(rad2)) {
      const double rad = std::sqrt(rad2);
      const double diam = curve_mass(c);
      if (rad < 10.0 * std::max(diam, 1e-12)) {
        const double a2 = 1e-6 * rad2;
        auto jac = [center, a2](const Vec2& p) -> Mat2 {
          const Vec2 q = p - center;
          const double s = std::sqrt(q.squaredNorm() + a2);
          return Mat2::Identity() / s - q * q.transpose() / (s * s * s);
        };
        const double dv = variation(jac);
        rep.tv = std::max(rep.tv, std::abs(dv));
      }
    }
  }

  // bound (C+1)(mass + int |H|) with the fixed extension field
  // X0 = (0, 1 - 2y/L_y), which equals nu_bdry on both rows
  const double C = 1.0 + 2.0 / grid.height_y;
  ScalarField h = h_eps(u, eps);
  double l1_h = 0.0;
  for (size_t k = 0; k + 1 < c.vertices.size(); ++k)
    l1_h += std::abs(bilinear(h, seg_midpoint(c, k))) * seg_delta(c, k).norm();
  rep.bound = (C + 1.0) * (curve_mass(c) + l1_h);
  rep.pass = rep.tv <= rep.bound * 1.05;
  return rep;
}

}  // namespace mcf
