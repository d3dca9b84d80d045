#include "mcf/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

namespace mcf {

VectorField2 nu_eps(const ScalarField& u, double eps) {
  VectorField2 g = gradient(u);
  const Array2D norm = (g.x.square() + g.y.square() + eps * eps).sqrt();
  g.x /= norm;
  g.y /= norm;
  return g;
}

// H_eps = div(nu_eps) in conservation (face-flux) form: grad u is
// differenced onto cell faces, normalized there, and the divergence
// telescopes.  The node-centered central-difference divergence is O(h^2)
// consistent too, but it does not keep t -> int |H_eps| non-increasing on
// under-resolved profiles; the flux form does, and it matches the solver
// step exactly (rhs = grad_norm_eps * h_eps).
ScalarField h_eps(const ScalarField& u, double eps) {
  const int nx = u.grid.nx, ny = u.grid.ny;
  const double hx = u.grid.hx(), hy = u.grid.hy();
  const double e2 = eps * eps;
  const auto& v = u.values;
  auto wrap = [nx](int i) { return i < 0 ? i + nx : (i >= nx ? i - nx : i); };
  auto mirr = [ny](int j) { return j < 0 ? -j : (j >= ny ? 2 * ny - 2 - j : j); };

  // central gradient components used for the transverse face average
  Array2D uxc(nx, ny), uyc(nx, ny);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < ny; ++j) {
    const int jp = mirr(j + 1), jm = mirr(j - 1);
    for (int i = 0; i < nx; ++i) {
      uxc(i, j) = (v(wrap(i + 1), j) - v(wrap(i - 1), j)) / (2.0 * hx);
      uyc(i, j) = (v(i, jp) - v(i, jm)) / (2.0 * hy);
    }
  }

  // Fx(i,j): flux through the face between nodes i and i+1 (periodic)
  Array2D Fx(nx, ny);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int ip = wrap(i + 1);
      const double dux = (v(ip, j) - v(i, j)) / hx;
      const double uyf = 0.5 * (uyc(i, j) + uyc(ip, j));
      Fx(i, j) = dux / std::sqrt(dux * dux + uyf * uyf + e2);
    }

  // Fy(i,j): flux through the face between rows j and j+1; the outer
  // faces of the boundary rows carry zero flux (Neumann)
  Array2D Fy(nx, ny - 1);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < ny - 1; ++j)
    for (int i = 0; i < nx; ++i) {
      const double duy = (v(i, j + 1) - v(i, j)) / hy;
      const double uxf = 0.5 * (uxc(i, j) + uxc(i, j + 1));
      Fy(i, j) = duy / std::sqrt(duy * duy + uxf * uxf + e2);
    }

  ScalarField out(u.grid);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double fxm = Fx(wrap(i - 1), j);
      const double divx = (Fx(i, j) - fxm) / hx;
      const double fyp = j < ny - 1 ? Fy(i, j) : 0.0;
      const double fym = j > 0 ? Fy(i, j - 1) : 0.0;
      out(i, j) = divx + (fyp - fym) / hy;
    }
  return out;
}

ScalarField grad_norm_eps(const ScalarField& u, double eps) {
  VectorField2 g = gradient(u);
  return {u.grid, (g.x.square() + g.y.square() + eps * eps).sqrt()};
}

double energy(const ScalarField& u, double eps) {
  return integrate(grad_norm_eps(u, eps));
}

StatsRecord compute_stats(const ScalarField& u, double t, double eps) {
  StatsRecord s;
  s.t = t;
  VectorField2 g = gradient(u);
  const Array2D w = g.x.square() + g.y.square();
  const Array2D norm = (w + eps * eps).sqrt();
  s.energy = integrate({u.grid, norm});
  s.sup_grad = w.maxCoeff();
  s.sup_grad = std::sqrt(s.sup_grad);
  ScalarField h = h_eps(u, eps);
  s.l1_curvature = integrate({u.grid, h.values.abs()});
  s.l2_curvature = integrate({u.grid, h.values.square() * norm});
  return s;
}

IdentityReport l1_monotonicity_check(const Trajectory& traj, double jitter_frac) {
  IdentityReport rep;
  rep.name = "l1_curvature_monotone";
  rep.one_sided = true;
  if (traj.stats.empty()) throw std::invalid_argument("empty trajectory");
  const double jitter = jitter_frac * traj.stats.front().l1_curvature;
  rep.tolerance = jitter;
  double worst = 0.0;
  for (size_t k = 1; k < traj.stats.size(); ++k) {
    const double rise = traj.stats[k].l1_curvature - traj.stats[k - 1].l1_curvature;
    if (rise > jitter) rep.violation_times.push_back(traj.stats[k].t);
    worst = std::max(worst, rise);
  }
  rep.lhs = traj.stats.back().l1_curvature;
  rep.rhs = traj.stats.front().l1_curvature;
  rep.abs_residual = worst;
  rep.rel_residual = traj.stats.front().l1_curvature > 0.0
                         ? worst / traj.stats.front().l1_curvature
                         : 0.0;
  rep.pass = rep.violation_times.empty();
  return rep;
}

IdentityReport dissipation_identity_check(const Trajectory& traj, double rel_tol) {
  IdentityReport rep;
  rep.name = "dissipation_identity";
  if (traj.stats.size() < 2) throw std::invalid_argument("need >= 2 snapshots");
  double dissipated = 0.0;
  for (size_t k = 1; k < traj.stats.size(); ++k) {
    const double dt = traj.stats[k].t - traj.stats[k - 1].t;
    dissipated += 0.5 * dt *
                  (traj.stats[k].l2_curvature + traj.stats[k - 1].l2_curvature);
  }
  rep.lhs = traj.stats.back().energy + dissipated;
  rep.rhs = traj.stats.front().energy;
  rep.abs_residual = std::abs(rep.lhs - rep.rhs);
  rep.rel_residual = rep.abs_residual / std::abs(rep.rhs);
  rep.tolerance = rel_tol * std::abs(rep.rhs);
  rep.pass = rep.abs_residual <= rep.tolerance;
  return rep;
}

IdentityReport first_variation_check(const ScalarField& u, double eps,
                                     const SmoothVectorField& X, double tol_frac) {
  const GridSpec& grid = u.grid;
  VectorField2 nu = nu_eps(u, eps);
  ScalarField norm = grad_norm_eps(u, eps);
  ScalarField h = h_eps(u, eps);

  ScalarField lhs_field(grid), rhs_interior(grid), bdry(grid);
  double sup_x = 0.0;
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      const Vec2 p = grid.node(i, j);
      const Vec2 xv = X.value(p);
      const Mat2 jac = X.jacobian(p);
      const Vec2 n(nu.x(i, j), nu.y(i, j));
      const Mat2 proj = Mat2::Identity() - n * n.transpose();
      lhs_field(i, j) = (proj * jac).trace() * norm(i, j);
      rhs_interior(i, j) = h(i, j) * n.dot(xv) * norm(i, j);
      bdry(i, j) = xv.y() * norm(i, j);  // X . nu_bdry: -X_y at y=0, +X_y at top
      sup_x = std::max(sup_x, xv.norm());
    }

  IdentityReport rep;
  rep.name = "first_variation";
  rep.lhs = integrate(lhs_field);
  rep.rhs = integrate(rhs_interior) -
            boundary_integrate(bdry, BoundaryRow::Bottom) +
            boundary_integrate(bdry, BoundaryRow::Top);
  rep.abs_residual = std::abs(rep.lhs - rep.rhs);
  const double scale = std::max({std::abs(rep.lhs), std::abs(rep.rhs),
                                 energy(u, eps) * sup_x * 1e-3});
  rep.rel_residual = scale > 0.0 ? rep.abs_residual / scale : 0.0;
  rep.tolerance = tol_frac * scale;
  rep.pass = rep.abs_residual <= rep.tolerance;
  return rep;
}

IdentityReport brakke_field_check(const Trajectory& traj,
                                  const SpaceTimeScalar& phi, double tol_frac) {
  if (traj.snapshots.size() < 2) throw std::invalid_argument("need >= 2 snapshots");
  const GridSpec& grid = traj.snapshots.front().field.grid;
  const double eps = traj.snapshots.front().epsilon;

  std::vector<double> weighted_phi, balance;
  double sup_dtphi = 0.0;
  for (const Snapshot& snap : traj.snapshots) {
    const ScalarField& u = snap.field;
    VectorField2 nu = nu_eps(u, eps);
    ScalarField norm = grad_norm_eps(u, eps);
    ScalarField h = h_eps(u, eps);
    ScalarField a(grid), b(grid);
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i) {
        const Vec2 p = grid.node(i, j);
        const double ph = phi.value(p, snap.time);
        if (ph < 0.0) throw std::invalid_argument("brakke_field_check: phi < 0");
        const Vec2 gph = phi.gradient(p, snap.time);
        const double dph = phi.dt(p, snap.time);
        const Vec2 n(nu.x(i, j), nu.y(i, j));
        a(i, j) = ph * norm(i, j);
        b(i, j) = (dph - h(i, j) * n.dot(gph) - ph * h(i, j) * h(i, j)) * norm(i, j);
        sup_dtphi = std::max(sup_dtphi, std::abs(dph));
      }
    weighted_phi.push_back(integrate(a));
    balance.push_back(integrate(b));
  }

  IdentityReport rep;
  rep.name = "brakke_field";
  rep.lhs = weighted_phi.back() - weighted_phi.front();
  rep.rhs = 0.0;
  for (size_t k = 1; k < traj.snapshots.size(); ++k) {
    const double dt = traj.snapshots[k].time - traj.snapshots[k - 1].time;
    rep.rhs += 0.5 * dt * (balance[k] + balance[k - 1]);
  }
  rep.abs_residual = std::abs(rep.lhs - rep.rhs);
  const double span = traj.snapshots.back().time - traj.snapshots.front().time;
  const double scale =
      std::max({std::abs(rep.lhs), std::abs(rep.rhs),
                energy(traj.snapshots.front().field, eps) * (sup_dtphi + 1.0) * span * 1e-2});
  rep.rel_residual = scale > 0.0 ? rep.abs_residual / scale : 0.0;
  rep.tolerance = tol_frac * scale;
  rep.pass = rep.abs_residual <= rep.tolerance;
  return rep;
}

std::vector<SmoothVectorField> default_test_fields(const GridSpec& g) {
  const double lx = g.period_x, ly = g.height_y;
  const double kx = 2.0 * M_PI / lx;
  std::vector<SmoothVectorField> fields;

  {  // tangential sinusoid (X . nu_bdry = 0 exactly)
    SmoothVectorField X;
    X.tangential_on_boundary = true;
    X.value = [kx](const Vec2& p) -> Vec2 { return {std::sin(kx * p.x()), 0.0}; };
    X.jacobian = [kx](const Vec2& p) -> Mat2 {
      Mat2 m = Mat2::Zero();
      m(0, 0) = kx * std::cos(kx * p.x());
      return m;
    };
    fields.push_back(X);
  }
  {  // vertical parabola, vanishes on both rows (tangential)
    SmoothVectorField X;
    X.tangential_on_boundary = true;
    X.value = [ly](const Vec2& p) -> Vec2 { return {0.0, p.y() * (ly - p.y())}; };
    X.jacobian = [ly](const Vec2& p) -> Mat2 {
      Mat2 m = Mat2::Zero();
      m(1, 1) = ly - 2.0 * p.y();
      return m;
    };
    fields.push_back(X);
  }
  {  // linear vertical stretch, non-tangential on the top row
    SmoothVectorField X;
    X.value = [](const Vec2& p) -> Vec2 { return {0.0, p.y()}; };
    X.jacobian = [](const Vec2&) -> Mat2 {
      Mat2 m = Mat2::Zero();
      m(1, 1) = 1.0;
      return m;
    };
    fields.push_back(X);
  }
  {  // non-tangential modulated vertical field
    SmoothVectorField X;
    X.value = [kx](const Vec2& p) -> Vec2 {
      return {0.0, std::cos(kx * p.x()) + 2.0};
    };
    X.jacobian = [kx](const Vec2& p) -> Mat2 {
      Mat2 m = Mat2::Zero();
      m(1, 0) = -kx * std::sin(kx * p.x());
      return m;
    };
    fields.push_back(X);
  }
  {  // position-centered field (periodized in x)
    SmoothVectorField X;
    X.value = [kx, ly](const Vec2& p) -> Vec2 {
      return {std::sin(kx * (p.x() - 0.3)) / kx, p.y() - 0.5 * ly};
    };
    X.jacobian = [kx](const Vec2& p) -> Mat2 {
      Mat2 m = Mat2::Identity();
      m(0, 0) = std::cos(kx * (p.x() - 0.3));
      return m;
    };
    fields.push_back(X);
  }
  {  // mixed shear field, tangential (X_y = 0 on both rows)
    SmoothVectorField X;
    X.tangential_on_boundary = true;
    X.value = [kx, ly](const Vec2& p) -> Vec2 {
      const double s = std::sin(M_PI * p.y() / ly);
      return {std::cos(kx * p.x()) * s, std::sin(M_PI * p.y() / ly) *
                                            std::sin(M_PI * p.y() / ly) * 0.5};
    };
    X.jacobian = [kx, ly](const Vec2& p) -> Mat2 {
      const double ky = M_PI / ly;
      const double s = std::sin(ky * p.y()), c = std::cos(ky * p.y());
      Mat2 m;
      m(0, 0) = -kx * std::sin(kx * p.x()) * s;
      m(0, 1) = std::cos(kx * p.x()) * ky * c;
      m(1, 0) = 0.0;
      m(1, 1) = s * c * ky;
      return m;
    };
    fields.push_back(X);
  }
  return fields;
}

}  // namespace mcf
