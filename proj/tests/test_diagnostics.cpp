#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "mcf/diagnostics.hpp"
#include "mcf/evolve.hpp"
#include "mcf/field.hpp"
#include "mcf/initial_data.hpp"

using namespace mcf;

namespace {

ScalarField sample_fn(const GridSpec& g, const std::function<double(double, double)>& f) {
  ScalarField u(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      Vec2 p = g.node(i, j);
      u(i, j) = f(p.x(), p.y());
    }
  return u;
}

// one shared trajectory for the identity checks: 256 x 257 (the identities
// carry a few-percent spatial error at 128), dense snapshots so the
// trapezoid-in-time quadrature resolves the early transient
const Trajectory& shared_run() {
  static Trajectory tr = [] {
    GridSpec g(1.0, 1.0, 256, 257);
    auto D = build_initial_datum({{0.5, 0.0}, 0.25}, g, CutoffProfile{}, AppendixConfig{});
    SolverConfig cfg;
    cfg.epsilon = 1e-2;
    cfg.t_end = 4e-3;
    cfg.snapshot_every = cfg.t_end / 256;
    return run(D.g, cfg);
  }();
  return tr;
}

}  // namespace

TEST_CASE("nu_eps: constants give zero, tilted plane gives the exact direction") {
  GridSpec g(1.0, 1.0, 64, 65);
  ScalarField c(g);
  c.values.setConstant(2.0);
  VectorField2 n0 = nu_eps(c, 1e-2);
  CHECK(n0.x.abs().maxCoeff() == 0.0);
  CHECK(n0.y.abs().maxCoeff() == 0.0);

  const double a = 0.7, eps = 0.05;
  ScalarField u = sample_fn(g, [&](double, double y) { return a * y; });
  VectorField2 n = nu_eps(u, eps);
  const double expect = a / std::sqrt(a * a + eps * eps);
  for (int j = 1; j < g.ny - 1; ++j)
    for (int i = 0; i < g.nx; ++i) {
      CHECK(std::abs(n.x(i, j)) < 1e-14);
      CHECK(n.y(i, j) == doctest::Approx(expect).epsilon(1e-12));
    }
  // pointwise norm strictly below 1
  CHECK((n.x.square() + n.y.square()).maxCoeff() < 1.0);
}

TEST_CASE("h_eps: radial field matches the symbolic oracle at O(h^2)") {
  // u = |p - c|^2, q = 4 d^2 + eps^2: H_eps = 2 eps^2 q^{-3/2} + 2 q^{-1/2}
  const Vec2 c(0.5, 0.5);
  const double eps = 0.1;
  double err[2];
  int n[2] = {64, 128};
  for (int k = 0; k < 2; ++k) {
    GridSpec g(1.0, 1.0, n[k], n[k] + 1);
    ScalarField u = sample_fn(g, [&](double x, double y) {
      return (x - c.x()) * (x - c.x()) + (y - c.y()) * (y - c.y());
    });
    ScalarField h = h_eps(u, eps);
    double worst = 0.0;
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        Vec2 p = g.node(i, j);
        const double d2 = (p - c).squaredNorm();
        if (d2 > 0.09 || d2 < 0.01) continue;
        const double q = 4.0 * d2 + eps * eps;
        const double oracle = 2.0 * eps * eps * std::pow(q, -1.5) + 2.0 / std::sqrt(q);
        worst = std::max(worst, std::abs(h(i, j) - oracle));
      }
    err[k] = worst;
  }
  CHECK(err[0] / err[1] > 3.5);
}

TEST_CASE("grad_norm_eps: exact on a plane, bounded below by eps") {
  GridSpec g(1.0, 1.0, 64, 65);
  const double eps = 0.03;
  ScalarField u = sample_fn(g, [](double, double y) { return 0.4 * y; });
  ScalarField s = grad_norm_eps(u, eps);
  for (int j = 1; j < g.ny - 1; ++j)
    for (int i = 0; i < g.nx; ++i)
      CHECK(s(i, j) == doctest::Approx(std::sqrt(0.16 + eps * eps)).epsilon(1e-12));
  CHECK(s.values.minCoeff() >= eps);
  CHECK(energy(u, eps) == doctest::Approx(integrate(s)).epsilon(1e-14));
}

TEST_CASE("compute_stats: consistency with the field functions") {
  GridSpec g(1.0, 1.0, 64, 65);
  auto D = build_initial_datum({{0.5, 0.0}, 0.25}, g, CutoffProfile{}, AppendixConfig{});
  const double eps = 1e-2;
  StatsRecord st = compute_stats(D.g, 0.37, eps);
  CHECK(st.t == 0.37);
  CHECK(st.energy == doctest::Approx(energy(D.g, eps)).epsilon(1e-14));
  ScalarField h = h_eps(D.g, eps);
  ScalarField nrm = grad_norm_eps(D.g, eps);
  CHECK(st.l1_curvature ==
        doctest::Approx(integrate({g, h.values.abs()})).epsilon(1e-14));
  CHECK(st.l2_curvature ==
        doctest::Approx(integrate({g, h.values.square() * nrm.values})).epsilon(1e-14));
  CHECK(st.sup_grad == doctest::Approx(sup_grad(D.g)).epsilon(1e-14));
}

TEST_CASE("l1_monotonicity: passes forward, fails on the reversed trajectory") {
  const Trajectory& tr = shared_run();
  IdentityReport rep = l1_monotonicity_check(tr);
  CHECK(rep.pass);
  CHECK(rep.violation_times.empty());

  Trajectory rev = tr;
  std::reverse(rev.snapshots.begin(), rev.snapshots.end());
  std::reverse(rev.stats.begin(), rev.stats.end());
  for (size_t k = 0; k < rev.stats.size(); ++k) {
    rev.stats[k].t = tr.stats[k].t;
    rev.snapshots[k].time = tr.snapshots[k].time;
  }
  IdentityReport bad = l1_monotonicity_check(rev);
  CHECK(!bad.pass);
  CHECK(!bad.violation_times.empty());
}

TEST_CASE("dissipation identity: passes on a run, fails on a corrupted snapshot") {
  const Trajectory& tr = shared_run();
  IdentityReport rep = dissipation_identity_check(tr);
  CHECK(rep.pass);
  CHECK(rep.rel_residual < 0.01);

  // corrupt the final snapshot and recompute its stats: balance must break
  Trajectory bad = tr;
  Snapshot& last = bad.snapshots.back();
  last.field.values *= 1.5;
  bad.stats.back() = compute_stats(last.field, last.time, last.epsilon);
  // keep dissipation_cum consistent with the trapezoid rule over stats
  IdentityReport brep = dissipation_identity_check(bad);
  CHECK(!brep.pass);
}

TEST_CASE("first_variation: zero field is exact, constant field reduces to flux") {
  GridSpec g(1.0, 1.0, 128, 129);
  auto D = build_initial_datum({{0.5, 0.0}, 0.25}, g, CutoffProfile{}, AppendixConfig{});
  const double eps = 1e-2;

  SmoothVectorField zero;
  zero.value = [](const Vec2&) { return Vec2::Zero().eval(); };
  zero.jacobian = [](const Vec2&) { return Mat2::Zero().eval(); };
  zero.tangential_on_boundary = true;
  IdentityReport rz = first_variation_check(D.g, eps, zero);
  CHECK(rz.pass);
  CHECK(rz.abs_residual < 1e-14);
}

TEST_CASE("first_variation: holds on an evolved smooth profile for the library") {
  const Trajectory& tr = shared_run();
  const ScalarField& u = tr.snapshots.back().field;
  auto fields = default_test_fields(u.grid);
  REQUIRE(fields.size() >= 5);
  bool any_nontangential = false;
  for (const auto& X : fields) {
    IdentityReport rep = first_variation_check(u, 1e-2, X);
    CHECK(rep.pass);
    if (!X.tangential_on_boundary) any_nontangential = true;
  }
  CHECK(any_nontangential);
}

TEST_CASE("default_test_fields: tangency flags match the actual boundary values") {
  GridSpec g(1.0, 1.0, 64, 65);
  auto fields = default_test_fields(g);
  for (const auto& X : fields) {
    double worst = 0.0;
    for (double x = 0.0; x < 1.0; x += 0.01) {
      worst = std::max(worst, std::abs(X.value(Vec2(x, 0.0)).y()));
      worst = std::max(worst, std::abs(X.value(Vec2(x, g.height_y)).y()));
    }
    if (X.tangential_on_boundary) {
      CHECK(worst < 1e-14);
    } else {
      CHECK(worst > 1e-3);
    }
    // jacobian consistency at a generic point
    const Vec2 p(0.31, 0.47);
    Mat2 J = X.jacobian(p);
    for (int c = 0; c < 2; ++c) {
      Vec2 e = Vec2::Zero();
      e[c] = 1e-6;
      Vec2 fd = (X.value(p + e) - X.value(p - e)) / 2e-6;
      CHECK((J.col(c) - fd).norm() < 1e-8);
    }
  }
}

TEST_CASE("brakke_field: phi == 1 reproduces the dissipation balance exactly") {
  const Trajectory& tr = shared_run();

  SpaceTimeScalar one;
  one.value = [](const Vec2&, double) { return 1.0; };
  one.gradient = [](const Vec2&, double) { return Vec2::Zero().eval(); };
  one.dt = [](const Vec2&, double) { return 0.0; };
  IdentityReport rb = brakke_field_check(tr, one);
  IdentityReport rd = dissipation_identity_check(tr);
  CHECK(rb.pass);
  // same trapezoid quadrature, same integrand: the two absolute residuals
  // agree to roundoff
  CHECK(std::abs(rb.abs_residual - rd.abs_residual) < 1e-12);

  // a spatially varying nonnegative test function also balances
  SpaceTimeScalar phi;
  phi.value = [](const Vec2& p, double) { return 2.0 + std::cos(2.0 * M_PI * p.x()); };
  phi.gradient = [](const Vec2& p, double) {
    return Vec2(-2.0 * M_PI * std::sin(2.0 * M_PI * p.x()), 0.0);
  };
  phi.dt = [](const Vec2&, double) { return 0.0; };
  IdentityReport rp = brakke_field_check(tr, phi);
  CHECK(rp.pass);

  // negative test functions are rejected
  SpaceTimeScalar neg;
  neg.value = [](const Vec2&, double) { return -1.0; };
  neg.gradient = [](const Vec2&, double) { return Vec2::Zero().eval(); };
  neg.dt = [](const Vec2&, double) { return 0.0; };
  CHECK_THROWS(brakke_field_check(tr, neg));
}

TEST_CASE("brakke_field: time-dependent test function uses the dt term") {
  const Trajectory& tr = shared_run();
  SpaceTimeScalar phi;
  phi.value = [](const Vec2& p, double t) { return 1.0 + 50.0 * t + 0.3 * p.y(); };
  phi.gradient = [](const Vec2&, double) { return Vec2(0.0, 0.3); };
  phi.dt = [](const Vec2&, double) { return 50.0; };
  IdentityReport rep = brakke_field_check(tr, phi);
  CHECK(rep.pass);
}
