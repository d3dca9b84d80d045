#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

#include "mcf/field.hpp"
#include "mcf/smooth.hpp"
#include "mcf/snapshot.hpp"

using namespace mcf;

namespace {

ScalarField fill(const GridSpec& g, double (*f)(double, double)) {
  ScalarField u(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) u(i, j) = f(g.x(i), g.y(j));
  return u;
}

double max_err(const Array2D& a, const Array2D& b) {
  return (a - b).abs().maxCoeff();
}

}  // namespace

TEST_CASE("GridSpec geometry and validation") {
  GridSpec g(2.0, 1.0, 64, 33);
  CHECK(g.hx() == doctest::Approx(2.0 / 64));
  CHECK(g.hy() == doctest::Approx(1.0 / 32));
  CHECK(g.y(g.ny - 1) == doctest::Approx(1.0));
  CHECK(GridSpec::outer_normal(BoundaryRow::Bottom) == Vec2(0, -1));
  CHECK(GridSpec::outer_normal(BoundaryRow::Top) == Vec2(0, 1));
  CHECK_THROWS(GridSpec(-1.0, 1.0, 64, 33));
  CHECK_THROWS(GridSpec(1.0, 1.0, 4, 33));
}

TEST_CASE("gradient: constant field is exactly zero") {
  GridSpec g(1.0, 1.0, 32, 17);
  ScalarField u(g);
  u.values.setConstant(3.0);
  VectorField2 d = gradient(u);
  CHECK(d.x.abs().maxCoeff() == 0.0);
  CHECK(d.y.abs().maxCoeff() == 0.0);
}

TEST_CASE("gradient: sin(2 pi x) converges at O(hx^2), y-part exactly 0") {
  auto f = [](double x, double) { return std::sin(2.0 * M_PI * x); };
  double err[2];
  int k = 0;
  for (int n : {64, 128}) {
    GridSpec g(1.0, 1.0, n, 17);
    VectorField2 d = gradient(fill(g, f));
    double worst = 0.0;
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        worst = std::max(worst, std::abs(d.x(i, j) -
                                         2.0 * M_PI * std::cos(2.0 * M_PI * g.x(i))));
    err[k++] = worst;
    CHECK(d.y.abs().maxCoeff() == 0.0);
  }
  CHECK(err[0] / err[1] > 3.5);  // second order
}

TEST_CASE("gradient: mirror ghost returns 0 at boundary rows for cos(pi y)") {
  auto f = [](double, double y) { return std::cos(M_PI * y); };
  GridSpec g(1.0, 1.0, 8, 65);
  VectorField2 d = gradient(fill(g, f));
  // interior matches the analytic derivative at O(hy^2)
  double worst = 0.0;
  for (int j = 1; j < g.ny - 1; ++j)
    worst = std::max(worst, std::abs(d.y(0, j) + M_PI * std::sin(M_PI * g.y(j))));
  CHECK(worst < 10.0 * M_PI * g.hy() * g.hy());
  // boundary rows get the BC-enforcing 0, not the analytic derivative
  for (int i = 0; i < g.nx; ++i) {
    CHECK(d.y(i, 0) == 0.0);
    CHECK(d.y(i, g.ny - 1) == 0.0);
  }
}

TEST_CASE("mirror ghost: discrete y-derivative is 0 on boundary rows for any field") {
  GridSpec g(1.0, 1.0, 16, 17);
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> u01(-1.0, 1.0);
  ScalarField u(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) u(i, j) = u01(rng);
  VectorField2 d = gradient(u);
  for (int i = 0; i < g.nx; ++i) {
    CHECK(d.y(i, 0) == 0.0);
    CHECK(d.y(i, g.ny - 1) == 0.0);
  }
}

TEST_CASE("hessian: constants, d_xx of sin, mixed derivative") {
  GridSpec g(1.0, 1.0, 128, 129);
  ScalarField c(g);
  c.values.setConstant(-7.0);
  HessianField hc = hessian(c);
  CHECK(hc.xx.abs().maxCoeff() == 0.0);
  CHECK(hc.xy.abs().maxCoeff() == 0.0);
  CHECK(hc.yy.abs().maxCoeff() == 0.0);

  auto f = [](double x, double) { return std::sin(2.0 * M_PI * x); };
  HessianField h = hessian(fill(g, f));
  double worst = 0.0;
  const double w = 2.0 * M_PI;
  for (int i = 0; i < g.nx; ++i)
    worst = std::max(worst, std::abs(h.xx(i, 8) + w * w * std::sin(w * g.x(i))));
  CHECK(worst < 10.0 * w * w * w * g.hx() * g.hx());

  // f = sin(2 pi x) * y, interior mixed derivative
  auto fm = [](double x, double y) { return std::sin(2.0 * M_PI * x) * y; };
  HessianField hm = hessian(fill(g, fm));
  worst = 0.0;
  for (int j = 2; j < g.ny - 2; ++j)
    for (int i = 0; i < g.nx; ++i)
      worst = std::max(worst, std::abs(hm.xy(i, j) - w * std::cos(w * g.x(i))));
  CHECK(worst < 10.0 * w * w * g.hx() * g.hx());
}

TEST_CASE("integrate: exactness cases") {
  GridSpec g(2.0, 1.5, 64, 49);
  ScalarField one(g);
  one.values.setConstant(1.0);
  CHECK(integrate(one) == doctest::Approx(2.0 * 1.5).epsilon(1e-13));

  auto fs = [](double x, double) { double s = std::sin(2.0 * M_PI * x / 2.0); return s * s; };
  CHECK(integrate(fill(g, fs)) == doctest::Approx(2.0 * 1.5 / 2.0).epsilon(1e-12));

  auto fy = [](double, double y) { return y; };
  CHECK(integrate(fill(g, fy)) == doctest::Approx(2.0 * 1.5 * 1.5 / 2.0).epsilon(1e-12));
}

TEST_CASE("integrate: linearity to 1e-12 relative") {
  GridSpec g(1.0, 1.0, 32, 33);
  auto f1 = [](double x, double y) { return std::sin(2.0 * M_PI * x) + y * y; };
  auto f2 = [](double x, double y) { return std::cos(4.0 * M_PI * x) * y; };
  ScalarField a = fill(g, f1), b = fill(g, f2);
  ScalarField combo(g, 2.5 * a.values - 0.75 * b.values);
  const double lhs = integrate(combo);
  const double rhs = 2.5 * integrate(a) - 0.75 * integrate(b);
  CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
}

TEST_CASE("boundary_integrate: row rectangle rule") {
  GridSpec g(3.0, 1.0, 48, 17);
  ScalarField one(g);
  one.values.setConstant(1.0);
  CHECK(boundary_integrate(one, BoundaryRow::Bottom) == doctest::Approx(3.0).epsilon(1e-13));

  auto fs = [](double x, double) { return std::sin(2.0 * M_PI * x / 3.0); };
  CHECK(std::abs(boundary_integrate(fill(g, fs), BoundaryRow::Bottom)) < 1e-12);

  auto fc = [](double x, double) { return 2.0 + std::cos(4.0 * M_PI * x / 3.0); };
  CHECK(boundary_integrate(fill(g, fc), BoundaryRow::Top) ==
        doctest::Approx(2.0 * 3.0).epsilon(1e-12));
}

TEST_CASE("sup_norm / sup_grad") {
  GridSpec g(1.0, 1.0, 256, 17);
  ScalarField c(g);
  c.values.setConstant(-4.0);
  CHECK(sup_norm(c) == 4.0);
  CHECK(sup_grad(c) == 0.0);
  auto f = [](double x, double) { return std::sin(2.0 * M_PI * x); };
  CHECK(sup_grad(fill(g, f)) == doctest::Approx(2.0 * M_PI).epsilon(1e-3));
  ScalarField z(g);
  CHECK(sup_norm(z) == 0.0);
}

TEST_CASE("discrete divergence theorem at O(h^2)") {
  // X = (sin(2 pi x) cos(pi y), sin^2(pi y / 2) (cos(2 pi x) + 2)) sampled on
  // the grid, discrete divergence integrated against the boundary flux
  auto vx = [](double x, double y) { return std::sin(2.0 * M_PI * x) * std::cos(M_PI * y); };
  auto vy = [](double x, double y) {
    const double s = std::sin(0.5 * M_PI * y);
    return s * s * (std::cos(2.0 * M_PI * x) + 2.0);
  };
  double err[2];
  int k = 0;
  for (int n : {32, 64}) {
    GridSpec g(1.0, 1.0, n, n + 1);
    VectorField2 v(g);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        v.x(i, j) = vx(g.x(i), g.y(j));
        v.y(i, j) = vy(g.x(i), g.y(j));
      }
    // X . nu = -X_y at y=0 (zero here), +X_y at y=L_y
    ScalarField flux_f(g);
    for (int i = 0; i < g.nx; ++i) flux_f(i, g.ny - 1) = vy(g.x(i), 1.0);
    const double flux = boundary_integrate(flux_f, BoundaryRow::Top);
    err[k++] = std::abs(integrate(divergence(v)) - flux);
  }
  CHECK(err[0] / err[1] > 3.5);
  CHECK(err[1] < 1e-2);
}

TEST_CASE("gradient/hessian commute with adding constants") {
  GridSpec g(1.0, 1.0, 32, 33);
  auto f = [](double x, double y) { return std::sin(2.0 * M_PI * x) * (1.0 + y); };
  ScalarField a = fill(g, f);
  ScalarField b(g, a.values + 11.25);
  // the shift cancels in exact arithmetic; allow cancellation roundoff
  VectorField2 da = gradient(a), db = gradient(b);
  CHECK(max_err(da.x, db.x) < 1e-10);
  CHECK(max_err(da.y, db.y) < 1e-10);
  HessianField ha = hessian(a), hb = hessian(b);
  CHECK(max_err(ha.xx, hb.xx) < 1e-9);
  CHECK(max_err(ha.xy, hb.xy) < 1e-9);
  CHECK(max_err(ha.yy, hb.yy) < 1e-9);
}

TEST_CASE("divergence of a sampled analytic field converges") {
  auto vx = [](double x, double y) { return std::sin(2.0 * M_PI * x) * y; };
  auto vy = [](double x, double y) { return std::cos(2.0 * M_PI * x) * y * y; };
  auto dv = [](double x, double y) {
    return 2.0 * M_PI * std::cos(2.0 * M_PI * x) * y + 2.0 * y * std::cos(2.0 * M_PI * x);
  };
  double err[2];
  int k = 0;
  for (int n : {32, 64}) {
    GridSpec g(1.0, 1.0, n, n + 1);
    VectorField2 v(g);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        v.x(i, j) = vx(g.x(i), g.y(j));
        v.y(i, j) = vy(g.x(i), g.y(j));
      }
    ScalarField d = divergence(v);
    double worst = 0.0;
    for (int j = 2; j < g.ny - 2; ++j)
      for (int i = 0; i < g.nx; ++i)
        worst = std::max(worst, std::abs(d(i, j) - dv(g.x(i), g.y(j))));
    err[k++] = worst;
  }
  CHECK(err[0] / err[1] > 3.5);
}

TEST_CASE("snapshot: round trip is bit identical") {
  GridSpec g(1.0, 1.0, 16, 9);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u01(-1.0, 1.0);
  Snapshot s;
  s.field = ScalarField(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) s.field(i, j) = u01(rng);
  s.epsilon = 1e-3;
  s.time = 0.125;
  const std::string path = "snap_roundtrip_test.snap";
  write_snapshot(path, s);
  Snapshot r = read_snapshot(path);
  CHECK(r.field.grid == g);
  CHECK(r.epsilon == s.epsilon);
  CHECK(r.time == s.time);
  CHECK((r.field.values == s.field.values).all());
  std::filesystem::remove(path);
}

TEST_CASE("snapshot: unreadable / malformed files are rejected") {
  CHECK_THROWS(read_snapshot("does_not_exist.snap"));
  const std::string path = "snap_bad_test.snap";
  {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    std::fputs("nx=16\nny=9\nnot_a_header\n", f);
    std::fclose(f);
  }
  CHECK_THROWS(read_snapshot(path));
  std::filesystem::remove(path);
}
