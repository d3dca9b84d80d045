#pragma once

// Structured-grid fields on the periodic strip (periodic x) x [0, L_y],
// with mirror-ghost Neumann handling in y and periodic wrap in x.

#include <Eigen/Dense>
#include <stdexcept>

namespace mcf {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using Array2D = Eigen::ArrayXXd;  // (nx, ny), column-major: i fastest

enum class BoundaryRow { Bottom, Top };  // Gamma^0 = {y=0}, Gamma^1 = {y=L_y}

struct GridSpec {
  double period_x = 1.0;   // L_x
  double height_y = 1.0;   // L_y
  int nx = 8;              // periodic nodes x_i = i*hx, i = 0..nx-1
  int ny = 8;              // nodes y_j = j*hy, j = 0..ny-1, both rows included

  GridSpec() = default;
  GridSpec(double lx, double ly, int nx_, int ny_)
      : period_x(lx), height_y(ly), nx(nx_), ny(ny_) {
    if (lx <= 0 || ly <= 0 || nx < 8 || ny < 8)
      throw std::invalid_argument("GridSpec: need L_x,L_y > 0 and nx,ny >= 8");
  }

  double hx() const { return period_x / nx; }
  double hy() const { return height_y / (ny - 1); }
  double x(int i) const { return i * hx(); }
  double y(int j) const { return j * hy(); }
  Vec2 node(int i, int j) const { return {x(i), y(j)}; }

  // outer normal of the boundary component
  static Vec2 outer_normal(BoundaryRow r) {
    return r == BoundaryRow::Bottom ? Vec2(0, -1) : Vec2(0, 1);
  }

  bool operator==(const GridSpec& o) const {
    return period_x == o.period_x && height_y == o.height_y &&
           nx == o.nx && ny == o.ny;
  }
};

struct ScalarField {
  GridSpec grid;
  Array2D values;  // (nx, ny)

  ScalarField() = default;
  explicit ScalarField(const GridSpec& g)
      : grid(g), values(Array2D::Zero(g.nx, g.ny)) {}
  ScalarField(const GridSpec& g, Array2D v) : grid(g), values(std::move(v)) {}

  double& operator()(int i, int j) { return values(i, j); }
  double operator()(int i, int j) const { return values(i, j); }
  bool all_finite() const { return values.isFinite().all(); }
};

struct VectorField2 {
  GridSpec grid;
  Array2D x, y;

  VectorField2() = default;
  explicit VectorField2(const GridSpec& g)
      : grid(g), x(Array2D::Zero(g.nx, g.ny)), y(Array2D::Zero(g.nx, g.ny)) {}
};

// symmetric second-derivative field
struct HessianField {
  GridSpec grid;
  Array2D xx, xy, yy;

  explicit HessianField(const GridSpec& g)
      : grid(g),
        xx(Array2D::Zero(g.nx, g.ny)),
        xy(Array2D::Zero(g.nx, g.ny)),
        yy(Array2D::Zero(g.nx, g.ny)) {}
};

// Central differences; x wraps periodically, y uses the mirror ghost
// u[-1] = u[1], u[ny] = u[ny-2], so the discrete y-derivative is exactly
// zero on both boundary rows (the Neumann condition grad u . nu = 0).
VectorField2 gradient(const ScalarField& f);
HessianField hessian(const ScalarField& f);

// divergence of a vector field with the same ghost policy (even mirror in y)
ScalarField divergence(const VectorField2& v);

// trapezoid in y x rectangle rule in x
double integrate(const ScalarField& f);
// rectangle rule along one boundary row
double boundary_integrate(const ScalarField& f, BoundaryRow which);

double sup_norm(const ScalarField& f);
double sup_grad(const ScalarField& f);

}  // namespace mcf
