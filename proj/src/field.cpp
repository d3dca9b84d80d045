#include "mcf/field.hpp"

#include <cmath>

namespace mcf {

namespace {
inline int wrap(int i, int n) { return i < 0 ? i + n : (i >= n ? i - n : i); }
// mirror-ghost row index: j=-1 -> 1, j=ny -> ny-2
inline int mirr(int j, int ny) { return j < 0 ? -j : (j >= ny ? 2 * ny - 2 - j : j); }
}  // namespace

VectorField2 gradient(const ScalarField& f) {
  const int nx = f.grid.nx, ny = f.grid.ny;
  const double ihx = 0.5 / f.grid.hx(), ihy = 0.5 / f.grid.hy();
  VectorField2 g(f.grid);
  for (int j = 0; j < ny; ++j) {
    const int jp = mirr(j + 1, ny), jm = mirr(j - 1, ny);
    for (int i = 0; i < nx; ++i) {
      const int ip = wrap(i + 1, nx), im = wrap(i - 1, nx);
      g.x(i, j) = (f(ip, j) - f(im, j)) * ihx;
      g.y(i, j) = (f(i, jp) - f(i, jm)) * ihy;
    }
  }
  return g;
}

HessianField hessian(const ScalarField& f) {
  const int nx = f.grid.nx, ny = f.grid.ny;
  const double hx = f.grid.hx(), hy = f.grid.hy();
  const double ihx2 = 1.0 / (hx * hx), ihy2 = 1.0 / (hy * hy);
  const double ihxy = 0.25 / (hx * hy);
  HessianField h(f.grid);
  for (int j = 0; j < ny; ++j) {
    const int jp = mirr(j + 1, ny), jm = mirr(j - 1, ny);
    for (int i = 0; i < nx; ++i) {
      const int ip = wrap(i + 1, nx), im = wrap(i - 1, nx);
      h.xx(i, j) = (f(ip, j) - 2.0 * f(i, j) + f(im, j)) * ihx2;
      h.yy(i, j) = (f(i, jp) - 2.0 * f(i, j) + f(i, jm)) * ihy2;
      h.xy(i, j) = (f(ip, jp) - f(im, jp) - f(ip, jm) + f(im, jm)) * ihxy;
    }
  }
  return h;
}

ScalarField divergence(const VectorField2& v) {
  const int nx = v.grid.nx, ny = v.grid.ny;
  const double ihx = 0.5 / v.grid.hx(), ihy = 0.5 / v.grid.hy();
  ScalarField d(v.grid);
  for (int j = 0; j < ny; ++j) {
    const int jp = mirr(j + 1, ny), jm = mirr(j - 1, ny);
    for (int i = 0; i < nx; ++i) {
      const int ip = wrap(i + 1, nx), im = wrap(i - 1, nx);
      d(i, j) = (v.x(ip, j) - v.x(im, j)) * ihx + (v.y(i, jp) - v.y(i, jm)) * ihy;
    }
  }
  return d;
}

double integrate(const ScalarField& f) {
  const int ny = f.grid.ny;
  double s = 0.0;
  s += 0.5 * f.values.col(0).sum();
  for (int j = 1; j < ny - 1; ++j) s += f.values.col(j).sum();
  s += 0.5 * f.values.col(ny - 1).sum();
  return s * f.grid.hx() * f.grid.hy();
}

double boundary_integrate(const ScalarField& f, BoundaryRow which) {
  const int j = which == BoundaryRow::Bottom ? 0 : f.grid.ny - 1;
  return f.values.col(j).sum() * f.grid.hx();
}

double sup_norm(const ScalarField& f) { return f.values.abs().maxCoeff(); }

double sup_grad(const ScalarField& f) {
  VectorField2 g = gradient(f);
  return (g.x.square() + g.y.square()).sqrt().maxCoeff();
}

}  // namespace mcf
