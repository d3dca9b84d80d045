#include "mcf/smooth.hpp"

namespace mcf {

ScalarField sample(const SmoothScalar& f, const GridSpec& g) {
  ScalarField out(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) out(i, j) = f.value(g.node(i, j));
  return out;
}

VectorField2 sample(const SmoothVectorField& f, const GridSpec& g) {
  VectorField2 out(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      Vec2 v = f.value(g.node(i, j));
      out.x(i, j) = v.x();
      out.y(i, j) = v.y();
    }
  return out;
}

}  // namespace mcf
