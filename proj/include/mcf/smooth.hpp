#pragma once

// Analytic function objects on the strip: value/gradient/hessian at
// arbitrary points, periodic in x by construction of the callers.

#include <functional>

#include "mcf/field.hpp"

namespace mcf {

struct SmoothScalar {
  std::function<double(const Vec2&)> value;
  std::function<Vec2(const Vec2&)> gradient;
  std::function<Mat2(const Vec2&)> hessian;
};

// analytic vector field with Jacobian; jacobian(p)(r,c) = dX^r/dx_c
struct SmoothVectorField {
  std::function<Vec2(const Vec2&)> value;
  std::function<Mat2(const Vec2&)> jacobian;
  bool tangential_on_boundary = false;  // X . nu = 0 on both rows
};

// nonnegative C^1 test function of (x, t) for the Brakke checks
struct SpaceTimeScalar {
  std::function<double(const Vec2&, double)> value;
  std::function<Vec2(const Vec2&, double)> gradient;   // spatial
  std::function<double(const Vec2&, double)> dt;       // time derivative
};

ScalarField sample(const SmoothScalar& f, const GridSpec& g);
VectorField2 sample(const SmoothVectorField& f, const GridSpec& g);

}  // namespace mcf
