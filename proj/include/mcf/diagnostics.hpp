#pragma once

// Regularized geometric quantities (nu_eps, H_eps) and the per-trajectory
// identity/monotonicity checks: L^1 curvature monotonicity, the energy
// dissipation balance, the first-variation identity with boundary term,
// and the field-level Brakke relation (an equality at fixed epsilon).

#include <string>
#include <vector>

#include "mcf/evolve.hpp"
#include "mcf/field.hpp"
#include "mcf/smooth.hpp"

namespace mcf {

// nu_eps = grad u / sqrt(|grad u|^2 + eps^2); pointwise norm < 1
VectorField2 nu_eps(const ScalarField& u, double eps);
// H_eps = div(nu_eps)
ScalarField h_eps(const ScalarField& u, double eps);
// sqrt(|grad u|^2 + eps^2)
ScalarField grad_norm_eps(const ScalarField& u, double eps);

double energy(const ScalarField& u, double eps);

StatsRecord compute_stats(const ScalarField& u, double t, double eps);

struct IdentityReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_residual = 0.0;
  double rel_residual = 0.0;
  double tolerance = 0.0;
  bool one_sided = false;  // pass iff rhs - lhs >= -tolerance
  bool pass = false;
  std::vector<double> violation_times;  // for monotonicity-type checks
};

// t -> int |H_eps| non-increasing; jitter = jitter_frac * initial value
IdentityReport l1_monotonicity_check(const Trajectory& traj,
                                     double jitter_frac = 1e-3);

// energy(T) + int_0^T int |H_eps|^2 sqrt(...) == energy(0)
IdentityReport dissipation_identity_check(const Trajectory& traj,
                                          double rel_tol = 0.01);

// int tr((I - nu(x)nu) grad X) sqrt(...)
//   == int H_eps (nu . X) sqrt(...) + int_bdry (X . nu_bdry) sqrt(...)
IdentityReport first_variation_check(const ScalarField& u, double eps,
                                     const SmoothVectorField& X,
                                     double tol_frac = 0.02);

// [int phi sqrt(...)]_{t1}^{t2}
//   == int int (dt phi - H_eps (nu . grad phi) - phi H_eps^2) sqrt(...)
// over the whole trajectory span; equality at fixed epsilon
IdentityReport brakke_field_check(const Trajectory& traj,
                                  const SpaceTimeScalar& phi,
                                  double tol_frac = 0.02);

// default test-field library of the first-variation checks; mixes fields
// tangential and non-tangential on the boundary rows
std::vector<SmoothVectorField> default_test_fields(const GridSpec& g);

}  // namespace mcf
