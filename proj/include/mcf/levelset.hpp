#pragma once

// Level-set extraction (marching squares on the periodic strip) and the
// varifold-level checks: curve mass, first variation against analytic
// test fields, endpoint conormal angles (the generalized Neumann
// condition), coarea consistency, per-level Brakke inequality, the
// semi-decreasing property, and the total-variation bound.

#include <array>
#include <functional>
#include <vector>

#include "mcf/diagnostics.hpp"
#include "mcf/evolve.hpp"
#include "mcf/field.hpp"
#include "mcf/smooth.hpp"

namespace mcf {

struct CurveEndpoint {
  bool on_boundary = false;
  BoundaryRow component = BoundaryRow::Bottom;
};

struct LevelCurve {
  std::vector<Vec2> vertices;  // x wrapped into [0, L_x); closed: first == last
  bool closed = false;
  CurveEndpoint start, end;    // meaningful for open curves
  double period_x = 0.0;       // 0 -> treat segment deltas literally
  int perturbed_nodes = 0;     // nodes nudged by the symbolic perturbation
};

// marching squares with linear edge interpolation, periodic stitching in
// x, saddle cells disambiguated by the cell-center average; open chains
// terminate on the boundary rows
std::vector<LevelCurve> extract_level(const ScalarField& u, double gamma);

double curve_mass(const LevelCurve& c);

// delta V(X) = sum over segments of tr((I - nu(x)nu) grad X) at the
// midpoint times the segment length
double curve_first_variation(const LevelCurve& c, const SmoothVectorField& X);

// int_c f dH^1 by the midpoint rule
double curve_integral(const LevelCurve& c,
                      const std::function<double(const Vec2&)>& f);

// angle (degrees) between the outward conormal at each endpoint and the
// outer normal of its boundary component; {start, end}
std::array<double, 2> conormal_angles(const LevelCurve& c);

bool curve_self_intersects(const LevelCurve& c);

// bilinear interpolation, periodic in x, clamped in y
double bilinear(const ScalarField& f, const Vec2& p);

struct CurveFamily {
  std::vector<double> gammas;
  std::vector<double> times;
  // curves[gi][ti]
  std::vector<std::vector<std::vector<LevelCurve>>> curves;

  double mass(int gi, int ti) const;
};

CurveFamily build_family(const Trajectory& traj, const std::vector<double>& gammas);

std::vector<double> uniform_gammas(int count, double lo, double hi);

// initial-mass outlier rule: a level whose t=0 mass jumps by more than
// 50% against both neighbors is excluded from the pass/fail sweeps
std::vector<bool> mass_outliers(const CurveFamily& family);

// int phi |grad u| dx  ==  sum_gamma dgamma sum_curves int_curve phi dH^1
IdentityReport coarea_check(const ScalarField& u,
                            const std::function<double(const Vec2&)>& phi,
                            const std::vector<double>& gamma_grid,
                            double rel_tol = 0.02);

struct MassMonotonicityReport {
  std::vector<double> initial_mass;      // per gamma
  std::vector<double> worst_excess;      // max_t mass(t) - mass(0), per gamma
  std::vector<bool> pass;                // vs t=0 within tol
  std::vector<bool> pairwise_monotone;   // reported only
  bool all_pass = false;
};

MassMonotonicityReport mass_monotonicity_check(const CurveFamily& family,
                                               double tol_frac = 0.02);

// one-sided Brakke inequality for the curves of a single level; H and nu
// sampled bilinearly from the epsilon-field of each snapshot
IdentityReport brakke_curve_check(const Trajectory& traj,
                                  const CurveFamily& family, int gamma_index,
                                  const SpaceTimeScalar& phi,
                                  double tol_frac = 0.03);

// t -> int phi dH^1 - C_phi t non-increasing, C_phi = mass(0) * sup_ratio
// where sup_ratio = sup_{phi>0} |grad phi|^2 / phi (analytic, by caller)
IdentityReport semidecreasing_check(const CurveFamily& family, int gamma_index,
                                    const SmoothScalar& phi, double sup_ratio,
                                    double jitter_frac = 0.02);

struct TotalVariationReport {
  double tv = 0.0;     // sup of delta V over the normalized test-field library
  double bound = 0.0;  // (C+1)(mass + int |H|)
  bool pass = false;   // tv <= bound * 1.05
};

TotalVariationReport total_variation_estimate(const LevelCurve& c,
                                              const ScalarField& u, double eps);

}  // namespace mcf
