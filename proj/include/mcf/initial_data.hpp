#pragma once

// Construction of the initial datum g on the periodic strip: a disk U
// anchored on the bottom boundary, corrected near the contact points so
// that g is smooth, vanishes exactly on the initial curve, satisfies the
// discrete Neumann condition, and keeps the regularized curvature in L^1
// uniformly in epsilon.

#include <memory>
#include <vector>

#include "mcf/field.hpp"
#include "mcf/smooth.hpp"

namespace mcf {

struct DiskSet {
  Vec2 center;    // c_y = 0 for a boundary-anchored disk
  double radius;  // rho < L_x/2
};

struct CutoffProfile {
  double R = 0.2;      // eta == 1 on |s|<R, == 0 on |s|>=3R/2
  double r = 0.06;     // same shape for zeta with radius r
  double delta = 0.05; // initial half-width of the odd profile
};

struct AppendixConfig {
  double s0 = 0.16;         // flow-time bound of the implicit function
  double ode_step = 0.16 / 64;
  double root_tol = 1e-12;
  int newton_max_iter = 60;
};

// Smooth C^inf cutoff: 1 on |s| < R, 0 on |s| >= 3R/2, values in [0,1].
// value/derivative evaluated in closed form.
struct Cutoff {
  double R;
  double operator()(double s) const;
  double deriv(double s) const;
};

// Odd C^inf profile: phi(-s) = -phi(s), phi' > 0 and phi'' >= 0 on
// (-delta, 0], phi == -1 for s <= -delta.  phi itself comes from a
// high-resolution cumulative quadrature of the standard bump; phi' and
// phi'' are closed-form.
class OddProfile {
 public:
  explicit OddProfile(double delta);
  double delta() const { return delta_; }
  double operator()(double s) const;
  double deriv(double s) const;
  double second_deriv(double s) const;

 private:
  double bump(double t) const;        // exp(-delta^2/(delta^2-t^2)) on |t|<delta
  double bump_deriv(double t) const;
  double cumulative(double s) const;  // int_0^s bump, s in [0, delta]
  double delta_;
  double norm_;                       // 1 / int_0^delta bump
  std::vector<double> cum_;           // cumulative integral at uniform knots
};

// exact periodic signed distance to a disk; negative inside U
SmoothScalar signed_distance(const DiskSet& set, double period_x);
// signed distance to the strip (0, L_y) in y; negative inside
SmoothScalar strip_distance(double height_y);

// The boundary-tangent correction field
//   X = eta(d_U) eta(d_Omega) { (I - grad d_Om (x) grad d_Om) grad d_U + d_Om X0 }
// with X0 = -(I - P)(hess d_U) grad d_Om on the flat strip.
SmoothVectorField build_correction_field(const SmoothScalar& dU,
                                         const SmoothScalar& dOmega,
                                         const CutoffProfile& cut);

// one-parameter group generated by X, classical RK4; point and, when
// requested, the flow-map Jacobian along the trajectory
Vec2 flow(const SmoothVectorField& X, const Vec2& x, double s,
          const AppendixConfig& cfg);
void flow_with_jacobian(const SmoothVectorField& X, const Vec2& x, double s,
                        const AppendixConfig& cfg, Vec2& out_pt, Mat2& out_jac);

// Everything needed to evaluate g and its ingredients at arbitrary points.
class InitialDatum {
 public:
  InitialDatum(const DiskSet& U, const GridSpec& domain,
               const CutoffProfile& cut, const AppendixConfig& cfg);

  // the implicit flow-time f with d_U(Phi(x,-f(x))) = 0; throws outside
  // the implicit-function neighborhood
  double eval_f(const Vec2& x) const;
  Vec2 grad_f(const Vec2& x) const;

  double g0(const Vec2& x) const;
  Vec2 grad_g0(const Vec2& x) const;

  double g(const Vec2& x) const;
  Vec2 grad_g(const Vec2& x) const;

  const SmoothScalar& dU() const { return dU_; }
  const SmoothScalar& dOmega() const { return dOm_; }
  const SmoothVectorField& correction_field() const { return X_; }
  const OddProfile& profile() const { return *phi_; }
  const CutoffProfile& cutoffs() const { return cut_; }
  const AppendixConfig& config() const { return cfg_; }

  SmoothScalar as_smooth() const;  // hessian by differencing the gradient

  // shrinks delta (halving, up to 10 times) until {|g0| <= delta} is
  // contained in {|d_U| < r} on a fine sample; throws if impossible
  void fit_profile_width();

 private:
  bool in_zeta_support(const Vec2& x) const;

  DiskSet U_;
  GridSpec domain_;
  CutoffProfile cut_;
  AppendixConfig cfg_;
  SmoothScalar dU_, dOm_;
  SmoothVectorField X_;
  Cutoff zeta_;
  std::shared_ptr<OddProfile> phi_;
};

struct InitialDatumResult {
  ScalarField g;          // sampled on the grid
  InitialDatum analytic;  // point evaluators
};

InitialDatumResult build_initial_datum(const DiskSet& U, const GridSpec& grid,
                                       const CutoffProfile& cut,
                                       const AppendixConfig& cfg);

// L^1 norm of the regularized curvature of a sampled field, for one epsilon
double regularized_curvature_l1(const ScalarField& g, double eps);

struct CurvatureSweepReport {
  std::vector<double> eps;
  std::vector<double> l1;      // I(eps)
  double slope = 0.0;          // least-squares slope of I against log(1/eps)
};

CurvatureSweepReport verify_initial_datum(const ScalarField& g,
                                          const std::vector<double>& eps_list);

}  // namespace mcf
