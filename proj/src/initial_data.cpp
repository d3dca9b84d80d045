#include "mcf/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

namespace mcf {

namespace {

// C^inf step: 0 at t<=0, 1 at t>=1
double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

double smooth_step_deriv(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  const double da = a / (t * t);
  const double db = -b / ((1.0 - t) * (1.0 - t));
  return (da * (a + b) - a * (da + db)) / ((a + b) * (a + b));
}

double wrap_periodic(double dx, double period) {
  dx = std::fmod(dx, period);
  if (dx < -0.5 * period) dx += period;
  if (dx >= 0.5 * period) dx -= period;
  return dx;
}

}  // namespace

double Cutoff::operator()(double s) const {
  return smooth_step((1.5 * R - std::abs(s)) / (0.5 * R));
}

double Cutoff::deriv(double s) const {
  const double sign = s >= 0.0 ? 1.0 : -1.0;
  return smooth_step_deriv((1.5 * R - std::abs(s)) / (0.5 * R)) *
         (-sign / (0.5 * R));
}

OddProfile::OddProfile(double delta) : delta_(delta) {
  if (delta <= 0.0) throw std::invalid_argument("OddProfile: delta must be > 0");
  // cumulative of the bump on [0, delta] by composite Simpson on a fine grid
  const int m = 4096;  // intervals, even
  cum_.assign(m + 1, 0.0);
  const double h = delta_ / m;
  for (int k = 1; k <= m; ++k) {
    const double a = (k - 1) * h, b = k * h;
    cum_[k] = cum_[k - 1] +
              h / 6.0 * (bump(a) + 4.0 * bump(0.5 * (a + b)) + bump(b));
  }
  norm_ = 1.0 / cum_[m];
}

double OddProfile::bump(double t) const {
  const double d2 = delta_ * delta_, t2 = t * t;
  if (t2 >= d2) return 0.0;
  return std::exp(-d2 / (d2 - t2));
}

double OddProfile::bump_deriv(double t) const {
  const double d2 = delta_ * delta_, t2 = t * t;
  if (t2 >= d2) return 0.0;
  const double q = d2 - t2;
  return bump(t) * (-2.0 * d2 * t / (q * q));
}

double OddProfile::cumulative(double s) const {
  // monotone Hermite interpolation of the precomputed integral; the
  // interpolant's derivative is the exact bump at the knots
  const int m = static_cast<int>(cum_.size()) - 1;
  const double h = delta_ / m;
  const double u = std::min(std::max(s / h, 0.0), static_cast<double>(m));
  const int k = std::min(static_cast<int>(u), m - 1);
  const double t = u - k;
  const double y0 = cum_[k], y1 = cum_[k + 1];
  const double d0 = bump(k * h) * h, d1 = bump((k + 1) * h) * h;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * d0 +
         (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * d1;
}

double OddProfile::operator()(double s) const {
  const double a = std::abs(s);
  if (a >= delta_) return s >= 0.0 ? 1.0 : -1.0;
  const double v = norm_ * cumulative(a);
  return s >= 0.0 ? v : -v;
}

double OddProfile::deriv(double s) const { return norm_ * bump(s); }

double OddProfile::second_deriv(double s) const {
  return norm_ * bump_deriv(s);
}

SmoothScalar signed_distance(const DiskSet& set, double period_x) {
  if (!(set.radius > 0.0) || set.radius >= 0.5 * period_x)
    throw std::invalid_argument("signed_distance: need 0 < rho < L_x/2");
  const Vec2 c = set.center;
  const double rho = set.radius;
  auto offset = [c, period_x](const Vec2& p) -> Vec2 {
    return {wrap_periodic(p.x() - c.x(), period_x), p.y() - c.y()};
  };
  SmoothScalar d;
  d.value = [offset, rho](const Vec2& p) {
    return offset(p).norm() - rho;  // well-defined at the center itself
  };
  d.gradient = [offset](const Vec2& p) -> Vec2 {
    const Vec2 q = offset(p);
    const double n = q.norm();
    if (n < 1e-8) throw std::domain_error("signed_distance: singular at center");
    return q / n;
  };
  d.hessian = [offset](const Vec2& p) -> Mat2 {
    const Vec2 q = offset(p);
    const double n = q.norm();
    if (n < 1e-8) throw std::domain_error("signed_distance: singular at center");
    const Vec2 rhat = q / n;
    return (Mat2::Identity() - rhat * rhat.transpose()) / n;
  };
  return d;
}

SmoothScalar strip_distance(double height_y) {
  SmoothScalar d;
  d.value = [height_y](const Vec2& p) {
    return -std::min(p.y(), height_y - p.y());
  };
  d.gradient = [height_y](const Vec2& p) -> Vec2 {
    return p.y() < 0.5 * height_y ? Vec2(0, -1) : Vec2(0, 1);
  };
  d.hessian = [](const Vec2&) -> Mat2 { return Mat2::Zero(); };
  return d;
}

SmoothVectorField build_correction_field(const SmoothScalar& dU,
                                         const SmoothScalar& dOmega,
                                         const CutoffProfile& cut) {
  const Cutoff eta{cut.R};
  // inner vector v = (I - P) grad dU + dOm * X0, P = grad dOm (x) grad dOm,
  // X0 = (hess dOm) grad dU - (I - P)(hess dU) grad dOm
  auto inner = [dU, dOmega](const Vec2& p) -> Vec2 {
    const Vec2 gU = dU.gradient(p), gOm = dOmega.gradient(p);
    const Mat2 P = gOm * gOm.transpose();
    const Mat2 IP = Mat2::Identity() - P;
    const Vec2 x0 = dOmega.hessian(p) * gU - IP * (dU.hessian(p) * gOm);
    return IP * gU + dOmega.value(p) * x0;
  };
  auto amplitude = [dU, dOmega, eta](const Vec2& p) {
    return eta(dU.value(p)) * eta(dOmega.value(p));
  };

  SmoothVectorField X;
  X.tangential_on_boundary = true;
  X.value = [inner, amplitude, dU, dOmega, eta](const Vec2& p) -> Vec2 {
    const double a = amplitude(p);
    if (a == 0.0) return Vec2::Zero();
    return a * inner(p);
  };
  X.jacobian = [inner, amplitude, dU, dOmega, eta](const Vec2& p) -> Mat2 {
    const double a = amplitude(p);
    if (a == 0.0) return Mat2::Zero();
    const Vec2 gU = dU.gradient(p), gOm = dOmega.gradient(p);
    const Vec2 grad_a = eta.deriv(dU.value(p)) * eta(dOmega.value(p)) * gU +
                        eta(dU.value(p)) * eta.deriv(dOmega.value(p)) * gOm;
    // d inner / dx by central differences of the analytic inner map; the
    // only term this approximates is the third derivative of d_U
    const double h = 1e-6;
    Mat2 jin;
    for (int c = 0; c < 2; ++c) {
      Vec2 ep = Vec2::Zero();
      ep[c] = h;
      jin.col(c) = (inner(p + ep) - inner(p - ep)) / (2.0 * h);
    }
    const Vec2 v = inner(p);
    return a * jin + v * grad_a.transpose();
  };
  return X;
}

Vec2 flow(const SmoothVectorField& X, const Vec2& x, double s,
          const AppendixConfig& cfg) {
  if (s == 0.0) return x;
  const int n = std::max(1, static_cast<int>(std::ceil(std::abs(s) / cfg.ode_step - 1e-12)));
  const double h = s / n;
  Vec2 p = x;
  for (int k = 0; k < n; ++k) {
    const Vec2 k1 = X.value(p);
    const Vec2 k2 = X.value(p + 0.5 * h * k1);
    const Vec2 k3 = X.value(p + 0.5 * h * k2);
    const Vec2 k4 = X.value(p + h * k3);
    p += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return p;
}

void flow_with_jacobian(const SmoothVectorField& X, const Vec2& x, double s,
                        const AppendixConfig& cfg, Vec2& out_pt, Mat2& out_jac) {
  Vec2 p = x;
  Mat2 J = Mat2::Identity();
  if (s != 0.0) {
    const int n = std::max(1, static_cast<int>(std::ceil(std::abs(s) / cfg.ode_step - 1e-12)));
    const double h = s / n;
    for (int k = 0; k < n; ++k) {
      const Vec2 k1 = X.value(p);
      const Mat2 m1 = X.jacobian(p) * J;
      const Vec2 p2 = p + 0.5 * h * k1;
      const Vec2 k2 = X.value(p2);
      const Mat2 m2 = X.jacobian(p2) * (J + 0.5 * h * m1);
      const Vec2 p3 = p + 0.5 * h * k2;
      const Vec2 k3 = X.value(p3);
      const Mat2 m3 = X.jacobian(p3) * (J + 0.5 * h * m2);
      const Vec2 p4 = p + h * k3;
      const Vec2 k4 = X.value(p4);
      const Mat2 m4 = X.jacobian(p4) * (J + h * m3);
      p += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      J += h / 6.0 * (m1 + 2.0 * m2 + 2.0 * m3 + m4);
    }
  }
  out_pt = p;
  out_jac = J;
}

InitialDatum::InitialDatum(const DiskSet& U, const GridSpec& domain,
                           const CutoffProfile& cut, const AppendixConfig& cfg)
    : U_(U),
      domain_(domain),
      cut_(cut),
      cfg_(cfg),
      dU_(signed_distance(U, domain.period_x)),
      dOm_(strip_distance(domain.height_y)),
      X_(build_correction_field(dU_, dOm_, cut)),
      zeta_{cut.r},
      phi_(std::make_shared<OddProfile>(cut.delta)) {
  if (cfg.ode_step > cfg.s0 / 16.0)
    throw std::invalid_argument("AppendixConfig: ode_step must be <= s0/16");
  if (cfg.root_tol > 1e-10)
    throw std::invalid_argument("AppendixConfig: root_tol must be <= 1e-10");
  if (cut.R >= domain.height_y / 4.0)
    throw std::invalid_argument("CutoffProfile: R must be < L_y/4");
}

bool InitialDatum::in_zeta_support(const Vec2& x) const {
  return zeta_(dOm_.value(x)) > 0.0;
}

double InitialDatum::eval_f(const Vec2& x) const {
  const double F0 = dU_.value(x);
  if (std::abs(F0) <= cfg_.root_tol) return 0.0;
  const double dir = F0 > 0.0 ? 1.0 : -1.0;

  // march Phi(x, -dir*k*step) until d_U changes sign
  const double step = cfg_.ode_step;
  const int kmax = static_cast<int>(std::ceil(cfg_.s0 / step));
  Vec2 p = x;
  Vec2 p_prev = x;
  double D_prev = F0;
  int k = 0;
  bool bracketed = false;
  for (k = 1; k <= kmax; ++k) {
    const double h = -dir * step;
    const Vec2 k1 = X_.value(p);
    const Vec2 k2 = X_.value(p + 0.5 * h * k1);
    const Vec2 k3 = X_.value(p + 0.5 * h * k2);
    const Vec2 k4 = X_.value(p + h * k3);
    p_prev = p;
    p += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double D = dU_.value(p);
    if (D == 0.0 || (D > 0.0) != (F0 > 0.0)) {
      bracketed = true;
      break;
    }
    D_prev = D;
  }
  if (!bracketed)
    throw std::runtime_error("eval_f: x outside implicit-function neighborhood");

  // refine within the bracket: psi(tau) = d_U of a single RK4 step of
  // size -dir*tau from p_prev
  auto point_at = [&](double tau) -> Vec2 {
    const double h = -dir * tau;
    const Vec2 k1 = X_.value(p_prev);
    const Vec2 k2 = X_.value(p_prev + 0.5 * h * k1);
    const Vec2 k3 = X_.value(p_prev + 0.5 * h * k2);
    const Vec2 k4 = X_.value(p_prev + h * k3);
    return p_prev + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  };
  double lo = 0.0, hi = step;
  double psi_lo = D_prev;
  double tau = 0.5 * step;
  for (int it = 0; it < cfg_.newton_max_iter; ++it) {
    const Vec2 q = point_at(tau);
    const double psi = dU_.value(q);
    if (std::abs(psi) <= cfg_.root_tol) {
      lo = hi = tau;
      break;
    }
    if ((psi > 0.0) == (psi_lo > 0.0)) {
      lo = tau;
      psi_lo = psi;
    } else {
      hi = tau;
    }
    // Newton step along the trajectory; fall back to bisection if it
    // leaves the bracket
    const double dpsi = -dir * dU_.gradient(q).dot(X_.value(q));
    double next = dpsi != 0.0 ? tau - psi / dpsi : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    tau = next;
  }
  tau = 0.5 * (lo + hi);
  return dir * ((k - 1) * step + tau);
}

Vec2 InitialDatum::grad_f(const Vec2& x) const {
  const double s = eval_f(x);
  Vec2 p;
  Mat2 J;
  flow_with_jacobian(X_, x, -s, cfg_, p, J);
  const Vec2 gU = dU_.gradient(p);
  const double denom = X_.value(p).dot(gU);
  return J.transpose() * gU / denom;
}

double InitialDatum::g0(const Vec2& x) const {
  const double z = zeta_(dOm_.value(x));
  const double du = dU_.value(x);
  if (z == 0.0) return du;
  return (1.0 - z) * du + z * eval_f(x);
}

Vec2 InitialDatum::grad_g0(const Vec2& x) const {
  const double dom = dOm_.value(x);
  const double z = zeta_(dom);
  const Vec2 gU = dU_.gradient(x);
  if (z == 0.0) return gU;
  const double zp = zeta_.deriv(dom);
  const double du = dU_.value(x);
  const double f = eval_f(x);
  return (1.0 - z) * gU + z * grad_f(x) + zp * (f - du) * dOm_.gradient(x);
}

double InitialDatum::g(const Vec2& x) const {
  const double du = dU_.value(x);
  // (G1)+(G3): |d_U| >= r implies |g0| > delta, where phi saturates
  if (du >= cut_.r) return 1.0;
  if (du <= -cut_.r) return -1.0;
  return (*phi_)(g0(x));
}

Vec2 InitialDatum::grad_g(const Vec2& x) const {
  const double du = dU_.value(x);
  if (std::abs(du) >= cut_.r) return Vec2::Zero();
  const double v0 = g0(x);
  if (std::abs(v0) >= phi_->delta()) return Vec2::Zero();
  return phi_->deriv(v0) * grad_g0(x);
}

SmoothScalar InitialDatum::as_smooth() const {
  SmoothScalar s;
  s.value = [this](const Vec2& p) { return g(p); };
  s.gradient = [this](const Vec2& p) { return grad_g(p); };
  s.hessian = [this](const Vec2& p) -> Mat2 {
    const double h = 1e-5;
    Mat2 out;
    for (int c = 0; c < 2; ++c) {
      Vec2 ep = Vec2::Zero();
      ep[c] = h;
      out.col(c) = (grad_g(p + ep) - grad_g(p - ep)) / (2.0 * h);
    }
    return 0.5 * (out + out.transpose());
  };
  return s;
}

void InitialDatum::fit_profile_width() {
  // sample (g0, d_U) pairs on a 2x-refined grid restricted to the tube,
  // then shrink delta until {|g0| <= delta} subset {|d_U| < r}
  std::vector<std::pair<double, double>> pairs;  // (|g0|, |d_U|)
  const int nx = 2 * domain_.nx, ny = 2 * domain_.ny - 1;
  const double hx = domain_.period_x / nx, hy = domain_.height_y / (ny - 1);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const Vec2 p(i * hx, j * hy);
      const double du = dU_.value(p);
      if (std::abs(du) >= 2.0 * cut_.r) continue;
      pairs.emplace_back(std::abs(g0(p)), std::abs(du));
    }
  double delta = cut_.delta;
  for (int attempt = 0; attempt <= 10; ++attempt) {
    bool ok = true;
    for (const auto& [ag0, adu] : pairs)
      if (ag0 <= delta && adu >= cut_.r) {
        ok = false;
        break;
      }
    if (ok) {
      if (delta != cut_.delta) {
        cut_.delta = delta;
        phi_ = std::make_shared<OddProfile>(delta);
      }
      return;
    }
    delta *= 0.5;
  }
  throw std::runtime_error("fit_profile_width: (G1) violated");
}

InitialDatumResult build_initial_datum(const DiskSet& U, const GridSpec& grid,
                                       const CutoffProfile& cut,
                                       const AppendixConfig& cfg) {
  InitialDatum datum(U, grid, cut, cfg);
  datum.fit_profile_width();
  ScalarField g(grid);
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) g(i, j) = datum.g(grid.node(i, j));
  return {std::move(g), std::move(datum)};
}

double regularized_curvature_l1(const ScalarField& g, double eps) {
  VectorField2 grad = gradient(g);
  VectorField2 nu(g.grid);
  const Array2D norm = (grad.x.square() + grad.y.square() + eps * eps).sqrt();
  nu.x = grad.x / norm;
  nu.y = grad.y / norm;
  ScalarField h = divergence(nu);
  h.values = h.values.abs();
  return integrate(h);
}

CurvatureSweepReport verify_initial_datum(const ScalarField& g,
                                          const std::vector<double>& eps_list) {
  CurvatureSweepReport rep;
  rep.eps = eps_list;
  for (double e : eps_list) rep.l1.push_back(regularized_curvature_l1(g, e));
  // least-squares slope of I against log(1/eps)
  const int n = static_cast<int>(eps_list.size());
  if (n >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int k = 0; k < n; ++k) {
      const double x = std::log(1.0 / eps_list[k]);
      sx += x;
      sy += rep.l1[k];
      sxx += x * x;
      sxy += x * rep.l1[k];
    }
    rep.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  return rep;
}

}  // namespace mcf
