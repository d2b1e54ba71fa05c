#include "qharm/gluing.hpp"

#include <algorithm>
#include <cmath>

#include "qharm/quadrature.hpp"

namespace qharm {

namespace {

// 1/sqrt(|delta|) with delta in fully factored form.  Near an interval
// endpoint that is a root the direct difference x - r has cancelled to
// rounding dust, so the factor is taken from the node's distance to that
// endpoint, which tanh-sinh provides exactly.
struct RecipSqrtAbs {
  double a, b, lead;
  std::vector<double> roots;

  double operator()(double x, double dist) const {
    double rad = std::abs(lead);
    for (double r : roots) {
      double f;
      if (std::abs(r - a) <= 1e-9 * (b - a))
        f = (std::abs(x - a) <= std::abs(b - x)) ? dist : std::abs(x - a);
      else if (std::abs(r - b) <= 1e-9 * (b - a))
        f = (std::abs(b - x) <= std::abs(x - a)) ? dist : std::abs(b - x);
      else
        f = std::abs(x - r);
      rad *= f;
    }
    return 1.0 / std::sqrt(rad);
  }
};

RecipSqrtAbs factored(const Poly& delta, const BranchPoints& bp, double a, double b,
                      const Tolerances& tol) {
  RecipSqrtAbs f;
  f.a = a;
  f.b = b;
  bool cubic = delta.size() >= 5 && std::abs(delta[4]) <= tol.degree3_leading;
  f.lead = cubic ? delta[3] : delta[4];
  f.roots = {bp.x1, bp.x2, bp.x3};
  if (!bp.x4_infinite) f.roots.push_back(bp.x4);
  return f;
}

void expect_sign(const Poly& delta, double a, double b, int sign, const char* what) {
  double v = polyval(delta, (a + b) / 2);
  if (sign * v <= 0)
    fail(ErrorCode::NegativeIntegrand,
         std::string("discriminant has the wrong sign on the ") + what + " interval");
}

}  // namespace

Periods periods(const Kernel& k, const KernelBranchPoints& bp, double x_y1,
                const Tolerances& tol) {
  const Poly& d = k.delta();
  RecipSqrtAbs f1 = factored(d, bp.x, bp.x.x1, bp.x.x2, tol);
  RecipSqrtAbs f2 = factored(d, bp.x, bp.x.x2, bp.x.x3, tol);
  RecipSqrtAbs f3 = factored(d, bp.x, x_y1, bp.x.x1, tol);
  expect_sign(d, bp.x.x1, bp.x.x2, -1, "omega1");
  expect_sign(d, bp.x.x2, bp.x.x3, +1, "omega2");
  expect_sign(d, x_y1, bp.x.x1, +1, "omega3");
  Periods pd;
  pd.omega1_im = tanh_sinh(f1, bp.x.x1, bp.x.x2, tol);
  pd.omega2 = tanh_sinh(f2, bp.x.x2, bp.x.x3, tol);
  pd.omega3 = tanh_sinh(f3, x_y1, bp.x.x1, tol);
  return pd;
}

Gluing::Gluing(Mode m, const Kernel& k, const KernelBranchPoints& bp, double x_y1)
    : mode_(m), k_(k), bp_(bp), x_y1_(x_y1), tol_(Tolerances::global()) {}

void Gluing::finish_setup(std::optional<double> x0_request) {
  double x2 = bp_.x.x2;
  if (x0_request) {
    if (!(*x0_request > x_y1_ && *x0_request < x2) || *x0_request == 0.0)
      fail(ErrorCode::OutOfRange, "reference point must lie in (X(y1), x2) and be nonzero");
    x0_ = *x0_request;
  } else {
    double mid = (x_y1_ + x2) / 2;
    // A reference too close to the origin would put the pole of w on top of
    // its normalization point; shift to the third point of the chord.
    if (std::abs(mid) < 0.05 * (x2 - x_y1_)) mid = x_y1_ + (x2 - x_y1_) / 3;
    x0_ = mid;
  }
  ux0_ = u(x0_);
  u0_ = u(0.0);
}

cplx Gluing::w(cplx x) const {
  if (std::abs(x - cplx(x0_)) < tol_.pole_at_reference)
    fail(ErrorCode::PoleAtReference, "w evaluated at its reference pole x0");
  cplx ux = u(x);
  return ux0_ / (ux - ux0_) - ux0_ / (u0_ - ux0_);
}

double Gluing::dist_M(int n) const {
  double y1 = bp_.y.x1, y2 = bp_.y.x2;
  double d = INFINITY;
  for (int k = 0; k < n; ++k) {
    double th = M_PI * (2 * k + 1) / (2 * n);
    double y = (y1 + y2) / 2 + (y2 - y1) / 2 * std::cos(th);
    d = std::min(d, std::abs(k_.X_branches(y).r0));
  }
  return d;
}

double Gluing::gluing_residual(int n) const {
  double y1 = bp_.y.x1, y2 = bp_.y.x2;
  std::vector<double> mags;
  double worst = 0;
  for (int k = 0; k < n; ++k) {
    double th = M_PI * (2 * k + 1) / (2 * n);
    double y = (y1 + y2) / 2 + (y2 - y1) / 2 * std::cos(th);
    QuadRoots q = k_.X_branches(y);
    if (q.second_infinite) continue;
    cplx w0 = w(q.r0);
    cplx w1 = w(q.r1);
    worst = std::max(worst, std::abs(w0 - w1));
    mags.push_back(std::abs(w0));
  }
  if (mags.empty()) fail(ErrorCode::InternalError, "no usable samples on M");
  std::sort(mags.begin(), mags.end());
  double med = mags[mags.size() / 2];
  return worst / std::max(med, 1e-300);
}

std::array<double, 2> Gluing::w_derivs_at_0() const {
  if (derivs_) return *derivs_;
  double L = bp_.x.x2 - x_y1_;
  auto wr = [&](double x) { return w(cplx(x)).real(); };

  auto first = [&](double h) {
    return (8 * (wr(h) - wr(-h)) - (wr(2 * h) - wr(-2 * h))) / (12 * h);
  };
  auto second = [&](double h) {
    // w(0) = 0 by normalization
    return (16 * (wr(h) + wr(-h)) - (wr(2 * h) + wr(-2 * h))) / (12 * h * h);
  };

  std::array<double, 2> out{};
  for (int which = 0; which < 2; ++which) {
    double h = 0.01 * L;
    double dprev = which == 0 ? first(h) : second(h);
    double rprev = 0;
    bool have_prev = false, done = false;
    for (int it = 0; it < 12 && !done; ++it) {
      h /= 2;
      double dcur = which == 0 ? first(h) : second(h);
      double rich = (16 * dcur - dprev) / 15;
      if (have_prev &&
          std::abs(rich - rprev) <= tol_.deriv_agree * std::max(1.0, std::abs(rich))) {
        out[size_t(which)] = rich;
        done = true;
      }
      dprev = dcur;
      rprev = rich;
      have_prev = true;
    }
    if (!done)
      fail(ErrorCode::DerivativeNonConvergence, "Richardson for w derivatives at 0 stalled");
  }
  derivs_ = out;
  return out;
}

// ---------------------------------------------------------------- generic

GluingGeneric::GluingGeneric(const StepSet& s, double t, Options opt, const Tolerances& tol)
    : Gluing(Mode::Generic, Kernel(s, t), KernelBranchPoints{}, 0.0) {
  tol_ = tol;
  bp_ = qharm::branch_points(k_, tol);
  x_y1_ = k_.X_at_double(bp_.y.x1).real();

  pd_ = periods(k_, bp_, x_y1_, tol);
  pd_.omega2 *= opt.omega2_scale;

  const Poly& d = k_.delta();
  Poly d1 = polyder(d), d2 = polyder(d1), d3 = polyder(d2);
  g_affine_ = bp_.x.x4_infinite;
  if (g_affine_) {
    g_const_ = polyval(d2, 0.0) / 6;
    g_lin_ = polyval(d3, 0.0) / 6;
  } else {
    g_x4_ = bp_.x.x4;
    g_const_ = polyval(d2, g_x4_) / 6;
    g_lin_ = polyval(d1, g_x4_);  // residue of the pole at x4
  }

  wp12_ = std::make_unique<WP>(make_lattice(pd_.omega2, pd_.omega1_im, tol), tol);
  wp13_ = std::make_unique<WP>(make_lattice(pd_.omega3, pd_.omega1_im, tol), tol);

  finish_setup(opt.x0);
  if (opt.omega2_scale == 1.0) realness_self_check();
}

cplx GluingGeneric::g_of_x(cplx x) const {
  if (g_affine_) return g_const_ + g_lin_ * x;
  if (std::abs(x - cplx(g_x4_)) < 1e-12 * (1 + std::abs(g_x4_)))
    fail(ErrorCode::PoleAtX4, "g evaluated at the moved branch point x4");
  return g_const_ + g_lin_ / (x - g_x4_);
}

cplx GluingGeneric::strip_rep(cplx z0) const {
  double w2 = pd_.omega2, w1im = pd_.omega1_im, w3 = pd_.omega3;
  double lo = w2 / 2, hi = w2 / 2 + w3;
  double slack = tol_.strip_window * w2;
  bool have = false;
  double best_d = 0;
  cplx best;
  for (int sgn = 1; sgn >= -1; sgn -= 2) {
    cplx zz = double(sgn) * z0;
    for (int n2 = -4; n2 <= 4; ++n2) {
      cplx cand = zz + double(n2) * w2;
      double re = cand.real();
      if (re < lo - slack || re > hi + slack) continue;
      double m = std::floor(cand.imag() / w1im);
      cand -= cplx(0, m * w1im);
      double d = (lo <= re && re <= hi) ? 0.0 : std::min(std::abs(re - lo), std::abs(re - hi));
      if (!have || d < best_d) {
        have = true;
        best_d = d;
        best = cand;
      }
    }
  }
  if (!have) fail(ErrorCode::BranchFault, "no strip representative for the uniformizer");
  return best;
}

cplx GluingGeneric::u(cplx x) const {
  cplx z0 = wp12_->inverse_raw(g_of_x(x));
  cplx z = strip_rep(z0);
  return wp13_->eval_or_huge(z - pd_.omega2 / 2);
}

void GluingGeneric::realness_self_check() const {
  // u must be real on the chord (X(y1), x2) and on S_t = [x2, X(y2)]; a
  // complex value means a branch was mis-selected somewhere upstream.
  auto check = [&](double a, double b) {
    for (int k = 0; k < 8; ++k) {
      double th = M_PI * (2 * k + 1) / 16;
      double x = (a + b) / 2 + (b - a) / 2 * std::cos(th);
      cplx v = u(x);
      if (std::abs(v.imag()) > tol_.realness * std::max(1.0, std::abs(v)))
        fail(ErrorCode::BranchFault, "uniformizer not real on a real segment");
    }
  };
  check(x_y1_, bp_.x.x2);
  double xy2 = k_.X_at_double(bp_.y.x2).real();
  if (xy2 > bp_.x.x2) check(bp_.x.x2, xy2);
}

// ---------------------------------------------------------------- critical

namespace {

// Remaining roots of the discriminant after deflating the known double root
// twice.  Returns (lo, hi) by modulus; hi may be infinite.
struct DeflatedPair {
  double lo, hi;
  bool hi_infinite;
};

DeflatedPair critical_pair(const Poly& delta, double dbl, const Tolerances& tol) {
  Poly q = deflate(deflate(delta, dbl), dbl);
  double scale = 0;
  for (double c : q) scale = std::max(scale, std::abs(c));
  if (q.size() >= 3 && std::abs(q[2]) > tol.degree3_leading * std::max(1.0, scale)) {
    QuadRoots r = stable_quadratic(q[2], q[1], q[0]);
    double imag_worst = std::max(std::abs(r.r0.imag()), std::abs(r.r1.imag()));
    if (imag_worst > tol.root_imag_snap * (1 + std::abs(r.r1)))
      fail(ErrorCode::OrderingViolation, "deflated critical roots not real");
    return {r.r0.real(), r.r1.real(), false};
  }
  if (q.size() < 2 || q[1] == 0.0)
    fail(ErrorCode::OrderingViolation, "critical discriminant fully degenerate");
  return {-q[0] / q[1], 0.0, true};
}

}  // namespace

double theta_angle(const Kernel& k_at_t0, double x2, double y2, const Tolerances& tol) {
  const StepSet& s = k_at_t0.steps();
  double num = 0;
  for (int i = -1; i <= 1; ++i)
    for (int j = -1; j <= 1; ++j)
      if (s.p(i, j) != 0) num += i * j * s.p(i, j) * std::pow(x2, i) * std::pow(y2, j);
  double prod = polyval(k_at_t0.a(), x2) * polyval(k_at_t0.at(), y2);
  if (!(prod > 0)) fail(ErrorCode::OutOfRange, "corner product not positive");
  double arg = -num / (2 * std::sqrt(prod));
  if (std::abs(arg) > 1 + tol.theta_arg)
    fail(ErrorCode::OutOfRange, "arccos argument out of range for the opening angle");
  arg = std::min(1.0, std::max(-1.0, arg));
  return std::acos(arg);
}

GluingCritical::GluingCritical(const StepSet& s, const CriticalPoint& cp, Options opt,
                               const Tolerances& tol)
    : Gluing(Mode::Critical, Kernel(s, cp.t0), KernelBranchPoints{}, 0.0) {
  tol_ = tol;
  x2_ = std::exp(-cp.a_star[0]);
  y2_ = std::exp(-cp.a_star[1]);

  // a_star is only first-order accurate in the Newton gradient tolerance,
  // which leaves the double root ~1e-11 off.  The discriminant coefficients
  // are far more accurate (the minimum value is second-order), so polish the
  // root against delta' directly; everything downstream (deflation, the
  // curvature, the cone map) inherits the improvement.
  auto polish = [](const Poly& d, double r0) {
    Poly d1 = polyder(d), d2 = polyder(d1);
    double r = r0;
    for (int it = 0; it < 8; ++it) {
      double f2 = polyval(d2, r);
      if (f2 == 0) break;
      double step = polyval(d1, r) / f2;
      if (!std::isfinite(r - step)) break;
      r -= step;
      if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(r))) break;
    }
    bool ok = std::isfinite(r) && std::abs(r - r0) <= 1e-6 * std::max(1.0, std::abs(r0));
    return ok ? r : r0;
  };
  x2_ = polish(k_.delta(), x2_);
  y2_ = polish(k_.delta_t(), y2_);

  DeflatedPair px = critical_pair(k_.delta(), x2_, tol);
  DeflatedPair py = critical_pair(k_.delta_t(), y2_, tol);
  x1c_ = px.lo;
  bp_.x = {px.lo, x2_, x2_, px.hi, px.hi_infinite};
  bp_.y = {py.lo, y2_, y2_, py.hi, py.hi_infinite};
  x_y1_ = k_.X_at_double(bp_.y.x1).real();

  double point = opt.curvature == CurvaturePoint::AtDoubleRoot ? x2_ : 1.0;
  D_ = polyval(polyder(polyder(k_.delta())), point);
  theta_ = theta_angle(k_, x2_, y2_, tol);

  const Poly& d = k_.delta();
  Poly d1 = polyder(d);
  collided_ = !px.hi_infinite && std::abs(polyval(d1, px.hi)) < tol.critical_curvature *
                                                                   std::max(1.0, std::abs(px.hi));
  if (collided_) {
    if (!(-D_ > 0)) fail(ErrorCode::DomainFault, "curvature has the wrong sign at the cone");
    omega3_ = theta_ / std::sqrt(-D_ / 2);
  } else {
    Poly d2 = polyder(d1), d3 = polyder(d2);
    g_affine_ = px.hi_infinite;
    if (g_affine_) {
      g_const_ = polyval(d2, 0.0) / 6;
      g_lin_ = polyval(d3, 0.0) / 6;
    } else {
      g_x4_ = px.hi;
      g_const_ = polyval(d2, g_x4_) / 6;
      g_lin_ = polyval(d1, g_x4_);
    }
    RecipSqrtAbs f = factored(d, bp_.x, x_y1_, bp_.x.x1, tol);
    // the double root enters the factorization twice
    f.roots = {bp_.x.x1, x2_, x2_};
    if (!px.hi_infinite) f.roots.push_back(px.hi);
    expect_sign(d, x_y1_, bp_.x.x1, +1, "omega3");
    omega3_ = tanh_sinh(f, x_y1_, bp_.x.x1, tol);
  }

  finish_setup(opt.x0);
}

cplx GluingCritical::u(cplx x) const {
  if (collided_) {
    cplx den = x - x1c_;
    if (std::abs(den) < 1e-30) return cplx(1e300, 0);
    return std::pow((x2_ - x) / den, M_PI / theta_);
  }

  cplx g;
  if (g_affine_) {
    g = g_const_ + g_lin_ * x;
  } else {
    if (std::abs(x - cplx(g_x4_)) < 1e-12 * (1 + std::abs(g_x4_)))
      fail(ErrorCode::PoleAtX4, "g evaluated at the moved branch point x4");
    g = g_const_ + g_lin_ / (x - g_x4_);
  }

  double scale_u = M_PI / omega3_;
  cplx om = 1.0 / 3.0 - 2.0 * g / D_;
  if (std::abs(om) < 1e-13) return cplx(-scale_u * scale_u / 3.0, 0);
  cplx s0 = std::acos(std::sqrt(1.0 / om));

  // Representative of {+-s0 + k pi} with Re in [0, theta]; the window is a
  // full theta wide (twice the fundamental strip) because the reflected
  // collar continues u past the curve M.
  bool have = false;
  double best_d = 0;
  cplx best;
  for (int sgn = 1; sgn >= -1; sgn -= 2) {
    cplx ss = double(sgn) * s0;
    double kk = std::round(-ss.real() / M_PI);
    for (int dk = -1; dk <= 1; ++dk) {
      cplx cand = ss + (kk + dk) * M_PI;
      double r = cand.real();
      double d = (0 <= r && r <= theta_) ? 0.0 : std::min(std::abs(r), std::abs(r - theta_));
      if (!have || d < best_d) {
        have = true;
        best_d = d;
        best = cand;
      }
    }
  }
  if (!have || best_d > 1e-9)
    fail(ErrorCode::DomainFault, "critical strip placement failed");
  cplx sn = std::sin(best * M_PI / theta_);
  return scale_u * scale_u * (1.0 / (sn * sn) - 1.0 / 3.0);
}

}  // namespace qharm
