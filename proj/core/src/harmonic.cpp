#include "qharm/harmonic.hpp"

#include <cmath>
#include <thread>

namespace qharm {

HarmonicGrid transfer_harmonic(const HarmonicGrid& g, Vec2 a, int sign) {
  double worst = std::max(std::abs(a[0]), std::abs(a[1])) * 2.0 * g.N;
  if (worst > 700.0)
    fail(ErrorCode::Overflow, "transfer exponent exceeds floating range at the grid corner");
  HarmonicGrid out = HarmonicGrid::zeros(g.N);
  for (int i = 0; i <= g.N; ++i)
    for (int j = 0; j <= g.N; ++j)
      out.at(i, j) = g.at(i, j) * std::exp(-sign * (a[0] * i + a[1] * j));
  return out;
}

namespace {

double realish(cplx v, const char* what) {
  if (std::abs(v.imag()) > 1e-7 * (1.0 + std::abs(v)))
    fail(ErrorCode::DomainFault, std::string(what) + " came out non-real");
  return v.real();
}

}  // namespace

HarmonicFamily::HarmonicFamily(std::shared_ptr<const Gluing> g, double p, const Tolerances& tol)
    : g_(std::move(g)), p_(p), tol_(tol) {
  const Kernel& k = g_->kernel();
  pprime_ = conjugate_point(k, g_->branch_points(), p, tol);
  w_p_ = g_->w(cplx(p_));

  const StepSet& s = k.steps();
  double p11 = s.p(1, 1), p01 = s.p(0, 1), pm11 = s.p(-1, 1);
  double f11 = 1.0;

  // The single normalization H(0,0) = f(1,1) pins c_alpha; which formula
  // expresses H(0,0) depends on the lowest step feeding the corner.
  if (p11 != 0) {
    cplx X00 = k.X_branches(cplx(0)).r0;
    cplx wX = g_->w(X00);
    if (std::abs(wX - w_p_) <= tol.pole_collision * (1.0 + std::abs(w_p_)))
      fail(ErrorCode::PoleCollision, "w(p) collides with w(X0(0))");
    if (std::abs(wX) < 1e-300) fail(ErrorCode::PoleCollision, "w(X0(0)) vanishes");
    alpha_ = realish(-f11 * p11 * w_p_ * (wX - w_p_) / wX, "c_alpha");
  } else {
    auto d = g_->w_derivs_at_0();
    if (p01 != 0) {
      if (std::abs(d[0]) <= tol.zero_deriv)
        fail(ErrorCode::ZeroDerivative, "w'(0) vanishes but the corner needs it");
      alpha_ = realish(-f11 * p01 * w_p_ * w_p_ / d[0], "c_alpha");
    } else {
      if (std::abs(d[1]) <= tol.zero_deriv)
        fail(ErrorCode::ZeroDerivative, "w''(0) vanishes but the corner needs it");
      alpha_ = realish(-2.0 * f11 * pm11 * w_p_ * w_p_ / d[1], "c_alpha");
    }
  }
  beta_ = p11 * f11 + realish(alpha_ / w_p_, "c_beta");
}

cplx HarmonicFamily::pole_term(cplx x) const { return alpha_ / (g_->w(x) - w_p_); }

cplx HarmonicFamily::boundary_x(cplx x) const {
  if (std::abs(x - cplx(p_)) < 1e-10)
    fail(ErrorCode::PoleAtP, "H(x,0) has its pole at x = p");
  cplx gam = polyval(g_->kernel().c(), x);
  if (std::abs(gam) < 1e-13 * (1.0 + std::norm(x)))
    fail(ErrorCode::ZeroOfGamma, "x at a root of gamma");
  return (pole_term(x) + beta_) / gam;
}

cplx HarmonicFamily::boundary_y(cplx y) const {
  // The y -> 0 limit is f(1,1) identically (the constants close the corner
  // relation), which also covers gamma-tilde(0) = 0 when p(1,1) = 0.
  if (std::abs(y) <= 1e-12) return cplx(f11(), 0);
  const Kernel& k = g_->kernel();
  cplx gamt = polyval(k.ct(), y);
  if (std::abs(gamt) < 1e-13 * (1.0 + std::norm(y)))
    fail(ErrorCode::ZeroOfGammaTilde, "y at a root of gamma-tilde");
  cplx X0y = k.X_branches(y).r0;
  cplx num = k.steps().p(1, 1) * f11() - pole_term(X0y) - beta_;
  return num / gamt;
}

cplx HarmonicFamily::full(cplx x, cplx y) const {
  const Kernel& k = g_->kernel();
  cplx L = k.eval(x, y);
  if (std::abs(L) < 1e-12 * (1.0 + std::norm(x) + std::norm(y)))
    fail(ErrorCode::OnKernelCurve, "H(x,y) evaluated on the kernel curve");
  cplx X0y = k.X_branches(y).r0;
  return (pole_term(x) - pole_term(X0y)) / L;
}

std::pair<double, double> HarmonicFamily::radii() const {
  double rx = tol_.radius_ratio * std::min(g_->dist_M(), p_);
  double y3 = g_->branch_points().y.x3;
  double ry = tol_.radius_ratio * std::min(pprime_, y3);
  return {rx, ry};
}

std::vector<double> HarmonicFamily::coeffs_x(int n) const {
  const Kernel& k = g_->kernel();
  int M = std::max(192, 8 * n);
  double rx = radii().first;
  cplx X00 = k.X_branches(cplx(0)).r0;
  cplx BX = std::abs(X00) > 1e-30 ? pole_term(X00) : pole_term(cplx(0));
  std::vector<cplx> vals(static_cast<size_t>(M));
  for (int a = 0; a < M; ++a) {
    cplx x = rx * std::exp(cplx(0, 2 * M_PI * a / M));
    vals[size_t(a)] = (pole_term(x) - BX) / polyval(k.c(), x);
  }
  std::vector<double> out(static_cast<size_t>(n));
  for (int m = 0; m < n; ++m) {
    cplx acc(0);
    for (int a = 0; a < M; ++a) acc += vals[size_t(a)] * std::exp(cplx(0, -2 * M_PI * m * a / M));
    out[size_t(m)] = (acc / (double(M) * std::pow(rx, m))).real();
  }
  return out;
}

std::vector<double> HarmonicFamily::coeffs_y(int n) const {
  const Kernel& k = g_->kernel();
  double p11 = k.steps().p(1, 1);
  int M = std::max(192, 8 * n);
  double ry = radii().second;
  std::vector<cplx> vals(static_cast<size_t>(M));
  for (int b = 0; b < M; ++b) {
    cplx y = ry * std::exp(cplx(0, 2 * M_PI * b / M));
    cplx num = p11 * f11() - pole_term(k.X_branches(y).r0) - beta_;
    vals[size_t(b)] = num / polyval(k.ct(), y);
  }
  std::vector<double> out(static_cast<size_t>(n));
  for (int m = 0; m < n; ++m) {
    cplx acc(0);
    for (int b = 0; b < M; ++b) acc += vals[size_t(b)] * std::exp(cplx(0, -2 * M_PI * m * b / M));
    out[size_t(m)] = (acc / (double(M) * std::pow(ry, m))).real();
  }
  return out;
}

HarmonicGrid HarmonicFamily::grid(int N, int threads) const {
  const Kernel& k = g_->kernel();
  int Mx = std::max(192, 8 * N), My = Mx;
  auto [rx, ry] = radii();

  std::vector<cplx> xs(static_cast<size_t>(Mx)), ys(static_cast<size_t>(My));
  for (int a = 0; a < Mx; ++a) xs[size_t(a)] = rx * std::exp(cplx(0, 2 * M_PI * a / Mx));

  // Shrink ry until the torus is clear of the kernel curve; the curve can
  // dip close to the polydisk when p sits near a segment endpoint.
  bool clear = false;
  for (int shrink = 0; shrink < 20 && !clear; ++shrink) {
    for (int b = 0; b < My; ++b) ys[size_t(b)] = ry * std::exp(cplx(0, 2 * M_PI * b / My));
    double lmin = INFINITY;
    for (int a = 0; a < Mx; a += 4)
      for (int b = 0; b < My; b += 4)
        lmin = std::min(lmin, std::abs(k.eval(xs[size_t(a)], ys[size_t(b)])));
    if (lmin > tol_.clearance)
      clear = true;
    else
      ry *= 0.9;
  }
  if (!clear) fail(ErrorCode::TorusOnKernel, "no torus radius clears the kernel curve");

  std::vector<cplx> A(static_cast<size_t>(Mx)), B(static_cast<size_t>(My));
  std::vector<cplx> T(size_t(Mx) * N);  // inner DFT results, [a*N + j]

  int nt = std::max(1, std::min(threads, Mx));
  auto b_worker = [&](int lo, int hi) {
    for (int b = lo; b < hi; ++b) B[size_t(b)] = pole_term(k.X_branches(ys[size_t(b)]).r0);
  };
  auto a_worker = [&](int lo, int hi) {
    std::vector<cplx> row(static_cast<size_t>(My));
    for (int a = lo; a < hi; ++a) {
      A[size_t(a)] = pole_term(xs[size_t(a)]);
      for (int b = 0; b < My; ++b)
        row[size_t(b)] = (A[size_t(a)] - B[size_t(b)]) / k.eval(xs[size_t(a)], ys[size_t(b)]);
      for (int j = 0; j < N; ++j) {
        cplx acc(0);
        for (int b = 0; b < My; ++b)
          acc += row[size_t(b)] * std::exp(cplx(0, -2 * M_PI * j * b / My));
        T[size_t(a) * N + j] = acc / (double(My) * std::pow(ry, j));
      }
    }
  };

  auto run = [&](auto&& fn, int total) {
    if (nt == 1) {
      fn(0, total);
      return;
    }
    std::vector<std::thread> pool;
    int chunk = (total + nt - 1) / nt;
    for (int w = 0; w < nt; ++w) {
      int lo = w * chunk, hi = std::min(total, lo + chunk);
      if (lo < hi) pool.emplace_back(fn, lo, hi);
    }
    for (auto& th : pool) th.join();
  };

  run(b_worker, My);
  run(a_worker, Mx);

  HarmonicGrid out = HarmonicGrid::zeros(N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      cplx acc(0);
      for (int a = 0; a < Mx; ++a)
        acc += T[size_t(a) * N + j] * std::exp(cplx(0, -2 * M_PI * i * a / Mx));
      out.at(i + 1, j + 1) = (acc / (double(Mx) * std::pow(rx, i))).real();
    }
  return out;
}

HarmonicGrid closed_form_simple(const StepSet& s, double t, double p, int N,
                                const Tolerances& tol) {
  if (s.p(1, 1) != 0 || s.p(1, -1) != 0 || s.p(-1, 1) != 0 || s.p(-1, -1) != 0)
    fail(ErrorCode::NotSimpleWalk, "closed form requires axis steps only");

  Kernel k(s, t);
  KernelBranchPoints bp = branch_points(k, tol);
  SegmentS seg = segment_S(k, bp);
  double width = std::max(seg.x_y2 - seg.x2, 0.0) + 1.0;
  if (p < seg.x2 - tol.segment_slack * width || p > seg.x_y2 + tol.segment_slack * width)
    fail(ErrorCode::OutOfSegment, "p outside [x2, X(y2)]");
  double pp = conjugate_point(k, bp, p, tol);

  double qx = s.p(-1, 0) / s.p(1, 0) * p;
  double qy = s.p(0, -1) / s.p(0, 1) * pp;
  bool left = std::abs(p - seg.x2) <= 1e-9 * width;
  bool right = std::abs(p - seg.x_y2) <= 1e-9 * width;
  // When the decaying and growing rates coincide the geometric bracket
  // degenerates and its normalized limit is the polynomial factor; this is
  // exactly what happens at the segment ends (and everywhere at t = t0).
  bool degx = right || std::abs(1 / p - qx) <= 1e-9 / p;
  bool degy = left || std::abs(1 / pp - qy) <= 1e-9 / pp;

  auto fx = [&](int i) {
    return degx ? i * std::pow(1 / p, i) : std::pow(1 / p, i) - std::pow(qx, i);
  };
  auto fy = [&](int j) {
    return degy ? j * std::pow(1 / pp, j) : std::pow(1 / pp, j) - std::pow(qy, j);
  };

  HarmonicGrid g = HarmonicGrid::zeros(N);
  double norm = fx(1) * fy(1);
  if (norm == 0) fail(ErrorCode::InternalError, "closed form degenerates at (1,1)");
  for (int i = 1; i <= N; ++i)
    for (int j = 1; j <= N; ++j) g.at(i, j) = fx(i) * fy(j) / norm;
  return g;
}

HarmonicFamily critical_family(const StepSet& s, const CriticalPoint& cp, const Tolerances& tol) {
  auto g = std::make_shared<GluingCritical>(s, cp, GluingCritical::Options{}, tol);
  return HarmonicFamily(g, g->branch_points().x.x2, tol);
}

double lambda_to_p(const Kernel& k, const KernelBranchPoints& bp, double lambda) {
  SegmentS seg = segment_S(k, bp);
  if (lambda < -1e-12 || lambda > 1 + 1e-12)
    fail(ErrorCode::OutOfSegment, "lambda outside [0,1]");
  return seg.x2 + lambda * (seg.x_y2 - seg.x2);
}

}  // namespace qharm
