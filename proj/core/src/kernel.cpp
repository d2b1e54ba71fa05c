#include "qharm/kernel.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace qharm {

QuadRoots stable_quadratic(cplx A, cplx B, cplx C, double lead_tol) {
  if (std::abs(A) <= lead_tol) {
    if (std::abs(B) == 0.0) fail(ErrorCode::DegenerateLeading, "quadratic with A = B = 0");
    return {-C / B, cplx(0), true};
  }
  cplx disc = B * B - 4.0 * A * C;
  cplx sq = std::sqrt(disc);
  if (std::real(std::conj(B) * sq) < 0) sq = -sq;
  cplx q = -(B + sq) / 2.0;
  cplx r1 = q / A;
  cplx r2 = (q != cplx(0)) ? C / q : cplx(0);
  if (std::abs(r1) <= std::abs(r2)) return {r1, r2, false};
  return {r2, r1, false};
}

std::vector<cplx> polyroots(const Poly& c) {
  int n = int(c.size()) - 1;
  while (n > 0 && c[size_t(n)] == 0.0) --n;
  if (n < 1) return {};
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -c[size_t(i)] / c[size_t(n)];
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, /*computeEigenvectors=*/false);
  std::vector<cplx> r;
  for (int i = 0; i < n; ++i) r.push_back(es.eigenvalues()[i]);
  return r;
}

Kernel::Kernel(const StepSet& s, double t) : s_(s), t_(t) {
  // L(x,y) = sum p(k,l) x^(1-k) y^(1-l) - t x y, grouped by powers of y:
  //   y^2 coefficient a(x) picks up l = -1, the linear term b(x) picks up
  //   l = 0 together with -t x, the constant c(x) picks up l = +1.
  a_ = {s.p(1, -1), s.p(0, -1), s.p(-1, -1)};
  b_ = {s.p(1, 0), -t, s.p(-1, 0)};
  c_ = {s.p(1, 1), s.p(0, 1), s.p(-1, 1)};
  at_ = {s.p(-1, 1), s.p(-1, 0), s.p(-1, -1)};
  bt_ = {s.p(0, 1), -t, s.p(0, -1)};
  ct_ = {s.p(1, 1), s.p(1, 0), s.p(1, -1)};
  delta_ = polysub(polymul(b_, b_), polymul(polymul(a_, c_), Poly{4.0}));
  delta_t_ = polysub(polymul(bt_, bt_), polymul(polymul(at_, ct_), Poly{4.0}));
}

QuadRoots Kernel::Y_branches(cplx x) const {
  return stable_quadratic(polyval(a_, x), polyval(b_, x), polyval(c_, x), 1e-14);
}

QuadRoots Kernel::X_branches(cplx y) const {
  return stable_quadratic(polyval(at_, y), polyval(bt_, y), polyval(ct_, y), 1e-14);
}

cplx Kernel::Y_at_double(cplx x) const { return -polyval(b_, x) / (2.0 * polyval(a_, x)); }
cplx Kernel::X_at_double(cplx y) const { return -polyval(bt_, y) / (2.0 * polyval(at_, y)); }

double BranchPoints::at(int i) const {
  switch (i) {
    case 1: return x1;
    case 2: return x2;
    case 3: return x3;
    case 4:
      if (x4_infinite) fail(ErrorCode::InternalError, "x4 is infinite");
      return x4;
  }
  fail(ErrorCode::InternalError, "branch point index out of range");
}

namespace {

// delta's sign pattern over the ordered roots: negative on (x1,x2) and on the
// (possibly wrapped) interval (x3,x4), positive on (x2,x3).
void check_signs(const Poly& delta, const BranchPoints& bp) {
  auto bad = [&](const char* where) {
    fail(ErrorCode::OrderingViolation, std::string("discriminant sign pattern broken on ") + where);
  };
  if (!(bp.x2 > 0) || !(bp.x3 > 0)) bad("positivity of x2, x3");
  if (polyval(delta, (bp.x1 + bp.x2) / 2) >= 0) bad("(x1,x2)");
  if (polyval(delta, (bp.x2 + bp.x3) / 2) <= 0) bad("(x2,x3)");
  double probe;
  if (bp.x4_infinite || bp.x4 < bp.x3)
    probe = bp.x3 + std::max(1.0, bp.x3);  // interval wraps through infinity
  else
    probe = (bp.x3 + bp.x4) / 2;
  if (probe > bp.x3 && polyval(delta, probe) >= 0) bad("(x3,x4)");
}

}  // namespace

BranchPoints order_branch_points(const Poly& delta, const Tolerances& tol) {
  Poly d = delta;
  bool cubic = d.size() >= 5 && std::abs(d[4]) <= tol.degree3_leading;
  if (cubic) d.resize(4);

  std::vector<cplx> roots = polyroots(d);
  std::vector<double> real_roots;
  for (cplx r : roots) {
    double scale = std::max(1.0, std::abs(r));
    if (std::abs(r.imag()) > tol.root_imag_snap * scale)
      fail(ErrorCode::OrderingViolation,
           "complex branch points (t below the critical value, or coincident roots)");
    real_roots.push_back(r.real());
  }

  // Structure, not plain sorting: the two positive roots bracketing the
  // positive gap go in the middle; whatever remains (negative, zero, or the
  // point at infinity for a cubic) fills slots 1 and 4 by modulus.
  std::vector<double> pos, rest;
  for (double r : real_roots) (r > 0 ? pos : rest).push_back(r);
  std::sort(pos.begin(), pos.end());
  std::sort(rest.begin(), rest.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });

  BranchPoints bp{};
  bp.x4_infinite = false;
  if (cubic) {
    if (pos.size() == 3) {
      bp = {pos[0], pos[1], pos[2], 0, true};
    } else if (pos.size() == 2 && rest.size() == 1) {
      bp = {rest[0], pos[0], pos[1], 0, true};
    } else {
      fail(ErrorCode::OrderingViolation, "cubic discriminant with unexpected root signs");
    }
  } else {
    if (pos.size() == 4) {
      bp = {pos[0], pos[1], pos[2], pos[3], false};
    } else if (pos.size() == 3 && rest.size() == 1) {
      // The extra positive root is either below the gap (slot 1) or beyond it
      // (slot 4): modulus against the smallest gap root decides.
      if (std::abs(rest[0]) <= pos[0] * (1 + tol.root_imag_snap))
        bp = {rest[0], pos[0], pos[1], pos[2], false};
      else
        bp = {pos[0], pos[1], pos[2], rest[0], false};
    } else if (pos.size() == 2 && rest.size() == 2) {
      bp = {rest[0], pos[0], pos[1], rest[1], false};
    } else {
      fail(ErrorCode::OrderingViolation, "quartic discriminant with unexpected root signs");
    }
  }
  check_signs(delta, bp);
  return bp;
}

KernelBranchPoints branch_points(const Kernel& k, const Tolerances& tol) {
  return {order_branch_points(k.delta(), tol), order_branch_points(k.delta_t(), tol)};
}

namespace {

std::vector<CurvePoint> sample_curve(const Kernel& k, double lo, double hi, int n, bool x_side) {
  std::vector<CurvePoint> pts;
  pts.reserve(size_t(n));
  double mid = (lo + hi) / 2, half = (hi - lo) / 2;
  for (int j = 0; j < n; ++j) {
    // Chebyshev points of the second kind: endpoints included, clustered at
    // the ends where the branches pinch.
    double th = n == 1 ? 0.0 : M_PI * j / (n - 1);
    double param = mid + half * std::cos(th);
    CurvePoint cp;
    cp.param = param;
    if (j == 0 || j == n - 1) {
      // At the double root both branches coincide; the direct formula avoids
      // the sqrt of discriminant dust, so endpoint values are exactly real.
      cplx v = x_side ? k.X_at_double(param) : k.Y_at_double(param);
      cp.x0 = cp.x1 = v;
    } else {
      QuadRoots q = x_side ? k.X_branches(param) : k.Y_branches(param);
      cp.x0 = q.r0;
      cp.x1 = q.second_infinite ? cplx(INFINITY, 0) : q.r1;
    }
    pts.push_back(cp);
  }
  return pts;
}

}  // namespace

std::vector<CurvePoint> curve_M(const Kernel& k, const KernelBranchPoints& bp, int n) {
  return sample_curve(k, bp.y.x1, bp.y.x2, n, /*x_side=*/true);
}

std::vector<CurvePoint> curve_L(const Kernel& k, const KernelBranchPoints& bp, int n) {
  return sample_curve(k, bp.x.x1, bp.x.x2, n, /*x_side=*/false);
}

SegmentS segment_S(const Kernel& k, const KernelBranchPoints& bp) {
  cplx xy2 = k.X_at_double(bp.y.x2);
  return {bp.x.x2, xy2.real()};
}

double conjugate_point(const Kernel& k, const KernelBranchPoints& bp, double p,
                       const Tolerances& tol) {
  SegmentS seg = segment_S(k, bp);
  double width = std::max(seg.x_y2 - seg.x2, 0.0) + 1.0;
  if (p < seg.x2 - tol.segment_slack * width || p > seg.x_y2 + tol.segment_slack * width)
    fail(ErrorCode::OutOfSegment, "p outside [x2, X(y2)]");

  cplx pp;
  double dscale = 0;
  for (double c : k.delta()) dscale = std::max(dscale, std::abs(c));
  if (std::abs(polyval(k.delta(), p)) < tol.double_root * dscale * std::max(1.0, p * p * p * p))
    pp = k.Y_at_double(p);
  else
    pp = k.Y_branches(p).r0;
  if (std::abs(pp.imag()) > 1e-7 * (1 + std::abs(pp)))
    fail(ErrorCode::BranchFault, "conjugate point came out non-real");
  return pp.real();
}

}  // namespace qharm
