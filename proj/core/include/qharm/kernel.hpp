#pragma once
#include <vector>

#include "qharm/model.hpp"
#include "qharm/poly.hpp"

namespace qharm {

// The kernel L(x,y) = sum p(k,l) x^k y^l * (xy) - t*xy, organized as a
// quadratic in y with x-polynomial coefficients,
//   L(x,y) = a(x) y^2 + b(x) y + c(x),
// and symmetrically in x with the tilde polynomials.  delta = b^2 - 4ac is
// the discriminant whose four roots are the x-branch points (same on the
// y side).
class Kernel {
 public:
  Kernel(const StepSet& s, double t);

  const StepSet& steps() const { return s_; }
  double t() const { return t_; }

  const Poly& a() const { return a_; }    // y^2 coefficient in x
  const Poly& b() const { return b_; }
  const Poly& c() const { return c_; }    // = L(x,0); its roots are X(0)
  const Poly& at() const { return at_; }  // x^2 coefficient in y
  const Poly& bt() const { return bt_; }
  const Poly& ct() const { return ct_; }  // = L(0,y)
  const Poly& delta() const { return delta_; }    // b^2 - 4ac, the x-discriminant
  const Poly& delta_t() const { return delta_t_; }

  template <typename T>
  T eval(T x, T y) const {
    return polyval(a_, x) * y * y + polyval(b_, x) * y + polyval(c_, x);
  }

  // Y-roots of L(x,.) = 0 ordered by modulus (Y0 first).  Flags Y1 = infinity
  // when the leading coefficient a(x) degenerates.
  QuadRoots Y_branches(cplx x) const;
  QuadRoots X_branches(cplx y) const;

  // The common value of the two Y-branches where delta vanishes: -b/(2a).
  cplx Y_at_double(cplx x) const;
  cplx X_at_double(cplx y) const;

 private:
  StepSet s_;
  double t_;
  Poly a_, b_, c_, at_, bt_, ct_, delta_, delta_t_;
};

// Roots of the discriminant in the canonical order x1 <= x2 <= x3 <= x4
// (cyclically on the real projective line: x4 may be infinite or negative,
// in which case the interval (x3,x4) wraps through infinity).  delta < 0 on
// (x1,x2) and (x3,x4), delta > 0 on (x2,x3).
struct BranchPoints {
  double x1, x2, x3;
  double x4;          // meaningful only when !x4_infinite
  bool x4_infinite;

  double at(int i) const;  // 1-based accessor, throws on x4 when infinite
};

BranchPoints order_branch_points(const Poly& delta, const Tolerances& tol = Tolerances::global());

struct KernelBranchPoints {
  BranchPoints x, y;
};

KernelBranchPoints branch_points(const Kernel& k, const Tolerances& tol = Tolerances::global());

// One sampled point of the curve M = X([y1,y2]): the two X-branches over a
// real parameter y.
struct CurvePoint {
  double param;
  cplx x0, x1;
};

// M sampled at n Chebyshev points of [y1,y2] (endpoints included; endpoint
// values are taken at the double root so they come out exactly real).
std::vector<CurvePoint> curve_M(const Kernel& k, const KernelBranchPoints& bp, int n);

// Same construction on the y side over [x1,x2] (the curve bounding the
// y-domain), for symmetric diagnostics.
std::vector<CurvePoint> curve_L(const Kernel& k, const KernelBranchPoints& bp, int n);

// Endpoints of S_t.  OutOfSegment guards conjugate_point below.
struct SegmentS {
  double x2;
  double x_y2;  // X(y2), the right endpoint
};
SegmentS segment_S(const Kernel& k, const KernelBranchPoints& bp);

// p' = Y0(p) for p in S_t; real by construction.
double conjugate_point(const Kernel& k, const KernelBranchPoints& bp, double p,
                       const Tolerances& tol = Tolerances::global());

}  // namespace qharm
