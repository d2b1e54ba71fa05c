#pragma once
#include <memory>
#include <optional>

#include "qharm/elliptic.hpp"
#include "qharm/kernel.hpp"

namespace qharm {

// Periods of the branch curve: omega1 is purely imaginary (its Im part is
// stored), omega2 and omega3 real.  omega1, omega2 generate the full lattice;
// omega3 is the gluing width (integral from X(y1) to x1).
struct Periods {
  double omega1_im;
  double omega2;
  double omega3;
};

Periods periods(const Kernel& k, const KernelBranchPoints& bp, double x_y1,
                const Tolerances& tol = Tolerances::global());

// Mobius-normalized conformal gluing function w for the domain bounded by the
// curve M: analytic and injective there, w(0) = 0, real on M's real chord,
// equal at conjugate points of M (the gluing identity).  Base of the generic
// (t > t0) and critical (t = t0) constructions.
class Gluing {
 public:
  enum class Mode { Generic, Critical };

  virtual ~Gluing() = default;

  Mode mode() const { return mode_; }
  const Kernel& kernel() const { return k_; }
  const KernelBranchPoints& branch_points() const { return bp_; }
  double x_y1() const { return x_y1_; }  // X(y1), the left end of the real chord
  double x0() const { return x0_; }      // reference point: the pole of w
  cplx u_x0() const { return ux0_; }
  cplx u_0() const { return u0_; }

  // The underlying uniformizing coordinate (elliptic in the generic case, a
  // power map in the collided critical case).  Real on the chord and on S_t.
  virtual cplx u(cplx x) const = 0;

  // w(x) = u(x0)/(u(x) - u(x0)) - u(x0)/(u(0) - u(x0)).
  cplx w(cplx x) const;

  // min |X0(y)| over the curve M: the conformal radius bound used to place
  // extraction circles.
  double dist_M(int n = 64) const;

  // sup |w(X0(y)) - w(X1(y))| over n Chebyshev samples of (y1,y2), divided
  // by the median |w| over the samples.  Near zero iff w actually glues.
  double gluing_residual(int n = 64) const;

  // w'(0) and w''(0) by fourth-order central differences with Richardson
  // extrapolation over step halvings; throws DerivativeNonConvergence.
  std::array<double, 2> w_derivs_at_0() const;

 protected:
  Gluing(Mode m, const Kernel& k, const KernelBranchPoints& bp, double x_y1);
  void finish_setup(std::optional<double> x0_request);  // picks x0, caches u(x0), u(0)

  Mode mode_;
  Kernel k_;
  KernelBranchPoints bp_;
  double x_y1_;
  double x0_ = 0;
  cplx ux0_, u0_;
  mutable std::optional<std::array<double, 2>> derivs_;
  Tolerances tol_;
};

class GluingGeneric : public Gluing {
 public:
  struct Options {
    std::optional<double> x0;
    // Diagnostic: scale omega2 after the period integrals.  Any value other
    // than 1 breaks the gluing identity on purpose (negative control for the
    // residual check).
    double omega2_scale = 1.0;
  };

  GluingGeneric(const StepSet& s, double t, Options opt,
                const Tolerances& tol = Tolerances::global());
  GluingGeneric(const StepSet& s, double t) : GluingGeneric(s, t, Options()) {}

  const Periods& pd() const { return pd_; }
  const Lattice& lattice12() const { return wp12_->lattice(); }
  const Lattice& lattice13() const { return wp13_->lattice(); }

  cplx u(cplx x) const override;

  // Strip representative: z with wp12(z) = v, translated by the lattice and
  // reflected so Re z lies in [omega2/2, omega2/2 + omega3] and Im z in
  // [0, omega1_im).
  cplx strip_rep(cplx z_raw) const;

 private:
  cplx g_of_x(cplx x) const;
  void realness_self_check() const;

  Periods pd_;
  std::unique_ptr<WP> wp12_, wp13_;
  // g(x) = d''(x4)/6 + d'(x4)/(x - x4), or its affine limit for x4 = inf.
  double g_const_, g_lin_;
  bool g_affine_;
  double g_x4_ = 0;
};

// Where the critical construction evaluates the discriminant curvature D.
// The natural point is the double root x2; the unit-point variant exists to
// document that it only agrees in the driftless case (see README).
enum class CurvaturePoint { AtDoubleRoot, AtOne };

class GluingCritical : public Gluing {
 public:
  struct Options {
    std::optional<double> x0;
    CurvaturePoint curvature = CurvaturePoint::AtDoubleRoot;
  };

  GluingCritical(const StepSet& s, const CriticalPoint& cp, Options opt,
                 const Tolerances& tol = Tolerances::global());
  GluingCritical(const StepSet& s, const CriticalPoint& cp)
      : GluingCritical(s, cp, Options()) {}

  double theta() const { return theta_; }
  double omega3() const { return omega3_; }
  double curvature() const { return D_; }
  // True when x1 and x4 have collided (discriminant degree drops to 2 at the
  // double root): u degenerates to an exact power map.
  bool collided() const { return collided_; }

  cplx u(cplx x) const override;

 private:
  double x2_, y2_, x1c_, theta_, omega3_, D_;
  bool collided_;
  double g_const_, g_lin_;
  bool g_affine_;
  double g_x4_ = 0;
};

// Opening angle theta = arccos(-sum k l p(k,l) x2^k y2^l / (2 sqrt(a(x2) at(y2))))
// of the critical cone; OutOfRange if the argument leaves [-1,1] beyond
// tolerance.
double theta_angle(const Kernel& k_at_t0, double x2, double y2,
                   const Tolerances& tol = Tolerances::global());

}  // namespace qharm
