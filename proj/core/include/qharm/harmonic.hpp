#pragma once
#include <memory>
#include <vector>

#include "qharm/gluing.hpp"

namespace qharm {

// Values of a harmonic function on [0,N]x[0,N]: v(i,0) = v(0,j) = 0, the
// interior holds f(i,j) for 1 <= i,j <= N.
struct HarmonicGrid {
  int N = 0;
  std::vector<double> v;  // (N+1)*(N+1), row-major in i

  double at(int i, int j) const { return v[size_t(i) * (N + 1) + j]; }
  double& at(int i, int j) { return v[size_t(i) * (N + 1) + j]; }
  static HarmonicGrid zeros(int N) {
    return HarmonicGrid{N, std::vector<double>(size_t(N + 1) * (N + 1), 0.0)};
  }
};

// Multiplies by exp(-sign*(a1 i + a2 j)): maps t-harmonic functions of the
// base walk to 1-harmonic functions of the tilted walk (sign +1) and back.
// Overflow if the exponent magnitude at the far corner exceeds double range.
HarmonicGrid transfer_harmonic(const HarmonicGrid& g, Vec2 a, int sign);

// The minimal t-harmonic function attached to a spectral point p of S_t,
// normalized by f(1,1) = 1.  Holds the gluing function and the two constants
// of the boundary generating functions.
class HarmonicFamily {
 public:
  HarmonicFamily(std::shared_ptr<const Gluing> g, double p,
                 const Tolerances& tol = Tolerances::global());

  const Gluing& gluing() const { return *g_; }
  double p() const { return p_; }
  double p_prime() const { return pprime_; }
  double c_alpha() const { return alpha_; }
  double c_beta() const { return beta_; }
  double f11() const { return 1.0; }

  // H(x,0) = sum_{i>=1} f(i,1) x^{i-1}, analytic for |x| < p.
  cplx boundary_x(cplx x) const;
  // H(0,y) = sum_{j>=1} f(1,j) y^{j-1}, analytic for |y| < p'.
  cplx boundary_y(cplx y) const;
  // H(x,y) = sum f(i,j) x^{i-1} y^{j-1} off the kernel curve.
  cplx full(cplx x, cplx y) const;

  // f(i,1) for i = 1..n and f(1,j) for j = 1..n by Cauchy coefficient
  // extraction on a circle inside the analyticity disc.
  std::vector<double> coeffs_x(int n) const;
  std::vector<double> coeffs_y(int n) const;

  // f(i,j) for 1 <= i,j <= N by double Cauchy extraction on a torus clear of
  // the kernel curve.  Deterministic for any thread count: per-node work is
  // partitioned, the reduction order is fixed.
  HarmonicGrid grid(int N, int threads = 1) const;

  // The torus radii the extraction will use (reported by the CLI).
  std::pair<double, double> radii() const;

 private:
  cplx pole_term(cplx x) const;  // c_alpha / (w(x) - w(p))

  std::shared_ptr<const Gluing> g_;
  double p_, pprime_;
  double alpha_, beta_;
  cplx w_p_;
  Tolerances tol_;
};

// Closed form for the simple walk (axis steps only): products of geometric
// terms in 1/p and 1/p', with the polynomial factor at the segment endpoints.
HarmonicGrid closed_form_simple(const StepSet& s, double t, double p, int N,
                                const Tolerances& tol = Tolerances::global());

// Convenience: the unique family at t = t0 (p collapses to x2).
HarmonicFamily critical_family(const StepSet& s, const CriticalPoint& cp,
                               const Tolerances& tol = Tolerances::global());

// p = x2 + lambda (X(y2) - x2) for lambda in [0,1].
double lambda_to_p(const Kernel& k, const KernelBranchPoints& bp, double lambda);

}  // namespace qharm
