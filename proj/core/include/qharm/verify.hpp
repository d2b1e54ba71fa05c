#pragma once
#include <optional>
#include <string>

#include "qharm/harmonic.hpp"

namespace qharm {

// Max over interior points of |sum_(k,l) p(k,l) f(i+k, j+l) - t f(i,j)|
// relative to t |f(i,j)| pointwise (values outside the grid or the quadrant
// count as zero).  Checked on 1 <= i,j <= N-1 so every neighbor is in range.
double harmonicity_residual(const StepSet& s, double t, const HarmonicGrid& g,
                            double floor_eps = 1e-300);

// sup over n conjugate sample pairs of M of the boundary identity
// |gamma(X0) H(X0,0) - gamma(X1) H(X1,0)| / scale: both branches over a point
// of M must load the boundary generating function identically.
double boundary_residual(const HarmonicFamily& fam, int n = 64);

struct GrowthEstimate {
  double estimate;  // extrapolated limit of f(i+1)/f(i)
  double target;    // 1/p or 1/p'
  double err;       // |estimate - target| / target
};

// Growth base of a coefficient sequence: least-squares extrapolation of the
// log consecutive ratios in h = 1/i to h = 0, with a log(1+h) basis column
// that absorbs exactly the polynomial factor the coefficients carry when p
// sits at a segment endpoint.
GrowthEstimate growth_exponent(const std::vector<double>& coeffs, double target);

// True when the two grids are proportional: max deviation of the pointwise
// ratio from its median, relative, at most rel_tol.  dev receives the measure.
bool proportional(const HarmonicGrid& A, const HarmonicGrid& B, double rel_tol, double* dev);

struct CheckResult {
  std::string name;
  double value = 0;
  double threshold = 0;
  bool pass = false;
  std::string note;
};

struct Report {
  double t = 0;
  double t0 = 0;
  Regime regime = Regime::Empty;
  std::optional<double> p, p_prime;
  std::vector<CheckResult> checks;
  bool overall = false;
};

// Runs the pipeline end to end at (s, t, p-or-lambda) and aggregates every
// self-check: classification, branch-point ordering, gluing residual,
// harmonicity, boundary identity, growth exponents, positivity.  Below t0
// the family checks are skipped (construction is refused by design) and the
// report records that.  Validation failures become a single failing entry.
Report full_report(const StepSet& s, double t, std::optional<double> p,
                   std::optional<double> lambda, int N,
                   const Tolerances& tol = Tolerances::global());

}  // namespace qharm
