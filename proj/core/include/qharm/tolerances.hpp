#pragma once
#include <map>
#include <string>

namespace qharm {

// Numeric knobs in one place.  Every threshold the algorithms consult lives
// here so it can be overridden (programmatically, or via the QH_TOL_OVERRIDE
// environment variable, a JSON object mapping names below to values).
struct Tolerances {
  double weight_sum = 1e-12;        // |sum of weights - 1| accepted as exact
  double weight_renorm = 1e-9;      // renormalize silently when within this
  double t0_grad = 1e-10;           // gradient norm stopping the t0 Newton solve
  double level_point = 1e-12;       // |phi(a) - t| target for level_point
  double classify_width = 1e-9;     // |t - t0| band classified as Point
  double tilt_level = 1e-10;        // |phi(a) - t| accepted by tilt
  double root_imag_snap = 1e-9;     // imaginary parts snapped to zero in root ordering
  double degree3_leading = 1e-14;   // |lead coeff| below which the quartic is a cubic
  double quad_rel = 5e-14;          // internal quadrature refinement target
  double quad_agree = 1e-10;        // required agreement of independent node counts
  double nome_margin = 1e-6;        // reject lattices with |q| >= 1 - this
  double wp_pole = 1e-12;           // distance to a lattice point treated as a pole
  double wp_roundtrip = 1e-9;       // wp(wp_inverse(v)) must return v this well
  double rf_tol = 2e-3;             // Carlson RF duplication stopping spread
  double strip_window = 1e-9;       // slack (relative to omega2) of the strip window
  double realness = 1e-9;           // |Im u| / max(1,|u|) allowed on real segments
  double clearance = 1e-5;          // min |L| required on the extraction torus
  double radius_ratio = 0.8;        // torus radii as a fraction of their bounds
  double gluing_check = 1e-8;       // boundary-identity residual threshold
  double deriv_agree = 1e-8;        // Richardson agreement for w'(0), w''(0)
  double zero_deriv = 1e-13;        // |w'(0)| (or w''(0)) treated as zero
  double pole_collision = 1e-12;    // |w(p) - w(X0(0))| treated as a collision
  double pole_at_reference = 1e-10; // |x - x0| treated as hitting the w pole
  double segment_slack = 1e-9;      // slack for p in [x2, X(y2)] membership
  double double_root = 1e-11;       // |delta(p)| below which Y is taken at the double root
  double theta_arg = 1e-10;         // allowed excess of the arccos argument beyond 1
  double critical_curvature = 1e-12; // |delta'(x4)| detecting the collided critical case
  double harmonicity = 1e-6;        // relative harmonicity residual threshold
  double boundary_check = 1e-8;     // boundary-condition residual threshold
  double growth = 1e-3;             // growth-exponent agreement threshold
  double lambda_p_equiv = 1e-12;    // --lambda vs --p agreement requirement

  // Mutable process-wide instance; the CLI applies QH_TOL_OVERRIDE to it once
  // at startup.  Library calls default to it but accept an explicit struct.
  static Tolerances& global();

  // Applies {"name": value, ...} overrides.  Unknown names are collected and
  // returned so the caller can warn; known names are assigned.
  std::map<std::string, double> named();
  std::string apply_overrides(const std::string& json_text);
};

}  // namespace qharm
