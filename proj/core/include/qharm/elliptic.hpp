#pragma once
#include <array>

#include "qharm/poly.hpp"
#include "qharm/tolerances.hpp"

namespace qharm {

// Rectangular period lattice Z*g_re + Z*g_im (g_re real > 0, g_im purely
// imaginary, Im > 0) with its Weierstrass data.  Invariants g2, g3 come from
// Eisenstein q-series in the nome q = exp(2 pi i tau), tau = g_im / g_re.
struct Lattice {
  double g_re;       // real generator
  double g_im;       // imaginary part of the imaginary generator
  double g2, g3;     // Weierstrass invariants
  std::array<double, 3> e;  // roots of 4z^3 - g2 z - g3, descending (e1 > e2 > e3)
};

Lattice make_lattice(double g_re, double g_im, const Tolerances& tol = Tolerances::global());

// Weierstrass p-function on a Lattice: argument folded to the fundamental
// cell, halved into the Laurent disc, then squared back up by duplication.
class WP {
 public:
  explicit WP(const Lattice& lat, const Tolerances& tol = Tolerances::global());

  const Lattice& lattice() const { return lat_; }

  // Throws PoleAtLatticePoint within tol.wp_pole of a lattice point.
  cplx operator()(cplx z) const;

  // Same evaluation, but a pole yields a huge finite sentinel instead of a
  // throw; callers composing with a Mobius map use this to pass through
  // poles gracefully.
  cplx eval_or_huge(cplx z) const;

  // One representative z with wp(z) = v, by the Carlson symmetric integral,
  // folded into the half-rectangle [0, g_re/2] x [0, g_im).  Round-trip
  // checked to tol.wp_roundtrip.
  cplx inverse(cplx v) const;

  // The raw Carlson value before folding; branch selection is the caller's
  // business (the gluing strip rules consume this).
  cplx inverse_raw(cplx v) const;

  // Reference lattice sum truncated at |m|,|n| <= 40, for cross-checks only.
  cplx direct_sum(cplx z) const;

 private:
  cplx reduce(cplx z) const;
  cplx laurent(cplx z) const;
  Lattice lat_;
  std::array<double, 27> cs_;  // Laurent coefficients c_2..c_26
  double tol_pole_, tol_roundtrip_;
};

// Carlson's symmetric elliptic integral R_F by the duplication algorithm,
// principal branch; throws NonConvergence past the iteration cap.
cplx carlson_rf(cplx x, cplx y, cplx z, const Tolerances& tol = Tolerances::global());

}  // namespace qharm
