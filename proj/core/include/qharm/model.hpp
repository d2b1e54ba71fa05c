#pragma once
#include <array>
#include <optional>

#include "qharm/error.hpp"
#include "qharm/tolerances.hpp"

namespace qharm {

using Vec2 = std::array<double, 2>;

// A small-step weight set p(k,l), k,l in {-1,0,1}, p(0,0) = 0, sum = 1.
// Instances are produced by validate() (or ops that preserve validity), so a
// StepSet in hand is always a legal model.
class StepSet {
 public:
  double p(int k, int l) const { return w_[k + 1][l + 1]; }
  const std::array<std::array<double, 3>, 3>& raw() const { return w_; }

  // Mean drift (sum of k p(k,l), sum of l p(k,l)).
  Vec2 drift() const;

  // Laplace transform phi(a) = sum p(k,l) exp(k a1 + l a2) and its gradient.
  double phi(Vec2 a) const;
  Vec2 phi_grad(Vec2 a) const;

  StepSet reflect_x() const;   // k -> -k
  StepSet reflect_y() const;   // l -> -l
  StepSet transpose() const;   // (k,l) -> (l,k)

  friend StepSet validate(const std::array<std::array<double, 3>, 3>& w, const Tolerances& tol);

 private:
  StepSet() = default;
  std::array<std::array<double, 3>, 3> w_{};  // w_[k+1][l+1]
};

// Checks signs, the unit sum (renormalizing silently within tol.weight_renorm),
// the empty center, and that no three cyclically consecutive outer steps
// vanish (which would disconnect the walk from a quadrant wall).
StepSet validate(const std::array<std::array<double, 3>, 3>& w,
                 const Tolerances& tol = Tolerances::global());

struct CriticalPoint {
  double t0;     // min of phi = critical value of the family
  Vec2 a_star;   // the minimizer
};

// Global minimum of the strictly convex phi by damped Newton from the origin.
CriticalPoint critical_value(const StepSet& s, const Tolerances& tol = Tolerances::global());

enum class Regime { Empty, Point, Segment };
const char* to_string(Regime r);

// Empty for t < t0, Point within tol.classify_width of t0, Segment above.
Regime classify(const StepSet& s, double t, const Tolerances& tol = Tolerances::global());

// The point a on the ray a_star + s*dir, s >= 0, with phi(a) = t (t >= t0).
// Convexity makes phi monotone along the ray past the minimum, so bisection
// after bracket doubling always lands.
Vec2 level_point(const StepSet& s, double t, Vec2 dir,
                 const Tolerances& tol = Tolerances::global());

// Exponential change of measure: p^a(k,l) = p(k,l) exp(k a1 + l a2) / t.
// Requires phi(a) = t to tolerance, so the result is again a probability set.
StepSet tilt(const StepSet& s, Vec2 a, double t, const Tolerances& tol = Tolerances::global());

}  // namespace qharm
