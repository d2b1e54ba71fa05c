#pragma once
#include <functional>

#include "qharm/error.hpp"
#include "qharm/tolerances.hpp"

namespace qharm {

// Integral of f over (a,b) by tanh-sinh quadrature, refined by level doubling
// until two consecutive node counts agree to tol.quad_agree (relative); the
// integrand may have integrable endpoint singularities.  Throws
// QuadratureDisagreement if agreement is never reached.
//
// The integrand receives the abscissa and its distance to the nearer
// endpoint; the distance stays accurate when the abscissa has saturated to
// the endpoint in double precision, which is what 1/sqrt endpoint
// singularities need.
double tanh_sinh(const std::function<double(double x, double dist)>& f, double a, double b,
                 const Tolerances& tol = Tolerances::global());

// Midpoint rule in the angle after x = mid + half*sin(theta); exact spectral
// convergence when f(x)*sqrt((x-a)(b-x)) is smooth.  Used as the independent
// cross-check of tanh_sinh for the period integrals.
double gauss_chebyshev(const std::function<double(double x)>& f, double a, double b, int n);

}  // namespace qharm
