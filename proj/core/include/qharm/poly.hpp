#pragma once
#include <complex>
#include <vector>

namespace qharm {

using cplx = std::complex<double>;

// Polynomials are plain coefficient vectors in ascending order:
// c[0] + c[1] x + c[2] x^2 + ...
using Poly = std::vector<double>;

template <typename T>
T polyval(const Poly& c, T x) {
  T acc(0);
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + T(*it);
  return acc;
}

inline Poly polyder(const Poly& c) {
  Poly d;
  for (size_t k = 1; k < c.size(); ++k) d.push_back(double(k) * c[k]);
  if (d.empty()) d.push_back(0.0);
  return d;
}

inline Poly polyadd(const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()), 0.0);
  for (size_t k = 0; k < a.size(); ++k) r[k] += a[k];
  for (size_t k = 0; k < b.size(); ++k) r[k] += b[k];
  return r;
}

inline Poly polysub(const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()), 0.0);
  for (size_t k = 0; k < a.size(); ++k) r[k] += a[k];
  for (size_t k = 0; k < b.size(); ++k) r[k] -= b[k];
  return r;
}

inline Poly polymul(const Poly& a, const Poly& b) {
  Poly r(a.size() + b.size() - 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

// Synthetic division by (x - r); the remainder is dropped, so this is exact
// only when r is (numerically) a root.
inline Poly deflate(const Poly& c, double r) {
  size_t n = c.size();
  Poly q(n - 1, 0.0);
  double carry = c[n - 1];
  for (size_t k = n - 1; k-- > 0;) {
    q[k] = carry;
    carry = c[k] + r * carry;
  }
  return q;
}

// Roots of a quadratic A x^2 + B x + C without cancellation: the square root
// is sign-matched to B, the small root comes from C/q.  Returned in
// nondecreasing modulus; `second_infinite` marks the degenerate-leading case
// where only -C/B exists and the other root escapes to infinity.
struct QuadRoots {
  cplx r0, r1;
  bool second_infinite = false;
};

QuadRoots stable_quadratic(cplx A, cplx B, cplx C, double lead_tol = 0.0);

// All complex roots of a real-coefficient polynomial (companion matrix).
// The leading coefficient must be the last entry and nonzero.
std::vector<cplx> polyroots(const Poly& c);

}  // namespace qharm
