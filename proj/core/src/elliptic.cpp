#include "qharm/elliptic.hpp"

#include <cmath>

#include "qharm/error.hpp"

namespace qharm {

Lattice make_lattice(double g_re, double g_im, const Tolerances& tol) {
  if (!(g_re > 0) || !(g_im > 0))
    fail(ErrorCode::DegenerateLattice, "lattice generators must have positive extent");
  // Nome of tau = i g_im / g_re; rectangular, so q is real in (0,1).
  double q = std::exp(-2.0 * M_PI * g_im / g_re);
  if (q >= 1.0 - tol.nome_margin)
    fail(ErrorCode::DegenerateLattice, "nome too close to 1 (collapsed lattice)");

  double e4 = 0, e6 = 0;
  double qn = 1;
  for (int n = 1; n < 4000; ++n) {
    qn *= q;
    double n2 = double(n) * n;
    double t4 = n * n2 * qn / (1.0 - qn);
    double t6 = n2 * n2 * n * qn / (1.0 - qn);
    e4 += t4;
    e6 += t6;
    if (t4 < 1e-19 * (1.0 + e4) && t6 < 1e-19 * (1.0 + e6)) break;
  }
  double E4 = 1.0 + 240.0 * e4;
  double E6 = 1.0 - 504.0 * e6;

  double pi4 = M_PI * M_PI * M_PI * M_PI;
  double w = g_re;
  Lattice lat;
  lat.g_re = g_re;
  lat.g_im = g_im;
  lat.g2 = (4.0 * pi4 / 3.0) * E4 / (w * w * w * w);
  lat.g3 = (8.0 * pi4 * M_PI * M_PI / 27.0) * E6 / (w * w * w * w * w * w);

  // e-values: roots of 4z^3 - g2 z - g3.  Rectangular lattices have three
  // real roots; the trigonometric solution keeps them exactly real.
  double p = -lat.g2 / 4.0, qq = -lat.g3 / 4.0;  // z^3 + p z + q after /4
  double m = 2.0 * std::sqrt(-p / 3.0);
  double arg = 3.0 * qq / (p * m);
  arg = std::min(1.0, std::max(-1.0, arg));
  double th = std::acos(arg) / 3.0;
  std::array<double, 3> e{m * std::cos(th), m * std::cos(th - 2.0 * M_PI / 3.0),
                          m * std::cos(th - 4.0 * M_PI / 3.0)};
  std::sort(e.begin(), e.end(), [](double a, double b) { return a > b; });
  lat.e = e;
  return lat;
}

WP::WP(const Lattice& lat, const Tolerances& tol)
    : lat_(lat), tol_pole_(tol.wp_pole), tol_roundtrip_(tol.wp_roundtrip) {
  // Laurent coefficients of wp - 1/z^2: c2 z^2 + c3 z^4 + ... with the
  // classical recursion; 26 terms cover |z| <= 0.35 * cell to full precision.
  cs_.fill(0.0);
  cs_[2] = lat.g2 / 20.0;
  cs_[3] = lat.g3 / 28.0;
  for (int k = 4; k <= 26; ++k) {
    double acc = 0;
    for (int m = 2; m <= k - 2; ++m) acc += cs_[size_t(m)] * cs_[size_t(k - m)];
    cs_[size_t(k)] = 3.0 * acc / ((2.0 * k + 1.0) * (k - 3.0));
  }
}

cplx WP::reduce(cplx z) const {
  double n = std::round(z.real() / lat_.g_re);
  double m = std::round(z.imag() / lat_.g_im);
  return z - cplx(n * lat_.g_re, m * lat_.g_im);
}

cplx WP::laurent(cplx z) const {
  cplx z2 = z * z;
  cplx acc(0);
  for (int k = 26; k >= 2; --k) acc = acc * z2 + cs_[size_t(k)];
  return 1.0 / z2 + acc * z2;
}

cplx WP::eval_or_huge(cplx z) const {
  z = reduce(z);
  double dmin = std::min(lat_.g_re, lat_.g_im);
  if (std::abs(z) < tol_pole_ * dmin) return cplx(1e300, 0.0);

  int doublings = 0;
  while (std::abs(z) > 0.35 * dmin) {
    z /= 2.0;
    ++doublings;
  }
  cplx p = laurent(z);
  for (int i = 0; i < doublings; ++i) {
    cplx p2 = p * p;
    cplx num = 6.0 * p2 - lat_.g2 / 2.0;
    cplx den = 4.0 * (4.0 * p2 * p - lat_.g2 * p - lat_.g3);
    p = -2.0 * p + num * num / den;
  }
  return p;
}

cplx WP::operator()(cplx z) const {
  cplx zr = reduce(z);
  double dmin = std::min(lat_.g_re, lat_.g_im);
  if (std::abs(zr) < tol_pole_ * dmin)
    fail(ErrorCode::PoleAtLatticePoint, "wp evaluated at a lattice point");
  return eval_or_huge(z);
}

cplx carlson_rf(cplx x, cplx y, cplx z, const Tolerances& tol) {
  for (int it = 0; it < 200; ++it) {
    cplx sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
    cplx lam = sx * sy + sy * sz + sz * sx;
    x = (x + lam) / 4.0;
    y = (y + lam) / 4.0;
    z = (z + lam) / 4.0;
    cplx mu = (x + y + z) / 3.0;
    double scale = std::abs(mu);
    if (scale == 0) break;
    double spread =
        std::max({std::abs(x - mu), std::abs(y - mu), std::abs(z - mu)}) / scale;
    if (spread < tol.rf_tol) {
      // Fifth-order tail from Carlson's expansion.
      cplx X = 1.0 - x / mu, Y = 1.0 - y / mu, Z = 1.0 - z / mu;
      cplx E2 = X * Y + Y * Z + Z * X;
      cplx E3 = X * Y * Z;
      cplx s = 1.0 - E2 / 10.0 + E3 / 14.0 + E2 * E2 / 24.0 - 3.0 * E2 * E3 / 44.0;
      return s / std::sqrt(mu);
    }
  }
  fail(ErrorCode::NonConvergence, "Carlson RF duplication did not converge");
}

cplx WP::inverse_raw(cplx v) const {
  return carlson_rf(v - lat_.e[0], v - lat_.e[1], v - lat_.e[2]);
}

cplx WP::inverse(cplx v) const {
  cplx z = inverse_raw(v);
  // Fold into the half-rectangle [0, g_re/2] x [0, g_im): wp is even and
  // lattice-periodic, so the representative is as good as any.
  z = reduce(z);  // Re in [-g_re/2, g_re/2], Im in [-g_im/2, g_im/2]
  if (z.real() < 0) z = -z;
  if (z.imag() < 0) z += cplx(0, lat_.g_im);

  cplx back = eval_or_huge(z);
  if (std::abs(back - v) > tol_roundtrip_ * (1.0 + std::abs(v)))
    fail(ErrorCode::RoundTripFailure, "wp(inverse(v)) disagrees with v");
  return z;
}

cplx WP::direct_sum(cplx z) const {
  cplx acc = 1.0 / (z * z);
  for (int m = -40; m <= 40; ++m)
    for (int n = -40; n <= 40; ++n) {
      if (m == 0 && n == 0) continue;
      cplx w(m * lat_.g_re, n * lat_.g_im);
      cplx d = z - w;
      acc += 1.0 / (d * d) - 1.0 / (w * w);
    }
  return acc;
}

}  // namespace qharm
