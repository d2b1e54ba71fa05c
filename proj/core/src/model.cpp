#include "qharm/model.hpp"

#include <cmath>

namespace qharm {

const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::NegativeWeight: return "NegativeWeight";
    case ErrorCode::SumNotOne: return "SumNotOne";
    case ErrorCode::CenterNonzero: return "CenterNonzero";
    case ErrorCode::ThreeConsecutiveZeros: return "ThreeConsecutiveZeros";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::LevelMismatch: return "LevelMismatch";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::OrderingViolation: return "OrderingViolation";
    case ErrorCode::DegenerateLeading: return "DegenerateLeading";
    case ErrorCode::OutOfSegment: return "OutOfSegment";
    case ErrorCode::QuadratureDisagreement: return "QuadratureDisagreement";
    case ErrorCode::NegativeIntegrand: return "NegativeIntegrand";
    case ErrorCode::DegenerateLattice: return "DegenerateLattice";
    case ErrorCode::PoleAtLatticePoint: return "PoleAtLatticePoint";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::RoundTripFailure: return "RoundTripFailure";
    case ErrorCode::PoleAtX4: return "PoleAtX4";
    case ErrorCode::BranchFault: return "BranchFault";
    case ErrorCode::DomainFault: return "DomainFault";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::PoleAtReference: return "PoleAtReference";
    case ErrorCode::DerivativeNonConvergence: return "DerivativeNonConvergence";
    case ErrorCode::ZeroDerivative: return "ZeroDerivative";
    case ErrorCode::PoleCollision: return "PoleCollision";
    case ErrorCode::PoleAtP: return "PoleAtP";
    case ErrorCode::ZeroOfGamma: return "ZeroOfGamma";
    case ErrorCode::ZeroOfGammaTilde: return "ZeroOfGammaTilde";
    case ErrorCode::OnKernelCurve: return "OnKernelCurve";
    case ErrorCode::RadiusTooLarge: return "RadiusTooLarge";
    case ErrorCode::TorusOnKernel: return "TorusOnKernel";
    case ErrorCode::NotSimpleWalk: return "NotSimpleWalk";
    case ErrorCode::EmptyRegime: return "EmptyRegime";
    case ErrorCode::ModelParse: return "ModelParse";
    case ErrorCode::InternalError: return "InternalError";
  }
  return "UnknownError";
}

const char* to_string(Regime r) {
  switch (r) {
    case Regime::Empty: return "Empty";
    case Regime::Point: return "Point";
    case Regime::Segment: return "Segment";
  }
  return "?";
}

Tolerances& Tolerances::global() {
  static Tolerances t;
  return t;
}

StepSet validate(const std::array<std::array<double, 3>, 3>& w, const Tolerances& tol) {
  double sum = 0;
  for (int k = 0; k < 3; ++k)
    for (int l = 0; l < 3; ++l) {
      if (w[k][l] < 0)
        fail(ErrorCode::NegativeWeight, "p(" + std::to_string(k - 1) + "," +
                                            std::to_string(l - 1) + ") = " + std::to_string(w[k][l]));
      sum += w[k][l];
    }
  if (w[1][1] != 0) fail(ErrorCode::CenterNonzero, "p(0,0) must be zero");
  if (std::abs(sum - 1.0) > tol.weight_renorm)
    fail(ErrorCode::SumNotOne, "weights sum to " + std::to_string(sum));

  StepSet s;
  s.w_ = w;
  if (std::abs(sum - 1.0) > tol.weight_sum)
    for (auto& row : s.w_)
      for (auto& v : row) v /= sum;

  // Clockwise cycle of the eight outer steps, starting at (1,1): three
  // consecutive zeros would trap the walk against a wall.
  static constexpr int cyc[8][2] = {{2, 2}, {2, 1}, {2, 0}, {1, 0}, {0, 0}, {0, 1}, {0, 2}, {1, 2}};
  for (int i = 0; i < 8; ++i) {
    bool z = true;
    for (int j = 0; j < 3; ++j) {
      auto& c = cyc[(i + j) % 8];
      if (s.w_[c[0]][c[1]] != 0) z = false;
    }
    if (z) fail(ErrorCode::ThreeConsecutiveZeros, "walk cannot reach both walls");
  }
  return s;
}

Vec2 StepSet::drift() const {
  Vec2 d{0, 0};
  for (int k = -1; k <= 1; ++k)
    for (int l = -1; l <= 1; ++l) {
      d[0] += k * p(k, l);
      d[1] += l * p(k, l);
    }
  return d;
}

double StepSet::phi(Vec2 a) const {
  double acc = 0;
  for (int k = -1; k <= 1; ++k)
    for (int l = -1; l <= 1; ++l)
      if (p(k, l) != 0) acc += p(k, l) * std::exp(k * a[0] + l * a[1]);
  return acc;
}

Vec2 StepSet::phi_grad(Vec2 a) const {
  Vec2 g{0, 0};
  for (int k = -1; k <= 1; ++k)
    for (int l = -1; l <= 1; ++l)
      if (p(k, l) != 0) {
        double e = p(k, l) * std::exp(k * a[0] + l * a[1]);
        g[0] += k * e;
        g[1] += l * e;
      }
  return g;
}

StepSet StepSet::reflect_x() const {
  StepSet r;
  for (int k = 0; k < 3; ++k)
    for (int l = 0; l < 3; ++l) r.w_[2 - k][l] = w_[k][l];
  return r;
}

StepSet StepSet::reflect_y() const {
  StepSet r;
  for (int k = 0; k < 3; ++k)
    for (int l = 0; l < 3; ++l) r.w_[k][2 - l] = w_[k][l];
  return r;
}

StepSet StepSet::transpose() const {
  StepSet r;
  for (int k = 0; k < 3; ++k)
    for (int l = 0; l < 3; ++l) r.w_[l][k] = w_[k][l];
  return r;
}

CriticalPoint critical_value(const StepSet& s, const Tolerances& tol) {
  // Damped Newton on the strictly convex phi.  The Hessian is the covariance
  // of the tilted step distribution, positive definite whenever the walk is
  // genuinely two-dimensional (guaranteed by validation).
  Vec2 a{0, 0};
  for (int it = 0; it < 200; ++it) {
    Vec2 g = s.phi_grad(a);
    double gn = std::hypot(g[0], g[1]);
    if (gn <= tol.t0_grad) return {s.phi(a), a};

    double hxx = 0, hxy = 0, hyy = 0;
    for (int k = -1; k <= 1; ++k)
      for (int l = -1; l <= 1; ++l)
        if (s.p(k, l) != 0) {
          double e = s.p(k, l) * std::exp(k * a[0] + l * a[1]);
          hxx += k * k * e;
          hxy += k * l * e;
          hyy += l * l * e;
        }
    double det = hxx * hyy - hxy * hxy;
    if (det <= 0) fail(ErrorCode::NoConvergence, "degenerate Hessian in t0 solve");
    Vec2 step{(hyy * g[0] - hxy * g[1]) / det, (hxx * g[1] - hxy * g[0]) / det};

    double phi0 = s.phi(a);
    double lam = 1.0;
    Vec2 trial;
    for (int h = 0; h < 60; ++h) {
      trial = {a[0] - lam * step[0], a[1] - lam * step[1]};
      // Non-strict: near the minimum phi differences underflow and the full
      // Newton step is exactly right.
      if (s.phi(trial) <= phi0) break;
      lam /= 2;
    }
    a = trial;
  }
  fail(ErrorCode::NoConvergence, "t0 Newton iteration cap exceeded");
}

Regime classify(const StepSet& s, double t, const Tolerances& tol) {
  double t0 = critical_value(s, tol).t0;
  if (std::abs(t - t0) <= tol.classify_width) return Regime::Point;
  return t < t0 ? Regime::Empty : Regime::Segment;
}

Vec2 level_point(const StepSet& s, double t, Vec2 dir, const Tolerances& tol) {
  CriticalPoint cp = critical_value(s, tol);
  if (t < cp.t0 - tol.classify_width)
    fail(ErrorCode::OutOfRange, "no level point below the critical value");
  double dn = std::hypot(dir[0], dir[1]);
  if (dn == 0) fail(ErrorCode::OutOfRange, "zero direction");
  Vec2 d{dir[0] / dn, dir[1] / dn};

  auto at = [&](double sc) { return Vec2{cp.a_star[0] + sc * d[0], cp.a_star[1] + sc * d[1]}; };
  double hi = 1.0;
  int grow = 0;
  while (s.phi(at(hi)) < t) {
    hi *= 2;
    if (++grow > 200) fail(ErrorCode::NoConvergence, "level bracket never closed");
  }
  double lo = 0.0;
  for (int it = 0; it < 200; ++it) {
    double mid = (lo + hi) / 2;
    double v = s.phi(at(mid));
    if (std::abs(v - t) <= tol.level_point) return at(mid);
    (v < t ? lo : hi) = mid;
  }
  return at((lo + hi) / 2);
}

StepSet tilt(const StepSet& s, Vec2 a, double t, const Tolerances& tol) {
  if (std::abs(s.phi(a) - t) > tol.tilt_level)
    fail(ErrorCode::LevelMismatch, "phi(a) != t at the requested tilt point");
  std::array<std::array<double, 3>, 3> w{};
  for (int k = -1; k <= 1; ++k)
    for (int l = -1; l <= 1; ++l) w[k + 1][l + 1] = s.p(k, l) * std::exp(k * a[0] + l * a[1]) / t;
  return validate(w, tol);
}

}  // namespace qharm
