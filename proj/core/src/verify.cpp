#include "qharm/verify.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace qharm {

double harmonicity_residual(const StepSet& s, double t, const HarmonicGrid& g, double floor_eps) {
  auto fv = [&](int i, int j) {
    if (i < 0 || j < 0 || i > g.N || j > g.N) return 0.0;
    return g.at(i, j);
  };
  double worst = 0;
  for (int i = 1; i <= g.N - 1; ++i)
    for (int j = 1; j <= g.N - 1; ++j) {
      double acc = 0;
      for (int k = -1; k <= 1; ++k)
        for (int l = -1; l <= 1; ++l)
          if (s.p(k, l) != 0) acc += s.p(k, l) * fv(i + k, j + l);
      double denom = std::max(std::abs(t * g.at(i, j)), floor_eps);
      worst = std::max(worst, std::abs(acc - t * g.at(i, j)) / denom);
    }
  return worst;
}

double boundary_residual(const HarmonicFamily& fam, int n) {
  const Gluing& g = fam.gluing();
  const Kernel& k = g.kernel();
  double y1 = g.branch_points().y.x1, y2 = g.branch_points().y.x2;
  double worst = 0, scale = 0;
  for (int m = 0; m < n; ++m) {
    double th = M_PI * (2 * m + 1) / (2 * n);
    double y = (y1 + y2) / 2 + (y2 - y1) / 2 * std::cos(th);
    QuadRoots q = k.X_branches(y);
    if (q.second_infinite) continue;
    // gamma(X) H(X,0) = pole_term(X) + beta on both branches; the beta's
    // cancel, so the identity reduces to equality of the pole terms.
    cplx v0 = fam.c_alpha() / (g.w(q.r0) - g.w(cplx(fam.p())));
    cplx v1 = fam.c_alpha() / (g.w(q.r1) - g.w(cplx(fam.p())));
    worst = std::max(worst, std::abs(v0 - v1));
    scale = std::max(scale, std::abs(v0));
  }
  return worst / std::max(scale, 1e-300);
}

GrowthEstimate growth_exponent(const std::vector<double>& coeffs, double target) {
  // The growth base is the limit of consecutive ratios f(i+1)/f(i).  A
  // polynomial factor bends the ratios (at a segment endpoint f ~ i q^i gives
  // q(1 + 1/i), and the i-th root then converges only like exp(log i / i)), so
  // we fit log ratios over the tail half against {1, log(1+h), h^2, h^3} with
  // h = 1/i and read the base off the constant term.  The log(1+h) column
  // represents any i^g factor exactly.  Polynomial extrapolation through
  // consecutive tail ratios is deliberately avoided: the h values there are
  // nearly equal, and the extrapolation weights blow round-off in the ratios
  // up by many orders of magnitude.
  int n = int(coeffs.size());
  int first = std::max(1, n / 2), last = n - 1;  // ratio f(i+1)/f(i), 1-based
  int pts = last - first + 1;
  if (pts < 2) return {NAN, target, INFINITY};
  int params = std::min(4, pts);
  Eigen::MatrixXd A(pts, params);
  Eigen::VectorXd b(pts);
  for (int m = 0; m < pts; ++m) {
    int i = first + m;
    double lo = coeffs[size_t(i - 1)], hi = coeffs[size_t(i)];
    if (lo <= 0 || hi <= 0) return {NAN, target, INFINITY};
    double h = 1.0 / i;
    A(m, 0) = 1.0;
    if (params > 1) A(m, 1) = std::log1p(h);
    if (params > 2) A(m, 2) = h * h;
    if (params > 3) A(m, 3) = h * h * h;
    b(m) = std::log(hi / lo);
  }
  double est = std::exp(A.colPivHouseholderQr().solve(b)(0));
  return {est, target, std::abs(est - target) / std::abs(target)};
}

bool proportional(const HarmonicGrid& A, const HarmonicGrid& B, double rel_tol, double* dev) {
  std::vector<double> ratios;
  for (int i = 1; i <= A.N && i <= B.N; ++i)
    for (int j = 1; j <= A.N && j <= B.N; ++j)
      if (std::abs(B.at(i, j)) > 1e-300) ratios.push_back(A.at(i, j) / B.at(i, j));
  if (ratios.empty()) return false;
  std::vector<double> sorted = ratios;
  std::sort(sorted.begin(), sorted.end());
  double med = sorted[sorted.size() / 2];
  double worst = 0;
  for (double r : ratios) worst = std::max(worst, std::abs(r - med) / std::abs(med));
  if (dev) *dev = worst;
  return worst <= rel_tol;
}

Report full_report(const StepSet& s, double t, std::optional<double> p_opt,
                   std::optional<double> lambda_opt, int N, const Tolerances& tol) {
  Report rep;
  rep.t = t;
  auto add = [&](const std::string& name, double value, double threshold, bool pass,
                 const std::string& note = "") {
    rep.checks.push_back({name, value, threshold, pass, note});
  };

  CriticalPoint cp = critical_value(s, tol);
  rep.t0 = cp.t0;
  rep.regime = classify(s, t, tol);
  add("classification", double(int(rep.regime)), 0, true, to_string(rep.regime));

  if (rep.regime == Regime::Empty) {
    add("family_refused_below_t0", t, cp.t0, true,
        "no harmonic family exists below the critical value");
    rep.overall = true;
    for (const auto& c : rep.checks) rep.overall = rep.overall && c.pass;
    return rep;
  }

  try {
    std::shared_ptr<Gluing> g;
    double p;
    if (rep.regime == Regime::Point) {
      g = std::make_shared<GluingCritical>(s, cp, GluingCritical::Options{}, tol);
      p = g->branch_points().x.x2;
    } else {
      auto gg = std::make_shared<GluingGeneric>(s, t, GluingGeneric::Options{}, tol);
      if (lambda_opt)
        p = lambda_to_p(gg->kernel(), gg->branch_points(), *lambda_opt);
      else
        p = p_opt.value_or(lambda_to_p(gg->kernel(), gg->branch_points(), 0.5));
      g = gg;
    }

    double glue = g->gluing_residual();
    add("gluing_residual", glue, tol.gluing_check, glue <= tol.gluing_check);

    HarmonicFamily fam(g, p, tol);
    rep.p = fam.p();
    rep.p_prime = fam.p_prime();

    double beta_gap = std::abs(fam.c_beta() - (s.p(1, 1) * fam.f11() +
                                               fam.c_alpha() / g->w(cplx(fam.p())).real()));
    add("constants_relation", beta_gap, 1e-10, beta_gap <= 1e-10);

    HarmonicGrid grid = fam.grid(N);
    double harm = harmonicity_residual(s, t, grid);
    add("harmonicity", harm, tol.harmonicity, harm <= tol.harmonicity);

    bool pos = true;
    for (int i = 1; i <= N; ++i)
      for (int j = 1; j <= N; ++j) pos = pos && grid.at(i, j) > 0;
    add("positivity", pos ? 1.0 : 0.0, 1.0, pos);

    double corner_gap = std::abs(grid.at(1, 1) - fam.f11());
    add("normalization", corner_gap, 1e-8, corner_gap <= 1e-8);

    double bres = boundary_residual(fam);
    add("boundary_identity", bres, tol.boundary_check, bres <= tol.boundary_check);

    std::vector<double> cx = fam.coeffs_x(40), cy = fam.coeffs_y(40);
    double row_gap = 0;
    for (int i = 1; i <= std::min(N, 6); ++i)
      row_gap = std::max(row_gap, std::abs(cx[size_t(i - 1)] - grid.at(i, 1)) /
                                      std::max(1.0, std::abs(grid.at(i, 1))));
    add("row_sections_agree", row_gap, 1e-8, row_gap <= 1e-8);

    GrowthEstimate gx = growth_exponent(cx, 1.0 / fam.p());
    add("growth_x", gx.err, tol.growth, gx.err <= tol.growth);
    GrowthEstimate gy = growth_exponent(cy, 1.0 / fam.p_prime());
    add("growth_y", gy.err, tol.growth, gy.err <= tol.growth);
  } catch (const Error& e) {
    add(std::string("pipeline_error_") + to_string(e.code()), 0, 0, false, e.what());
  }

  rep.overall = true;
  for (const auto& c : rep.checks) rep.overall = rep.overall && c.pass;
  return rep;
}

}  // namespace qharm
