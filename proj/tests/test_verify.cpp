#include "qharm/verify.hpp"

#include <memory>

#include "support.hpp"

using namespace qharm;

TEST_SUITE("verify") {

TEST_CASE("harmonicity residual is exact on a known non-harmonic grid") {
  // f(i,j) = i*j is 1-harmonic for the simple walk, so at t = 1.25 the
  // pointwise relative defect is |1 - 1.25| / 1.25 = 0.2 at every node.
  StepSet s = testsup::model("simple");
  HarmonicGrid g = HarmonicGrid::zeros(6);
  for (int i = 0; i <= 6; ++i)
    for (int j = 0; j <= 6; ++j) g.at(i, j) = double(i) * j;
  double r = harmonicity_residual(s, 1.25, g);
  CHECK(std::abs(r - 0.2) <= 1e-15);
}

TEST_CASE("a real family is harmonic to rounding noise") {
  StepSet s = testsup::model("simple");
  auto g = std::make_shared<GluingGeneric>(s, 1.25);
  HarmonicFamily fam(g, 0.5);
  CHECK(harmonicity_residual(s, 1.25, fam.grid(8)) <= 1e-10);
  CHECK(boundary_residual(fam) <= 1e-8);
}

TEST_CASE("growth extrapolation recovers geometric bases exactly") {
  // plain geometric: all ratios already equal the base
  std::vector<double> a, b;
  double q = 1.7;
  for (int i = 1; i <= 30; ++i) a.push_back(std::pow(q, i));
  GrowthEstimate ga = growth_exponent(a, q);
  CHECK_REL(ga.estimate, q, 1e-12);
  CHECK(ga.err <= 1e-12);

  // polynomial factor: ratios are q(1 + 1/i), linear in h = 1/i, which the
  // extrapolation removes
  for (int i = 1; i <= 30; ++i) b.push_back(i * std::pow(q, i));
  GrowthEstimate gb = growth_exponent(b, q);
  CHECK_REL(gb.estimate, q, 1e-10);

  // degenerate input
  CHECK(std::isnan(growth_exponent({1.0, 2.0, 4.0}, q).estimate) == false);
  CHECK(std::isnan(growth_exponent({1.0}, q).estimate));
  CHECK(std::isnan(growth_exponent({1.0, -1.0, 2.0, 3.0}, q).estimate));
}

TEST_CASE("proportionality test separates scalings from different families") {
  StepSet s = testsup::model("simple");
  auto g = std::make_shared<GluingGeneric>(s, 1.25);
  HarmonicGrid A = HarmonicFamily(g, 0.5).grid(6);
  HarmonicGrid B = A;
  for (double& v : B.v) v *= 2.0;
  double dev = 0;
  CHECK(proportional(A, B, 1e-12, &dev));
  CHECK(dev <= 1e-13);

  // two distinct spectral points give genuinely different shapes
  HarmonicGrid C = HarmonicFamily(g, lambda_to_p(g->kernel(), g->branch_points(), 0.0)).grid(6);
  HarmonicGrid D = HarmonicFamily(g, lambda_to_p(g->kernel(), g->branch_points(), 1.0)).grid(6);
  CHECK(proportional(C, D, 1e-6, &dev) == false);
  CHECK(dev > 1e-2);
}

TEST_CASE("full report passes on a healthy segment-regime family") {
  Report rep = full_report(testsup::model("simple"), 1.25, std::nullopt, 0.5, 8);
  CHECK(rep.regime == Regime::Segment);
  CHECK(rep.overall);
  CHECK(rep.p.has_value());
  CHECK(rep.p_prime.has_value());
  for (const auto& c : rep.checks) {
    INFO(c.name << " value " << c.value << " threshold " << c.threshold);
    CHECK(c.pass);
  }
}

TEST_CASE("full report passes at the critical point") {
  Report rep = full_report(testsup::model("eighths"), 1.0, std::nullopt, std::nullopt, 6);
  CHECK(rep.regime == Regime::Point);
  CHECK(rep.overall);
}

TEST_CASE("below the critical value the report records the refusal") {
  Report rep = full_report(testsup::model("simple"), 0.9, std::nullopt, std::nullopt, 6);
  CHECK(rep.regime == Regime::Empty);
  CHECK(rep.overall);
  bool found = false;
  for (const auto& c : rep.checks)
    if (c.name == "family_refused_below_t0") found = c.pass;
  CHECK(found);
}

TEST_CASE("a pipeline failure becomes a failing check, not a crash") {
  // p far outside the segment: the conjugate point refuses it
  Report rep = full_report(testsup::model("simple"), 1.25, 50.0, std::nullopt, 6);
  CHECK(rep.overall == false);
  bool found = false;
  for (const auto& c : rep.checks)
    if (c.name.rfind("pipeline_error_", 0) == 0) found = !c.pass;
  CHECK(found);
}

}  // TEST_SUITE
