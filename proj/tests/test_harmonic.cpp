#include "qharm/harmonic.hpp"

#include <memory>

#include "support.hpp"

using namespace qharm;
using testsup::fc;
using testsup::fd;

TEST_SUITE("harmonic") {

TEST_CASE("family constants and grids match the reference (generic)") {
  const auto& ref = testsup::reference().at("generic");
  for (auto it = ref.begin(); it != ref.end(); ++it) {
    const auto& f = it.value();
    StepSet s = testsup::steps_of(f);
    auto g = std::make_shared<GluingGeneric>(s, fd(f.at("t")));
    for (auto lit = f.at("lambda").begin(); lit != f.at("lambda").end(); ++lit) {
      const auto& lam = lit.value();
      INFO(it.key() << " lambda=" << lit.key());
      double p = fd(lam.at("p"));
      HarmonicFamily fam(g, p);
      CHECK_REL(fam.p_prime(), fd(lam.at("pprime")), 1e-11);
      CHECK_REL(fam.c_alpha(), fc(lam.at("alpha")).real(), 1e-7);
      CHECK_REL(g->w(cplx(p)), fc(lam.at("w_at_p")), 1e-9);
      HarmonicGrid grid = fam.grid(6);
      const auto& rows = lam.at("grid");
      for (int i = 1; i <= 6; ++i)
        for (int j = 1; j <= 6; ++j) {
          INFO("cell " << i << "," << j);
          CHECK_REL(grid.at(i, j), fd(rows[size_t(i - 1)][size_t(j - 1)]), 1e-7);
        }
    }
  }
}

TEST_CASE("family constants and grids match the reference (critical)") {
  const auto& ref = testsup::reference().at("critical");
  for (auto it = ref.begin(); it != ref.end(); ++it) {
    const auto& f = it.value();
    INFO(it.key());
    StepSet s = testsup::steps_of(f);
    HarmonicFamily fam = critical_family(s, critical_value(s));
    CHECK_REL(fam.p(), fd(f.at("x2")), 1e-12);
    CHECK_REL(fam.p_prime(), fd(f.at("pprime")), 1e-11);
    CHECK_REL(fam.c_alpha(), fc(f.at("alpha")).real(), 1e-7);
    CHECK_REL(fam.gluing().w(cplx(fam.p())), fc(f.at("w_at_p")), 1e-8);
    HarmonicGrid grid = fam.grid(6);
    const auto& rows = f.at("grid");
    for (int i = 1; i <= 6; ++i)
      for (int j = 1; j <= 6; ++j) {
        INFO("cell " << i << "," << j);
        CHECK_REL(grid.at(i, j), fd(rows[size_t(i - 1)][size_t(j - 1)]), 1e-7);
      }
  }
}

struct SimpleFam {
  StepSet s = testsup::model("simple");
  std::shared_ptr<GluingGeneric> g = std::make_shared<GluingGeneric>(s, 1.25);
  HarmonicFamily fam{g, 0.6909830056250526};  // midpoint of the segment
};

TEST_CASE_FIXTURE(SimpleFam, "the grid is deterministic across thread counts") {
  HarmonicGrid a = fam.grid(8, 1);
  HarmonicGrid b = fam.grid(8, 4);
  REQUIRE(a.v.size() == b.v.size());
  for (size_t i = 0; i < a.v.size(); ++i) CHECK(a.v[i] == b.v[i]);
}

TEST_CASE_FIXTURE(SimpleFam, "column extraction agrees with the grid") {
  HarmonicGrid grid = fam.grid(6);
  std::vector<double> cx = fam.coeffs_x(6);
  std::vector<double> cy = fam.coeffs_y(6);
  for (int i = 1; i <= 6; ++i) {
    CHECK_REL(cx[size_t(i - 1)], grid.at(i, 1), 1e-8);
    CHECK_REL(cy[size_t(i - 1)], grid.at(1, i), 1e-8);
  }
}

TEST_CASE_FIXTURE(SimpleFam, "boundary series sums to the generating function") {
  int n = 40;
  std::vector<double> cx = fam.coeffs_x(n);
  cplx x = cplx(fam.p() / 2) * std::exp(cplx(0, 0.7));
  cplx sum(0);
  for (int i = n; i >= 1; --i) sum = sum * x + cx[size_t(i - 1)];
  CHECK_REL(fam.boundary_x(x), sum, 1e-8);
  CHECK(fam.boundary_y(cplx(0)).real() == 1.0);
  CHECK(fam.boundary_y(cplx(0)).imag() == 0.0);
}

TEST_CASE_FIXTURE(SimpleFam, "full generating function guards the kernel curve") {
  CHECK(std::isfinite(fam.full(cplx(0.1), cplx(0.2)).real()));
  // a point exactly on the curve: (X0(y), y)
  cplx y(0.3, 0.0);
  cplx x = g->kernel().X_branches(y).r0;
  CHECK_CODE(fam.full(x, y), OnKernelCurve);
  CHECK_CODE(fam.boundary_x(cplx(fam.p())), PoleAtP);
}

TEST_CASE("closed form for the simple walk matches extraction") {
  StepSet s = testsup::model("simple");
  auto g = std::make_shared<GluingGeneric>(s, 1.25);
  for (double p : {0.5, 0.6909830056250526, 1.0}) {
    INFO("p = " << p);
    HarmonicGrid want = closed_form_simple(s, 1.25, p, 6);
    HarmonicGrid got = HarmonicFamily(g, p).grid(6);
    for (int i = 1; i <= 6; ++i)
      for (int j = 1; j <= 6; ++j) CHECK_REL(got.at(i, j), want.at(i, j), 1e-6);
  }
}

TEST_CASE("closed form rejects non-simple walks and p off the segment") {
  CHECK_CODE(closed_form_simple(testsup::model("diagonal"), 1.1, 0.5, 4), NotSimpleWalk);
  StepSet s = testsup::model("simple");
  CHECK_CODE(closed_form_simple(s, 1.25, 2.0, 4), OutOfSegment);
  CHECK_CODE(closed_form_simple(s, 1.25, 0.2, 4), OutOfSegment);
}

TEST_CASE("tilting transfers harmonic grids there and back") {
  StepSet s = testsup::model("simple");
  auto g = std::make_shared<GluingGeneric>(s, 1.25);
  HarmonicGrid base = HarmonicFamily(g, 0.5).grid(5);
  Vec2 a{0.3, -0.2};
  HarmonicGrid back = transfer_harmonic(transfer_harmonic(base, a, +1), a, -1);
  for (int i = 0; i <= 5; ++i)
    for (int j = 0; j <= 5; ++j) CHECK_REL(back.at(i, j), base.at(i, j), 1e-12);
  CHECK_CODE(transfer_harmonic(HarmonicGrid::zeros(15), Vec2{50.0, 0.0}, +1), Overflow);
}

TEST_CASE("lambda parametrizes the segment endpoints exactly") {
  StepSet s = testsup::model("simple");
  Kernel k(s, 1.25);
  KernelBranchPoints bp = branch_points(k);
  SegmentS seg = segment_S(k, bp);
  CHECK(lambda_to_p(k, bp, 0.0) == seg.x2);
  CHECK_REL(lambda_to_p(k, bp, 1.0), seg.x_y2, 1e-15);
  CHECK_REL(lambda_to_p(k, bp, 0.5), (seg.x2 + seg.x_y2) / 2, 1e-15);
  CHECK_CODE(lambda_to_p(k, bp, -0.1), OutOfSegment);
  CHECK_CODE(lambda_to_p(k, bp, 1.1), OutOfSegment);
}

}  // TEST_SUITE
