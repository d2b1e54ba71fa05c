#include "qharm/model.hpp"

#include "support.hpp"

using namespace qharm;
using testsup::fd;

namespace {

std::array<std::array<double, 3>, 3> simple_weights() {
  std::array<std::array<double, 3>, 3> w{};
  w[2][1] = w[0][1] = w[1][2] = w[1][0] = 0.25;
  return w;
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("validate accepts the axis walk and exposes weights") {
  StepSet s = validate(simple_weights());
  CHECK(s.p(1, 0) == 0.25);
  CHECK(s.p(0, 1) == 0.25);
  CHECK(s.p(1, 1) == 0.0);
  CHECK(s.drift()[0] == 0.0);
  CHECK(s.drift()[1] == 0.0);
}

TEST_CASE("validate rejects a negative weight") {
  auto w = simple_weights();
  w[2][1] = -0.25;
  w[0][1] = 0.75;
  try {
    validate(w);
    FAIL("expected NegativeWeight");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NegativeWeight);
  }
}

TEST_CASE("validate rejects a nonzero center") {
  auto w = simple_weights();
  w[1][1] = 0.1;
  w[2][1] = 0.15;
  try {
    validate(w);
    FAIL("expected CenterNonzero");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CenterNonzero);
  }
}

TEST_CASE("validate rejects a bad sum but renormalizes tiny drift") {
  auto w = simple_weights();
  w[2][1] = 0.75;  // sum = 1.5
  try {
    validate(w);
    FAIL("expected SumNotOne");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SumNotOne);
  }

  auto v = simple_weights();
  v[2][1] = 0.25 + 4e-10;  // within the silent renormalization band
  StepSet s = validate(v);
  double sum = 0;
  for (int k = -1; k <= 1; ++k)
    for (int l = -1; l <= 1; ++l) sum += s.p(k, l);
  CHECK(std::abs(sum - 1.0) <= 1e-15);
}

TEST_CASE("validate rejects three cyclically consecutive zero outer steps") {
  std::array<std::array<double, 3>, 3> w{};
  // p(1,1) = p(-1,-1) = 1/2 leaves p(1,0), p(1,-1), p(0,-1) all zero.
  w[2][2] = 0.5;
  w[0][0] = 0.5;
  try {
    validate(w);
    FAIL("expected ThreeConsecutiveZeros");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ThreeConsecutiveZeros);
  }
}

TEST_CASE("reflections and transpose move the right entries") {
  StepSet s = testsup::model("separable");
  CHECK(s.p(1, 0) == 0.5);
  CHECK(s.reflect_x().p(-1, 0) == 0.5);
  CHECK(s.reflect_y().p(0, -1) == 0.25);
  CHECK(s.transpose().p(0, 1) == 0.5);
}

TEST_CASE("critical value of the zero-drift walks is 1 at the origin") {
  for (const char* name : {"simple", "diagonal", "eighths"}) {
    StepSet s = testsup::model(name);
    CriticalPoint cp = critical_value(s);
    INFO(name);
    CHECK(std::abs(cp.t0 - 1.0) <= 1e-12);
    CHECK(std::abs(cp.a_star[0]) <= 1e-6);
    CHECK(std::abs(cp.a_star[1]) <= 1e-6);
  }
}

TEST_CASE("critical value matches the reference for every stored case") {
  const auto& ref = testsup::reference();
  for (auto group : {"generic", "critical"}) {
    for (auto it = ref.at(group).begin(); it != ref.at(group).end(); ++it) {
      StepSet s = testsup::steps_of(it.value());
      CriticalPoint cp = critical_value(s);
      INFO(group << "/" << it.key());
      CHECK_REL(cp.t0, fd(it.value().at("t0")), 1e-12);
      CHECK_REL(cp.a_star[0], fd(it.value().at("astar")[0]), 1e-9);
      CHECK_REL(cp.a_star[1], fd(it.value().at("astar")[1]), 1e-9);
    }
  }
}

TEST_CASE("phi at the minimizer equals t0 and the gradient vanishes") {
  StepSet s = testsup::model("separable");
  CriticalPoint cp = critical_value(s);
  CHECK_REL(s.phi(cp.a_star), cp.t0, 1e-15);
  Vec2 g = s.phi_grad(cp.a_star);
  CHECK(std::hypot(g[0], g[1]) <= 1e-10);
}

TEST_CASE("classify splits at the critical value") {
  StepSet s = testsup::model("separable");
  CriticalPoint cp = critical_value(s);
  CHECK(classify(s, 0.9 * cp.t0) == Regime::Empty);
  CHECK(classify(s, cp.t0) == Regime::Point);
  CHECK(classify(s, cp.t0 + 1e-12) == Regime::Point);
  CHECK(classify(s, cp.t0 + 0.1) == Regime::Segment);
  CHECK(std::string(to_string(Regime::Segment)) == "Segment");
}

TEST_CASE("level_point lands on the level set and rejects bad input") {
  StepSet s = testsup::model("separable");
  double t = 1.1;
  for (Vec2 dir : {Vec2{1, 0}, Vec2{0, 1}, Vec2{-1, 2}}) {
    Vec2 a = level_point(s, t, dir);
    CHECK(std::abs(s.phi(a) - t) <= 1e-11);
  }
  CHECK_THROWS_AS(level_point(s, t, Vec2{0, 0}), Error);
  try {
    level_point(s, 0.5, Vec2{1, 0});
    FAIL("expected OutOfRange below t0");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OutOfRange);
  }
}

TEST_CASE("tilt produces a probability step set and enforces the level") {
  StepSet s = testsup::model("separable");
  double t = 1.05;
  Vec2 a = level_point(s, t, Vec2{1, 1});
  StepSet st = tilt(s, a, t);
  double sum = 0;
  for (int k = -1; k <= 1; ++k)
    for (int l = -1; l <= 1; ++l) sum += st.p(k, l);
  CHECK(std::abs(sum - 1.0) <= 1e-12);
  // phi of the tilted walk at 0 is 1 by construction
  CHECK(std::abs(st.phi(Vec2{0, 0}) - 1.0) <= 1e-12);
  try {
    tilt(s, Vec2{a[0] + 0.1, a[1]}, t);
    FAIL("expected LevelMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::LevelMismatch);
  }
}

}  // TEST_SUITE
