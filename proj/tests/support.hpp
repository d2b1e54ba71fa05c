// Shared helpers for the test suite: frozen reference values, model files,
// relative-error checks.
#pragma once
#include <cmath>
#include <fstream>
#include <map>
#include <string>

#include <doctest.h>
#include <json.hpp>

#include "qharm/io.hpp"

namespace testsup {

using nlohmann::json;

inline const json& reference() {
  static json data = [] {
    std::ifstream in(std::string(QHARM_TEST_DATA_DIR) + "/reference_values.json");
    REQUIRE(in.good());
    return json::parse(in);
  }();
  return data;
}

// Reference reals are stored as decimal strings; complex values as [re, im]
// string pairs; "inf" marks a branch point at infinity.
inline double fd(const json& v) {
  if (v.is_number()) return v.get<double>();
  return std::stod(v.get<std::string>());
}

inline bool is_inf(const json& v) {
  return v.is_string() && v.get<std::string>() == "inf";
}

inline qharm::cplx fc(const json& v) {
  if (v.is_array()) return {fd(v[0]), fd(v[1])};
  return {fd(v), 0.0};
}

inline std::string model_path(const std::string& name) {
  return std::string(QHARM_TEST_DATA_DIR) + "/models/" + name + ".json";
}

inline qharm::StepSet model(const std::string& name) {
  return qharm::load_model(model_path(name));
}

// Rebuild a StepSet from a reference-case weight map ("k,l" -> string).
inline qharm::StepSet steps_of(const json& fixture) {
  std::array<std::array<double, 3>, 3> w{};
  for (auto it = fixture.at("weights").begin(); it != fixture.at("weights").end(); ++it) {
    int k = std::stoi(it.key().substr(0, it.key().find(',')));
    int l = std::stoi(it.key().substr(it.key().find(',') + 1));
    w[size_t(k + 1)][size_t(l + 1)] = fd(it.value());
  }
  return qharm::validate(w);
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

inline double rel_err(qharm::cplx got, qharm::cplx want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

}  // namespace testsup

// Reports got/want on failure, checks |got-want| <= tol * max(1, |want|).
#define CHECK_REL(got, want, tol)                                       \
  do {                                                                  \
    auto g_ = (got);                                                    \
    auto w_ = (want);                                                   \
    INFO("got " << g_ << " want " << w_ << " tol " << (tol));           \
    CHECK(testsup::rel_err(g_, w_) <= (tol));                           \
  } while (0)

// The expression must throw qharm::Error with exactly this code.
#define CHECK_CODE(expr, wanted)                          \
  do {                                                    \
    try {                                                 \
      (void)(expr);                                       \
      FAIL("expected " #wanted);                          \
    } catch (const qharm::Error& e_) {                    \
      CHECK(e_.code() == qharm::ErrorCode::wanted);       \
    }                                                     \
  } while (0)
