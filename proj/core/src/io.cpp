#include "qharm/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qharm {

// Every tolerance field, once; named() and apply_overrides() are generated
// from this list so they can never drift out of sync with the struct.
#define QHARM_TOL_FIELDS(X)                                                   \
  X(weight_sum) X(weight_renorm) X(t0_grad) X(level_point) X(classify_width)  \
  X(tilt_level) X(root_imag_snap) X(degree3_leading) X(quad_rel)              \
  X(quad_agree) X(nome_margin) X(wp_pole) X(wp_roundtrip) X(rf_tol)           \
  X(strip_window) X(realness) X(clearance) X(radius_ratio) X(gluing_check)    \
  X(deriv_agree) X(zero_deriv) X(pole_collision) X(pole_at_reference)         \
  X(segment_slack) X(double_root) X(theta_arg) X(critical_curvature)          \
  X(harmonicity) X(boundary_check) X(growth) X(lambda_p_equiv)

std::map<std::string, double> Tolerances::named() {
  std::map<std::string, double> out;
#define QHARM_TOL_PUT(f) out[#f] = f;
  QHARM_TOL_FIELDS(QHARM_TOL_PUT)
#undef QHARM_TOL_PUT
  return out;
}

std::string Tolerances::apply_overrides(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const std::exception& e) {
    return std::string("tolerance overrides ignored, invalid JSON: ") + e.what();
  }
  if (!j.is_object()) return "tolerance overrides ignored: expected a JSON object";
  std::string warn;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& name = it.key();
    if (!it.value().is_number()) {
      warn += (warn.empty() ? "" : "; ") + name + ": not a number";
      continue;
    }
    double v = it.value().get<double>();
    bool known = false;
#define QHARM_TOL_GET(f)   \
  if (name == #f) {        \
    f = v;                 \
    known = true;          \
  }
    QHARM_TOL_FIELDS(QHARM_TOL_GET)
#undef QHARM_TOL_GET
    if (!known) warn += (warn.empty() ? "" : "; ") + name + ": unknown tolerance name";
  }
  return warn;
}

#undef QHARM_TOL_FIELDS

StepSet parse_model(const std::string& json_text, const Tolerances& tol) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const std::exception& e) {
    fail(ErrorCode::ModelParse, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("weights"))
    fail(ErrorCode::ModelParse, "expected an object with a \"weights\" key");
  const auto& rows = j["weights"];
  if (!rows.is_array() || rows.size() != 3)
    fail(ErrorCode::ModelParse, "\"weights\" must be a 3x3 array");
  std::array<std::array<double, 3>, 3> w{};  // w[k+1][l+1]
  for (int r = 0; r < 3; ++r) {
    const auto& row = rows[size_t(r)];
    if (!row.is_array() || row.size() != 3)
      fail(ErrorCode::ModelParse, "\"weights\" must be a 3x3 array");
    for (int c = 0; c < 3; ++c) {
      const auto& cell = row[size_t(c)];
      if (!cell.is_number()) fail(ErrorCode::ModelParse, "weights must be numbers");
      // row r holds l = 1 - r (top row is l = +1), column c holds k = c - 1
      w[size_t(c)][size_t(2 - r)] = cell.get<double>();
    }
  }
  return validate(w, tol);
}

StepSet load_model(const std::string& path, const Tolerances& tol) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot read model file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str(), tol);
}

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if ((unsigned char)ch < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  return out;
}

}  // namespace

void JsonWriter::comma() {
  if (pending_key_) {
    pending_key_ = false;
    return;
  }
  if (!first_.empty()) {
    if (first_.back())
      first_.back() = false;
    else
      out_ += ',';
  }
}

JsonWriter& JsonWriter::begin_obj() {
  comma();
  out_ += '{';
  first_.push_back(true);
  return *this;
}

JsonWriter& JsonWriter::end_obj() {
  first_.pop_back();
  out_ += '}';
  return *this;
}

JsonWriter& JsonWriter::begin_arr() {
  comma();
  out_ += '[';
  first_.push_back(true);
  return *this;
}

JsonWriter& JsonWriter::end_arr() {
  first_.pop_back();
  out_ += ']';
  return *this;
}

JsonWriter& JsonWriter::key(const std::string& k) {
  comma();
  out_ += '"';
  out_ += json_escape(k);
  out_ += "\":";
  pending_key_ = true;
  return *this;
}

JsonWriter& JsonWriter::value(double v) {
  comma();
  out_ += fmt17(v);
  return *this;
}

JsonWriter& JsonWriter::value(int v) {
  comma();
  out_ += std::to_string(v);
  return *this;
}

JsonWriter& JsonWriter::value(bool v) {
  comma();
  out_ += v ? "true" : "false";
  return *this;
}

JsonWriter& JsonWriter::value(const std::string& s) {
  comma();
  out_ += '"';
  out_ += json_escape(s);
  out_ += '"';
  return *this;
}

JsonWriter& JsonWriter::null() {
  comma();
  out_ += "null";
  return *this;
}

JsonWriter& JsonWriter::kv(const std::string& k, double v) { return key(k).value(v); }
JsonWriter& JsonWriter::kv(const std::string& k, int v) { return key(k).value(v); }
JsonWriter& JsonWriter::kv(const std::string& k, bool v) { return key(k).value(v); }
JsonWriter& JsonWriter::kv(const std::string& k, const std::string& v) { return key(k).value(v); }

void write_grid_csv(std::ostream& os, const HarmonicGrid& g) {
  os << "i,j,f\n";
  for (int i = 0; i <= g.N; ++i)
    for (int j = 0; j <= g.N; ++j) os << i << ',' << j << ',' << fmt17(g.at(i, j)) << '\n';
}

void write_curve_csv(std::ostream& os, const std::vector<CurvePoint>& pts) {
  os << "param,re_x0,im_x0,re_x1,im_x1\n";
  for (const auto& p : pts)
    os << fmt17(p.param) << ',' << fmt17(p.x0.real()) << ',' << fmt17(p.x0.imag()) << ','
       << fmt17(p.x1.real()) << ',' << fmt17(p.x1.imag()) << '\n';
}

void write_coeffs_csv(std::ostream& os, const std::vector<double>& c, const std::string& label) {
  os << "index," << label << '\n';
  for (size_t i = 0; i < c.size(); ++i) os << (i + 1) << ',' << fmt17(c[i]) << '\n';
}

std::string weights_json(const StepSet& s) {
  JsonWriter w;
  w.begin_obj().key("weights").begin_arr();
  for (int l = 1; l >= -1; --l) {
    w.begin_arr();
    for (int k = -1; k <= 1; ++k) w.value(s.p(k, l));
    w.end_arr();
  }
  w.end_arr().end_obj();
  return w.str();
}

}  // namespace qharm
