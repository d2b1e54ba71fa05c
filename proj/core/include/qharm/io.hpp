#pragma once
#include <ostream>
#include <string>
#include <vector>

#include "qharm/harmonic.hpp"
#include "qharm/verify.hpp"

namespace qharm {

// Reads {"weights": [[...],[...],[...]]}; rows are l = +1, 0, -1 top to
// bottom, columns k = -1, 0, +1 left to right (the visual layout of the step
// diagram).  FileError for unreadable paths, ModelParse for bad JSON,
// validation errors for bad weights.
StepSet load_model(const std::string& path, const Tolerances& tol = Tolerances::global());
StepSet parse_model(const std::string& json_text, const Tolerances& tol = Tolerances::global());

// Shortest-round-trip decimal formatting (17 significant digits), the one
// number format every emitter uses; output is byte-stable across runs.
std::string fmt17(double x);

// Minimal ordered JSON emitter: keys appear in insertion order, numbers via
// fmt17.  Enough structure for the CLI's output documents.
class JsonWriter {
 public:
  JsonWriter& begin_obj();
  JsonWriter& end_obj();
  JsonWriter& begin_arr();
  JsonWriter& end_arr();
  JsonWriter& key(const std::string& k);
  JsonWriter& value(double v);
  JsonWriter& value(int v);
  JsonWriter& value(bool v);
  JsonWriter& value(const std::string& s);
  JsonWriter& null();
  // key/value in one go
  JsonWriter& kv(const std::string& k, double v);
  JsonWriter& kv(const std::string& k, int v);
  JsonWriter& kv(const std::string& k, bool v);
  JsonWriter& kv(const std::string& k, const std::string& v);

  std::string str() const { return out_; }

 private:
  void comma();
  std::string out_;
  std::vector<bool> first_;  // per nesting level: no element emitted yet
  bool pending_key_ = false;
};

// CSV emitters (fixed headers, fmt17 numbers).
void write_grid_csv(std::ostream& os, const HarmonicGrid& g);
void write_curve_csv(std::ostream& os, const std::vector<CurvePoint>& pts);
void write_coeffs_csv(std::ostream& os, const std::vector<double>& c, const std::string& label);

std::string weights_json(const StepSet& s);  // the same layout load_model reads

}  // namespace qharm
