// Command-line front end for the quarter-plane harmonic-function library.
// JSON to stdout by default (17 significant digits, byte-stable), CSV for
// grids and curves with --format csv.  Exit codes: 0 ok, 2 check failed,
// 3 input or numeric error, 64 usage, 66 unreadable file.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qharm/io.hpp"
#include "qharm/verify.hpp"

using namespace qharm;

namespace {

void emit_weights(JsonWriter& w, const StepSet& s) {
  w.begin_arr();
  for (int l = 1; l >= -1; --l) {
    w.begin_arr();
    for (int k = -1; k <= 1; ++k) w.value(s.p(k, l));
    w.end_arr();
  }
  w.end_arr();
}

void emit_grid(JsonWriter& w, const HarmonicGrid& g) {
  w.key("N").value(g.N);
  w.key("grid").begin_arr();
  for (int i = 0; i <= g.N; ++i) {
    w.begin_arr();
    for (int j = 0; j <= g.N; ++j) w.value(g.at(i, j));
    w.end_arr();
  }
  w.end_arr();
}

void emit_quarter(JsonWriter& w, const char* kx, const BranchPoints& b) {
  w.key(kx).begin_arr();
  w.value(b.x1).value(b.x2).value(b.x3);
  if (b.x4_infinite)
    w.null();
  else
    w.value(b.x4);
  w.end_arr();
}

struct Out {
  std::string path;  // empty = stdout
  void write(const std::string& text) const {
    if (path.empty()) {
      std::fwrite(text.data(), 1, text.size(), stdout);
      return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw FileError("cannot write output file: " + path);
    f << text;
  }
};

std::shared_ptr<Gluing> make_gluing(const StepSet& s, double t, Regime r, const CriticalPoint& cp) {
  if (r == Regime::Empty)
    fail(ErrorCode::EmptyRegime, "no harmonic functions exist below the critical value");
  if (r == Regime::Point) return std::make_shared<GluingCritical>(s, cp);
  return std::make_shared<GluingGeneric>(s, t);
}

double pick_p(const Gluing& g, std::optional<double> p, std::optional<double> lambda) {
  if (g.mode() == Gluing::Mode::Critical) return g.branch_points().x.x2;
  if (lambda) return lambda_to_p(g.kernel(), g.branch_points(), *lambda);
  return *p;  // presence enforced by the option group
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"t-harmonic functions of small-step walks killed at the quarter-plane boundary"};
  app.require_subcommand(1);

  // Tolerance overrides apply before any numeric work.
  if (const char* env = std::getenv("QH_TOL_OVERRIDE")) {
    std::string warn = Tolerances::global().apply_overrides(env);
    if (!warn.empty()) std::fprintf(stderr, "QH_TOL_OVERRIDE: %s\n", warn.c_str());
  }

  std::string model_path, format = "json", which = "M", output_path;
  double t = 0, dir_x = 1, dir_y = 0;
  std::optional<double> p_opt, lambda_opt;
  int grid_n = 8, samples = 64, threads = 1;
  bool do_check = false;

  auto add_model = [&](CLI::App* c) {
    c->add_option("model", model_path, "model JSON file")->required();
  };
  auto add_t = [&](CLI::App* c) { c->add_option("--t", t, "spectral level t")->required(); };
  auto add_family = [&](CLI::App* c) {
    auto* po = c->add_option("--p", p_opt, "spectral point p on the segment");
    auto* lo = c->add_option("--lambda", lambda_opt, "relative segment position in [0,1]");
    po->excludes(lo);
    lo->excludes(po);
  };
  auto add_out = [&](CLI::App* c) { c->add_option("-o,--output", output_path, "output file (default stdout)"); };

  auto* c_validate = app.add_subcommand("validate", "check a model file");
  add_model(c_validate); add_out(c_validate);

  auto* c_t0 = app.add_subcommand("t0", "critical value and minimizer");
  add_model(c_t0); add_out(c_t0);

  auto* c_classify = app.add_subcommand("classify", "regime of the spectral level");
  add_model(c_classify); add_t(c_classify); add_out(c_classify);

  auto* c_bp = app.add_subcommand("branch-points", "ordered branch points of the kernel");
  add_model(c_bp); add_t(c_bp); add_out(c_bp);

  auto* c_curve = app.add_subcommand("curve", "sampled branch curve M or L");
  add_model(c_curve); add_t(c_curve); add_out(c_curve);
  c_curve->add_option("--which", which, "M (x-plane) or L (y-plane)")
      ->check(CLI::IsMember({"M", "L"}));
  c_curve->add_option("--samples", samples, "number of samples")->check(CLI::PositiveNumber);
  c_curve->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  auto* c_segment = app.add_subcommand("segment", "endpoints of the spectral segment S_t");
  add_model(c_segment); add_t(c_segment); add_out(c_segment);

  auto* c_gluing = app.add_subcommand("gluing", "conformal gluing function data");
  add_model(c_gluing); add_t(c_gluing); add_out(c_gluing);
  c_gluing->add_flag("--check", do_check, "exit 2 unless the gluing residual passes");

  auto* c_harm = app.add_subcommand("harmonic", "harmonic function values on a grid");
  add_model(c_harm); add_t(c_harm); add_family(c_harm); add_out(c_harm);
  c_harm->add_option("--grid", grid_n, "grid size N")->check(CLI::Range(2, 1 << 20));
  c_harm->add_option("--threads", threads, "worker threads (result is thread-count independent)")
      ->check(CLI::PositiveNumber);
  c_harm->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  auto* c_closed = app.add_subcommand("closed-form", "simple-walk closed form on a grid");
  add_model(c_closed); add_t(c_closed); add_out(c_closed);
  c_closed->add_option("--p", p_opt, "spectral point p")->required();
  c_closed->add_option("--grid", grid_n, "grid size N")->check(CLI::Range(2, 1 << 20));
  c_closed->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  auto* c_tilt = app.add_subcommand("tilt", "exponential change of measure at level t");
  add_model(c_tilt); add_t(c_tilt); add_out(c_tilt);
  c_tilt->add_option("--dir", [&dir_x, &dir_y](const std::vector<std::string>& vals) {
    // accepted as "--dir dx,dy"
    const std::string& v = vals.back();
    size_t comma = v.find(',');
    if (comma == std::string::npos) return false;
    try {
      dir_x = std::stod(v.substr(0, comma));
      dir_y = std::stod(v.substr(comma + 1));
    } catch (...) {
      return false;
    }
    return true;
  }, "ray direction dx,dy from the minimizer (default 1,0)");

  auto* c_verify = app.add_subcommand("verify", "run every self-check at (t, p)");
  add_model(c_verify); add_t(c_verify); add_family(c_verify); add_out(c_verify);
  c_verify->add_option("--grid", grid_n, "grid size N")->check(CLI::Range(2, 1 << 20));

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);  // --help and friends: message to stdout, exit 0
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // message to stderr
    return 64;
  }

  Out out{output_path};
  try {
    const Tolerances& tol = Tolerances::global();
    StepSet s = load_model(model_path, tol);

    if (*c_validate) {
      Vec2 d = s.drift();
      JsonWriter w;
      w.begin_obj().kv("ok", true).key("weights");
      emit_weights(w, s);
      w.key("drift").begin_arr().value(d[0]).value(d[1]).end_arr().end_obj();
      out.write(w.str() + "\n");
      return 0;
    }

    if (*c_t0) {
      CriticalPoint cp = critical_value(s, tol);
      JsonWriter w;
      w.begin_obj().kv("t0", cp.t0).key("a_star").begin_arr().value(cp.a_star[0]).value(
          cp.a_star[1]);
      w.end_arr().end_obj();
      out.write(w.str() + "\n");
      return 0;
    }

    if (*c_classify) {
      CriticalPoint cp = critical_value(s, tol);
      JsonWriter w;
      w.begin_obj().kv("regime", std::string(to_string(classify(s, t, tol)))).kv("t", t).kv(
          "t0", cp.t0);
      w.end_obj();
      out.write(w.str() + "\n");
      return 0;
    }

    if (*c_bp) {
      Kernel k(s, t);
      KernelBranchPoints bp = branch_points(k, tol);
      JsonWriter w;
      w.begin_obj().kv("t", t);
      emit_quarter(w, "x", bp.x);
      w.kv("x4_infinite", bp.x.x4_infinite);
      emit_quarter(w, "y", bp.y);
      w.kv("y4_infinite", bp.y.x4_infinite);
      w.end_obj();
      out.write(w.str() + "\n");
      return 0;
    }

    if (*c_curve) {
      Kernel k(s, t);
      KernelBranchPoints bp = branch_points(k, tol);
      std::vector<CurvePoint> pts = which == "M" ? curve_M(k, bp, samples) : curve_L(k, bp, samples);
      if (format == "csv") {
        std::ostringstream ss;
        write_curve_csv(ss, pts);
        out.write(ss.str());
        return 0;
      }
      JsonWriter w;
      w.begin_obj().kv("which", which).kv("samples", int(pts.size()));
      w.key("points").begin_arr();
      for (const auto& q : pts) {
        w.begin_obj().kv("param", q.param);
        w.key("x0").begin_arr().value(q.x0.real()).value(q.x0.imag()).end_arr();
        w.key("x1").begin_arr().value(q.x1.real()).value(q.x1.imag()).end_arr();
        w.end_obj();
      }
      w.end_arr().end_obj();
      out.write(w.str() + "\n");
      return 0;
    }

    if (*c_segment) {
      Kernel k(s, t);
      KernelBranchPoints bp = branch_points(k, tol);
      SegmentS seg = segment_S(k, bp);
      JsonWriter w;
      w.begin_obj().kv("t", t).kv("x2", seg.x2).kv("x_y2", seg.x_y2).end_obj();
      out.write(w.str() + "\n");
      return 0;
    }

    if (*c_gluing) {
      CriticalPoint cp = critical_value(s, tol);
      Regime r = classify(s, t, tol);
      auto g = make_gluing(s, t, r, cp);
      double residual = g->gluing_residual();
      std::array<double, 2> dw = g->w_derivs_at_0();
      JsonWriter w;
      w.begin_obj().kv("mode", std::string(g->mode() == Gluing::Mode::Critical ? "critical"
                                                                               : "generic"));
      w.kv("t", t).kv("x0", g->x0());
      if (auto* gg = dynamic_cast<const GluingGeneric*>(g.get())) {
        w.key("periods").begin_obj().kv("omega1_im", gg->pd().omega1_im).kv(
            "omega2", gg->pd().omega2);
        w.kv("omega3", gg->pd().omega3).end_obj();
      } else if (auto* gc = dynamic_cast<const GluingCritical*>(g.get())) {
        w.kv("theta", gc->theta()).kv("omega3", gc->omega3()).kv("collided", gc->collided());
      }
      w.kv("w_deriv1_at_0", dw[0]).kv("w_deriv2_at_0", dw[1]);
      w.kv("residual", residual).kv("residual_threshold", tol.gluing_check);
      bool pass = residual <= tol.gluing_check;
      w.kv("pass", pass).end_obj();
      out.write(w.str() + "\n");
      return do_check && !pass ? 2 : 0;
    }

    if (*c_harm) {
      CriticalPoint cp = critical_value(s, tol);
      Regime r = classify(s, t, tol);
      if (r == Regime::Segment && !p_opt && !lambda_opt)
        fail(ErrorCode::OutOfRange, "one of --p or --lambda is required above the critical value");
      auto g = make_gluing(s, t, r, cp);
      HarmonicFamily fam(g, pick_p(*g, p_opt, lambda_opt), tol);
      HarmonicGrid grid = fam.grid(grid_n, threads);
      if (format == "csv") {
        std::ostringstream ss;
        write_grid_csv(ss, grid);
        out.write(ss.str());
        return 0;
      }
      auto [rx, ry] = fam.radii();
      JsonWriter w;
      w.begin_obj().kv("t", t).kv("regime", std::string(to_string(r)));
      w.kv("p", fam.p()).kv("p_prime", fam.p_prime());
      w.kv("alpha", fam.c_alpha()).kv("beta", fam.c_beta());
      w.key("radii").begin_arr().value(rx).value(ry).end_arr();
      emit_grid(w, grid);
      w.end_obj();
      out.write(w.str() + "\n");
      return 0;
    }

    if (*c_closed) {
      HarmonicGrid grid = closed_form_simple(s, t, *p_opt, grid_n, tol);
      if (format == "csv") {
        std::ostringstream ss;
        write_grid_csv(ss, grid);
        out.write(ss.str());
        return 0;
      }
      JsonWriter w;
      w.begin_obj().kv("t", t).kv("p", *p_opt);
      emit_grid(w, grid);
      w.end_obj();
      out.write(w.str() + "\n");
      return 0;
    }

    if (*c_tilt) {
      Vec2 a = level_point(s, t, Vec2{dir_x, dir_y}, tol);
      StepSet tilted = tilt(s, a, t, tol);
      JsonWriter w;
      w.begin_obj().kv("t", t);
      w.key("a").begin_arr().value(a[0]).value(a[1]).end_arr();
      w.kv("level_gap", std::abs(s.phi(a) - t));
      w.key("weights");
      emit_weights(w, tilted);
      w.end_obj();
      out.write(w.str() + "\n");
      return 0;
    }

    if (*c_verify) {
      Report rep = full_report(s, t, p_opt, lambda_opt, grid_n, tol);
      JsonWriter w;
      w.begin_obj().kv("t", rep.t).kv("t0", rep.t0).kv("regime",
                                                        std::string(to_string(rep.regime)));
      if (rep.p) w.kv("p", *rep.p);
      if (rep.p_prime) w.kv("p_prime", *rep.p_prime);
      w.key("checks").begin_arr();
      for (const auto& c : rep.checks) {
        w.begin_obj().kv("name", c.name).kv("value", c.value).kv("threshold", c.threshold);
        w.kv("pass", c.pass);
        if (!c.note.empty()) w.kv("note", c.note);
        w.end_obj();
      }
      w.end_arr().kv("overall", rep.overall).end_obj();
      out.write(w.str() + "\n");
      return rep.overall ? 0 : 2;
    }
  } catch (const FileError& e) {
    JsonWriter w;
    w.begin_obj().key("error").begin_obj().kv("kind", std::string("file"));
    w.kv("message", std::string(e.what())).end_obj().end_obj();
    std::fprintf(stderr, "%s\n", w.str().c_str());
    return 66;
  } catch (const Error& e) {
    JsonWriter w;
    w.begin_obj().key("error").begin_obj();
    w.kv("kind", std::string("numeric"));
    w.kv("code", std::string(to_string(e.code())));
    w.kv("message", std::string(e.what())).end_obj().end_obj();
    std::fprintf(stderr, "%s\n", w.str().c_str());
    return 3;
  }
  return 0;
}
