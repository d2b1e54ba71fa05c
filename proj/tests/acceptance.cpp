// Acceptance gate: one line per criterion A1..A9 with the measured value and
// its pinned tolerance, three negative controls proving the detectors can
// fire, and an OVERALL verdict.  Exit 0 iff every line passes.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "qharm/io.hpp"
#include "qharm/verify.hpp"

using namespace qharm;

namespace {

int failures = 0;

void report(const char* id, const char* what, double value, const char* rel, double bound,
            bool pass, const std::string& note = "") {
  std::printf("%-6s %-34s %12.4e %s %8.1e  %s%s%s\n", id, what, value, rel, bound,
              pass ? "PASS" : "FAIL", note.empty() ? "" : "  ", note.c_str());
  if (!pass) ++failures;
}

StepSet model(const char* name) {
  return load_model(std::string(QHARM_TEST_DATA_DIR) + "/models/" + name + ".json");
}

double frozen_gap() {
  std::ifstream in(std::string(QHARM_TEST_DATA_DIR) + "/reference_values.json");
  nlohmann::json j = nlohmann::json::parse(in);
  return std::stod(j.at("gap_t0p1em8_sepbias").get<std::string>());
}

double cross_ratio(double a, double b, double c, double d) {
  return (a - c) * (b - d) / ((a - d) * (b - c));
}

// One (walk, t) cell of the A2 matrix with every family the regime admits.
struct Cell {
  std::string label;
  StepSet s;
  double t;
  std::shared_ptr<Gluing> g;
  std::vector<std::string> fam_labels;
  std::vector<HarmonicFamily> fams;
  std::vector<HarmonicGrid> grids;
};

std::vector<Cell> build_matrix(int N) {
  std::vector<Cell> cells;
  for (const char* name : {"diagonal", "eighths", "separable"}) {
    StepSet s = model(name);
    CriticalPoint cp = critical_value(s);

    Cell crit{std::string(name) + "@t0", s, cp.t0, std::make_shared<GluingCritical>(s, cp), {}, {}, {}};
    crit.fam_labels.push_back("critical");
    crit.fams.emplace_back(crit.g, crit.g->branch_points().x.x2);
    cells.push_back(std::move(crit));

    for (double t : {cp.t0 + 0.1, 1.1 * cp.t0}) {
      auto gg = std::make_shared<GluingGeneric>(s, t);
      Cell cell{std::string(name) + "@" + fmt17(t), s, t, gg, {}, {}, {}};
      for (double lam : {0.0, 0.5, 1.0}) {
        cell.fam_labels.push_back("lambda=" + fmt17(lam));
        cell.fams.emplace_back(gg, lambda_to_p(gg->kernel(), gg->branch_points(), lam));
      }
      cells.push_back(std::move(cell));
    }
  }
  for (Cell& c : cells)
    for (const HarmonicFamily& f : c.fams) c.grids.push_back(f.grid(N));
  return cells;
}

}  // namespace

int main() {
  std::printf("acceptance: quarter-plane harmonic library\n");
  std::printf("%-6s %-34s %12s %s %8s  %s\n", "id", "criterion", "measured", "  ", "bound",
              "verdict");

  try {
    // ---- A1: simple-walk end to end against the closed form, timed --------
    auto t_begin = std::chrono::steady_clock::now();
    {
      StepSet s = model("simple");
      auto g = std::make_shared<GluingGeneric>(s, 1.25);
      HarmonicFamily fam(g, 0.5);
      HarmonicGrid grid = fam.grid(15);
      double worst = 0;
      for (int i = 1; i <= 15; ++i)
        for (int j = 1; j <= 15; ++j) {
          double want = (std::pow(2.0, i) - std::pow(2.0, -i)) *
                        (std::pow(2.0, j) - std::pow(2.0, -j)) / 2.25;
          worst = std::max(worst, std::abs(grid.at(i, j) - want) / std::abs(want));
        }
      double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin).count();
      report("A1", "simple_closed_form_15x15", worst, "<=", 1e-6, worst <= 1e-6);
      report("A1", "runtime_seconds", secs, "<=", 30.0, secs <= 30.0);
    }

    // ---- the shared matrix: three diagonal-step walks, three levels -------
    std::vector<Cell> cells = build_matrix(12);

    // ---- A2: harmonicity on 12x12 grids ----------------------------------
    {
      double worst = 0;
      std::string where;
      for (const Cell& c : cells)
        for (size_t i = 0; i < c.fams.size(); ++i) {
          double r = harmonicity_residual(c.s, c.t, c.grids[i]);
          if (r > worst) {
            worst = r;
            where = c.label + " " + c.fam_labels[i];
          }
        }
      report("A2", "harmonicity_residual_max", worst, "<=", 1e-6, worst <= 1e-6, where);
    }

    // ---- A3: critical value closed forms and the drift equivalence -------
    {
      double t0_sep = critical_value(model("separable")).t0;
      double d_sep = std::abs(t0_sep - 0.8535533906);
      report("A3", "separable_t0_vs_closed_form", d_sep, "<=", 1e-10, d_sep <= 1e-10);

      double t0_simple = critical_value(model("simple")).t0;
      double d_simple = std::abs(t0_simple - 1.0);
      report("A3", "simple_t0_vs_one", d_simple, "<=", 1e-12, d_simple <= 1e-12);

      // 20 random models: zero drift iff t0 = 1 (tolerance 1e-9 both sides).
      // Raw 32-bit draws keep the stream identical across standard libraries.
      std::mt19937 gen(12345);
      auto draw = [&] { return 0.05 + 0.95 * (double(gen()) / 4294967296.0); };
      const int ks[8] = {-1, 0, 1, -1, 1, -1, 0, 1};
      const int ls[8] = {1, 1, 1, 0, 0, -1, -1, -1};
      double worst_driftless = 0, best_drifted = INFINITY;
      bool equivalence = true;
      for (int m = 0; m < 20; ++m) {
        std::array<std::array<double, 3>, 3> w{};
        for (int c = 0; c < 8; ++c) w[size_t(ks[c] + 1)][size_t(ls[c] + 1)] = draw();
        if (m >= 10) {
          // symmetrize through the center: drift cancels exactly
          std::array<std::array<double, 3>, 3> v = w;
          for (int c = 0; c < 8; ++c)
            w[size_t(ks[c] + 1)][size_t(ls[c] + 1)] =
                (v[size_t(ks[c] + 1)][size_t(ls[c] + 1)] +
                 v[size_t(-ks[c] + 1)][size_t(-ls[c] + 1)]) / 2;
        }
        double sum = 0;
        for (auto& col : w)
          for (double x : col) sum += x;
        for (auto& col : w)
          for (double& x : col) x /= sum;
        StepSet s = validate(w);
        Vec2 d = s.drift();
        double dn = std::hypot(d[0], d[1]);
        double gap = std::abs(critical_value(s).t0 - 1.0);
        bool zero_drift = dn <= 1e-9, t0_one = gap <= 1e-9;
        equivalence = equivalence && (zero_drift == t0_one);
        if (zero_drift)
          worst_driftless = std::max(worst_driftless, gap);
        else
          best_drifted = std::min(best_drifted, gap);
      }
      report("A3", "random_driftless_t0_gap_max", worst_driftless, "<=", 1e-9,
             equivalence && worst_driftless <= 1e-9);
      report("A3", "random_drifted_t0_gap_min", best_drifted, "> ", 1e-9,
             equivalence && best_drifted > 1e-9);
    }

    // ---- A4: gluing residual across the matrix, with a broken control ----
    {
      double worst = 0;
      std::string where;
      for (const Cell& c : cells) {
        double r = c.g->gluing_residual();
        if (r > worst) {
          worst = r;
          where = c.label;
        }
      }
      report("A4", "gluing_residual_max", worst, "<=", 1e-8, worst <= 1e-8, where);

      GluingGeneric::Options opt;
      opt.omega2_scale = 1.01;
      double broken = GluingGeneric(model("simple"), 1.25, opt).gluing_residual();
      report("A4-NC", "perturbed_omega2_residual", broken, "> ", 1e-3, broken > 1e-3);
    }

    // ---- A5: critical simple walk: f = i*j and the explicit gluing -------
    {
      StepSet s = model("simple");
      CriticalPoint cp = critical_value(s);
      HarmonicFamily fam = critical_family(s, cp);
      HarmonicGrid grid = fam.grid(10);
      HarmonicGrid ij = HarmonicGrid::zeros(10);
      for (int i = 0; i <= 10; ++i)
        for (int j = 0; j <= 10; ++j) ij.at(i, j) = double(i) * j;
      double dev = 0;
      bool prop = proportional(grid, ij, 1e-6, &dev);
      report("A5", "critical_grid_vs_ij", dev, "<=", 1e-6, prop);

      // candidate gluing function x / (1-x)^2: first confirm it equalizes the
      // two branches over M, then compare Mobius-invariantly with w
      auto W = [](cplx x) {
        cplx d = 1.0 - x;
        return x / (d * d);
      };
      const Gluing& g = fam.gluing();
      const Kernel& k = g.kernel();
      double y1 = g.branch_points().y.x1, y2 = g.branch_points().y.x2;
      double wres = 0, wscale = 0;
      for (int m = 0; m < 64; ++m) {
        double th = M_PI * (2 * m + 1) / 128;
        double y = (y1 + y2) / 2 + (y2 - y1) / 2 * std::cos(th);
        QuadRoots q = k.X_branches(y);
        wres = std::max(wres, std::abs(W(q.r0) - W(q.r1)));
        wscale = std::max(wscale, std::abs(W(q.r0)));
      }
      wres /= wscale;
      report("A5", "candidate_glues_on_M", wres, "<=", 1e-8, wres <= 1e-8);

      double xs[4] = {-0.5, -0.1, 0.3, 0.7};
      double wv[4], Wv[4];
      for (int i = 0; i < 4; ++i) {
        wv[i] = g.w(cplx(xs[i])).real();
        Wv[i] = W(cplx(xs[i])).real();
      }
      double crw = cross_ratio(wv[0], wv[1], wv[2], wv[3]);
      double crW = cross_ratio(Wv[0], Wv[1], Wv[2], Wv[3]);
      double crdev = std::abs(crw - crW) / std::abs(crW);
      report("A5", "cross_ratio_vs_candidate", crdev, "<=", 1e-6, crdev <= 1e-6);
    }

    // ---- A6: branch points collapse at t0+ and the regime map ------------
    {
      double worst = 0, gap_sep = 0;
      bool regimes = true;
      for (const char* name : {"diagonal", "eighths", "separable"}) {
        StepSet s = model(name);
        CriticalPoint cp = critical_value(s);
        Kernel k(s, cp.t0 + 1e-8);
        BranchPoints bx = branch_points(k).x;
        double gap = bx.x3 - bx.x2;
        worst = std::max(worst, gap);
        if (std::string(name) == "separable") gap_sep = gap;
        regimes = regimes && classify(s, cp.t0) == Regime::Point &&
                  classify(s, 0.9 * cp.t0) == Regime::Empty;
      }
      report("A6", "branch_gap_at_t0_plus_1e-8", worst, "<=", 1e-3, worst <= 1e-3);
      double frozen = frozen_gap();
      double fdev = std::abs(gap_sep - frozen) / frozen;
      report("A6", "separable_gap_vs_frozen", fdev, "<=", 1e-6, fdev <= 1e-6);
      report("A6", "classify_point_then_empty", regimes ? 1 : 0, "==", 1, regimes);
    }

    // ---- A7: tilt transfer turns every family 1-harmonic -----------------
    {
      double worst = 0;
      std::string where;
      for (const Cell& c : cells) {
        Vec2 a = level_point(c.s, c.t, Vec2{1, 0});
        StepSet tilted = tilt(c.s, a, c.t);
        for (size_t i = 0; i < c.grids.size(); ++i) {
          HarmonicGrid tg = transfer_harmonic(c.grids[i], a, +1);
          double r = harmonicity_residual(tilted, 1.0, tg);
          if (r > worst) {
            worst = r;
            where = c.label + " " + c.fam_labels[i];
          }
        }
      }
      report("A7", "tilted_harmonicity_max", worst, "<=", 1e-6, worst <= 1e-6, where);
    }

    // ---- A8: boundary identity on 64 conjugate pairs ---------------------
    {
      double worst = 0;
      std::string where;
      for (const Cell& c : cells)
        for (size_t i = 0; i < c.fams.size(); ++i) {
          double r = boundary_residual(c.fams[i]);
          if (r > worst) {
            worst = r;
            where = c.label + " " + c.fam_labels[i];
          }
        }
      report("A8", "boundary_residual_max", worst, "<=", 1e-8, worst <= 1e-8, where);
    }

    // ---- A9: coefficient growth pins p and p' ----------------------------
    {
      double worst = 0;
      std::string where;
      for (const Cell& c : cells)
        for (size_t i = 0; i < c.fams.size(); ++i) {
          const HarmonicFamily& f = c.fams[i];
          double gx = growth_exponent(f.coeffs_x(40), 1.0 / f.p()).err;
          double gy = growth_exponent(f.coeffs_y(40), 1.0 / f.p_prime()).err;
          double r = std::max(gx, gy);
          if (r > worst) {
            worst = r;
            where = c.label + " " + c.fam_labels[i];
          }
        }
      report("A9", "growth_exponent_err_max", worst, "<=", 1e-3, worst <= 1e-3, where);
    }

    // ---- negative controls beyond A4's ----------------------------------
    {
      StepSet s = model("simple");
      HarmonicGrid ij = HarmonicGrid::zeros(8);
      for (int i = 0; i <= 8; ++i)
        for (int j = 0; j <= 8; ++j) ij.at(i, j) = double(i) * j;
      double r = harmonicity_residual(s, 1.25, ij);
      report("NC", "detector_rejects_non_harmonic", r, "> ", 1e-1, r > 1e-1);

      // two different spectral points must give non-proportional families
      auto g = std::make_shared<GluingGeneric>(s, 1.25);
      HarmonicGrid a = HarmonicFamily(g, lambda_to_p(g->kernel(), g->branch_points(), 0.0)).grid(6);
      HarmonicGrid b = HarmonicFamily(g, lambda_to_p(g->kernel(), g->branch_points(), 1.0)).grid(6);
      double dev = 0;
      bool prop = proportional(a, b, 1e-6, &dev);
      report("NC", "endpoint_families_differ", dev, "> ", 1e-2, !prop && dev > 1e-2);
    }
  } catch (const std::exception& e) {
    std::printf("unexpected exception: %s\n", e.what());
    ++failures;
  }

  if (failures == 0)
    std::printf("OVERALL PASS\n");
  else
    std::printf("OVERALL FAIL (%d line%s)\n", failures, failures == 1 ? "" : "s");
  return failures == 0 ? 0 : 1;
}
