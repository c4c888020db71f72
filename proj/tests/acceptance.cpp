// Acceptance gate: runs every criterion of the lab at its pinned tolerance
// against the default model (32 modes) and prints one line per criterion.

#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "tdwave/evolve.hpp"
#include "tdwave/rng.hpp"
#include "tdwave/spaces.hpp"
#include "tdwave/suites.hpp"

using namespace tdwave;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool pass,
            const std::string& detail) {
  std::printf("[%s] criterion %2d (%s): %s\n", pass ? "PASS" : "FAIL", id,
              name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

// AND of the named verdicts inside a suite record
bool gate(const ResultRecord& rec, const std::vector<std::string>& names,
          std::string& detail) {
  bool pass = true;
  detail.clear();
  for (const auto& want : names) {
    bool found = false;
    for (const auto& v : rec.verdicts)
      if (v.name == want) {
        found = true;
        if (!detail.empty()) detail += ", ";
        detail += want + "=" + format_double(v.value);
        pass = pass && v.pass;
      }
    if (!found) {
      pass = false;
      detail += " missing:" + want;
    }
  }
  return pass;
}

KvConfig base_config(const std::string& suite, double absorb_radius) {
  KvConfig cfg;
  cfg.set("suite", suite);
  cfg.set_int("seed", 1);
  if (absorb_radius > 0) cfg.set_double("attractor.absorb_radius", absorb_radius);
  return cfg;
}

ResultRecord run_or_throw(KvConfig cfg, const std::string& out) {
  return run_suite(std::move(cfg), out);
}

void criterion_oracles() {
  bool pass = true;
  std::string detail;

  // exact Hausdorff against the double-loop oracle on small clouds
  ModelConfig cfg;
  cfg.n_modes = 6;
  const PhaseMetric h = cfg.metric_eps1();
  double worst = 0.0;
  for (int trial = 0; trial < 25; ++trial) {
    PointCloud a = sample_ball(h, 0.0, 2.0, 3 + trial % 18, 900 + trial);
    PointCloud b = sample_ball(h, 0.0, 2.0, 20 - trial % 17, 950 + trial);
    worst = std::max(worst, std::abs(hausdorff_semidist(a, b) -
                                     oracle::hausdorff_brute(a, b)));
  }
  pass = pass && worst == 0.0;
  detail += "hausdorff_gap=" + format_double(worst);

  // box dimension of known sets
  PointCloud seg(0.0, h);
  for (int i = 0; i < 1200; ++i) {
    ModalState z(6, 0.0);
    z.u[0] = i / 1199.0;
    seg.states.push_back(z);
  }
  std::vector<double> radii;
  for (int j = 2; j <= 8; ++j) radii.push_back(std::pow(2.0, -j));
  const DimensionEstimate d1 = box_counting_dim(seg, radii);
  pass = pass && std::abs(d1.estimate - 1.0) <= 0.25;
  detail += ", dim1=" + format_double(d1.estimate);

  PointCloud plane(0.0, h);
  for (int i = 0; i < 32; ++i)
    for (int j = 0; j < 32; ++j) {
      ModalState z(6, 0.0);
      z.u[0] = i / 31.0;
      z.u[1] = (j / 31.0) / 2.0;  // uniform in the metric, lambda_2 = 4
      plane.states.push_back(z);
    }
  const std::vector<double> radii2 = {0.5, 0.36, 0.26, 0.19, 0.135, 0.098, 0.07, 0.049};
  const DimensionEstimate d2 = box_counting_dim(plane, radii2);
  pass = pass && std::abs(d2.estimate - 2.0) <= 0.4;
  detail += ", dim2=" + format_double(d2.estimate);

  // linear model against the closed form
  ModelConfig lin;
  lin.n_modes = 6;
  lin.nonlinearity = make_nonlinearity("zero");
  lin.rho = RhoProfile::constant(1.0);
  lin.g_modes.clear();
  EvolutionSpec spec;
  ModalState z0(lin.n_modes, 0.0);
  z0.u[0] = 1.0;
  z0.v[1] = 0.5;
  z0.u[4] = -0.25;
  const ModalState w = evolve(z0, 0.0, 3.0, lin, spec);
  const auto lam = lin.eigenvalues();
  double lin_err = 0.0;
  for (int k = 0; k < lin.n_modes; ++k) {
    oracle::DampedMode mode{1.0, lin.alpha, lam[k]};
    double ue, ve;
    mode.solve(z0.u[k], z0.v[k], 3.0, ue, ve);
    lin_err = std::max(lin_err, std::abs(w.u[k] - ue));
    lin_err = std::max(lin_err, std::abs(w.v[k] - ve));
  }
  pass = pass && lin_err <= 1e-6;
  detail += ", linear_err=" + format_double(lin_err);

  report(12, "independent oracles", pass, detail);
}

}  // namespace

int main() {
  const std::string out =
      (std::filesystem::temp_directory_path() / "tdwave-acceptance").string();
  std::printf("acceptance gate: default model, results under %s\n", out.c_str());
  std::string detail;

  double absorb_R1 = 0.0;

  // 1. norm sandwich
  try {
    const ResultRecord rec = run_or_throw(base_config("sandwich", 0.0), out);
    const bool ok = gate(
        rec, {"sandwich_lower", "sandwich_upper", "sandwich_interval"}, detail);
    report(1, "norm sandwich", ok, detail);
  } catch (const std::exception& e) {
    report(1, "norm sandwich", false, e.what());
  }

  // 2. process axioms
  try {
    const ResultRecord rec = run_or_throw(base_config("cocycle", 0.0), out);
    const bool ok = gate(rec,
                         {"identity_defect", "cocycle_defect",
                          "order_ratio_1_min", "order_ratio_1_max",
                          "order_ratio_2_min", "order_ratio_2_max"},
                         detail);
    report(2, "process axioms", ok, detail);
  } catch (const std::exception& e) {
    report(2, "process axioms", false, e.what());
  }

  // 3. dissipativity
  try {
    const ResultRecord rec = run_or_throw(base_config("decay", 0.0), out);
    const bool ok = gate(rec,
                         {"kappa_positive", "R_absorb_finite", "persist_ratio",
                          "ut_integral_variation"},
                         detail);
    absorb_R1 = rec.metrics.count("R1") ? rec.metrics.at("R1") : 0.0;
    report(3, "dissipativity", ok, detail);
  } catch (const std::exception& e) {
    report(3, "dissipativity", false, e.what());
  }

  // 4. lipschitz in eps
  try {
    const ResultRecord rec = run_or_throw(base_config("eps-lipschitz", 0.0), out);
    const bool ok = gate(rec, {"slope_deviation", "fit_quality"}, detail);
    report(4, "lipschitz in eps", ok, detail);
  } catch (const std::exception& e) {
    report(4, "lipschitz in eps", false, e.what());
  }

  // 5. splitting
  try {
    const ResultRecord rec = run_or_throw(base_config("split", 0.0), out);
    const bool ok = gate(
        rec, {"v_kappa_positive", "v_end_ratio", "w13_drift", "sum_defect"},
        detail);
    report(5, "solution splitting", ok, detail);
  } catch (const std::exception& e) {
    report(5, "solution splitting", false, e.what());
  }

  // 6. quasi-stability
  try {
    const ResultRecord rec = run_or_throw(base_config("quasistab", absorb_R1), out);
    const bool ok =
        gate(rec, {"eta_below_quarter", "envelope_violations"}, detail);
    detail += ", holdout=" +
              format_double(rec.metrics.count("holdout_violations")
                                ? rec.metrics.at("holdout_violations")
                                : -1.0);
    report(6, "quasi-stability", ok, detail);
  } catch (const std::exception& e) {
    report(6, "quasi-stability", false, e.what());
  }

  // 7 & 8. exponential attractor construction + containment
  try {
    const ResultRecord rec =
        run_or_throw(base_config("exp-attractor", absorb_R1), out);
    bool ok = gate(rec,
                   {"covers_valid", "attraction_ratio", "semi_invariance",
                    "dim_below_bound"},
                   detail);
    report(7, "exponential attractor", ok, detail);
    ok = gate(rec, {"containment"}, detail);
    report(8, "attractor containment", ok, detail);
  } catch (const std::exception& e) {
    report(7, "exponential attractor", false, e.what());
    report(8, "attractor containment", false, e.what());
  }

  // 9. upper semicontinuity
  try {
    const ResultRecord rec = run_or_throw(base_config("usc-scan", absorb_R1), out);
    const bool ok =
        gate(rec, {"all_converged", "usc_nearest", "usc_trend"}, detail);
    report(9, "upper semicontinuity", ok, detail);
  } catch (const std::exception& e) {
    report(9, "upper semicontinuity", false, e.what());
  }

  // 10. equi-attraction
  try {
    const ResultRecord rec =
        run_or_throw(base_config("equi-attraction", absorb_R1), out);
    const bool ok = gate(rec, {"monotone_decay", "final_sup_dist"}, detail);
    report(10, "equi-attraction", ok, detail);
  } catch (const std::exception& e) {
    report(10, "equi-attraction", false, e.what());
  }

  // 11. Hoelder continuity
  try {
    const ResultRecord rec = run_or_throw(base_config("holder", absorb_R1), out);
    const bool ok = gate(
        rec, {"gamma_positive", "gamma_at_most_one", "fit_quality"}, detail);
    detail += ", gamma=" + format_double(rec.metrics.at("gamma_exponent"));
    report(11, "holder continuity", ok, detail);
  } catch (const std::exception& e) {
    report(11, "holder continuity", false, e.what());
  }

  // 12. independent oracles
  try {
    criterion_oracles();
  } catch (const std::exception& e) {
    report(12, "independent oracles", false, e.what());
  }

  std::printf("%d of 12 criteria passed\n", 12 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
