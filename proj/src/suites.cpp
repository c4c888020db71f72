#include "tdwave/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <stdexcept>

#include "tdwave/attractor.hpp"
#include "tdwave/decay.hpp"
#include "tdwave/lyapunov.hpp"
#include "tdwave/numerics.hpp"
#include "tdwave/quasistab.hpp"
#include "tdwave/rng.hpp"
#include "tdwave/spaces.hpp"

namespace tdwave {

namespace {

struct SuiteContext {
  KvConfig cfg;
  ModelConfig model;
  EvolutionSpec spec;
  std::uint64_t seed = 1;
  ResultRecord rec;

  double tol() {
    const double t = cfg.get_double("tol.cloud", 1e-3);
    cfg.set_double("tol.cloud", t);
    return t;
  }
};

SuiteContext make_context(KvConfig cfg, double dt_base_default) {
  SuiteContext ctx;
  if (!cfg.has("evolve.dt_base")) cfg.set_double("evolve.dt_base", dt_base_default);
  ctx.seed = static_cast<std::uint64_t>(cfg.get_int("seed", 1));
  cfg.set_int("seed", static_cast<long long>(ctx.seed));
  ctx.model = model_from_config(cfg);
  ctx.spec = evolution_from_config(cfg);
  ctx.cfg = std::move(cfg);
  ctx.rec.suite = ctx.cfg.get("suite", "?");
  return ctx;
}

std::vector<double> time_grid(double lo, double hi, int nodes) {
  std::vector<double> g;
  for (int i = 1; i <= nodes; ++i) g.push_back(lo + (hi - lo) * i / nodes);
  return g;
}

AttractorParams attractor_params(SuiteContext& ctx, double absorb_radius) {
  AttractorParams p;
  p.sample_size = static_cast<int>(ctx.cfg.get_int("attractor.sample_size", 20));
  p.step = ctx.cfg.get_double("attractor.step", 2.0);
  p.tol = ctx.tol();
  p.max_depth = static_cast<int>(ctx.cfg.get_int("attractor.max_depth", 40));
  p.seed = ctx.seed;
  p.absorb_radius = absorb_radius;
  ctx.cfg.set_int("attractor.sample_size", p.sample_size);
  ctx.cfg.set_double("attractor.step", p.step);
  ctx.cfg.set_int("attractor.max_depth", p.max_depth);
  return p;
}

double absorbing_radius(SuiteContext& ctx) {
  const double pre = ctx.cfg.get_double("attractor.absorb_radius", 0.0);
  if (pre > 0.0) return pre;
  AbsorbingEstimate est = absorbing_ball(
      ctx.model, ctx.spec, ctx.cfg.get_double("absorb.probe_radius", 10.0),
      ctx.cfg.get_list("absorb.launches", {-40.0}),
      ctx.cfg.get_double("absorb.window", 30.0),
      static_cast<int>(ctx.cfg.get_int("absorb.sample_size", 12)), ctx.seed);
  ctx.cfg.set_double("attractor.absorb_radius", est.R1);
  ctx.rec.metrics["absorb_R1"] = est.R1;
  return est.R1;
}

// ---------------------------------------------------------------- sandwich

ResultRecord suite_sandwich(KvConfig cfg) {
  SuiteContext ctx = make_context(std::move(cfg), 1e-3);
  const int triples = static_cast<int>(ctx.cfg.get_int("sandwich.triples", 10000));
  ctx.cfg.set_int("sandwich.triples", triples);
  const std::vector<double> sigmas = {0.0, 1.0 / 3.0, 1.0};
  double worst_lower = 0.0, worst_upper = 0.0, worst_interval = 0.0;
  auto rng = make_stream(ctx.seed, "sandwich");
  const auto eigs = ctx.model.eigenvalues();
  for (int i = 0; i < triples; ++i) {
    const double sigma = sigmas[i % sigmas.size()];
    const double eps = rng.uniform(1e-3, 1.0);
    const double a = rng.uniform(1e-3, eps);
    const double t = rng.uniform(-20.0, 5.0);
    PhaseMetric h1(1.0, sigma, ctx.model.rho, eigs);
    PhaseMetric he(eps, sigma, ctx.model.rho, eigs);
    ModalState z(eigs.size(), t);
    for (std::size_t k = 0; k < eigs.size(); ++k) {
      z.u[k] = rng.gaussian();
      z.v[k] = rng.gaussian();
    }
    const double n1 = h1.norm_sq(z, t);
    const double ne = he.norm_sq(z, t);
    if (n1 <= 0) continue;
    worst_lower = std::max(worst_lower, (eps * n1 - ne) / n1);
    worst_upper = std::max(worst_upper, (ne - n1) / n1);
    worst_interval = std::max(worst_interval, (a * n1 - ne) / n1);
  }
  ctx.rec.metrics["max_lower_violation"] = worst_lower;
  ctx.rec.metrics["max_upper_violation"] = worst_upper;
  ctx.rec.metrics["max_interval_violation"] = worst_interval;
  ctx.rec.check_le("sandwich_lower", worst_lower, ctx.cfg, 1e-12);
  ctx.rec.check_le("sandwich_upper", worst_upper, ctx.cfg, 1e-12);
  ctx.rec.check_le("sandwich_interval", worst_interval, ctx.cfg, 1e-12);
  ctx.rec.config = ctx.cfg;
  return ctx.rec;
}

// ---------------------------------------------------------------- cocycle

ResultRecord suite_cocycle(KvConfig cfg) {
  SuiteContext ctx = make_context(std::move(cfg), 1e-3);
  const int n_states = static_cast<int>(ctx.cfg.get_int("cocycle.states", 8));
  ctx.cfg.set_int("cocycle.states", n_states);
  const PhaseMetric h = ctx.model.metric_eps1();
  PointCloud ball = sample_ball(h, 0.0, 1.0, n_states, ctx.seed);

  // identity is exact by contract
  double id_defect = 0.0;
  for (const auto& z : ball.states) {
    const ModalState w = evolve(z, 0.0, 0.0, ctx.model, ctx.spec);
    for (std::size_t k = 0; k < w.modes(); ++k) {
      id_defect = std::max(id_defect, std::abs(w.u[k] - z.u[k]));
      id_defect = std::max(id_defect, std::abs(w.v[k] - z.v[k]));
    }
  }
  ctx.rec.metrics["identity_defect"] = id_defect;
  ctx.rec.check_le("identity_defect", id_defect, ctx.cfg, 0.0);

  const double base = ctx.spec.dt_base;
  std::vector<double> dts = {4.0 * base, 2.0 * base, base};
  Table table;
  table.columns = {"dt_base", "cocycle_defect"};
  std::vector<double> defects;
  for (double dt : dts) {
    EvolutionSpec s = ctx.spec;
    s.dt_base = dt;
    double worst = 0.0;
    for (const auto& z : ball.states) {
      const ModalState mid = evolve(z, 0.0, 1.0, ctx.model, s);
      const ModalState two_leg = evolve(mid, 1.0, 2.0, ctx.model, s);
      const ModalState direct = evolve(z, 0.0, 2.0, ctx.model, s);
      worst = std::max(worst, h.dist(two_leg, direct, 2.0));
    }
    defects.push_back(worst);
    table.rows.push_back({dt, worst});
  }
  ctx.rec.tables["cocycle"] = table;
  ctx.rec.metrics["cocycle_defect_default"] = defects.back();
  ctx.rec.metrics["ratio_1"] = defects[0] / std::max(defects[1], 1e-300);
  ctx.rec.metrics["ratio_2"] = defects[1] / std::max(defects[2], 1e-300);
  ctx.rec.check_le("cocycle_defect", defects.back(), ctx.cfg, 1e-6);
  ctx.rec.check_ge("order_ratio_1_min", ctx.rec.metrics["ratio_1"], ctx.cfg, 8.0);
  ctx.rec.check_le("order_ratio_1_max", ctx.rec.metrics["ratio_1"], ctx.cfg, 32.0);
  ctx.rec.check_ge("order_ratio_2_min", ctx.rec.metrics["ratio_2"], ctx.cfg, 8.0);
  ctx.rec.check_le("order_ratio_2_max", ctx.rec.metrics["ratio_2"], ctx.cfg, 32.0);
  ctx.rec.config = ctx.cfg;
  return ctx.rec;
}

// ---------------------------------------------------------------- decay

ResultRecord suite_decay(KvConfig cfg) {
  SuiteContext ctx = make_context(std::move(cfg), 1e-2);
  const double R = ctx.cfg.get_double("decay.ball_radius", 10.0);
  const double tau = ctx.cfg.get_double("decay.launch", -60.0);
  const double fit_window = ctx.cfg.get_double("decay.fit_window", 40.0);
  const double persist = ctx.cfg.get_double("decay.persist_window", 20.0);
  const int M = static_cast<int>(ctx.cfg.get_int("decay.sample_size", 16));
  ctx.cfg.set_double("decay.ball_radius", R);
  ctx.cfg.set_double("decay.launch", tau);
  ctx.cfg.set_double("decay.fit_window", fit_window);
  ctx.cfg.set_double("decay.persist_window", persist);
  ctx.cfg.set_int("decay.sample_size", M);

  const PhaseMetric h = ctx.model.metric_eps1();
  PointCloud ball = sample_ball(h, tau, R, M, ctx.seed);
  const int nodes = static_cast<int>((fit_window + persist) / 0.5);
  const std::vector<double> grid = time_grid(tau, tau + fit_window + persist, nodes);
  EnsembleCurve curve = ensemble_sup_curve(ball, grid, h, ctx.model, ctx.spec);

  std::vector<double> s_fit, y_fit;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (grid[i] <= tau + fit_window + 1e-9) {
      s_fit.push_back(grid[i] - tau);
      y_fit.push_back(curve.sup_norm[i]);
    }
  const DecayFit fit = fit_decay_curve(s_fit, y_fit);

  // absorbing radius: asymptote vs late-fit-window excursion
  double tail_max = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (grid[i] >= tau + 0.75 * fit_window && grid[i] <= tau + fit_window)
      tail_max = std::max(tail_max, curve.sup_norm[i]);
  const double R1 = 1.05 * std::max(fit.R_absorb, tail_max);

  double persist_max = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (grid[i] > tau + fit_window)
      persist_max = std::max(persist_max, curve.sup_norm[i]);

  double integral_variation = 0.0;
  for (std::size_t i = 0; i < ball.size(); ++i) {
    const double full = curve.ut_sq_integral_full[i];
    const double half = curve.ut_sq_integral_half[i];
    if (full > 1e-12)
      integral_variation = std::max(integral_variation, (full - half) / full);
  }

  Table table;
  table.columns = {"t", "sup_norm", "fitted_envelope"};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double s = grid[i] - tau;
    table.rows.push_back(
        {grid[i], curve.sup_norm[i], fit.C * std::exp(-fit.kappa * s) + fit.R_absorb});
  }
  ctx.rec.tables["decay_curve"] = table;

  ctx.rec.metrics["kappa"] = fit.kappa;
  ctx.rec.metrics["R_absorb"] = fit.R_absorb;
  ctx.rec.metrics["R1"] = R1;
  ctx.rec.metrics["fit_quality"] = fit.quality;
  ctx.rec.metrics["persist_max"] = persist_max;
  ctx.rec.metrics["persist_ratio"] = persist_max / std::max(R1, 1e-12);
  ctx.rec.metrics["ut_integral_variation"] = integral_variation;
  ctx.rec.check_ge("kappa_positive", fit.kappa, ctx.cfg, 1e-3);
  ctx.rec.check_le("R_absorb_finite", fit.R_absorb, ctx.cfg, 1e3);
  ctx.rec.check_le("persist_ratio", ctx.rec.metrics["persist_ratio"], ctx.cfg, 1.05);
  ctx.rec.check_le("ut_integral_variation", integral_variation, ctx.cfg, 0.10);
  ctx.rec.config = ctx.cfg;
  return ctx.rec;
}

// ---------------------------------------------------------------- eps-lipschitz

ResultRecord suite_eps_lipschitz(KvConfig cfg) {
  SuiteContext ctx = make_context(std::move(cfg), 1e-3);
  const double eps0 = ctx.cfg.get_double("lip.eps0", 0.5);
  const double tau = ctx.cfg.get_double("lip.tau", -4.0);
  const double t = ctx.cfg.get_double("lip.t", 0.0);
  const double R = ctx.cfg.get_double("lip.ball_radius", 2.0);
  ctx.cfg.set_double("lip.eps0", eps0);
  ctx.cfg.set_double("lip.tau", tau);
  ctx.cfg.set_double("lip.t", t);
  ctx.cfg.set_double("lip.ball_radius", R);
  const std::vector<double> deltas = ctx.cfg.get_list(
      "lip.deltas", {1e-4, 3.16e-4, 1e-3, 3.16e-3, 1e-2, 3.16e-2, 1e-1});

  // regular initial data: ball in the sigma = 1 norm
  const PhaseMetric h1 = ctx.model.metric_eps1(1.0);
  const PhaseMetric h = ctx.model.metric_eps1();
  PointCloud ball = sample_ball(h1, tau, R, 1, ctx.seed);
  const ModalState z = ball.states[0];
  const ModalState ref =
      evolve(z, tau, t, ctx.model.with_epsilon(eps0), ctx.spec);

  Table table;
  table.columns = {"delta_eps", "dist"};
  std::vector<double> lx, ly;
  for (double d : deltas) {
    const double eps = eps0 + d;
    if (eps > 1.0) continue;
    const ModalState w = evolve(z, tau, t, ctx.model.with_epsilon(eps), ctx.spec);
    const double dist = h.dist(w, ref, t);
    table.rows.push_back({d, dist});
    if (dist > 0) {
      lx.push_back(std::log(d));
      ly.push_back(std::log(dist));
    }
  }
  ctx.rec.tables["eps_lipschitz"] = table;
  const LinearFit fit = linear_fit(lx, ly);
  ctx.rec.metrics["loglog_slope"] = fit.slope;
  ctx.rec.metrics["fit_quality"] = fit.r2;
  ctx.rec.check_le("slope_deviation", std::abs(fit.slope - 1.0), ctx.cfg, 0.15);
  ctx.rec.check_ge("fit_quality", fit.r2, ctx.cfg, 0.95);
  ctx.rec.config = ctx.cfg;
  return ctx.rec;
}

// ---------------------------------------------------------------- split

ResultRecord suite_split(KvConfig cfg) {
  SuiteContext ctx = make_context(std::move(cfg), 1e-2);
  const double tau = ctx.cfg.get_double("split.launch", -40.0);
  const double t_end = ctx.cfg.get_double("split.t", 0.0);
  const double R = ctx.cfg.get_double("split.ball_radius", 5.0);
  const int M = static_cast<int>(ctx.cfg.get_int("split.sample_size", 8));
  ctx.cfg.set_double("split.launch", tau);
  ctx.cfg.set_double("split.t", t_end);
  ctx.cfg.set_double("split.ball_radius", R);
  ctx.cfg.set_int("split.sample_size", M);

  const PhaseMetric h = ctx.model.metric_eps1();
  PointCloud ball = sample_ball(h, tau, R, M, ctx.seed);
  const std::vector<double> grid = time_grid(tau, t_end, 40);

  std::vector<SplitCurve> curves(ball.size());
  std::exception_ptr err;
  const auto m = static_cast<long>(ball.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < m; ++i) {
    try {
      curves[i] = split_evolve_curve(ball.states[i], tau, grid, ctx.model, ctx.spec);
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);

  std::vector<double> sup_v(grid.size(), 0.0), sup_w13(grid.size(), 0.0);
  double sum_defect = 0.0, v0_sup = 0.0;
  for (const auto& c : curves) {
    for (std::size_t j = 0; j < grid.size(); ++j) {
      sup_v[j] = std::max(sup_v[j], c.v_norm[j]);
      sup_w13[j] = std::max(sup_w13[j], c.w13_norm[j]);
    }
    sum_defect = std::max(sum_defect, c.sum_defect);
  }
  for (const auto& z : ball.states) v0_sup = std::max(v0_sup, h.norm(z, tau));

  std::vector<double> s(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) s[j] = grid[j] - tau;
  const DecayFit vfit = fit_decay_curve(s, sup_v);

  // bounded w: relative drift of the 1/3-norm over the window
  const LinearFit wtrend = linear_fit(s, sup_w13);
  double w_mean = 0.0;
  for (double v : sup_w13) w_mean += v;
  w_mean /= static_cast<double>(sup_w13.size());
  const double w_drift =
      wtrend.slope * (s.back() - s.front()) / std::max(w_mean, 1e-12);

  Table table;
  table.columns = {"t", "sup_v_norm", "sup_w13_norm"};
  for (std::size_t j = 0; j < grid.size(); ++j)
    table.rows.push_back({grid[j], sup_v[j], sup_w13[j]});
  ctx.rec.tables["split_curves"] = table;

  ctx.rec.metrics["v_kappa"] = vfit.kappa;
  ctx.rec.metrics["v_end_ratio"] = sup_v.back() / std::max(v0_sup, 1e-12);
  ctx.rec.metrics["w13_drift"] = w_drift;
  ctx.rec.metrics["sum_defect"] = sum_defect;
  ctx.rec.check_ge("v_kappa_positive", vfit.kappa, ctx.cfg, 1e-3);
  ctx.rec.check_le("v_end_ratio", ctx.rec.metrics["v_end_ratio"], ctx.cfg, 1e-2);
  ctx.rec.check_le("w13_drift", w_drift, ctx.cfg, 0.05);
  ctx.rec.check_le("sum_defect", sum_defect, ctx.cfg, 1e-6);
  ctx.rec.config = ctx.cfg;
  return ctx.rec;
}

// ---------------------------------------------------------------- quasistab

QuasiStabilityFit scan_quasistability(SuiteContext& ctx, double R0,
                                      std::vector<double>* scan_table) {
  const std::vector<double> T_list =
      ctx.cfg.get_list("qs.T_list", {2.0, 4.0, 6.0, 8.0});
  const int n_pairs = static_cast<int>(ctx.cfg.get_int("qs.pairs", 200));
  const int n_scan = static_cast<int>(ctx.cfg.get_int("qs.scan_pairs", 60));
  const int M = static_cast<int>(ctx.cfg.get_int("qs.sample_size", 24));
  const double t = ctx.cfg.get_double("qs.t", 0.0);
  ctx.cfg.set_int("qs.pairs", n_pairs);
  ctx.cfg.set_int("qs.scan_pairs", n_scan);
  ctx.cfg.set_int("qs.sample_size", M);
  ctx.cfg.set_double("qs.t", t);

  const PhaseMetric h = ctx.model.metric_eps1();
  const double target_eta = ctx.cfg.get_double("qs.target_eta", 0.25);
  ctx.cfg.set_double("qs.target_eta", target_eta);

  QuasiStabilityFit best;
  bool found = false;
  for (double T : T_list) {
    PointCloud ball = sample_ball(h, t - T, R0, M, ctx.seed, 0x9511ull);
    QuasiStabilityFit fit =
        estimate_quasi_stability(ball, t, T, n_scan, ctx.model, ctx.spec, ctx.seed);
    if (scan_table) {
      scan_table->push_back(T);
      scan_table->push_back(fit.eta);
      scan_table->push_back(fit.L_semi);
      scan_table->push_back(fit.seminorm_scale);
    }
    if (!found && fit.eta < target_eta) {
      // refit the chosen window at full pair count
      best = estimate_quasi_stability(ball, t, T, n_pairs, ctx.model, ctx.spec,
                                      ctx.seed);
      found = true;
    }
  }
  if (!found)
    throw std::runtime_error(
        "quasi-stability: no tested window reached eta below the target");
  return best;
}

ResultRecord suite_quasistab(KvConfig cfg) {
  SuiteContext ctx = make_context(std::move(cfg), 1e-2);
  const double R0 = ctx.cfg.get_double("qs.R0", absorbing_radius(ctx));
  ctx.cfg.set_double("qs.R0", R0);

  std::vector<double> scan;
  const QuasiStabilityFit fit = scan_quasistability(ctx, R0, &scan);

  Table table;
  table.columns = {"T", "eta", "L", "scale"};
  for (std::size_t i = 0; i + 3 < scan.size(); i += 4)
    table.rows.push_back({scan[i], scan[i + 1], scan[i + 2], scan[i + 3]});
  ctx.rec.tables["qs_scan"] = table;

  // holdout pairs from a fresh substream, envelope with a 10% scale headroom
  const PhaseMetric h = ctx.model.metric_eps1();
  const int hold_pairs = static_cast<int>(ctx.cfg.get_int("qs.holdout_pairs", 60));
  ctx.cfg.set_int("qs.holdout_pairs", hold_pairs);
  PointCloud hold_ball =
      sample_ball(h, ctx.cfg.get_double("qs.t", 0.0) - fit.T, R0,
                  static_cast<int>(ctx.cfg.get_int("qs.sample_size", 24)),
                  ctx.seed + 101, 0x77ull);
  auto hold_obs = observe_pairs(hold_ball, ctx.cfg.get_double("qs.t", 0.0),
                                fit.T, hold_pairs, ctx.model, ctx.spec,
                                ctx.seed + 202);
  QuasiStabilityFit slacked = fit;
  slacked.seminorm_scale *= 1.1;
  const int holdout_violations = count_envelope_violations(slacked, hold_obs);

  ctx.rec.metrics["T"] = fit.T;
  ctx.rec.metrics["eta"] = fit.eta;
  ctx.rec.metrics["L"] = fit.L_semi;
  ctx.rec.metrics["seminorm_scale"] = fit.seminorm_scale;
  ctx.rec.metrics["L1"] = fit.L1;
  ctx.rec.metrics["violations"] = fit.violations;
  ctx.rec.metrics["holdout_violations"] = holdout_violations;
  ctx.rec.metrics["sample_count"] = fit.sample_count;
  ctx.rec.check_le("eta_below_quarter", fit.eta, ctx.cfg, 0.25);
  ctx.rec.check_le("envelope_violations", fit.violations, ctx.cfg, 0.0);
  ctx.rec.check_le("holdout_violations", holdout_violations, ctx.cfg, 0.0);
  ctx.rec.config = ctx.cfg;
  return ctx.rec;
}

// ---------------------------------------------------------------- exp-attractor

ResultRecord suite_exp_attractor(KvConfig cfg) {
  SuiteContext ctx = make_context(std::move(cfg), 1e-2);
  const double R0 = ctx.cfg.get_double("qs.R0", absorbing_radius(ctx));
  ctx.cfg.set_double("qs.R0", R0);
  const QuasiStabilityFit fit = scan_quasistability(ctx, R0, nullptr);

  PackingEstimate packing;
  const PhaseMetric h = ctx.model.metric_eps1();
  const double bound = dimension_bound(fit, h, ctx.seed, &packing);

  const int n_lo = static_cast<int>(ctx.cfg.get_int("ea.n_lo", -3));
  const int n_hi = static_cast<int>(ctx.cfg.get_int("ea.n_hi", 0));
  ctx.cfg.set_int("ea.n_lo", n_lo);
  ctx.cfg.set_int("ea.n_hi", n_hi);
  const int M = static_cast<int>(ctx.cfg.get_int("qs.sample_size", 24));

  WaveGridProcess proc(ctx.model, ctx.spec, fit.T, R0, M, ctx.seed);
  ConstructionOptions opt;
  opt.resolution = ctx.cfg.get_double("ea.resolution", ctx.tol() / 2.0);
  ctx.cfg.set_double("ea.resolution", opt.resolution);
  opt.m_budget = static_cast<double>(packing.m);
  auto sections = build_exponential_attractor(proc, n_lo, n_hi, fit, R0, opt);

  // level diagnostics: cover validity and attraction defects
  Table levels;
  levels.columns = {"n", "k", "radius", "net_size", "e_size", "attraction_defect"};
  bool covers_valid = true;
  double worst_ratio = 0.0;
  for (auto& sec : sections) {
    double prev_defect = -1.0;
    for (std::size_t ik = 0; ik < sec.nets.size(); ++ik) {
      const int k = static_cast<int>(ik) + 1;
      PointCloud base = proc.base_sample(sec.n - k);
      auto image = proc.advance(base.states, sec.n - k, sec.n);
      PointCloud image_cloud(sec.time, h);
      for (auto& z : image) {
        z.time = sec.time;
        image_cloud.states.push_back(std::move(z));
      }
      PointCloud net_cloud(sec.time, h);
      for (const auto& p : sec.nets[ik]) {
        ModalState z = p.z;
        z.time = sec.time;
        net_cloud.states.push_back(std::move(z));
      }
      if (!is_cover(image_cloud, net_cloud, sec.level_radius[ik]))
        covers_valid = false;
      const double defect = hausdorff_semidist(image_cloud, sec.assembled);
      if (prev_defect > opt.resolution && defect > 0)
        worst_ratio = std::max(worst_ratio, defect / prev_defect);
      prev_defect = defect;
      levels.rows.push_back({static_cast<double>(sec.n), static_cast<double>(k),
                             sec.level_radius[ik],
                             static_cast<double>(sec.nets[ik].size()),
                             static_cast<double>(sec.e_sets[ik].size()), defect});
    }
    sec.dim_bound = bound;
  }
  ctx.rec.tables["levels"] = levels;

  // semi-invariance: one grid step applied to the assembled section
  double semi_defect = 0.0;
  for (std::size_t i = 1; i < sections.size(); ++i) {
    auto moved = proc.advance(sections[i - 1].assembled.states,
                              sections[i - 1].n, sections[i].n);
    PointCloud moved_cloud(sections[i].time, h);
    for (auto& z : moved) {
      z.time = sections[i].time;
      moved_cloud.states.push_back(std::move(z));
    }
    semi_defect = std::max(
        semi_defect, hausdorff_semidist(moved_cloud, sections[i].assembled));
  }

  // fractal dimension of every section against the bound
  Table dims;
  dims.columns = {"n", "dim_estimate", "dim_bound", "fit_quality"};
  double dim_max = 0.0;
  for (const auto& sec : sections) {
    const double diam = sec.assembled.diameter();
    DimensionEstimate de;
    if (diam > 0 && sec.assembled.size() >= 2) {
      std::vector<double> radii;
      for (int j = 0; j < 8; ++j) radii.push_back(diam / std::pow(2.0, j));
      de = box_counting_dim(sec.assembled, radii);
    }
    const double dim = de.degenerate ? 0.0 : std::max(0.0, de.estimate);
    dim_max = std::max(dim_max, dim);
    dims.rows.push_back({static_cast<double>(sec.n), dim, bound, de.fit_quality});
  }
  ctx.rec.tables["dims"] = dims;

  // containment of the pullback section at matched settings
  AttractorParams ap = attractor_params(ctx, R0);
  const AttractorSection A =
      pullback_attractor(0.0, ctx.model.epsilon, ctx.model, ctx.spec, ap);
  const ExpAttractorSection& top = sections.back();
  const double containment = hausdorff_semidist(A.cloud, top.assembled);

  ctx.rec.metrics["eta"] = fit.eta;
  ctx.rec.metrics["packing_m"] = packing.m;
  ctx.rec.metrics["packing_saturated"] = packing.saturated ? 1.0 : 0.0;
  ctx.rec.metrics["dim_bound"] = bound;
  ctx.rec.metrics["dim_max"] = dim_max;
  ctx.rec.metrics["covers_valid"] = covers_valid ? 1.0 : 0.0;
  ctx.rec.metrics["attraction_ratio_max"] = worst_ratio;
  ctx.rec.metrics["semi_invariance_defect"] = semi_defect;
  ctx.rec.metrics["containment"] = containment;
  ctx.rec.check_ge("covers_valid", ctx.rec.metrics["covers_valid"], ctx.cfg, 1.0);
  ctx.rec.check_le("attraction_ratio", worst_ratio, ctx.cfg,
                   2.0 * fit.eta * 1.25);
  ctx.rec.check_le("semi_invariance", semi_defect, ctx.cfg, opt.resolution);
  ctx.rec.check_le("dim_below_bound", dim_max - bound, ctx.cfg, 0.0);
  ctx.rec.check_le("containment", containment, ctx.cfg, ctx.tol());
  ctx.rec.clouds["exp_attractor_section"] = top.assembled;
  ctx.rec.config = ctx.cfg;
  return ctx.rec;
}

// ---------------------------------------------------------------- attractor

ResultRecord suite_attractor(KvConfig cfg) {
  SuiteContext ctx = make_context(std::move(cfg), 1e-2);

  // absorbing-family probe at several launch times
  AbsorbingEstimate est = absorbing_ball(
      ctx.model, ctx.spec, ctx.cfg.get_double("absorb.probe_radius", 10.0),
      ctx.cfg.get_list("absorb.launches", {-10.0, -5.0, 0.0}),
      ctx.cfg.get_double("absorb.window", 30.0),
      static_cast<int>(ctx.cfg.get_int("absorb.sample_size", 12)), ctx.seed);
  double launch_spread = 1.0;
  if (!est.per_launch_R.empty()) {
    const double lo =
        *std::min_element(est.per_launch_R.begin(), est.per_launch_R.end());
    const double hi =
        *std::max_element(est.per_launch_R.begin(), est.per_launch_R.end());
    launch_spread = lo > 0 ? hi / lo : 1.0;
  }
  ctx.cfg.set_double("attractor.absorb_radius", est.R1);

  AttractorParams ap = attractor_params(ctx, est.R1);
  const double t = ctx.cfg.get_double("attractor.t", 0.0);
  ctx.cfg.set_double("attractor.t", t);
  const AttractorSection sec =
      pullback_attractor(t, ctx.model.epsilon, ctx.model, ctx.spec, ap);

  // forward consistency: independently computed section one unit later
  const AttractorSection sec_next =
      pullback_attractor(t + 1.0, ctx.model.epsilon, ctx.model, ctx.spec, ap);
  PointCloud pushed = evolve_cloud(sec.cloud, t + 1.0, ctx.model, ctx.spec);
  const double forward_gap = symmetric_hausdorff(pushed, sec_next.cloud);

  // seed invariance
  AttractorParams ap2 = ap;
  ap2.seed = ctx.seed + 7777;
  const AttractorSection sec_reseeded =
      pullback_attractor(t, ctx.model.epsilon, ctx.model, ctx.spec, ap2);
  const double seed_gap = symmetric_hausdorff(sec.cloud, sec_reseeded.cloud);

  // sampling stability under M doubling
  AttractorParams ap3 = ap;
  ap3.sample_size = 2 * ap.sample_size;
  const AttractorSection sec_dense =
      pullback_attractor(t, ctx.model.epsilon, ctx.model, ctx.spec, ap3);
  const double density_gap = symmetric_hausdorff(sec.cloud, sec_dense.cloud);

  const double tail =
      sec.cloud.tail_energy_fraction(static_cast<std::size_t>(ctx.model.n_modes / 2));

  Table gaps;
  gaps.columns = {"depth", "gap"};
  for (std::size_t i = 0; i < sec.gap_history.size(); ++i)
    gaps.rows.push_back({(i + 2) * ap.step, sec.gap_history[i]});
  ctx.rec.tables["gap_history"] = gaps;

  ctx.rec.metrics["R1"] = est.R1;
  ctx.rec.metrics["launch_spread"] = launch_spread;
  ctx.rec.metrics["pullback_depth"] = sec.pullback_depth;
  ctx.rec.metrics["cauchy_gap"] = sec.cauchy_gap;
  ctx.rec.metrics["forward_gap"] = forward_gap;
  ctx.rec.metrics["seed_gap"] = seed_gap;
  ctx.rec.metrics["density_gap"] = density_gap;
  ctx.rec.metrics["tail_energy_fraction"] = tail;
  ctx.rec.check_le("launch_spread", launch_spread, ctx.cfg, 1.2);
  ctx.rec.check_le("forward_consistency", forward_gap, ctx.cfg, 3.0 * ap.tol);
  ctx.rec.check_le("seed_invariance", seed_gap, ctx.cfg, 3.0 * ap.tol);
  ctx.rec.check_le("density_stability", density_gap, ctx.cfg, 2.0 * ap.tol);
  ctx.rec.check_le("tail_energy", tail, ctx.cfg, 0.01);
  ctx.rec.clouds["attractor_section"] = sec.cloud;
  ctx.rec.config = ctx.cfg;
  return ctx.rec;
}

// ---------------------------------------------------------------- scans

ResultRecord suite_usc_scan(KvConfig cfg) {
  SuiteContext ctx = make_context(std::move(cfg), 1e-2);
  const double eps0 = ctx.cfg.get_double("scan.eps0", 1.0);
  ctx.cfg.set_double("scan.eps0", eps0);
  const std::vector<double> grid = ctx.cfg.get_list(
      "scan.eps_grid", {0.8, 0.85, 0.9, 0.95, 0.975, 0.9875});
  const double t = ctx.cfg.get_double("attractor.t", 0.0);
  ctx.cfg.set_double("attractor.t", t);

  AttractorParams ap = attractor_params(ctx, absorbing_radius(ctx));
  const ContinuityCurve curve =
      upper_semicontinuity_scan(t, eps0, grid, ctx.model, ctx.spec, ap);

  Table two_col;
  two_col.columns = {"eps", "distance"};
  Table detail;
  detail.columns = {"eps", "dist_to_ref", "dist_from_ref", "sym", "converged"};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    two_col.rows.push_back({grid[i], curve.dist_to_ref[i]});
    detail.rows.push_back({grid[i], curve.dist_to_ref[i],
                           curve.dist_from_ref[i], curve.sym_dist[i],
                           curve.converged[i] ? 1.0 : 0.0});
  }
  ctx.rec.tables["continuity_curve"] = two_col;
  ctx.rec.tables["continuity_detail"] = detail;

  // nearest and farthest grid points by |eps - eps0|
  std::size_t near = 0, far = 0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (std::abs(grid[i] - eps0) < std::abs(grid[near] - eps0)) near = i;
    if (std::abs(grid[i] - eps0) > std::abs(grid[far] - eps0)) far = i;
  }
  bool all_ok = true;
  for (bool c : curve.converged) all_ok = all_ok && c;
  ctx.rec.metrics["dist_nearest"] = curve.dist_to_ref[near];
  ctx.rec.metrics["dist_farthest"] = curve.dist_to_ref[far];
  ctx.rec.metrics["all_converged"] = all_ok ? 1.0 : 0.0;
  ctx.rec.check_ge("all_converged", ctx.rec.metrics["all_converged"], ctx.cfg, 1.0);
  ctx.rec.check_le("usc_nearest", curve.dist_to_ref[near], ctx.cfg, 5.0 * ap.tol);
  ctx.rec.check_le("usc_trend",
                   curve.dist_to_ref[near] - curve.dist_to_ref[far], ctx.cfg,
                   2.0 * ap.tol);
  ctx.rec.config = ctx.cfg;
  return ctx.rec;
}

ResultRecord suite_continuity_scan(KvConfig cfg) {
  SuiteContext ctx = make_context(std::move(cfg), 1e-2);
  const double eps0 = ctx.cfg.get_double("scan.eps0", 0.9);
  ctx.cfg.set_double("scan.eps0", eps0);
  const std::vector<double> grid = ctx.cfg.get_list(
      "scan.eps_grid", {0.8, 0.84, 0.88, 0.92, 0.96, 1.0});
  const double t = ctx.cfg.get_double("attractor.t", 0.0);
  ctx.cfg.set_double("attractor.t", t);
  AttractorParams ap = attractor_params(ctx, absorbing_radius(ctx));
  const ContinuityCurve curve =
      upper_semicontinuity_scan(t, eps0, grid, ctx.model, ctx.spec, ap);

  Table table;
  table.columns = {"eps", "sym_dist"};
  double modulus = 0.0;
  bool all_ok = true;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    table.rows.push_back({grid[i], curve.sym_dist[i]});
    all_ok = all_ok && curve.converged[i];
    modulus = std::max(modulus, curve.sym_dist[i]);
  }
  ctx.rec.tables["continuity_curve"] = table;
  ctx.rec.metrics["empirical_modulus"] = modulus;
  ctx.rec.metrics["all_converged"] = all_ok ? 1.0 : 0.0;
  ctx.rec.check_ge("all_converged", ctx.rec.metrics["all_converged"], ctx.cfg, 1.0);
  ctx.rec.config = ctx.cfg;
  return ctx.rec;
}

ResultRecord suite_equi_attraction(KvConfig cfg) {
  SuiteContext ctx = make_context(std::move(cfg), 1e-2);
  const std::vector<double> grid =
      ctx.cfg.get_list("scan.eps_grid", {0.5, 0.7, 0.85, 1.0});
  const double t = ctx.cfg.get_double("attractor.t", 0.0);
  ctx.cfg.set_double("attractor.t", t);
  std::vector<double> s_list = ctx.cfg.get_list("equi.s_list", {});
  if (s_list.empty())
    for (int j = 0; j <= 16; ++j) s_list.push_back(t - 2.0 * j);

  AttractorParams ap = attractor_params(ctx, absorbing_radius(ctx));
  std::vector<AttractorSection> sections;
  for (double eps : grid)
    sections.push_back(pullback_attractor(t, eps, ctx.model, ctx.spec, ap));

  const EquiAttractionTable table =
      equi_attraction_scan(t, grid, sections, s_list, ctx.model, ctx.spec, ap);

  Table out;
  out.columns = {"s", "sup_dist"};
  for (std::size_t i = 0; i < table.s_list.size(); ++i)
    out.rows.push_back({table.s_list[i], table.sup_dist[i]});
  ctx.rec.tables["equi_attraction"] = out;

  double worst_increase = 0.0;
  for (std::size_t i = 1; i < table.sup_dist.size(); ++i)
    worst_increase =
        std::max(worst_increase, table.sup_dist[i] - table.sup_dist[i - 1]);
  ctx.rec.metrics["final_sup_dist"] = table.sup_dist.back();
  ctx.rec.metrics["worst_increase"] = worst_increase;
  ctx.rec.check_le("monotone_decay", worst_increase, ctx.cfg, 2.0 * ap.tol);
  ctx.rec.check_le("final_sup_dist", table.sup_dist.back(), ctx.cfg, 5.0 * ap.tol);
  ctx.rec.config = ctx.cfg;
  return ctx.rec;
}

// ---------------------------------------------------------------- holder

ResultRecord suite_holder(KvConfig cfg) {
  SuiteContext ctx = make_context(std::move(cfg), 1e-2);
  const double eps0 = ctx.cfg.get_double("holder.eps0", 0.5);
  ctx.cfg.set_double("holder.eps0", eps0);
  std::vector<double> deltas = ctx.cfg.get_list(
      "holder.deltas", {0.003, 0.006, 0.0125, 0.025, 0.05, 0.1});
  const double R0 = ctx.cfg.get_double("qs.R0", absorbing_radius(ctx));
  ctx.cfg.set_double("qs.R0", R0);

  SuiteContext fit_ctx = ctx;
  fit_ctx.model = ctx.model.with_epsilon(eps0);
  const QuasiStabilityFit fit = scan_quasistability(fit_ctx, R0, nullptr);
  ctx.cfg = fit_ctx.cfg;

  const int n_lo = static_cast<int>(ctx.cfg.get_int("holder.n_lo", -2));
  const int n_hi = 0;
  ctx.cfg.set_int("holder.n_lo", n_lo);
  const int M = static_cast<int>(ctx.cfg.get_int("qs.sample_size", 24));
  ConstructionOptions opt;
  opt.resolution = ctx.cfg.get_double("ea.resolution", ctx.tol() / 2.0);
  ctx.cfg.set_double("ea.resolution", opt.resolution);

  WaveGridProcess ref_proc(ctx.model.with_epsilon(eps0), ctx.spec, fit.T, R0, M,
                           ctx.seed);
  auto ref_sections =
      build_exponential_attractor(ref_proc, n_lo, n_hi, fit, R0, opt);
  const PointCloud& E0 = ref_sections.back().assembled;

  const int gamma_t = static_cast<int>(ctx.cfg.get_int("gamma.t_count", 2));
  const int gamma_s = static_cast<int>(ctx.cfg.get_int("gamma.s_count", 4));
  const int gamma_x = static_cast<int>(ctx.cfg.get_int("gamma.x_count", 10));
  ctx.cfg.set_int("gamma.t_count", gamma_t);
  ctx.cfg.set_int("gamma.s_count", gamma_s);
  ctx.cfg.set_int("gamma.x_count", gamma_x);

  Table table;
  table.columns = {"eps", "delta_eps", "gamma_value", "sym_dist"};
  std::vector<double> eps_grid, sym_dists, gamma_values;
  for (double d : deltas) {
    const double eps = eps0 + d;
    if (eps > 1.0) continue;
    const GammaEstimate g =
        gamma_distance(eps, eps0, ctx.model, ctx.spec, 0.0, fit.T, R0, gamma_t,
                       gamma_s, gamma_x, ctx.seed);
    WaveGridProcess proc(ctx.model.with_epsilon(eps), ctx.spec, fit.T, R0, M,
                         ctx.seed);
    double sym = 0.0;
    if (g.value > 0.0 && g.value < 1.0) {
      auto sections = build_exponential_attractor_shared(
          proc, ref_sections, ref_proc, g.value, fit, R0, opt);
      sym = symmetric_hausdorff(sections.back().assembled, E0);
    }
    eps_grid.push_back(eps);
    sym_dists.push_back(sym);
    gamma_values.push_back(g.value);
    table.rows.push_back({eps, d, g.value, sym});
  }
  ctx.rec.tables["holder_fit"] = table;

  const HolderFit hf =
      holder_continuity_fit(eps_grid, eps0, sym_dists, gamma_values);
  ctx.rec.metrics["gamma_exponent"] = hf.gamma;
  ctx.rec.metrics["C_fit"] = hf.C_fit;
  ctx.rec.metrics["fit_quality"] = hf.quality;
  ctx.rec.metrics["delta_validity"] = hf.delta_validity;
  ctx.rec.metrics["points_used"] = hf.points_used;
  ctx.rec.metrics["eta"] = fit.eta;
  ctx.rec.check_ge("gamma_positive", hf.gamma, ctx.cfg, 1e-3);
  ctx.rec.check_le("gamma_at_most_one", hf.gamma, ctx.cfg, 1.0);
  ctx.rec.check_ge("fit_quality", hf.quality, ctx.cfg, 0.9);
  ctx.rec.config = ctx.cfg;
  return ctx.rec;
}

// ---------------------------------------------------------------- simulate

ResultRecord suite_simulate(KvConfig cfg) {
  SuiteContext ctx = make_context(std::move(cfg), 1e-3);
  const double tau = ctx.cfg.get_double("simulate.tau", -10.0);
  const double t_end = ctx.cfg.get_double("simulate.t", 0.0);
  const double R = ctx.cfg.get_double("simulate.ball_radius", 1.0);
  ctx.cfg.set_double("simulate.tau", tau);
  ctx.cfg.set_double("simulate.t", t_end);
  ctx.cfg.set_double("simulate.ball_radius", R);

  const PhaseMetric h = ctx.model.metric_eps1();
  const PhaseMetric h13 = ctx.model.metric_eps1(1.0 / 3.0);
  const PhaseMetric h1 = ctx.model.metric_eps1(1.0);
  const PhaseMetric he = ctx.model.metric();
  PointCloud ball = sample_ball(h, tau, R, 1, ctx.seed);

  TrajectorySample record;
  EvolveStats st =
      evolve_recorded(ball.states[0], tau, t_end, ctx.model, ctx.spec, &record);

  const LyapunovConfig phi = make_lyapunov_config(
      Functional::phi, ctx.cfg.get_double("lyapunov.delta", 0.01), ctx.model);
  const LyapunovConfig lam = make_lyapunov_config(
      Functional::lambda_fn, ctx.cfg.get_double("lyapunov.delta", 0.01), ctx.model);
  ctx.cfg.set_double("lyapunov.delta", phi.delta);

  Table table;
  table.columns = {"time", "norm_H_eps", "norm_H", "norm_H13", "norm_H1",
                   "phi",  "lambda"};
  for (std::size_t i = 0; i < record.size(); ++i) {
    const ModalState& z = record.states[i];
    const double t = record.times[i];
    table.rows.push_back({t, he.norm(z, t), h.norm(z, t), h13.norm(z, t),
                          h1.norm(z, t),
                          lyapunov_eval(z, t, ctx.model, phi),
                          lyapunov_eval(z, t, ctx.model, lam)});
  }
  ctx.rec.tables["trajectory"] = table;
  ctx.rec.metrics["final_norm_H"] = h.norm(st.end, t_end);
  ctx.rec.metrics["ut_sq_integral"] = st.ut_sq_integral;
  ctx.rec.metrics["steps"] = static_cast<double>(st.steps);
  ctx.rec.config = ctx.cfg;
  return ctx.rec;
}

}  // namespace

std::vector<std::string> suite_names() {
  return {"simulate",      "decay",         "sandwich",   "cocycle",
          "eps-lipschitz", "split",         "quasistab",  "exp-attractor",
          "attractor",     "usc-scan",      "continuity-scan",
          "equi-attraction", "holder"};
}

ResultRecord run_suite(KvConfig cfg, const std::string& out_dir) {
  const std::string name = cfg.get("suite", "");
  cfg.set("suite", name);
  const auto t0 = std::chrono::steady_clock::now();
  ResultRecord rec;
  if (name == "sandwich") rec = suite_sandwich(std::move(cfg));
  else if (name == "cocycle") rec = suite_cocycle(std::move(cfg));
  else if (name == "decay") rec = suite_decay(std::move(cfg));
  else if (name == "eps-lipschitz") rec = suite_eps_lipschitz(std::move(cfg));
  else if (name == "split") rec = suite_split(std::move(cfg));
  else if (name == "quasistab") rec = suite_quasistab(std::move(cfg));
  else if (name == "exp-attractor") rec = suite_exp_attractor(std::move(cfg));
  else if (name == "attractor") rec = suite_attractor(std::move(cfg));
  else if (name == "usc-scan") rec = suite_usc_scan(std::move(cfg));
  else if (name == "continuity-scan") rec = suite_continuity_scan(std::move(cfg));
  else if (name == "equi-attraction") rec = suite_equi_attraction(std::move(cfg));
  else if (name == "holder") rec = suite_holder(std::move(cfg));
  else if (name == "simulate") rec = suite_simulate(std::move(cfg));
  else {
    std::ostringstream os;
    os << "unknown suite '" << name << "'; available:";
    for (const auto& s : suite_names()) os << " " << s;
    throw std::invalid_argument(os.str());
  }
  rec.suite = name;
  rec.config_hash = rec.config.hash();
  rec.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!out_dir.empty()) rec.persist(out_dir);
  return rec;
}

ResultRecord replay(const std::string& config_hash, const std::string& out_dir) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::path(out_dir) / ("run-" + config_hash);
  const fs::path cfg_path = dir / "config.txt";
  if (!fs::exists(cfg_path))
    throw std::invalid_argument("replay: no stored config at " +
                                cfg_path.string());
  KvConfig cfg = KvConfig::load(cfg_path.string());
  if (cfg.hash() != config_hash)
    throw std::runtime_error("replay: stored config hash " + cfg.hash() +
                             " does not match requested " + config_hash);
  const ResultRecord stored = load_record_metrics(dir.string());
  ResultRecord fresh = run_suite(cfg, "");
  bool identical = stored.metrics.size() == fresh.metrics.size();
  if (identical)
    for (const auto& [k, v] : stored.metrics) {
      auto it = fresh.metrics.find(k);
      if (it == fresh.metrics.end() ||
          format_double(it->second) != format_double(v)) {
        identical = false;
        break;
      }
    }
  fresh.add_verdict("replay_identical", identical, identical ? 1.0 : 0.0, 1.0,
                    ">=");
  fresh.config_hash = config_hash;
  if (!out_dir.empty()) fresh.persist(out_dir);
  return fresh;
}

}  // namespace tdwave
