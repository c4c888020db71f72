#include "tdwave/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tdwave {

double EvolutionSpec::effective_dt(double t, const ModelConfig& cfg) const {
  const double m = cfg.epsilon * cfg.rho.value(t);
  const double lam = std::max(cfg.lambda_max(), 1.0);
  const double omega = std::sqrt(lam / std::max(m, cfg.rho_floor));
  const double mu = cfg.alpha / std::max(m, cfg.rho_floor);
  double dt = dt_base;
  if (integrator == Integrator::rk4)
    dt = std::min(dt, stab_margin / std::max(omega, std::max(mu, 1.0)));
  return safety * dt;
}

namespace {

// One RK4 step of a generic first-order system y' = f(t, y).
template <typename Deriv>
void rk4_step(std::vector<double>& y, double t, double dt, Deriv&& f,
              std::vector<double>& k1, std::vector<double>& k2,
              std::vector<double>& k3, std::vector<double>& k4,
              std::vector<double>& tmp) {
  const std::size_t n = y.size();
  f(t, y, k1);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
  f(t + 0.5 * dt, tmp, k2);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
  f(t + 0.5 * dt, tmp, k3);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + dt * k3[i];
  f(t + dt, tmp, k4);
  for (std::size_t i = 0; i < n; ++i)
    y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

struct RecordSink {
  TrajectorySample* record = nullptr;
  double stride = 0.0;
  double next_time = 0.0;

  void emit(double t, const std::vector<double>& y, int n_modes) {
    if (!record) return;
    ModalState s(n_modes, t);
    std::copy(y.begin(), y.begin() + n_modes, s.u.begin());
    std::copy(y.begin() + n_modes, y.begin() + 2 * n_modes, s.v.begin());
    record->times.push_back(t);
    record->states.push_back(std::move(s));
  }
};

// Shared window driver: fixed rule dt with clipping to record nodes and the
// window end. `deriv` works on the stacked vector; `on_node` fires at every
// accepted record node (including both endpoints).
template <typename Deriv, typename OnStep>
long drive_window(std::vector<double>& y, double tau, double t,
                  const ModelConfig& cfg, const EvolutionSpec& spec,
                  Deriv&& deriv, OnStep&& on_step, RecordSink* sink,
                  int n_modes) {
  std::vector<double> k1(y.size()), k2(y.size()), k3(y.size()), k4(y.size()),
      tmp(y.size());
  double time = tau;
  long steps = 0;
  if (sink) {
    sink->emit(time, y, n_modes);
    sink->next_time = tau + sink->stride;
  }
  while (time < t) {
    double dt = spec.effective_dt(time, cfg);
    bool node = false;
    if (sink && time + dt >= sink->next_time - 1e-14) {
      dt = sink->next_time - time;
      node = true;
    }
    if (time + dt >= t) {
      dt = t - time;
      node = false;
    }
    if (!(dt > 0)) break;
    rk4_step(y, time, dt, deriv, k1, k2, k3, k4, tmp);
    on_step(time, dt, y);
    time += dt;
    if (node && sink) {
      sink->emit(time, y, n_modes);
      sink->next_time += sink->stride;
    }
    if (++steps > spec.max_steps)
      throw std::runtime_error("evolve: step budget exceeded (" +
                               std::to_string(spec.max_steps) + " steps)");
  }
  if (sink) sink->emit(t, y, n_modes);
  return steps;
}

// Implicit trapezoid step for the single wave system: the linear part is
// solved exactly per mode (2x2), the nonlinear image is lagged and iterated
// to fixed-point tolerance.
void trapezoid_step(std::vector<double>& y, double t, double dt,
                    const WaveEngine& eng, const ModelConfig& cfg) {
  const int n = cfg.n_modes;
  const auto& lam = eng.lambdas();
  const double m0 = eng.mass(t);
  const double m1 = eng.mass(t + dt);
  std::vector<double> fu(n), fu_new(n), du0(n), dv0(n);
  std::span<const double> u0(y.data(), n), v0(y.data() + n, n);
  eng.rhs(t, u0, v0, du0, dv0);  // also validates the floor at t

  std::vector<double> un(y.begin(), y.begin() + n);
  std::vector<double> vn(y.begin() + n, y.end());
  std::vector<double> u_new = un, v_new = vn;
  const bool has_g = !cfg.g_modes.empty();
  for (int it = 0; it < 100; ++it) {
    eng.nonlinear_modal(u_new, fu_new);
    double delta = 0.0;
    for (int k = 0; k < n; ++k) {
      const double a_rhs = un[k] + 0.5 * dt * vn[k];
      double g_k = has_g ? cfg.g_modes[k] : 0.0;
      const double b_rhs = vn[k] + 0.5 * dt * dv0[k] +
                           0.5 * dt * (g_k - fu_new[k]) / m1;
      // u' - (dt/2) v' = a_rhs
      // (dt lam / (2 m1)) u' + (1 + dt alpha / (2 m1)) v' = b_rhs
      const double p = 0.5 * dt;
      const double q = 0.5 * dt * lam[k] / m1;
      const double r = 1.0 + 0.5 * dt * cfg.alpha / m1;
      const double det = r + p * q;
      const double u_next = (r * a_rhs + p * b_rhs) / det;
      const double v_next = (b_rhs - q * a_rhs) / det;
      delta = std::max(delta, std::abs(u_next - u_new[k]));
      u_new[k] = u_next;
      v_new[k] = v_next;
    }
    if (delta < 1e-13) break;
  }
  std::copy(u_new.begin(), u_new.end(), y.begin());
  std::copy(v_new.begin(), v_new.end(), y.begin() + n);
  (void)m0;
}

std::vector<double> pack(const ModalState& z) {
  std::vector<double> y(2 * z.modes());
  std::copy(z.u.begin(), z.u.end(), y.begin());
  std::copy(z.v.begin(), z.v.end(), y.begin() + z.modes());
  return y;
}

ModalState unpack(const std::vector<double>& y, int n, double t) {
  ModalState z(n, t);
  std::copy(y.begin(), y.begin() + n, z.u.begin());
  std::copy(y.begin() + n, y.begin() + 2 * n, z.v.begin());
  return z;
}

void require_window(const ModalState& z, double tau, double t,
                    const ModelConfig& cfg) {
  if (t < tau) throw std::invalid_argument("evolve: t < tau");
  if (z.modes() != static_cast<std::size_t>(cfg.n_modes))
    throw std::invalid_argument("evolve: state size mismatch");
  z.require_consistent();
}

}  // namespace

ModalState evolve(const ModalState& z, double tau, double t,
                  const ModelConfig& cfg, const EvolutionSpec& spec) {
  require_window(z, tau, t, cfg);
  if (t == tau) {
    ModalState out = z;
    out.time = tau;
    return out;
  }
  WaveEngine eng(cfg);
  auto y = pack(z);
  const int n = cfg.n_modes;
  if (spec.integrator == Integrator::trapezoid) {
    double time = tau;
    long steps = 0;
    while (time < t) {
      double dt = std::min(spec.safety * spec.dt_base, t - time);
      trapezoid_step(y, time, dt, eng, cfg);
      time += dt;
      if (++steps > spec.max_steps)
        throw std::runtime_error("evolve: step budget exceeded");
    }
    return unpack(y, n, t);
  }
  auto deriv = [&](double s, const std::vector<double>& yy,
                   std::vector<double>& dy) {
    eng.rhs(s, std::span<const double>(yy.data(), n),
            std::span<const double>(yy.data() + n, n),
            std::span<double>(dy.data(), n), std::span<double>(dy.data() + n, n));
  };
  drive_window(y, tau, t, cfg, spec, deriv,
               [](double, double, const std::vector<double>&) {}, nullptr, n);
  return unpack(y, n, t);
}

EvolveStats evolve_recorded(const ModalState& z, double tau, double t,
                            const ModelConfig& cfg, const EvolutionSpec& spec,
                            TrajectorySample* record) {
  require_window(z, tau, t, cfg);
  WaveEngine eng(cfg);
  auto y = pack(z);
  const int n = cfg.n_modes;
  EvolveStats stats;
  if (t == tau) {
    if (record) {
      record->times.push_back(tau);
      record->states.push_back(z);
    }
    stats.end = z;
    return stats;
  }
  auto deriv = [&](double s, const std::vector<double>& yy,
                   std::vector<double>& dy) {
    eng.rhs(s, std::span<const double>(yy.data(), n),
            std::span<const double>(yy.data() + n, n),
            std::span<double>(dy.data(), n), std::span<double>(dy.data() + n, n));
  };
  // trapezoid accumulation of ||u_t||^2 along accepted steps
  double prev_vsq = 0.0;
  for (int k = 0; k < n; ++k) prev_vsq += y[n + k] * y[n + k];
  auto on_step = [&](double, double dt, const std::vector<double>& yy) {
    double vsq = 0.0;
    for (int k = 0; k < n; ++k) vsq += yy[n + k] * yy[n + k];
    stats.ut_sq_integral += 0.5 * dt * (prev_vsq + vsq);
    prev_vsq = vsq;
  };
  RecordSink sink;
  sink.record = record;
  sink.stride = spec.record_stride;
  stats.steps = drive_window(y, tau, t, cfg, spec, deriv, on_step,
                             record ? &sink : nullptr, n);
  stats.end = unpack(y, n, t);
  return stats;
}

PairResult evolve_pair(const ModalState& z1, const ModalState& z2, double tau,
                       double t, const ModelConfig& cfg,
                       const EvolutionSpec& spec) {
  require_window(z1, tau, t, cfg);
  require_window(z2, tau, t, cfg);
  if (spec.integrator != Integrator::rk4)
    throw std::invalid_argument("evolve_pair: rk4 only");
  WaveEngine eng(cfg);
  const int n = cfg.n_modes;
  std::vector<double> y(4 * n);
  {
    auto y1 = pack(z1), y2 = pack(z2);
    std::copy(y1.begin(), y1.end(), y.begin());
    std::copy(y2.begin(), y2.end(), y.begin() + 2 * n);
  }
  PairResult out;
  auto deriv = [&](double s, const std::vector<double>& yy,
                   std::vector<double>& dy) {
    eng.rhs(s, std::span<const double>(yy.data(), n),
            std::span<const double>(yy.data() + n, n),
            std::span<double>(dy.data(), n), std::span<double>(dy.data() + n, n));
    eng.rhs(s, std::span<const double>(yy.data() + 2 * n, n),
            std::span<const double>(yy.data() + 3 * n, n),
            std::span<double>(dy.data() + 2 * n, n),
            std::span<double>(dy.data() + 3 * n, n));
  };
  // record the difference trajectory at stride nodes
  double next_rec = tau;
  auto record_node = [&](double s, const std::vector<double>& yy) {
    ModalState d(n, s);
    for (int k = 0; k < n; ++k) {
      d.u[k] = yy[k] - yy[2 * n + k];
      d.v[k] = yy[n + k] - yy[3 * n + k];
    }
    out.diff.times.push_back(s);
    out.diff.states.push_back(std::move(d));
  };
  record_node(tau, y);
  next_rec = tau + spec.record_stride;
  std::vector<double> k1(y.size()), k2(y.size()), k3(y.size()), k4(y.size()),
      tmp(y.size());
  double time = tau;
  long steps = 0;
  while (time < t) {
    double dt = spec.effective_dt(time, cfg);
    bool node = false;
    if (time + dt >= next_rec - 1e-14) {
      dt = next_rec - time;
      node = true;
    }
    if (time + dt >= t) {
      dt = t - time;
      node = false;
    }
    if (!(dt > 0)) break;
    rk4_step(y, time, dt, deriv, k1, k2, k3, k4, tmp);
    time += dt;
    if (node) {
      record_node(time, y);
      next_rec += spec.record_stride;
    }
    if (++steps > spec.max_steps)
      throw std::runtime_error("evolve_pair: step budget exceeded");
  }
  if (t > tau) record_node(t, y);
  out.a = unpack(y, n, t);
  std::vector<double> y2(y.begin() + 2 * n, y.end());
  out.b = unpack(y2, n, t);
  return out;
}

SplitResult split_evolve(const ModalState& z, double tau, double t,
                         const ModelConfig& cfg, const EvolutionSpec& spec) {
  require_window(z, tau, t, cfg);
  if (spec.integrator != Integrator::rk4)
    throw std::invalid_argument("split_evolve: rk4 only");
  WaveEngine eng(cfg);
  const int n = cfg.n_modes;
  // stacked [full u, full v, vpart u, vpart v, wpart u, wpart v]
  std::vector<double> y(6 * n, 0.0);
  {
    auto yz = pack(z);
    std::copy(yz.begin(), yz.end(), y.begin());
    std::copy(yz.begin(), yz.end(), y.begin() + 2 * n);
  }
  auto deriv = [&](double s, const std::vector<double>& yy,
                   std::vector<double>& dy) {
    std::span<const double> fu(yy.data(), n), fv(yy.data() + n, n);
    std::span<const double> vu(yy.data() + 2 * n, n), vv(yy.data() + 3 * n, n);
    std::span<const double> wu(yy.data() + 4 * n, n), wv(yy.data() + 5 * n, n);
    eng.rhs(s, fu, fv, std::span<double>(dy.data(), n),
            std::span<double>(dy.data() + n, n));
    eng.rhs_vpart(s, vu, vv, std::span<double>(dy.data() + 2 * n, n),
                  std::span<double>(dy.data() + 3 * n, n));
    eng.rhs_wpart(s, wu, wv, fu, vu, std::span<double>(dy.data() + 4 * n, n),
                  std::span<double>(dy.data() + 5 * n, n));
  };
  drive_window(y, tau, t, cfg, spec, deriv,
               [](double, double, const std::vector<double>&) {}, nullptr, n);
  SplitResult out;
  out.full = unpack(y, n, t);
  std::vector<double> yv(y.begin() + 2 * n, y.begin() + 4 * n);
  std::vector<double> yw(y.begin() + 4 * n, y.begin() + 6 * n);
  out.v_part = unpack(yv, n, t);
  out.w_part = unpack(yw, n, t);
  return out;
}

SplitCurve split_evolve_curve(const ModalState& z, double tau,
                              const std::vector<double>& t_grid,
                              const ModelConfig& cfg,
                              const EvolutionSpec& spec) {
  if (t_grid.empty())
    throw std::invalid_argument("split_evolve_curve: empty grid");
  require_window(z, tau, t_grid.back(), cfg);
  if (spec.integrator != Integrator::rk4)
    throw std::invalid_argument("split_evolve_curve: rk4 only");
  WaveEngine eng(cfg);
  const int n = cfg.n_modes;
  std::vector<double> y(6 * n, 0.0);
  {
    auto yz = pack(z);
    std::copy(yz.begin(), yz.end(), y.begin());
    std::copy(yz.begin(), yz.end(), y.begin() + 2 * n);
  }
  auto deriv = [&](double s, const std::vector<double>& yy,
                   std::vector<double>& dy) {
    std::span<const double> fu(yy.data(), n), fv(yy.data() + n, n);
    std::span<const double> vu(yy.data() + 2 * n, n), vv(yy.data() + 3 * n, n);
    std::span<const double> wu(yy.data() + 4 * n, n), wv(yy.data() + 5 * n, n);
    eng.rhs(s, fu, fv, std::span<double>(dy.data(), n),
            std::span<double>(dy.data() + n, n));
    eng.rhs_vpart(s, vu, vv, std::span<double>(dy.data() + 2 * n, n),
                  std::span<double>(dy.data() + 3 * n, n));
    eng.rhs_wpart(s, wu, wv, fu, vu, std::span<double>(dy.data() + 4 * n, n),
                  std::span<double>(dy.data() + 5 * n, n));
  };
  const PhaseMetric h = cfg.metric_eps1();
  const PhaseMetric h13 = cfg.metric_eps1(1.0 / 3.0);
  SplitCurve out;
  double prev = tau;
  for (double node : t_grid) {
    drive_window(y, prev, node, cfg, spec, deriv,
                 [](double, double, const std::vector<double>&) {}, nullptr, n);
    prev = node;
    ModalState full = unpack(y, n, node);
    std::vector<double> yv(y.begin() + 2 * n, y.begin() + 4 * n);
    std::vector<double> yw(y.begin() + 4 * n, y.begin() + 6 * n);
    ModalState vp = unpack(yv, n, node);
    ModalState wp = unpack(yw, n, node);
    out.times.push_back(node);
    out.v_norm.push_back(h.norm(vp, node));
    out.w13_norm.push_back(h13.norm(wp, node));
    out.sum_defect = std::max(out.sum_defect, h.dist(vp + wp, full, node));
    if (node == t_grid.back()) out.end = SplitResult{vp, wp, full};
  }
  return out;
}

double lipschitz_in_eps(const ModalState& z, double tau, double t, double eps1,
                        double eps2, const ModelConfig& cfg,
                        const EvolutionSpec& spec) {
  if (eps1 == eps2)
    throw std::invalid_argument("lipschitz_in_eps: eps1 == eps2");
  if (!(eps1 > 0) || eps1 > 1 || !(eps2 > 0) || eps2 > 1)
    throw std::invalid_argument("lipschitz_in_eps: eps outside (0, 1]");
  const ModalState a = evolve(z, tau, t, cfg.with_epsilon(eps1), spec);
  const ModalState b = evolve(z, tau, t, cfg.with_epsilon(eps2), spec);
  const PhaseMetric h = cfg.metric_eps1();
  return h.dist(a, b, t) / std::abs(eps1 - eps2);
}

PointCloud evolve_cloud(const PointCloud& cloud, double t,
                        const ModelConfig& cfg, const EvolutionSpec& spec) {
  PointCloud out(t, cloud.metric);
  out.states.resize(cloud.size());
  std::exception_ptr err;
  const auto m = static_cast<long>(cloud.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < m; ++i) {
    try {
      out.states[i] = evolve(cloud.states[i], cloud.time, t, cfg, spec);
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  return out;
}

EnsembleCurve ensemble_sup_curve(const PointCloud& start,
                                 const std::vector<double>& t_grid,
                                 const PhaseMetric& norm_metric,
                                 const ModelConfig& cfg,
                                 const EvolutionSpec& spec) {
  if (t_grid.empty()) throw std::invalid_argument("ensemble: empty grid");
  EnsembleCurve out;
  out.times = t_grid;
  out.sup_norm.assign(t_grid.size(), 0.0);
  out.ut_sq_integral_full.assign(start.size(), 0.0);
  out.ut_sq_integral_half.assign(start.size(), 0.0);
  std::vector<std::vector<double>> norms(start.size());
  const double t_half = start.time + 0.5 * (t_grid.back() - start.time);
  std::exception_ptr err;
  const auto m = static_cast<long>(start.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < m; ++i) {
    try {
      ModalState z = start.states[i];
      double prev = start.time;
      double integral = 0.0;
      std::vector<double> row(t_grid.size());
      for (std::size_t j = 0; j < t_grid.size(); ++j) {
        EvolveStats st = evolve_recorded(z, prev, t_grid[j], cfg, spec, nullptr);
        integral += st.ut_sq_integral;
        z = st.end;
        prev = t_grid[j];
        row[j] = norm_metric.norm(z, t_grid[j]);
        if (t_grid[j] <= t_half + 1e-12)
          out.ut_sq_integral_half[i] = integral;
      }
      out.ut_sq_integral_full[i] = integral;
      norms[i] = std::move(row);
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  for (std::size_t j = 0; j < t_grid.size(); ++j)
    for (std::size_t i = 0; i < start.size(); ++i)
      out.sup_norm[j] = std::max(out.sup_norm[j], norms[i][j]);
  return out;
}

}  // namespace tdwave
