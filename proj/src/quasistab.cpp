#include "tdwave/quasistab.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "tdwave/numerics.hpp"
#include "tdwave/rng.hpp"

namespace tdwave {

std::vector<PairObservation> observe_pairs(const PointCloud& ball_sample,
                                           double t, double T, int n_pairs,
                                           const ModelConfig& cfg,
                                           const EvolutionSpec& spec,
                                           std::uint64_t seed) {
  if (!(T > 0.0)) throw std::invalid_argument("observe_pairs: T <= 0");
  if (ball_sample.size() < 2)
    throw std::invalid_argument("observe_pairs: need >= 2 sample points");
  const double tau = t - T;
  if (std::abs(ball_sample.time - tau) > 1e-9)
    throw std::invalid_argument("observe_pairs: sample must sit at t - T");

  // deterministic shuffled enumeration of index pairs
  const int m = static_cast<int>(ball_sample.size());
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) pairs.emplace_back(i, j);
  auto rng = make_stream(seed, "qs-pairs");
  for (std::size_t i = pairs.size(); i > 1; --i)
    std::swap(pairs[i - 1], pairs[rng.next() % i]);
  if (static_cast<int>(pairs.size()) > n_pairs) pairs.resize(n_pairs);

  const PhaseMetric h = cfg.metric_eps1();
  const auto lam = cfg.eigenvalues();
  std::vector<PairObservation> obs(pairs.size());
  std::exception_ptr err;
  const auto np = static_cast<long>(pairs.size());
#pragma omp parallel for schedule(dynamic)
  for (long p = 0; p < np; ++p) {
    try {
      const auto& [i, j] = pairs[p];
      PairResult pr = evolve_pair(ball_sample.states[i], ball_sample.states[j],
                                  tau, t, cfg, spec);
      PairObservation& o = obs[p];
      o.d0 = h.dist(ball_sample.states[i], ball_sample.states[j], tau);
      o.d1 = h.dist(pr.a, pr.b, t);
      for (std::size_t q = 0; q < pr.diff.size(); ++q) {
        const ModalState& d = pr.diff.states[q];
        double usq = 0.0, u1sq = 0.0, vsq = 0.0;
        for (std::size_t k = 0; k < d.modes(); ++k) {
          usq += d.u[k] * d.u[k];
          u1sq += lam[k] * d.u[k] * d.u[k];
          vsq += d.v[k] * d.v[k];
        }
        o.semi_sup = std::max(o.semi_sup, std::sqrt(usq));
        o.z_sup = std::max(o.z_sup, std::sqrt(u1sq + vsq));
        if (o.d0 > 0.0)
          o.window_sup_ratio =
              std::max(o.window_sup_ratio,
                       h.norm(d, pr.diff.times[q]) / o.d0);
      }
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  return obs;
}

QuasiStabilityFit fit_quasi_stability(const std::vector<PairObservation>& obs,
                                      double T, double record_stride) {
  std::vector<const PairObservation*> ok;
  for (const auto& o : obs)
    if (o.d0 > 1e-12 && o.semi_sup >= 0.0) ok.push_back(&o);
  if (ok.size() < 10)
    throw std::invalid_argument("fit_quasi_stability: fewer than 10 admissible pairs");

  QuasiStabilityFit fit;
  fit.T = T;
  fit.sample_count = static_cast<int>(ok.size());
  fit.record_stride = record_stride;

  // eta: envelope of d1/d0 over the lowest decile of seminorm-to-distance
  // ratios, where the compact term explains the least
  std::vector<const PairObservation*> sorted = ok;
  std::sort(sorted.begin(), sorted.end(),
            [](const PairObservation* a, const PairObservation* b) {
              return a->semi_sup / a->d0 < b->semi_sup / b->d0;
            });
  const std::size_t bin = std::max<std::size_t>(sorted.size() / 10, 5);
  double eta = 0.0;
  for (std::size_t i = 0; i < bin && i < sorted.size(); ++i)
    eta = std::max(eta, sorted[i]->d1 / sorted[i]->d0);
  fit.eta = eta;

  // scale: closes the envelope over every pair
  double scale = 0.0;
  for (const auto* o : ok)
    if (o->semi_sup > 1e-14)
      scale = std::max(scale, (o->d1 - eta * o->d0) / o->semi_sup);
  fit.seminorm_scale = std::max(scale, 0.0);

  double L = 0.0, L1 = 0.0;
  for (const auto* o : ok) {
    L = std::max(L, o->z_sup / o->d0);
    L1 = std::max(L1, o->window_sup_ratio);
  }
  fit.L_semi = L;
  fit.L1 = std::max(2.0, L1);
  fit.valid = fit.eta < 0.5;
  fit.violations = count_envelope_violations(fit, obs);
  return fit;
}

int count_envelope_violations(const QuasiStabilityFit& fit,
                              const std::vector<PairObservation>& obs,
                              double slack) {
  int v = 0;
  for (const auto& o : obs) {
    if (o.d0 <= 1e-12) continue;
    if (o.d1 > fit.eta * o.d0 + fit.seminorm_scale * o.semi_sup + slack) ++v;
  }
  return v;
}

QuasiStabilityFit estimate_quasi_stability(const PointCloud& ball_sample,
                                           double t, double T, int n_pairs,
                                           const ModelConfig& cfg,
                                           const EvolutionSpec& spec,
                                           std::uint64_t seed) {
  auto obs = observe_pairs(ball_sample, t, T, n_pairs, cfg, spec, seed);
  return fit_quasi_stability(obs, T, spec.record_stride);
}

WaveGridProcess::WaveGridProcess(ModelConfig cfg, EvolutionSpec spec, double T,
                                 double R0, int sample_size, std::uint64_t seed)
    : cfg_(std::move(cfg)), spec_(spec), T_(T), R0_(R0),
      sample_size_(sample_size), seed_(seed), h_(cfg_.metric_eps1()) {
  if (!(T_ > 0.0)) throw std::invalid_argument("WaveGridProcess: T <= 0");
}

PointCloud WaveGridProcess::base_sample(int n) const {
  // keyed only by (seed, grid time): identical across eps
  return sample_ball(h_, grid_time(n), R0_, sample_size_, seed_,
                     0xB00Cull);
}

static std::vector<ModalState> advance_states(const std::vector<ModalState>& pts,
                                              double t0, double t1,
                                              const ModelConfig& cfg,
                                              const EvolutionSpec& spec) {
  std::vector<ModalState> out(pts.size());
  std::exception_ptr err;
  const auto m = static_cast<long>(pts.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < m; ++i) {
    try {
      ModalState z = pts[i];
      z.time = t0;
      out[i] = evolve(z, t0, t1, cfg, spec);
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  return out;
}

std::vector<ModalState> WaveGridProcess::advance(
    const std::vector<ModalState>& pts, int from_n, int to_n) const {
  if (to_n < from_n) throw std::invalid_argument("advance: to_n < from_n");
  return advance_states(pts, grid_time(from_n), grid_time(to_n), cfg_, spec_);
}

std::vector<ModalState> WaveGridProcess::transport(
    const std::vector<ModalState>& pts, int from_n, double t) const {
  if (t < grid_time(from_n))
    throw std::invalid_argument("transport: t before the grid time");
  return advance_states(pts, grid_time(from_n), t, cfg_, spec_);
}

namespace {

std::vector<ModalState> strip(const std::vector<TaggedPoint>& pts) {
  std::vector<ModalState> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back(p.z);
  return out;
}

std::vector<TaggedPoint> advance_tagged(const GridProcess& proc,
                                        const std::vector<TaggedPoint>& pts,
                                        int from_n, int to_n) {
  std::vector<ModalState> moved = proc.advance(strip(pts), from_n, to_n);
  std::vector<TaggedPoint> out(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i)
    out[i] = TaggedPoint{std::move(moved[i]), pts[i].origin_n, pts[i].origin_idx};
  return out;
}

PointCloud cloud_of(const std::vector<TaggedPoint>& pts, double time,
                    const PhaseMetric& metric) {
  PointCloud c(time, metric);
  for (const auto& p : pts) {
    ModalState z = p.z;
    z.time = time;
    c.states.push_back(std::move(z));
  }
  return c;
}

// greedy cover of tagged points, returning the selected subset
std::vector<TaggedPoint> tagged_net(const std::vector<TaggedPoint>& pts,
                                    double time, const PhaseMetric& metric,
                                    double radius) {
  PointCloud c = cloud_of(pts, time, metric);
  auto idx = greedy_net_indices(c, radius);
  std::vector<TaggedPoint> net;
  net.reserve(idx.size());
  for (auto i : idx) net.push_back(pts[i]);
  return net;
}

int level_count(double R0, double eta, double resolution, int max_levels) {
  int k_max = 0;
  double r = 2.0 * R0;
  while (k_max < max_levels) {
    r *= 2.0 * eta;
    if (r < resolution) break;
    ++k_max;
  }
  return std::max(k_max, 1);
}

ExpAttractorSection assemble_section(const GridProcess& proc, int n,
                                     std::vector<std::vector<TaggedPoint>> nets,
                                     std::vector<std::vector<TaggedPoint>> e_sets,
                                     const std::vector<double>& radii,
                                     const QuasiStabilityFit& fit, double R0,
                                     const ConstructionOptions& opt) {
  ExpAttractorSection sec;
  sec.n = n;
  sec.time = proc.grid_time(n);
  sec.level_radius = radii;
  sec.nets = std::move(nets);
  sec.e_sets = std::move(e_sets);
  sec.eta_used = fit.eta;
  sec.R0_used = R0;
  sec.resolution = opt.resolution;
  sec.assembled = PointCloud(sec.time, proc.metric());
  for (const auto& level : sec.e_sets)
    for (const auto& p : level) {
      ModalState z = p.z;
      z.time = sec.time;
      sec.assembled.states.push_back(std::move(z));
    }
  return sec;
}

void check_net_budget(std::size_t net_size, int k, double m_budget) {
  if (m_budget <= 0.0) return;
  const double cap = std::pow(m_budget, k);
  if (static_cast<double>(net_size) > cap) {
    std::ostringstream os;
    os << "covering count " << net_size << " at level " << k
       << " exceeds the packing budget " << cap
       << "; the contraction factor looks misfitted";
    throw std::runtime_error(os.str());
  }
}

}  // namespace

std::vector<ExpAttractorSection> build_exponential_attractor(
    const GridProcess& proc, int n_lo, int n_hi, const QuasiStabilityFit& fit,
    double R0, const ConstructionOptions& opt) {
  if (!fit.valid)
    throw std::invalid_argument("build_exponential_attractor: eta >= 1/2");
  if (n_hi < n_lo)
    throw std::invalid_argument("build_exponential_attractor: empty range");
  const double eta = fit.eta;
  const int k_max = level_count(R0, eta, opt.resolution, opt.max_levels);

  std::vector<double> radii(k_max);
  for (int k = 1; k <= k_max; ++k)
    radii[k - 1] = 2.0 * R0 * std::pow(2.0 * eta, k);

  std::vector<ExpAttractorSection> sections;
  std::vector<std::vector<TaggedPoint>> prev_e_sets;

  for (int n = n_lo; n <= n_hi; ++n) {
    std::vector<std::vector<TaggedPoint>> nets(k_max), e_sets(k_max);
    for (int k = 1; k <= k_max; ++k) {
      // image of the base sample k grid steps back
      PointCloud base = proc.base_sample(n - k);
      std::vector<TaggedPoint> tagged(base.size());
      for (std::size_t i = 0; i < base.size(); ++i)
        tagged[i] = TaggedPoint{base.states[i], n - k, static_cast<int>(i)};
      std::vector<TaggedPoint> image = advance_tagged(proc, tagged, n - k, n);
      nets[k - 1] =
          tagged_net(image, proc.grid_time(n), proc.metric(), radii[k - 1]);
      check_net_budget(nets[k - 1].size(), k, opt.m_budget);

      e_sets[k - 1] = nets[k - 1];
      if (k >= 2 && n > n_lo) {
        // inherit U(n, n-1) E_{k-1}(n-1)
        const auto& prev_level = prev_e_sets[k - 2];
        if (!prev_level.empty()) {
          auto moved = advance_tagged(proc, prev_level, n - 1, n);
          e_sets[k - 1].insert(e_sets[k - 1].end(), moved.begin(), moved.end());
        }
      }
    }
    prev_e_sets = e_sets;
    sections.push_back(
        assemble_section(proc, n, std::move(nets), std::move(e_sets), radii,
                         fit, R0, opt));
  }
  return sections;
}

double holder_exponent(double eta, double L1) {
  const double lg = std::log(2.0 * eta) / std::log(L1);  // negative
  return -lg / (1.0 - lg);
}

double holder_k_gamma(double gamma_value, double eta, double L1) {
  if (!(gamma_value > 0.0) || gamma_value >= 1.0) return 0.0;
  const double lg = std::log(2.0 * eta) / std::log(L1);
  return (-std::log(gamma_value) / std::log(L1)) / (1.0 - lg);
}

std::vector<ExpAttractorSection> build_exponential_attractor_shared(
    const GridProcess& proc, const std::vector<ExpAttractorSection>& reference,
    const GridProcess& ref_proc, double gamma_value,
    const QuasiStabilityFit& fit, double R0, const ConstructionOptions& opt) {
  if (reference.empty())
    throw std::invalid_argument("shared construction: empty reference");
  if (!(gamma_value > 0.0) || gamma_value >= 1.0)
    throw std::invalid_argument(
        "shared construction: Gamma must lie in (0, 1); outside the validity range");
  const double eta = fit.eta;
  const double k_gamma = holder_k_gamma(gamma_value, eta, fit.L1);
  const int k_shared = std::max(1, static_cast<int>(std::floor(k_gamma)));

  std::vector<ExpAttractorSection> sections;
  std::vector<std::vector<TaggedPoint>> prev_e_sets;
  const int n_lo = reference.front().n;

  for (const auto& ref_sec : reference) {
    const int n = ref_sec.n;
    const int k_max = static_cast<int>(ref_sec.level_radius.size());
    std::vector<std::vector<TaggedPoint>> nets(k_max), e_sets(k_max);
    for (int k = 1; k <= k_max; ++k) {
      if (k <= k_shared) {
        // transported reference set: exact preimages re-evolved under this
        // process
        const auto& ref_level = ref_sec.e_sets[k - 1];
        std::vector<TaggedPoint> pre;
        pre.reserve(ref_level.size());
        PointCloud base = proc.base_sample(n - k);
        for (const auto& p : ref_level) {
          if (p.origin_n != n - k)
            throw std::logic_error("shared construction: origin bookkeeping broken");
          pre.push_back(TaggedPoint{base.states[p.origin_idx], p.origin_n,
                                    p.origin_idx});
        }
        e_sets[k - 1] = advance_tagged(proc, pre, n - k, n);
        nets[k - 1] = e_sets[k - 1];
      } else {
        PointCloud base = proc.base_sample(n - k);
        std::vector<TaggedPoint> tagged(base.size());
        for (std::size_t i = 0; i < base.size(); ++i)
          tagged[i] = TaggedPoint{base.states[i], n - k, static_cast<int>(i)};
        auto image = advance_tagged(proc, tagged, n - k, n);
        nets[k - 1] = tagged_net(image, proc.grid_time(n), proc.metric(),
                                 ref_sec.level_radius[k - 1]);
        check_net_budget(nets[k - 1].size(), k, opt.m_budget);
        e_sets[k - 1] = nets[k - 1];
        if (n > n_lo && !prev_e_sets.empty() && k >= 2 &&
            !prev_e_sets[k - 2].empty()) {
          auto moved = advance_tagged(proc, prev_e_sets[k - 2], n - 1, n);
          e_sets[k - 1].insert(e_sets[k - 1].end(), moved.begin(), moved.end());
        }
      }
    }
    sections.push_back(assemble_section(proc, n, nets, e_sets,
                                        ref_sec.level_radius, fit, R0, opt));
    prev_e_sets = sections.back().e_sets;
  }
  return sections;
}

PointCloud transport_section(const ExpAttractorSection& section, double t,
                             const GridProcess& proc) {
  const double tn = section.time;
  if (t < tn)
    throw std::invalid_argument("transport_section: t before the grid time");
  if (t == tn) return section.assembled;
  std::vector<ModalState> moved =
      proc.transport(section.assembled.states, section.n, t);
  PointCloud out(t, proc.metric());
  for (auto& z : moved) {
    z.time = t;
    out.states.push_back(std::move(z));
  }
  return out;
}

double dimension_bound_formula(double eta, double m) {
  if (!(eta > 0.0) || eta >= 0.5)
    throw std::invalid_argument("dimension_bound: eta outside (0, 1/2)");
  if (!(m >= 1.0)) throw std::invalid_argument("dimension_bound: m < 1");
  return std::log(m) / std::log(1.0 / (2.0 * eta));
}

PackingEstimate estimate_seminorm_packing(const QuasiStabilityFit& fit,
                                          const PhaseMetric& metric,
                                          std::uint64_t seed, int candidates,
                                          int kept_cap) {
  if (!fit.valid)
    throw std::invalid_argument("packing: invalid quasi-stability fit");
  if (!(fit.seminorm_scale > 0.0) || !(fit.L_semi > 0.0))
    throw std::invalid_argument("packing: degenerate seminorm (unresolved subspace)");
  const double R_Z = 2.0 * fit.L_semi / fit.eta;
  const double sep = 1.0 / fit.seminorm_scale;  // required L2 gap
  const auto& lam = metric.eigenvalues;
  // a mode can contribute a separated direction only if the ball is thicker
  // than the gap along it
  int active = 0;
  for (double l : lam)
    if (2.0 * R_Z / std::sqrt(l) > sep) ++active;
  PackingEstimate est;
  est.candidates = candidates;
  est.dims_active = active;
  if (active == 0) {
    est.m = 1;
    est.saturated = true;
    return est;
  }
  const std::size_t n = lam.size();
  std::vector<std::vector<double>> kept;
  kept.push_back(std::vector<double>(n, 0.0));  // center
  auto rng = make_stream(seed, "seminorm-packing");
  bool last_batch_added = true;
  const int batch = std::max(candidates / 8, 1);
  int used = 0;
  while (used < candidates && static_cast<int>(kept.size()) < kept_cap) {
    bool added = false;
    for (int b = 0; b < batch && used < candidates; ++b, ++used) {
      std::vector<double> w(n);
      double v1 = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        w[k] = rng.gaussian();
        v1 += lam[k] * w[k] * w[k];
      }
      const double r = R_Z * std::pow(rng.uniform(), 1.0 / active);
      const double c = r / std::sqrt(v1);
      for (auto& x : w) x *= c;
      bool separated = true;
      for (const auto& y : kept) {
        double d2 = 0.0;
        for (std::size_t k = 0; k < n; ++k) d2 += (w[k] - y[k]) * (w[k] - y[k]);
        if (std::sqrt(d2) <= sep) {
          separated = false;
          break;
        }
      }
      if (separated) {
        kept.push_back(std::move(w));
        added = true;
        if (static_cast<int>(kept.size()) >= kept_cap) break;
      }
    }
    last_batch_added = added;
  }
  est.m = static_cast<int>(kept.size());
  est.saturated = !last_batch_added;
  return est;
}

double dimension_bound(const QuasiStabilityFit& fit, const PhaseMetric& metric,
                       std::uint64_t seed, PackingEstimate* packing) {
  PackingEstimate est = estimate_seminorm_packing(fit, metric, seed);
  if (packing) *packing = est;
  return dimension_bound_formula(fit.eta, static_cast<double>(est.m));
}

GammaEstimate gamma_distance(double eps, double eps0, const ModelConfig& cfg,
                             const EvolutionSpec& spec, double t0, double T,
                             double ball_radius, int t_count, int s_count,
                             int x_count, std::uint64_t seed) {
  if (!(eps > 0) || eps > 1 || !(eps0 > 0) || eps0 > 1)
    throw std::invalid_argument("gamma_distance: eps outside (0, 1]");
  GammaEstimate est;
  est.t_count = t_count;
  est.s_count = s_count;
  est.x_count = x_count;
  if (eps == eps0) return est;
  const PhaseMetric h = cfg.metric_eps1();
  const ModelConfig ca = cfg.with_epsilon(eps);
  const ModelConfig cb = cfg.with_epsilon(eps0);
  double sup = 0.0;
  for (int ti = 0; ti < t_count; ++ti) {
    const double t = t0 - ti * T;
    for (int si = 1; si <= s_count; ++si) {
      const double s = T * si / s_count;
      PointCloud ball = sample_ball(h, t - s, ball_radius, x_count, seed,
                                    static_cast<std::uint64_t>(ti * 1000 + si));
      std::vector<double> local(ball.size(), 0.0);
      std::exception_ptr err;
      const auto m = static_cast<long>(ball.size());
#pragma omp parallel for schedule(dynamic)
      for (long i = 0; i < m; ++i) {
        try {
          const ModalState za = evolve(ball.states[i], t - s, t, ca, spec);
          const ModalState zb = evolve(ball.states[i], t - s, t, cb, spec);
          local[i] = h.dist(za, zb, t);
        } catch (...) {
#pragma omp critical
          if (!err) err = std::current_exception();
        }
      }
      if (err) std::rethrow_exception(err);
      for (double d : local) sup = std::max(sup, d);
    }
  }
  est.value = sup;
  return est;
}

HolderFit holder_continuity_fit(const std::vector<double>& eps_grid,
                                double eps0,
                                const std::vector<double>& sym_distances,
                                const std::vector<double>& gamma_values) {
  if (eps_grid.size() != sym_distances.size() ||
      eps_grid.size() != gamma_values.size())
    throw std::invalid_argument("holder_continuity_fit: length mismatch");
  std::vector<double> lx, ly;
  double validity = 0.0;
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    if (eps_grid[i] == eps0) continue;  // zero distance, excluded from the fit
    if (!(gamma_values[i] < 1.0)) continue;
    if (sym_distances[i] <= 0.0) continue;
    validity = std::max(validity, std::abs(eps_grid[i] - eps0));
    lx.push_back(std::log(std::abs(eps_grid[i] - eps0)));
    ly.push_back(std::log(sym_distances[i]));
  }
  if (lx.size() < 2)
    throw std::invalid_argument(
        "holder_continuity_fit: no grid points inside the validity range");
  const LinearFit fit = linear_fit(lx, ly);
  HolderFit out;
  out.eps0 = eps0;
  out.gamma = fit.slope;
  out.C_fit = std::exp(fit.intercept);
  out.quality = fit.r2;
  out.delta_validity = validity;
  out.points_used = static_cast<int>(lx.size());
  return out;
}

}  // namespace tdwave
