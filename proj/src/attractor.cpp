#include "tdwave/attractor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "tdwave/spaces.hpp"

namespace tdwave {

AbsorbingEstimate absorbing_ball(const ModelConfig& cfg,
                                 const EvolutionSpec& spec, double probe_radius,
                                 const std::vector<double>& launch_times,
                                 double window, int sample_size,
                                 std::uint64_t seed) {
  if (launch_times.empty())
    throw std::invalid_argument("absorbing_ball: no launch times");
  const PhaseMetric h = cfg.metric_eps1();
  AbsorbingEstimate out;
  out.launch_times = launch_times;

  std::vector<EnsembleCurve> curves;
  double R1 = 0.0;
  for (double tau : launch_times) {
    PointCloud ball = sample_ball(h, tau, probe_radius, sample_size, seed);
    std::vector<double> grid;
    const int nodes = std::max(16, static_cast<int>(window / 0.5));
    for (int i = 1; i <= nodes; ++i) grid.push_back(tau + window * i / nodes);
    EnsembleCurve curve = ensemble_sup_curve(ball, grid, h, cfg, spec);
    std::vector<double> s(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) s[i] = grid[i] - tau;
    out.fit = fit_decay_curve(s, curve.sup_norm);
    // asymptote estimate: tail maximum of the sup curve
    const std::size_t tail_from = (3 * curve.sup_norm.size()) / 4;
    double tail_max = 0.0;
    for (std::size_t i = tail_from; i < curve.sup_norm.size(); ++i)
      tail_max = std::max(tail_max, curve.sup_norm[i]);
    out.per_launch_R.push_back(std::max(tail_max, out.fit.R_absorb));
    R1 = std::max(R1, out.per_launch_R.back());
    curves.push_back(std::move(curve));
  }
  R1 = std::max(1.05 * R1, 1e-4);

  // entry-and-stay verification; bump R1 to the worst post-entry excursion
  for (std::size_t li = 0; li < curves.size(); ++li) {
    const auto& c = curves[li];
    std::size_t enter = c.sup_norm.size();
    for (std::size_t i = 0; i < c.sup_norm.size(); ++i)
      if (c.sup_norm[i] <= R1) {
        enter = i;
        break;
      }
    if (enter == c.sup_norm.size()) {
      std::ostringstream os;
      os << "absorbing_ball: ensemble from t = " << launch_times[li]
         << " did not enter the R1 = " << R1 << " ball within " << window
         << " time units";
      throw std::runtime_error(os.str());
    }
    double post = 0.0;
    for (std::size_t i = enter; i < c.sup_norm.size(); ++i)
      post = std::max(post, c.sup_norm[i]);
    R1 = std::max(R1, post);
    out.entry_delay.push_back(c.times[enter] - launch_times[li]);
  }
  out.R1 = R1;
  return out;
}

AttractorSection pullback_attractor(double t, double eps,
                                    const ModelConfig& cfg,
                                    const EvolutionSpec& spec,
                                    const AttractorParams& params) {
  if (!(params.absorb_radius > 0.0))
    throw std::invalid_argument("pullback_attractor: absorb_radius unset");
  if (!(params.tol > 0.0))
    throw std::invalid_argument("pullback_attractor: tol <= 0");
  const ModelConfig mc = cfg.with_epsilon(eps);
  const PhaseMetric h = cfg.metric_eps1();

  AttractorSection sec;
  sec.time = t;
  sec.epsilon = eps;
  sec.sample_size = params.sample_size;

  PointCloud prev;
  int consecutive = 0;
  for (int j = 1; j <= params.max_depth; ++j) {
    const double tau = t - j * params.step;
    // ball samples share the seed/time stream, so scans across eps see the
    // same launch data
    PointCloud ball =
        sample_ball(h, tau, params.absorb_radius, params.sample_size,
                    params.seed, static_cast<std::uint64_t>(j));
    PointCloud image = evolve_cloud(ball, t, mc, spec);
    if (j > 1) {
      const double gap = symmetric_hausdorff(image, prev);
      sec.gap_history.push_back(gap);
      consecutive = gap < params.tol ? consecutive + 1 : 0;
      if (consecutive >= 2) {
        sec.cloud = std::move(image);
        sec.pullback_depth = j * params.step;
        sec.cauchy_gap = gap;
        sec.converged = true;
        return sec;
      }
    }
    prev = std::move(image);
  }
  std::ostringstream os;
  os << "pullback_attractor: no convergence at depth " << params.max_depth
     << " (eps = " << eps << ", t = " << t << "); gaps:";
  for (double g : sec.gap_history) os << " " << g;
  throw std::runtime_error(os.str());
}

ContinuityCurve upper_semicontinuity_scan(double t, double eps0,
                                          const std::vector<double>& eps_grid,
                                          const ModelConfig& cfg,
                                          const EvolutionSpec& spec,
                                          const AttractorParams& params) {
  ContinuityCurve curve;
  curve.eps_grid = eps_grid;
  curve.reference_eps = eps0;
  const AttractorSection ref = pullback_attractor(t, eps0, cfg, spec, params);
  for (double eps : eps_grid) {
    if (eps == eps0) {
      curve.dist_to_ref.push_back(0.0);
      curve.dist_from_ref.push_back(0.0);
      curve.sym_dist.push_back(0.0);
      curve.converged.push_back(true);
      continue;
    }
    try {
      const AttractorSection sec = pullback_attractor(t, eps, cfg, spec, params);
      curve.dist_to_ref.push_back(hausdorff_semidist(sec.cloud, ref.cloud));
      curve.dist_from_ref.push_back(hausdorff_semidist(ref.cloud, sec.cloud));
      curve.sym_dist.push_back(
          std::max(curve.dist_to_ref.back(), curve.dist_from_ref.back()));
      curve.converged.push_back(true);
    } catch (const std::runtime_error&) {
      // flag and continue the scan
      curve.dist_to_ref.push_back(-1.0);
      curve.dist_from_ref.push_back(-1.0);
      curve.sym_dist.push_back(-1.0);
      curve.converged.push_back(false);
    }
  }
  return curve;
}

EquiAttractionTable equi_attraction_scan(
    double t, const std::vector<double>& eps_grid,
    const std::vector<AttractorSection>& sections,
    const std::vector<double>& s_list, const ModelConfig& cfg,
    const EvolutionSpec& spec, const AttractorParams& params) {
  if (sections.size() != eps_grid.size())
    throw std::invalid_argument("equi_attraction_scan: sections/grid mismatch");
  for (std::size_t i = 1; i < s_list.size(); ++i)
    if (!(s_list[i] < s_list[i - 1]))
      throw std::invalid_argument("equi_attraction_scan: s_list not decreasing");
  const PhaseMetric h = cfg.metric_eps1();
  EquiAttractionTable table;
  table.s_list = s_list;
  for (double s : s_list) {
    PointCloud ball = sample_ball(h, s, params.absorb_radius,
                                  params.sample_size, params.seed,
                                  0xE0A1ull);
    double sup = 0.0;
    std::vector<double> row;
    for (std::size_t i = 0; i < eps_grid.size(); ++i) {
      const ModelConfig mc = cfg.with_epsilon(eps_grid[i]);
      PointCloud image = s < t ? evolve_cloud(ball, t, mc, spec) : ball;
      const double d = hausdorff_semidist(image, sections[i].cloud);
      row.push_back(d);
      sup = std::max(sup, d);
    }
    table.per_eps.push_back(std::move(row));
    table.sup_dist.push_back(sup);
  }
  return table;
}

}  // namespace tdwave
