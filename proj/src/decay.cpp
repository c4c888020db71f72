#include "tdwave/decay.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tdwave/numerics.hpp"

namespace tdwave {

DecayFit fit_decay_curve(const std::vector<double>& s,
                         const std::vector<double>& y) {
  if (s.size() != y.size() || s.size() < 4)
    throw std::invalid_argument("fit_decay_curve: need >= 4 samples");
  DecayFit out;
  out.window_lo = s.front();
  out.window_hi = s.back();
  const double y_max = *std::max_element(y.begin(), y.end());
  const double y_min = *std::min_element(y.begin(), y.end());
  if (y_max <= 1e-12) {
    out.degenerate = true;  // flat zero curve
    out.quality = 1.0;
    return out;
  }
  // scan the asymptote, fit ln(y - R) linearly in s for each candidate
  double best_sse = 1e300;
  const int n_cand = 64;
  for (int c = 0; c < n_cand; ++c) {
    const double R = y_min * (static_cast<double>(c) / n_cand) * 0.999;
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double d = y[i] - R;
      if (d <= 0.0) continue;
      xs.push_back(s[i]);
      ys.push_back(std::log(d));
    }
    if (xs.size() < 3) continue;
    const LinearFit fit = linear_fit(xs, ys);
    if (fit.slope >= 0.0) continue;  // want a decaying envelope
    double sse = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double model = std::exp(fit.intercept + fit.slope * s[i]) + R;
      sse += (y[i] - model) * (y[i] - model);
    }
    if (sse < best_sse) {
      best_sse = sse;
      out.kappa = -fit.slope;
      out.C = std::exp(fit.intercept);
      out.R_absorb = R;
    }
  }
  if (best_sse >= 1e300) {
    // no decaying fit found; report a flat envelope
    out.degenerate = true;
    out.kappa = 0.0;
    out.R_absorb = y_max;
    out.quality = 0.0;
    return out;
  }
  double sst = 0.0, mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  for (double v : y) sst += (v - mean) * (v - mean);
  out.quality = sst > 0.0 ? std::max(0.0, 1.0 - best_sse / sst) : 1.0;
  return out;
}

EnsembleDecay decay_fit(const PointCloud& start,
                        const std::vector<double>& t_grid,
                        const ModelConfig& cfg, const EvolutionSpec& spec) {
  if (start.empty()) throw std::invalid_argument("decay_fit: empty ensemble");
  EnsembleDecay out;
  out.curve = ensemble_sup_curve(start, t_grid, cfg.metric_eps1(), cfg, spec);
  std::vector<double> s(t_grid.size());
  for (std::size_t i = 0; i < t_grid.size(); ++i)
    s[i] = t_grid[i] - start.time;
  out.fit = fit_decay_curve(s, out.curve.sup_norm);
  return out;
}

}  // namespace tdwave
