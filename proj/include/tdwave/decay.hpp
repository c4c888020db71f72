#pragma once

#include <vector>

#include "tdwave/evolve.hpp"

namespace tdwave {

// Exponential-envelope fit y(s) ~ C e^{-kappa s} + R_absorb of an ensemble
// sup-norm curve, plus the per-trajectory dissipation integrals.
struct DecayFit {
  double kappa = 0.0;
  double R_absorb = 0.0;
  double C = 0.0;
  double quality = 0.0;
  double window_lo = 0.0, window_hi = 0.0;
  bool degenerate = false;  // flat-zero or unfittable curve
};

DecayFit fit_decay_curve(const std::vector<double>& s,
                         const std::vector<double>& y);

struct EnsembleDecay {
  EnsembleCurve curve;
  DecayFit fit;
};

// Evolves `start` over t_grid and fits the sup-norm envelope; norms are taken
// in the reference (eps = 1) metric.
EnsembleDecay decay_fit(const PointCloud& start,
                        const std::vector<double>& t_grid,
                        const ModelConfig& cfg, const EvolutionSpec& spec);

}  // namespace tdwave
