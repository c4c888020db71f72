#pragma once

#include <cstdint>
#include <vector>

#include "tdwave/decay.hpp"

namespace tdwave {

struct AbsorbingEstimate {
  double R1 = 0.0;                    // uniform absorbing radius
  std::vector<double> launch_times;
  std::vector<double> per_launch_R;   // fitted asymptote per launch
  std::vector<double> entry_delay;    // first entry into the R1 ball
  DecayFit fit;                       // fit of the last launch
};

// Probes ensembles from radius-R balls at several launch times and returns a
// radius the images enter and never leave within the probe window.
AbsorbingEstimate absorbing_ball(const ModelConfig& cfg,
                                 const EvolutionSpec& spec, double probe_radius,
                                 const std::vector<double>& launch_times,
                                 double window, int sample_size,
                                 std::uint64_t seed);

struct AttractorParams {
  int sample_size = 24;
  double step = 2.0;       // pullback step Delta
  double tol = 1e-3;
  int max_depth = 40;
  std::uint64_t seed = 1;
  double absorb_radius = 0.0;  // R1; must be set
};

struct AttractorSection {
  double time = 0.0;
  double epsilon = 1.0;
  PointCloud cloud;           // distances taken in the eps = 1 metric
  double pullback_depth = 0.0;
  double cauchy_gap = 0.0;
  int sample_size = 0;
  std::vector<double> gap_history;
  bool converged = false;
};

// Pullback iteration: evolves absorbing-ball samples from t - j*step forward
// to t and accepts once two consecutive symmetric-Hausdorff gaps fall under
// tol. Throws on non-convergence at max_depth.
AttractorSection pullback_attractor(double t, double eps,
                                    const ModelConfig& cfg,
                                    const EvolutionSpec& spec,
                                    const AttractorParams& params);

struct ContinuityCurve {
  std::vector<double> eps_grid;
  std::vector<double> dist_to_ref;    // dist(A_eps, A_eps0)
  std::vector<double> dist_from_ref;  // dist(A_eps0, A_eps)
  std::vector<double> sym_dist;
  std::vector<bool> converged;
  double reference_eps = 1.0;
};

ContinuityCurve upper_semicontinuity_scan(double t, double eps0,
                                          const std::vector<double>& eps_grid,
                                          const ModelConfig& cfg,
                                          const EvolutionSpec& spec,
                                          const AttractorParams& params);

struct EquiAttractionTable {
  std::vector<double> s_list;             // launch times (decreasing)
  std::vector<double> sup_dist;           // sup over the eps grid
  std::vector<std::vector<double>> per_eps;
};

// For each launch s, evolves a shared absorbing-ball sample of B(s) to t under
// every grid eps and measures the distance to that eps's precomputed section.
EquiAttractionTable equi_attraction_scan(
    double t, const std::vector<double>& eps_grid,
    const std::vector<AttractorSection>& sections,
    const std::vector<double>& s_list, const ModelConfig& cfg,
    const EvolutionSpec& spec, const AttractorParams& params);

}  // namespace tdwave
