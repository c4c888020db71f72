#pragma once

#include <cstdint>
#include <vector>

#include "tdwave/metric.hpp"
#include "tdwave/state.hpp"

namespace tdwave {

// Finite set of states at a common time with a metric handle. Stands in for
// the sections A(t), B(t), E(t) and for absorbing-ball samples and nets.
struct PointCloud {
  double time = 0.0;
  PhaseMetric metric;
  std::vector<ModalState> states;

  PointCloud() = default;
  PointCloud(double t, PhaseMetric m) : time(t), metric(std::move(m)) {}

  std::size_t size() const { return states.size(); }
  bool empty() const { return states.empty(); }

  void add(ModalState s);

  double diameter() const;
  double min_positive_pairwise() const;

  // H-energy fraction carried by modes above `first_tail_mode` (0-based).
  double tail_energy_fraction(std::size_t first_tail_mode) const;
};

// Uniform-in-radius sample of the closed R-ball of the metric at `time`:
// direction isotropic in modal coordinates, radius R * Uniform(0,1).
PointCloud sample_ball(const PhaseMetric& metric, double time, double radius,
                       int count, std::uint64_t seed, std::uint64_t stream_index = 0);

// Sample of the sphere of radius exactly R.
PointCloud sample_sphere(const PhaseMetric& metric, double time, double radius,
                         int count, std::uint64_t seed, std::uint64_t stream_index = 0);

}  // namespace tdwave
