#include "tdwave/cloud.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "tdwave/rng.hpp"

namespace tdwave {

void PointCloud::add(ModalState s) {
  s.require_consistent();
  if (s.modes() != metric.eigenvalues.size())
    throw std::invalid_argument("PointCloud::add: mode count mismatch");
  if (s.time != time)
    throw std::invalid_argument("PointCloud::add: time-stamp mismatch");
  states.push_back(std::move(s));
}

double PointCloud::diameter() const {
  double d2 = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i)
    for (std::size_t j = i + 1; j < states.size(); ++j)
      d2 = std::max(d2, metric.dist_sq(states[i], states[j], time));
  return std::sqrt(d2);
}

double PointCloud::min_positive_pairwise() const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < states.size(); ++i)
    for (std::size_t j = i + 1; j < states.size(); ++j) {
      const double d2 = metric.dist_sq(states[i], states[j], time);
      if (d2 > 0.0) best = std::min(best, d2);
    }
  return std::isfinite(best) ? std::sqrt(best) : 0.0;
}

double PointCloud::tail_energy_fraction(std::size_t first_tail_mode) const {
  const auto& wu = metric.u_weights();
  const auto& wv = metric.v_weights();
  double total = 0.0, tail = 0.0;
  for (const auto& z : states) {
    const double re = metric.rho_eps(time);
    for (std::size_t k = 0; k < z.modes(); ++k) {
      const double e = wu[k] * z.u[k] * z.u[k] + re * wv[k] * z.v[k] * z.v[k];
      total += e;
      if (k >= first_tail_mode) tail += e;
    }
  }
  if (total <= 1e-24) return 0.0;
  return tail / total;
}

static PointCloud sample_impl(const PhaseMetric& metric, double time,
                              double radius, int count, std::uint64_t seed,
                              std::uint64_t stream_index, bool on_sphere) {
  if (count <= 0) throw std::invalid_argument("sample_ball: count <= 0");
  if (!(radius >= 0.0)) throw std::invalid_argument("sample_ball: radius < 0");
  PointCloud cloud(time, metric);
  const std::size_t n = metric.eigenvalues.size();
  for (int i = 0; i < count; ++i) {
    auto rng = make_stream_t(seed, "ball-sample", time,
                             (stream_index << 32) + static_cast<std::uint64_t>(i));
    ModalState z(n, time);
    double nrm = 0.0;
    do {
      for (std::size_t k = 0; k < n; ++k) {
        z.u[k] = rng.gaussian();
        z.v[k] = rng.gaussian();
      }
      nrm = metric.norm(z, time);
    } while (nrm < 1e-12);
    const double target = on_sphere ? radius : radius * rng.uniform();
    const double c = target / nrm;
    for (std::size_t k = 0; k < n; ++k) {
      z.u[k] *= c;
      z.v[k] *= c;
    }
    cloud.states.push_back(std::move(z));
  }
  return cloud;
}

PointCloud sample_ball(const PhaseMetric& metric, double time, double radius,
                       int count, std::uint64_t seed, std::uint64_t stream_index) {
  return sample_impl(metric, time, radius, count, seed, stream_index, false);
}

PointCloud sample_sphere(const PhaseMetric& metric, double time, double radius,
                         int count, std::uint64_t seed, std::uint64_t stream_index) {
  return sample_impl(metric, time, radius, count, seed, stream_index, true);
}

}  // namespace tdwave
