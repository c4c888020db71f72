#include "tdwave/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tdwave/numerics.hpp"

namespace tdwave {

static void require_distance_args(const PointCloud& a, const PointCloud& b) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("hausdorff: empty cloud");
  if (a.time != b.time)
    throw std::invalid_argument("hausdorff: time-stamp mismatch");
  if (!a.metric.compatible(b.metric))
    throw std::invalid_argument("hausdorff: metric mismatch");
}

static double nearest_sq(const ModalState& x, const PointCloud& to) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& y : to.states)
    best = std::min(best, to.metric.dist_sq(x, y, to.time));
  return best;
}

double hausdorff_semidist_serial(const PointCloud& from, const PointCloud& to) {
  require_distance_args(from, to);
  double worst = 0.0;
  for (const auto& x : from.states) worst = std::max(worst, nearest_sq(x, to));
  return std::sqrt(worst);
}

double hausdorff_semidist(const PointCloud& from, const PointCloud& to) {
  require_distance_args(from, to);
  const auto n = static_cast<long>(from.states.size());
  double worst = 0.0;
#pragma omp parallel for reduction(max : worst) schedule(static)
  for (long i = 0; i < n; ++i)
    worst = std::max(worst, nearest_sq(from.states[i], to));
  return std::sqrt(worst);
}

double symmetric_hausdorff(const PointCloud& a, const PointCloud& b) {
  return std::max(hausdorff_semidist(a, b), hausdorff_semidist(b, a));
}

double symmetric_hausdorff_serial(const PointCloud& a, const PointCloud& b) {
  return std::max(hausdorff_semidist_serial(a, b),
                  hausdorff_semidist_serial(b, a));
}

// Greedy farthest-point traversal. dist_to_net updates are independent per
// point, so the parallel and serial paths produce the same net.
static std::vector<std::size_t> net_indices_impl(const PointCloud& cloud,
                                                 double radius, bool parallel) {
  if (!(radius > 0.0)) throw std::invalid_argument("greedy_net: radius <= 0");
  std::vector<std::size_t> picked;
  const std::size_t m = cloud.size();
  if (m == 0) return picked;
  const double r2 = radius * radius;
  std::vector<double> dist2(m, std::numeric_limits<double>::infinity());
  std::size_t next = 0;  // start from the first point; deterministic
  while (true) {
    picked.push_back(next);
    const ModalState& c = cloud.states[next];
    const auto n = static_cast<long>(m);
    if (parallel) {
#pragma omp parallel for schedule(static)
      for (long i = 0; i < n; ++i)
        dist2[i] = std::min(dist2[i],
                            cloud.metric.dist_sq(cloud.states[i], c, cloud.time));
    } else {
      for (long i = 0; i < n; ++i)
        dist2[i] = std::min(dist2[i],
                            cloud.metric.dist_sq(cloud.states[i], c, cloud.time));
    }
    std::size_t arg = 0;
    double far2 = -1.0;
    for (std::size_t i = 0; i < m; ++i)
      if (dist2[i] > far2) {
        far2 = dist2[i];
        arg = i;
      }
    if (far2 <= r2) break;
    next = arg;
  }
  return picked;
}

std::vector<std::size_t> greedy_net_indices(const PointCloud& cloud,
                                            double radius) {
  return net_indices_impl(cloud, radius, true);
}

static PointCloud subset(const PointCloud& cloud,
                         const std::vector<std::size_t>& idx) {
  PointCloud net(cloud.time, cloud.metric);
  net.states.reserve(idx.size());
  for (auto i : idx) net.states.push_back(cloud.states[i]);
  return net;
}

PointCloud greedy_net(const PointCloud& cloud, double radius) {
  return subset(cloud, net_indices_impl(cloud, radius, true));
}

PointCloud greedy_net_serial(const PointCloud& cloud, double radius) {
  return subset(cloud, net_indices_impl(cloud, radius, false));
}

bool is_cover(const PointCloud& cloud, const PointCloud& net, double radius) {
  if (cloud.empty()) return true;
  if (net.empty()) return false;
  const double r2 = radius * radius;
  for (const auto& x : cloud.states) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& y : net.states)
      best = std::min(best, cloud.metric.dist_sq(x, y, cloud.time));
    if (best > r2) return false;
  }
  return true;
}

DimensionEstimate box_counting_dim(const PointCloud& cloud,
                                   std::vector<double> radii) {
  if (radii.size() < 3)
    throw std::invalid_argument("box_counting_dim: need >= 3 radii");
  std::sort(radii.begin(), radii.end(), std::greater<double>());
  if (!(radii.back() > 0.0))
    throw std::invalid_argument("box_counting_dim: radii must be positive");
  if (radii.front() / radii.back() < 10.0)
    throw std::invalid_argument("box_counting_dim: radii must span a decade");
  if (cloud.size() < 2)
    throw std::invalid_argument("box_counting_dim: cloud needs >= 2 points");

  DimensionEstimate out;
  const double diam = cloud.diameter();
  if (diam <= 0.0) {
    out.degenerate = true;  // all points identical
    return out;
  }
  const double floor_r = 2.0 * cloud.min_positive_pairwise();

  std::vector<double> lx, ly;
  for (double r : radii) {
    if (r > diam || r < floor_r) continue;
    const auto n = greedy_net_indices(cloud, r).size();
    lx.push_back(std::log(1.0 / r));
    ly.push_back(std::log(static_cast<double>(n)));
  }
  out.radii_used = static_cast<int>(lx.size());
  if (lx.size() < 2) {
    out.degenerate = true;
    return out;
  }
  const LinearFit fit = linear_fit(lx, ly);
  out.estimate = fit.slope;
  out.fit_quality = fit.r2;
  return out;
}

}  // namespace tdwave
