#pragma once

#include <vector>

#include "tdwave/cloud.hpp"

namespace tdwave {

// One-sided Hausdorff semidistance: max over `from` of the distance to `to`.
// The parallel kernel and the serial reference must return identical values;
// the reference is kept for tests and the kernel benchmark.
double hausdorff_semidist(const PointCloud& from, const PointCloud& to);
double hausdorff_semidist_serial(const PointCloud& from, const PointCloud& to);

double symmetric_hausdorff(const PointCloud& a, const PointCloud& b);
double symmetric_hausdorff_serial(const PointCloud& a, const PointCloud& b);

// Greedy farthest-point net: subset covering every cloud point within
// `radius`. |net| upper-estimates the minimal covering number.
PointCloud greedy_net(const PointCloud& cloud, double radius);
PointCloud greedy_net_serial(const PointCloud& cloud, double radius);
std::vector<std::size_t> greedy_net_indices(const PointCloud& cloud, double radius);

bool is_cover(const PointCloud& cloud, const PointCloud& net, double radius);

struct DimensionEstimate {
  double estimate = 0.0;
  double fit_quality = 0.0;
  int radii_used = 0;
  bool degenerate = false;
};

// Least-squares slope of ln |net(r)| against ln(1/r) over the supplied radii.
// Radii below twice the minimal pairwise distance or above the diameter are
// excluded before fitting.
DimensionEstimate box_counting_dim(const PointCloud& cloud,
                                   std::vector<double> radii);

}  // namespace tdwave
