#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "tdwave/rng.hpp"
#include "tdwave/spaces.hpp"

using namespace tdwave;

namespace {

PhaseMetric unit_metric(double eps = 1.0, double sigma = 0.0, int n = 4) {
  std::vector<double> lam(n);
  for (int k = 0; k < n; ++k) lam[k] = (k + 1.0) * (k + 1.0);
  return PhaseMetric(eps, sigma, RhoProfile::logistic(), lam);
}

PointCloud random_cloud(const PhaseMetric& m, double t, int count,
                        std::uint64_t seed) {
  return sample_ball(m, t, 2.0, count, seed);
}

}  // namespace

TEST_CASE("time-dependent norm on single modes") {
  const PhaseMetric m = unit_metric();
  ModalState z(4, 0.0);
  z.u[0] = 1.0;  // unit mass on mode 1, lambda_1 = 1
  CHECK(m.norm_sq(z, 0.0) == doctest::Approx(1.0).epsilon(1e-14));

  ModalState w(4, 0.0);
  w.v[0] = 1.0;  // rho(0) = 1/2 for the default profile
  CHECK(m.norm_sq(w, 0.0) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("norm sandwich in epsilon") {
  const PhaseMetric m1 = unit_metric(1.0);
  auto rng = make_stream(11, "sandwich-test");
  for (int trial = 0; trial < 300; ++trial) {
    const double eps = rng.uniform(1e-3, 1.0);
    const PhaseMetric me = unit_metric(eps);
    ModalState z(4, 0.0);
    for (int k = 0; k < 4; ++k) {
      z.u[k] = rng.gaussian();
      z.v[k] = rng.gaussian();
    }
    const double t = rng.uniform(-10.0, 10.0);
    const double n1 = m1.norm_sq(z, t);
    const double ne = me.norm_sq(z, t);
    CHECK(eps * n1 <= ne * (1.0 + 1e-12) + 1e-300);
    CHECK(ne <= n1 * (1.0 + 1e-12));
  }
}

TEST_CASE("induced metric satisfies the triangle inequality") {
  const PhaseMetric m = unit_metric();
  auto rng = make_stream(12, "triangle");
  for (int trial = 0; trial < 200; ++trial) {
    ModalState a(4, 0.0), b(4, 0.0), c(4, 0.0);
    for (int k = 0; k < 4; ++k) {
      a.u[k] = rng.gaussian();
      a.v[k] = rng.gaussian();
      b.u[k] = rng.gaussian();
      b.v[k] = rng.gaussian();
      c.u[k] = rng.gaussian();
      c.v[k] = rng.gaussian();
    }
    const double t = 1.3;
    CHECK(m.dist(a, c, t) <= m.dist(a, b, t) + m.dist(b, c, t) + 1e-10);
  }
}

TEST_CASE("metric rejects dimension mismatch") {
  const PhaseMetric m = unit_metric();
  ModalState z(3, 0.0);
  CHECK_THROWS_AS(m.norm_sq(z, 0.0), std::invalid_argument);
}

TEST_CASE("hausdorff semidistance basics") {
  const PhaseMetric m = unit_metric();
  PointCloud a = random_cloud(m, 0.0, 12, 1);
  PointCloud b = random_cloud(m, 0.0, 18, 2);

  SUBCASE("subset gives zero") {
    PointCloud sub(a.time, a.metric);
    for (int i = 0; i < 5; ++i) sub.states.push_back(a.states[i]);
    CHECK(hausdorff_semidist(sub, a) == 0.0);
  }
  SUBCASE("singletons reduce to the metric distance") {
    PointCloud x(a.time, a.metric), y(a.time, a.metric);
    x.states.push_back(a.states[0]);
    y.states.push_back(b.states[0]);
    CHECK(hausdorff_semidist(x, y) ==
          doctest::Approx(m.dist(a.states[0], b.states[0], 0.0)));
  }
  SUBCASE("matches the exhaustive oracle and the serial kernel") {
    for (int trial = 0; trial < 10; ++trial) {
      PointCloud p = random_cloud(m, 0.0, 5 + trial, 100 + trial);
      PointCloud q = random_cloud(m, 0.0, 20 - trial, 200 + trial);
      const double fast = hausdorff_semidist(p, q);
      CHECK(fast == doctest::Approx(oracle::hausdorff_brute(p, q)).epsilon(1e-14));
      CHECK(fast == hausdorff_semidist_serial(p, q));
    }
  }
  SUBCASE("empty and mismatched inputs are hard errors") {
    PointCloud empty(a.time, a.metric);
    CHECK_THROWS_AS(hausdorff_semidist(empty, a), std::invalid_argument);
    PointCloud later = random_cloud(m, 1.0, 4, 3);
    CHECK_THROWS_AS(hausdorff_semidist(a, later), std::invalid_argument);
  }
}

TEST_CASE("symmetric hausdorff properties") {
  const PhaseMetric m = unit_metric();
  PointCloud a = random_cloud(m, 0.0, 9, 5);
  PointCloud b = random_cloud(m, 0.0, 11, 6);
  PointCloud c = random_cloud(m, 0.0, 7, 7);
  CHECK(symmetric_hausdorff(a, a) == 0.0);
  CHECK(symmetric_hausdorff(a, b) == doctest::Approx(symmetric_hausdorff(b, a)));
  CHECK(symmetric_hausdorff(a, b) >= hausdorff_semidist(a, b));
  CHECK(symmetric_hausdorff(a, b) >= hausdorff_semidist(b, a));
  // semidistance triangle through an intermediate cloud
  CHECK(hausdorff_semidist(a, c) <=
        hausdorff_semidist(a, b) + symmetric_hausdorff(b, c) + 1e-12);
}

TEST_CASE("greedy net covers and degenerate radii") {
  const PhaseMetric m = unit_metric();
  PointCloud cloud = random_cloud(m, 0.0, 30, 9);

  SUBCASE("radius above the diameter gives a single point") {
    const PointCloud net = greedy_net(cloud, cloud.diameter() + 0.1);
    CHECK(net.size() == 1);
  }
  SUBCASE("vanishing radius keeps every distinct point") {
    const PointCloud net = greedy_net(cloud, 1e-12);
    CHECK(net.size() == cloud.size());
  }
  SUBCASE("output is a valid cover; parallel equals serial") {
    for (double r : {0.1, 0.3, 0.8}) {
      const PointCloud net = greedy_net(cloud, r);
      CHECK(is_cover(cloud, net, r));
      CHECK(greedy_net_serial(cloud, r).size() == net.size());
    }
  }
  SUBCASE("nonpositive radius is a hard error") {
    CHECK_THROWS_AS(greedy_net(cloud, 0.0), std::invalid_argument);
  }
  SUBCASE("net size dominates the exact minimal cover on tiny clouds") {
    PointCloud tiny = random_cloud(m, 0.0, 10, 42);
    for (double r : {0.2, 0.5, 1.0}) {
      const int exact = oracle::minimal_cover_brute(tiny, r);
      const PointCloud net = greedy_net(tiny, r);
      CHECK(static_cast<int>(net.size()) >= exact);
      CHECK(is_cover(tiny, net, r));
    }
  }
}

TEST_CASE("box-counting dimension of known sets") {
  const int n = 4;
  const PhaseMetric m = unit_metric(1.0, 0.0, n);

  SUBCASE("line segment scores near one") {
    PointCloud seg(0.0, m);
    for (int i = 0; i < 1000; ++i) {
      ModalState z(n, 0.0);
      z.u[0] = static_cast<double>(i) / 999.0;
      seg.states.push_back(z);
    }
    std::vector<double> radii;
    for (int j = 2; j <= 8; ++j) radii.push_back(std::pow(2.0, -j));
    const DimensionEstimate d = box_counting_dim(seg, radii);
    CHECK(d.estimate > 0.75);
    CHECK(d.estimate < 1.25);
  }
  SUBCASE("grid on a modal 2-plane scores near two") {
    // uniform in the metric: lambda_2 = 4 halves the raw coordinate step
    PointCloud grid(0.0, m);
    for (int i = 0; i < 32; ++i)
      for (int j = 0; j < 32; ++j) {
        ModalState z(n, 0.0);
        z.u[0] = i / 31.0;
        z.u[1] = (j / 31.0) / 2.0;
        grid.states.push_back(z);
      }
    std::vector<double> radii = {0.5, 0.36, 0.26, 0.19, 0.135, 0.098, 0.07, 0.049};
    const DimensionEstimate d = box_counting_dim(grid, radii);
    CHECK(d.estimate > 1.6);
    CHECK(d.estimate < 2.4);
    CHECK(d.fit_quality > 0.9);
  }
  SUBCASE("repeated single point is degenerate zero") {
    PointCloud rep(0.0, m);
    ModalState z(n, 0.0);
    z.u[0] = 0.7;
    for (int i = 0; i < 5; ++i) rep.states.push_back(z);
    std::vector<double> radii = {1.0, 0.1, 0.01};
    const DimensionEstimate d = box_counting_dim(rep, radii);
    CHECK(d.degenerate);
    CHECK(d.estimate == 0.0);
  }
  SUBCASE("duplicates do not move the estimate") {
    PointCloud seg(0.0, m);
    for (int i = 0; i < 200; ++i) {
      ModalState z(n, 0.0);
      z.u[0] = static_cast<double>(i) / 199.0;
      seg.states.push_back(z);
    }
    std::vector<double> radii;
    for (int j = 2; j <= 7; ++j) radii.push_back(std::pow(2.0, -j));
    const DimensionEstimate base = box_counting_dim(seg, radii);
    PointCloud dup = seg;
    for (int i = 0; i < 50; ++i) dup.states.push_back(seg.states[i]);
    const DimensionEstimate with_dup = box_counting_dim(dup, radii);
    CHECK(with_dup.estimate == doctest::Approx(base.estimate).epsilon(1e-12));
  }
  SUBCASE("insufficient radii span is rejected") {
    PointCloud seg(0.0, m);
    for (int i = 0; i < 10; ++i) {
      ModalState z(n, 0.0);
      z.u[0] = i / 9.0;
      seg.states.push_back(z);
    }
    CHECK_THROWS_AS(box_counting_dim(seg, {0.5, 0.4, 0.3}),
                    std::invalid_argument);
  }
}

TEST_CASE("rho profiles satisfy the declared conditions") {
  const RhoCheck chk = validate_rho(RhoProfile::logistic(), -50.0, 50.0, 5001, 1e-3);
  CHECK(chk.decreasing);
  CHECK(chk.bounded);
  CHECK(chk.tail_ok);
  CHECK(RhoProfile::logistic().value(0.0) == doctest::Approx(0.5));

  const RhoCheck rat = validate_rho(RhoProfile::rational(), -50.0, 50.0, 5001, 1e-1);
  CHECK(rat.decreasing);
  CHECK(rat.bounded);

  // constant profile is usable but fails the tail condition
  const RhoCheck cst = validate_rho(RhoProfile::constant(1.0), -50.0, 50.0, 101, 1e-3);
  CHECK(cst.decreasing);
  CHECK_FALSE(cst.tail_ok);
}
