#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "tdwave/quasistab.hpp"

using namespace tdwave;

namespace {

ModelConfig small_default(int n = 8) {
  ModelConfig cfg;
  cfg.n_modes = n;
  cfg.g_modes = single_mode_forcing(cfg, 1, 1.0);
  return cfg;
}

EvolutionSpec heavy_spec() {
  EvolutionSpec spec;
  spec.dt_base = 1e-2;
  return spec;
}

// Scalar affine contraction on the grid: u -> theta^(steps) u. Hand-checkable
// covering counts for the induction.
class ContractionToy final : public GridProcess {
 public:
  ContractionToy(double theta, double R0, int samples)
      : theta_(theta), R0_(R0), samples_(samples),
        metric_(1.0, 0.0, RhoProfile::constant(1.0), {1.0}) {}

  double grid_time(int n) const override { return static_cast<double>(n); }
  const PhaseMetric& metric() const override { return metric_; }

  PointCloud base_sample(int n) const override {
    PointCloud cloud(grid_time(n), metric_);
    for (int i = 0; i < samples_; ++i) {
      ModalState z(1, grid_time(n));
      z.u[0] = -R0_ + 2.0 * R0_ * i / (samples_ - 1);
      cloud.states.push_back(z);
    }
    return cloud;
  }

  std::vector<ModalState> advance(const std::vector<ModalState>& pts,
                                  int from_n, int to_n) const override {
    const double c = std::pow(theta_, to_n - from_n);
    std::vector<ModalState> out = pts;
    for (auto& z : out) {
      z.u[0] *= c;
      z.time = grid_time(to_n);
    }
    return out;
  }

  std::vector<ModalState> transport(const std::vector<ModalState>& pts,
                                    int from_n, double t) const override {
    const double c = std::pow(theta_, t - grid_time(from_n));
    std::vector<ModalState> out = pts;
    for (auto& z : out) {
      z.u[0] *= c;
      z.time = t;
    }
    return out;
  }

 private:
  double theta_, R0_;
  int samples_;
  PhaseMetric metric_;
};

QuasiStabilityFit toy_fit(double eta) {
  QuasiStabilityFit fit;
  fit.T = 1.0;
  fit.eta = eta;
  fit.L_semi = 1.0;
  fit.seminorm_scale = 1.0;
  fit.L1 = 2.0;
  fit.valid = eta < 0.5;
  fit.sample_count = 100;
  return fit;
}

}  // namespace

TEST_CASE("quasi-stability estimate on the linear frozen model") {
  ModelConfig cfg;
  cfg.n_modes = 4;
  cfg.nonlinearity = make_nonlinearity("zero");
  cfg.rho = RhoProfile::constant(1.0);
  cfg.g_modes.clear();
  const double T = 4.0;
  PointCloud ball = sample_ball(cfg.metric_eps1(), -T, 1.0, 16, 3);
  const QuasiStabilityFit fit =
      estimate_quasi_stability(ball, 0.0, T, 80, cfg, heavy_spec(), 3);
  const double analytic = std::exp(-0.5 * cfg.alpha * T);
  CHECK(fit.eta == doctest::Approx(analytic).epsilon(0.30));
  CHECK(fit.valid);
  CHECK(fit.violations == 0);
}

TEST_CASE("quasi-stability preconditions") {
  ModelConfig cfg = small_default();
  PointCloud ball = sample_ball(cfg.metric_eps1(), 0.0, 1.0, 3, 5);
  // zero-length window
  CHECK_THROWS_AS(
      estimate_quasi_stability(ball, 0.0, 0.0, 20, cfg, heavy_spec(), 5),
      std::invalid_argument);
  // three sample points admit only three pairs
  PointCloud shifted = sample_ball(cfg.metric_eps1(), -1.0, 1.0, 3, 5);
  CHECK_THROWS_WITH_AS(
      estimate_quasi_stability(shifted, 0.0, 1.0, 20, cfg, heavy_spec(), 5),
      doctest::Contains("admissible pairs"), std::invalid_argument);
}

TEST_CASE("default model reaches eta below one quarter at some window") {
  ModelConfig cfg = small_default();
  const EvolutionSpec spec = heavy_spec();
  bool found = false;
  for (double T : {4.0, 6.0, 8.0}) {
    PointCloud ball = sample_ball(cfg.metric_eps1(), -T, 2.0, 14, 7);
    const QuasiStabilityFit fit =
        estimate_quasi_stability(ball, 0.0, T, 60, cfg, spec, 7);
    if (fit.eta < 0.25) {
      found = true;
      CHECK(fit.violations == 0);
      break;
    }
  }
  CHECK(found);
}

TEST_CASE("covering induction on the contraction toy") {
  const double theta = 0.45, R0 = 1.0, eta = 0.1;
  ContractionToy toy(theta, R0, 65);
  const QuasiStabilityFit fit = toy_fit(eta);
  ConstructionOptions opt;
  opt.resolution = 5e-4;
  const auto sections = build_exponential_attractor(toy, -2, 0, fit, R0, opt);
  CHECK(sections.size() == 3);

  const auto& top = sections.back();
  for (std::size_t ik = 0; ik < top.nets.size(); ++ik) {
    const int k = static_cast<int>(ik) + 1;
    // image is the interval [-theta^k, theta^k] of width 2 theta^k; minimal
    // covering by radius-r intervals (length 2r) needs ceil(theta^k / r)
    const double half_width = std::pow(theta, k);
    const double r = top.level_radius[ik];
    const int exact =
        std::max(1, static_cast<int>(std::ceil(half_width / r - 1e-12)));
    const int got = static_cast<int>(top.nets[ik].size());
    CHECK(got >= exact);
    CHECK(got <= 2 * exact + 1);
  }

  SUBCASE("attraction defect at level one respects the covering radius") {
    PointCloud base = toy.base_sample(top.n - 1);
    auto image = toy.advance(base.states, top.n - 1, top.n);
    PointCloud image_cloud(top.time, toy.metric());
    for (auto& z : image) image_cloud.states.push_back(z);
    CHECK(hausdorff_semidist(image_cloud, top.assembled) <=
          top.level_radius[0] + 1e-12);
  }
  SUBCASE("one-step semi-invariance stays within the deepest radius") {
    const auto& mid = sections[1];
    auto moved = toy.advance(mid.assembled.states, mid.n, top.n);
    PointCloud moved_cloud(top.time, toy.metric());
    for (auto& z : moved) moved_cloud.states.push_back(z);
    CHECK(hausdorff_semidist(moved_cloud, top.assembled) <=
          top.level_radius.back() + 1e-12);
  }
  SUBCASE("cardinality budget with a measured packing count") {
    for (std::size_t ik = 0; ik < top.e_sets.size(); ++ik) {
      const double budget = std::pow(6.0, static_cast<double>(ik) + 2);
      CHECK(static_cast<double>(top.e_sets[ik].size()) <= budget);
    }
  }
  SUBCASE("transport preserves cardinality and is the identity on the grid") {
    const PointCloud same = transport_section(top, top.time, toy);
    CHECK(same.size() == top.assembled.size());
    const PointCloud later = transport_section(top, top.time + 0.5, toy);
    CHECK(later.size() == top.assembled.size());
    // a Lipschitz image cannot raise the box dimension much
    std::vector<double> radii;
    for (int j = 1; j <= 7; ++j) radii.push_back(std::pow(2.0, -j));
    const DimensionEstimate d0 = box_counting_dim(top.assembled, radii);
    const DimensionEstimate d1 = box_counting_dim(later, radii);
    if (!d0.degenerate && !d1.degenerate)
      CHECK(d1.estimate <= d0.estimate + 0.3);
  }
}

TEST_CASE("net budget explosion is flagged as an eta misfit") {
  // declared contraction far stronger than the true map
  ContractionToy toy(0.9, 1.0, 129);
  QuasiStabilityFit fit = toy_fit(0.05);
  ConstructionOptions opt;
  opt.resolution = 1e-4;
  opt.m_budget = 2.0;  // tiny budget: 2^k per level
  CHECK_THROWS_WITH_AS(build_exponential_attractor(toy, -1, 0, fit, 1.0, opt),
                       doctest::Contains("misfit"), std::runtime_error);
}

TEST_CASE("dimension bound formula and packing") {
  CHECK(dimension_bound_formula(0.25, 16.0) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(dimension_bound_formula(0.1, 16.0) < 4.0);  // stronger contraction
  CHECK_THROWS_AS(dimension_bound_formula(0.6, 16.0), std::invalid_argument);

  ModelConfig cfg = small_default();
  QuasiStabilityFit fit = toy_fit(0.2);
  fit.L_semi = 2.0;
  fit.seminorm_scale = 1.5;
  PackingEstimate packing;
  const double bound =
      dimension_bound(fit, cfg.metric_eps1(), 11, &packing);
  CHECK(packing.m >= 2);
  CHECK(bound > 0.0);
  CHECK(bound == doctest::Approx(dimension_bound_formula(fit.eta, packing.m)));

  fit.seminorm_scale = 0.0;  // unresolved seminorm
  CHECK_THROWS_AS(dimension_bound(fit, cfg.metric_eps1(), 11, nullptr),
                  std::invalid_argument);
}

TEST_CASE("gamma distance") {
  ModelConfig cfg = small_default();
  const EvolutionSpec spec = heavy_spec();
  SUBCASE("coincident parameters give zero") {
    const GammaEstimate g =
        gamma_distance(0.5, 0.5, cfg, spec, 0.0, 2.0, 1.0, 2, 2, 4, 3);
    CHECK(g.value == 0.0);
  }
  SUBCASE("scales linearly and symmetrically in the parameter gap") {
    const GammaEstimate g1 =
        gamma_distance(0.52, 0.5, cfg, spec, 0.0, 2.0, 1.0, 2, 3, 6, 3);
    const GammaEstimate g2 =
        gamma_distance(0.54, 0.5, cfg, spec, 0.0, 2.0, 1.0, 2, 3, 6, 3);
    CHECK(g2.value / g1.value == doctest::Approx(2.0).epsilon(0.5));
    const GammaEstimate g1r =
        gamma_distance(0.5, 0.52, cfg, spec, 0.0, 2.0, 1.0, 2, 3, 6, 3);
    CHECK(std::abs(g1.value - g1r.value) <=
          0.10 * 0.5 * (g1.value + g1r.value));
  }
}

TEST_CASE("holder fit recovers a synthetic power law") {
  std::vector<double> grid, dists, gammas;
  const double eps0 = 0.5;
  for (double d : {0.004, 0.008, 0.016, 0.032, 0.064}) {
    grid.push_back(eps0 + d);
    dists.push_back(0.3 * std::pow(d, 0.8));
    gammas.push_back(0.5 * d / 0.064);
  }
  grid.push_back(eps0);  // excluded: zero distance
  dists.push_back(0.0);
  gammas.push_back(0.0);
  const HolderFit hf = holder_continuity_fit(grid, eps0, dists, gammas);
  CHECK(hf.gamma == doctest::Approx(0.8).epsilon(1e-6));
  CHECK(hf.quality == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(hf.points_used == 5);

  std::vector<double> bad_gammas(grid.size(), 2.0);  // all outside validity
  CHECK_THROWS_AS(holder_continuity_fit(grid, eps0, dists, bad_gammas),
                  std::invalid_argument);
}
