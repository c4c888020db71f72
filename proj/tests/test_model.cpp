#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "tdwave/model.hpp"
#include "tdwave/rng.hpp"

using namespace tdwave;

namespace {

ModelConfig small_model(int n = 8) {
  ModelConfig cfg;
  cfg.n_modes = n;
  cfg.g_modes = single_mode_forcing(cfg, 1, 1.0);
  return cfg;
}

}  // namespace

TEST_CASE("eigenvalues on (0, pi)") {
  ModelConfig cfg = small_model();
  const auto lam = cfg.eigenvalues();
  CHECK(lam[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(lam[3] == doctest::Approx(16.0).epsilon(1e-13));
}

TEST_CASE("sine transform round trip is exact") {
  ModelConfig cfg = small_model();
  SineTransform tf(cfg.n_modes, cfg.domain_length);
  auto rng = make_stream(3, "transform");
  std::vector<double> u(cfg.n_modes), phys(tf.n_grid), back(cfg.n_modes);
  for (auto& x : u) x = rng.gaussian();
  tf.to_grid(u, phys);
  tf.to_modes(phys, back);
  for (int k = 0; k < cfg.n_modes; ++k)
    CHECK(back[k] == doctest::Approx(u[k]).epsilon(1e-13));
}

TEST_CASE("pseudo-spectral cubic image matches the trig identity") {
  // u = a sin(x): u^3 = (3a^3/4) sin(x) - (a^3/4) sin(3x)
  ModelConfig cfg = small_model();
  const double a = 1.7;
  const double amp = a * std::sqrt(cfg.domain_length / 2.0);
  std::vector<double> u(cfg.n_modes, 0.0);
  u[0] = amp;
  const auto out = nonlinear_modal(u, cfg);
  const double scale = std::sqrt(cfg.domain_length / 2.0);
  CHECK(out[0] == doctest::Approx(0.75 * a * a * a * scale).epsilon(1e-10));
  CHECK(out[2] == doctest::Approx(-0.25 * a * a * a * scale).epsilon(1e-10));
  for (int k : {1, 3, 4, 5, 6, 7}) CHECK(std::abs(out[k]) < 1e-12);
}

TEST_CASE("cubic image agrees with dense quadrature on mixed data") {
  ModelConfig cfg = small_model();
  auto rng = make_stream(4, "quadrature");
  std::vector<double> u(cfg.n_modes, 0.0);
  u[0] = rng.gaussian();
  u[1] = 0.5 * rng.gaussian();
  u[2] = 0.25 * rng.gaussian();
  const auto out = nonlinear_modal(u, cfg);
  for (int k = 0; k < 5; ++k) {
    const double q = oracle::modal_of_f_quadrature(cfg, u, k);
    CHECK(out[k] == doctest::Approx(q).epsilon(1e-7));
  }
}

TEST_CASE("zero and linear kinds short-circuit exactly") {
  ModelConfig cfg = small_model();
  cfg.nonlinearity = make_nonlinearity("zero");
  std::vector<double> u = {1.0, -2.0, 0.5, 0, 0, 0, 0, 0};
  for (double x : nonlinear_modal(u, cfg)) CHECK(x == 0.0);

  cfg.nonlinearity = make_nonlinearity("linear", {2.5});
  const auto out = nonlinear_modal(u, cfg);
  for (int k = 0; k < cfg.n_modes; ++k) CHECK(out[k] == 2.5 * u[k]);
}

TEST_CASE("dealiasing: no spurious energy beyond mode 3k") {
  ModelConfig cfg = small_model(10);
  cfg.g_modes.clear();
  std::vector<double> u(cfg.n_modes, 0.0);
  u[1] = 0.8;  // mode 2; cube reaches mode 6
  const auto out = nonlinear_modal(u, cfg);
  for (int k = 6; k < cfg.n_modes; ++k) CHECK(std::abs(out[k]) <= 1e-12);
}

TEST_CASE("rhs structure") {
  ModelConfig cfg = small_model();

  SUBCASE("zero state with zero forcing is stationary") {
    cfg.g_modes.clear();
    ModalState z(cfg.n_modes, 0.0);
    const ModalState d = rhs(z, 0.0, cfg);
    for (int k = 0; k < cfg.n_modes; ++k) {
      CHECK(d.u[k] == 0.0);
      CHECK(d.v[k] == 0.0);
    }
  }
  SUBCASE("linear single-mode balance") {
    cfg.nonlinearity = make_nonlinearity("zero");
    cfg.g_modes.clear();
    cfg.epsilon = 0.5;
    ModalState z(cfg.n_modes, 0.0);
    z.u[2] = 1.2;
    z.v[2] = -0.3;
    const double t = -1.0;
    const ModalState d = rhs(z, t, cfg);
    const double lam3 = cfg.eigenvalues()[2];
    const double expected =
        (-cfg.alpha * z.v[2] - lam3 * z.u[2]) / (cfg.epsilon * cfg.rho.value(t));
    CHECK(d.u[2] == doctest::Approx(z.v[2]));
    CHECK(d.v[2] == doctest::Approx(expected).epsilon(1e-14));
  }
  SUBCASE("linearity in the forcing") {
    auto rng = make_stream(5, "rhs-g");
    ModalState z(cfg.n_modes, 0.0);
    for (int k = 0; k < cfg.n_modes; ++k) {
      z.u[k] = rng.gaussian();
      z.v[k] = rng.gaussian();
    }
    ModelConfig c0 = cfg, c1 = cfg, c2 = cfg, c12 = cfg;
    c0.g_modes.assign(cfg.n_modes, 0.0);
    c1.g_modes = single_mode_forcing(cfg, 1, 1.0);
    c2.g_modes = single_mode_forcing(cfg, 2, -0.7);
    c12.g_modes.resize(cfg.n_modes);
    for (int k = 0; k < cfg.n_modes; ++k)
      c12.g_modes[k] = c1.g_modes[k] + c2.g_modes[k];
    const ModalState d12 = rhs(z, 0.0, c12);
    const ModalState d1 = rhs(z, 0.0, c1);
    const ModalState d2 = rhs(z, 0.0, c2);
    const ModalState d0 = rhs(z, 0.0, c0);
    for (int k = 0; k < cfg.n_modes; ++k)
      CHECK(d12.v[k] - d1.v[k] - d2.v[k] + d0.v[k] ==
            doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("mass floor breach names the offending time") {
    cfg.rho = RhoProfile::logistic();
    ModalState z(cfg.n_modes, 0.0);
    CHECK_THROWS_WITH_AS(rhs(z, 40.0, cfg),
                         doctest::Contains("below floor"), std::runtime_error);
  }
}

TEST_CASE("splitting consistency on dense samples") {
  for (const char* name : {"cubic", "cubic_minus_s", "zero", "linear"}) {
    const NonlinearitySpec nl = make_nonlinearity(name);
    auto rng = make_stream(6, "split-sample");
    for (int i = 0; i < 10000; ++i) {
      const double s = rng.uniform(-60.0, 60.0);
      CHECK(std::abs(nl.f(s) - nl.f0(s) - nl.f1(s)) <= 1e-12 * (1 + std::abs(nl.f(s))));
    }
  }
}

TEST_CASE("assumption validator") {
  SUBCASE("default cubic passes everything") {
    ModelConfig cfg = small_model();
    const AssumptionReport rep = validate_assumptions(cfg, -60.0, 60.0, 6001);
    CHECK(rep.all_pass);
    CHECK(rep.find("dissipation_c1")->observed <= 0.0 + 1e-12);
  }
  SUBCASE("steep negative linear slope fails the liminf condition") {
    ModelConfig cfg = small_model();
    cfg.nonlinearity = make_nonlinearity("linear", {-2.0});  // -2 lambda_1
    const AssumptionReport rep = validate_assumptions(cfg, -60.0, 60.0, 6001);
    CHECK_FALSE(rep.all_pass);
    CHECK_FALSE(rep.find("liminf_f_over_s")->pass);
  }
  SUBCASE("zero nonlinearity passes with c1 = 0") {
    ModelConfig cfg = small_model();
    cfg.nonlinearity = make_nonlinearity("zero");
    const AssumptionReport rep = validate_assumptions(cfg, -60.0, 60.0, 6001);
    CHECK(rep.all_pass);
    CHECK(rep.find("dissipation_c1")->observed <= 1e-12);
  }
  SUBCASE("double-well split is admissible") {
    ModelConfig cfg = small_model();
    cfg.nonlinearity = make_nonlinearity("cubic_minus_s");
    const AssumptionReport rep = validate_assumptions(cfg, -60.0, 60.0, 6001);
    CHECK(rep.all_pass);
  }
  SUBCASE("narrow sample range is rejected") {
    ModelConfig cfg = small_model();
    CHECK_THROWS_AS(validate_assumptions(cfg, -10.0, 10.0), std::invalid_argument);
  }
}
