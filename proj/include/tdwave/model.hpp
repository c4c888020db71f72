#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tdwave/metric.hpp"
#include "tdwave/nonlinearity.hpp"
#include "tdwave/rho.hpp"
#include "tdwave/state.hpp"

namespace tdwave {

// Spectral Galerkin semidiscretization of
//   eps rho(t) u_tt + alpha u_t + A u + f(u) = g
// on (0, domain_length) with Dirichlet ends and sine eigenbasis,
// lambda_k = (k pi / L)^2.
struct ModelConfig {
  double domain_length = 3.14159265358979323846;
  int n_modes = 32;
  double alpha = 1.0;
  double epsilon = 1.0;
  std::vector<double> g_modes;  // orthonormal-basis coefficients of g
  RhoProfile rho = RhoProfile::logistic();
  NonlinearitySpec nonlinearity = make_nonlinearity("cubic");
  double rho_floor = 1e-6;  // integration refuses below eps*rho(t) < floor

  std::vector<double> eigenvalues() const;
  double lambda_max() const;
  PhaseMetric metric(double sigma = 0.0) const;          // uses cfg epsilon
  PhaseMetric metric_eps1(double sigma = 0.0) const;     // reference H_t norm
  ModelConfig with_epsilon(double eps) const;

  void validate() const;  // throws on structurally invalid parameters
};

// Forcing g(x) = amp * sin(k pi x / L), returned in orthonormal coordinates.
std::vector<double> single_mode_forcing(const ModelConfig& cfg, int mode_k,
                                        double amp);

// Sine transform between modal coefficients and a dealiasing physical grid of
// n_grid >= 2 n_modes + 1 interior points (default 4 n_modes: pointwise cubic
// images are band-limited within the grid, so the truncation is alias-free).
struct SineTransform {
  int n_modes = 0;
  int n_grid = 0;
  double L = 0.0;

  SineTransform() = default;
  SineTransform(int modes, double domain_length, int grid = 0);

  void to_grid(std::span<const double> modal, std::span<double> phys) const;
  void to_modes(std::span<const double> phys, std::span<double> modal) const;

 private:
  std::vector<double> table_;  // sin((k+1)(j+1) pi / (n_grid+1)), row k
  double fwd_scale_ = 0.0, inv_scale_ = 0.0;
};

// Dealiased pseudo-spectral image of f(u); zero/linear kinds short-circuit to
// the exact identity.
class WaveEngine {
 public:
  explicit WaveEngine(const ModelConfig& cfg);

  const ModelConfig& config() const { return *cfg_; }
  const std::vector<double>& lambdas() const { return lambda_; }

  void nonlinear_modal(std::span<const double> u, std::span<double> out) const;

  // du = v, dv = (-alpha v - Lambda u - f(u) + g) / (eps rho(t))
  void rhs(double t, std::span<const double> u, std::span<const double> v,
           std::span<double> du, std::span<double> dv) const;

  // rhs of the split systems: v-part uses f0 and no forcing; w-part is driven
  // by f(u) - f0(v) + g from zero data.
  void rhs_vpart(double t, std::span<const double> u, std::span<const double> v,
                 std::span<double> du, std::span<double> dv) const;
  void rhs_wpart(double t, std::span<const double> wu, std::span<const double> wv,
                 std::span<const double> full_u, std::span<const double> vpart_u,
                 std::span<double> du, std::span<double> dv) const;

  double mass(double t) const;  // eps rho(t), throws below the floor

 private:
  const ModelConfig* cfg_;
  std::vector<double> lambda_;
  SineTransform tf_;
  mutable std::vector<double> phys_, scratch_;
};

std::vector<double> nonlinear_modal(std::span<const double> u,
                                    const ModelConfig& cfg);

ModalState rhs(const ModalState& z, double t, const ModelConfig& cfg);

// Samples the nonlinearity assumptions over [range_lo, range_hi]:
// growth |f''| <= c(1+|s|), liminf f(s)/s > -lambda_1, the dissipation
// inequality 2 f(s) s >= F(s) - nu s^2 - c1, the splitting conditions, and
// basic parameter sanity. Failures are reported, never thrown.
AssumptionReport validate_assumptions(const ModelConfig& cfg, double range_lo,
                                      double range_hi, int samples = 20001);

}  // namespace tdwave
