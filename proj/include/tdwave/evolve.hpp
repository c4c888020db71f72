#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "tdwave/cloud.hpp"
#include "tdwave/model.hpp"

namespace tdwave {

enum class Integrator { rk4, trapezoid };

// Time-stepping policy. The explicit step is capped by the stability limit of
// the first-order wave system, whose spectral radius grows like
// sqrt(lambda_N / (eps rho(t))) in the oscillatory part and
// alpha / (eps rho(t)) in the damped part.
struct EvolutionSpec {
  Integrator integrator = Integrator::rk4;
  double dt_base = 1e-3;
  double safety = 0.5;
  double stab_margin = 2.5;     // fraction of the RK4 stability interval used
  double record_stride = 0.05;  // trajectory sampling cadence (time units)
  long max_steps = 100000000;   // per-window step budget

  double effective_dt(double t, const ModelConfig& cfg) const;
};

struct TrajectorySample {
  std::vector<double> times;
  std::vector<ModalState> states;

  std::size_t size() const { return times.size(); }
};

// U(t, tau) z. U(tau, tau) is the identity exactly.
ModalState evolve(const ModalState& z, double tau, double t,
                  const ModelConfig& cfg, const EvolutionSpec& spec);

struct EvolveStats {
  ModalState end;
  double ut_sq_integral = 0.0;  // int_tau^t ||u_t||^2 ds (L2 norm of v)
  long steps = 0;
};

// Single evolution with per-node recording (record_stride cadence, endpoints
// included) and the dissipation integral accumulated along the way.
EvolveStats evolve_recorded(const ModalState& z, double tau, double t,
                            const ModelConfig& cfg, const EvolutionSpec& spec,
                            TrajectorySample* record);

struct PairResult {
  ModalState a, b;
  TrajectorySample diff;  // (u1-u2, u1t-u2t) at record nodes
};

// Both trajectories advanced on one shared step grid; the recorded difference
// carries the compact-seminorm data.
PairResult evolve_pair(const ModalState& z1, const ModalState& z2, double tau,
                       double t, const ModelConfig& cfg,
                       const EvolutionSpec& spec);

struct SplitResult {
  ModalState v_part;  // solves eps rho v_tt + alpha v_t + A v + f0(v) = 0, data z
  ModalState w_part;  // driven by f(u) - f0(v) and g, zero data
  ModalState full;    // the full solution, integrated on the same grid
};

SplitResult split_evolve(const ModalState& z, double tau, double t,
                         const ModelConfig& cfg, const EvolutionSpec& spec);

struct SplitCurve {
  std::vector<double> times;
  std::vector<double> v_norm;    // H_t norm of the decaying part
  std::vector<double> w13_norm;  // sigma = 1/3 norm of the driven part
  double sum_defect = 0.0;       // worst ||(v+w) - u||_{H_t} over the grid
  SplitResult end;
};

SplitCurve split_evolve_curve(const ModalState& z, double tau,
                              const std::vector<double>& t_grid,
                              const ModelConfig& cfg,
                              const EvolutionSpec& spec);

// || U_{e1}(t,tau) z - U_{e2}(t,tau) z ||_{H_t} / |e1 - e2|, distances in the
// reference (eps = 1) norm.
double lipschitz_in_eps(const ModalState& z, double tau, double t, double eps1,
                        double eps2, const ModelConfig& cfg,
                        const EvolutionSpec& spec);

// Pointwise image of a cloud under U(t, cloud.time); trajectories are
// independent substreams so the result is thread-count invariant.
PointCloud evolve_cloud(const PointCloud& cloud, double t,
                        const ModelConfig& cfg, const EvolutionSpec& spec);

// Ensemble curves: per grid time, the sup over members of the H_t norm taken
// in `norm_metric` (pass the eps = 1 metric for universe-level statements).
struct EnsembleCurve {
  std::vector<double> times;
  std::vector<double> sup_norm;
  std::vector<double> ut_sq_integral_full;  // per member
  std::vector<double> ut_sq_integral_half;
};

EnsembleCurve ensemble_sup_curve(const PointCloud& start,
                                 const std::vector<double>& t_grid,
                                 const PhaseMetric& norm_metric,
                                 const ModelConfig& cfg,
                                 const EvolutionSpec& spec);

}  // namespace tdwave
