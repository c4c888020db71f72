#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "tdwave/evolve.hpp"
#include "tdwave/spaces.hpp"

namespace tdwave {

// Two-trajectory contraction estimate over a window of length T:
//   ||diff(t)||_{H_t} <= eta ||diff(t-T)||_{H_{t-T}} + scale * sup_s ||diff_u(s)||
// eta is the envelope slope on the lowest-seminorm decile, `seminorm_scale`
// closes the envelope over all pairs, L_semi bounds the trajectory-space
// (V1 x L2 sup) norm and L1 the within-window Lipschitz constant.
struct QuasiStabilityFit {
  double T = 0.0;
  double eta = 1.0;
  double L_semi = 0.0;
  double seminorm_scale = 0.0;
  double L1 = 2.0;
  bool valid = false;  // eta < 1/2
  int sample_count = 0;
  int violations = 0;      // envelope violations at the fitted (eta, scale)
  double record_stride = 0.0;  // sup-discretization cadence
};

struct PairObservation {
  double d0 = 0.0;        // ||z1 - z2||_{H_{t-T}}
  double d1 = 0.0;        // ||diff(t)||_{H_t}
  double semi_sup = 0.0;  // sup_s ||diff_u(s)||_{L2}
  double z_sup = 0.0;     // sup_s ||(diff_u, diff_v)(s)||_{V1 x L2}
  double window_sup_ratio = 0.0;  // sup_s ||diff(s)||_{H_s} / d0
};

std::vector<PairObservation> observe_pairs(const PointCloud& ball_sample,
                                           double t, double T, int n_pairs,
                                           const ModelConfig& cfg,
                                           const EvolutionSpec& spec,
                                           std::uint64_t seed);

QuasiStabilityFit fit_quasi_stability(const std::vector<PairObservation>& obs,
                                      double T, double record_stride);

int count_envelope_violations(const QuasiStabilityFit& fit,
                              const std::vector<PairObservation>& obs,
                              double slack = 1e-12);

// Samples n_pairs random pairs from the ball sample at t - T and fits (eta,
// L, scale). Throws if fewer than 10 admissible pairs are available or T <= 0.
QuasiStabilityFit estimate_quasi_stability(const PointCloud& ball_sample,
                                           double t, double T, int n_pairs,
                                           const ModelConfig& cfg,
                                           const EvolutionSpec& spec,
                                           std::uint64_t seed);

// Discrete process on the grid t_n = n * T: the abstract input of the
// covering induction. The wave realization evolves modal states; tests may
// supply toy contractions.
class GridProcess {
 public:
  virtual ~GridProcess() = default;
  virtual double grid_time(int n) const = 0;
  virtual const PhaseMetric& metric() const = 0;  // distance norm (eps = 1)
  virtual PointCloud base_sample(int n) const = 0;  // B(n) sample, eps-independent
  virtual std::vector<ModalState> advance(const std::vector<ModalState>& pts,
                                          int from_n, int to_n) const = 0;
  // fractional-time forward image, t >= grid_time(from_n)
  virtual std::vector<ModalState> transport(const std::vector<ModalState>& pts,
                                            int from_n, double t) const = 0;
};

class WaveGridProcess final : public GridProcess {
 public:
  WaveGridProcess(ModelConfig cfg, EvolutionSpec spec, double T, double R0,
                  int sample_size, std::uint64_t seed);
  double grid_time(int n) const override { return n * T_; }
  const PhaseMetric& metric() const override { return h_; }
  PointCloud base_sample(int n) const override;
  std::vector<ModalState> advance(const std::vector<ModalState>& pts,
                                  int from_n, int to_n) const override;
  std::vector<ModalState> transport(const std::vector<ModalState>& pts,
                                    int from_n, double t) const override;

 private:
  ModelConfig cfg_;
  EvolutionSpec spec_;
  double T_, R0_;
  int sample_size_;
  std::uint64_t seed_;
  PhaseMetric h_;
};

// A constructed point remembers which base-sample member it evolved from, so
// preimages under the reference process are exact bookkeeping.
struct TaggedPoint {
  ModalState z;
  int origin_n = 0;
  int origin_idx = 0;
};

struct ExpAttractorSection {
  int n = 0;
  double time = 0.0;
  std::vector<double> level_radius;                 // 2 R0 (2 eta)^k
  std::vector<std::vector<TaggedPoint>> nets;       // V_k(n)
  std::vector<std::vector<TaggedPoint>> e_sets;     // E_k(n)
  PointCloud assembled;                             // union of the E_k
  double eta_used = 0.0, R0_used = 0.0;
  double dim_bound = 0.0;
  double resolution = 0.0;  // level-stopping threshold
};

struct ConstructionOptions {
  double resolution = 5e-4;   // stop once 2 R0 (2 eta)^k falls below this
  double m_budget = 0.0;      // measured packing count; 0 disables the check
  int max_levels = 64;
};

// Covering induction on [n_lo, n_hi]: level nets V_k(n) are greedy covers of
// the evolved base-sample images at radius 2 R0 (2 eta)^k and
// E_k(n) = V_k(n) u U(n, n-1) E_{k-1}(n-1). The induction is truncated at the
// window start.
std::vector<ExpAttractorSection> build_exponential_attractor(
    const GridProcess& proc, int n_lo, int n_hi, const QuasiStabilityFit& fit,
    double R0, const ConstructionOptions& opt = {});

// Same construction for a perturbed process, reusing the reference nets
// through their exact preimages for levels k <= k_gamma and building its own
// nets beyond.
std::vector<ExpAttractorSection> build_exponential_attractor_shared(
    const GridProcess& proc, const std::vector<ExpAttractorSection>& reference,
    const GridProcess& ref_proc, double gamma_value,
    const QuasiStabilityFit& fit, double R0,
    const ConstructionOptions& opt = {});

// E(t) = U(t, n_t) E(n_t); identity when t equals the section's grid time.
PointCloud transport_section(const ExpAttractorSection& section, double t,
                             const GridProcess& proc);

// k_gamma and the Hoelder exponent induced by (eta, L1, Gamma).
double holder_k_gamma(double gamma_value, double eta, double L1);
double holder_exponent(double eta, double L1);

struct PackingEstimate {
  int m = 0;
  bool saturated = false;  // a full candidate batch added nothing new
  int candidates = 0;
  int dims_active = 0;  // modes able to contribute a separated direction
};

// Greedy packing estimate of the trajectory-space ball of radius 2L/eta under
// the compact seminorm: constant-in-time surrogate restricted to the resolved
// modal subspace.
PackingEstimate estimate_seminorm_packing(const QuasiStabilityFit& fit,
                                          const PhaseMetric& metric,
                                          std::uint64_t seed,
                                          int candidates = 4096,
                                          int kept_cap = 2048);

double dimension_bound_formula(double eta, double m);

// ln m_Z(2L/eta) / ln(1/(2 eta)) with the packing surrogate; throws when the
// fit is invalid or the seminorm is degenerate.
double dimension_bound(const QuasiStabilityFit& fit, const PhaseMetric& metric,
                       std::uint64_t seed, PackingEstimate* packing = nullptr);

struct GammaEstimate {
  double value = 0.0;
  int t_count = 0, s_count = 0, x_count = 0;
};

// sup over sampled (t <= t0, s in (0, T], x in B(t-s)) of
// ||U_eps(t, t-s) x - U_eps0(t, t-s) x||_{H_t}.
GammaEstimate gamma_distance(double eps, double eps0, const ModelConfig& cfg,
                             const EvolutionSpec& spec, double t0, double T,
                             double ball_radius, int t_count, int s_count,
                             int x_count, std::uint64_t seed);

struct HolderFit {
  double eps0 = 0.0;
  double gamma = 0.0;
  double C_fit = 0.0;
  double delta_validity = 0.0;  // |eps - eps0| range with Gamma < 1
  double quality = 0.0;
  int points_used = 0;
};

// Log-log regression of the symmetric section distance against |eps - eps0|,
// restricted to grid points with Gamma(eps, eps0) < 1.
HolderFit holder_continuity_fit(const std::vector<double>& eps_grid,
                                double eps0,
                                const std::vector<double>& sym_distances,
                                const std::vector<double>& gamma_values);

}  // namespace tdwave
