#include "tdwave/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace tdwave {

static constexpr double kPi = 3.14159265358979323846;

std::vector<double> ModelConfig::eigenvalues() const {
  std::vector<double> lam(n_modes);
  for (int k = 0; k < n_modes; ++k) {
    const double w = (k + 1) * kPi / domain_length;
    lam[k] = w * w;
  }
  return lam;
}

double ModelConfig::lambda_max() const {
  const double w = n_modes * kPi / domain_length;
  return w * w;
}

PhaseMetric ModelConfig::metric(double sigma) const {
  return PhaseMetric(epsilon, sigma, rho, eigenvalues());
}

PhaseMetric ModelConfig::metric_eps1(double sigma) const {
  return PhaseMetric(1.0, sigma, rho, eigenvalues());
}

ModelConfig ModelConfig::with_epsilon(double eps) const {
  ModelConfig c = *this;
  c.epsilon = eps;
  return c;
}

void ModelConfig::validate() const {
  if (n_modes < 1) throw std::invalid_argument("ModelConfig: n_modes < 1");
  if (!(domain_length > 0))
    throw std::invalid_argument("ModelConfig: domain_length <= 0");
  if (alpha < 0) throw std::invalid_argument("ModelConfig: alpha < 0");
  if (!(epsilon > 0) || epsilon > 1)
    throw std::invalid_argument("ModelConfig: epsilon outside (0, 1]");
  if (!g_modes.empty() && g_modes.size() != static_cast<std::size_t>(n_modes))
    throw std::invalid_argument("ModelConfig: g_modes length mismatch");
  if (!(rho_floor > 0))
    throw std::invalid_argument("ModelConfig: rho_floor <= 0");
}

std::vector<double> single_mode_forcing(const ModelConfig& cfg, int mode_k,
                                        double amp) {
  if (mode_k < 1 || mode_k > cfg.n_modes)
    throw std::invalid_argument("single_mode_forcing: mode out of range");
  std::vector<double> g(cfg.n_modes, 0.0);
  // physical amplitude `amp` on sin(k pi x / L); orthonormal coefficient
  g[mode_k - 1] = amp * std::sqrt(cfg.domain_length / 2.0);
  return g;
}

SineTransform::SineTransform(int modes, double domain_length, int grid)
    : n_modes(modes), n_grid(grid > 0 ? grid : 4 * modes), L(domain_length) {
  if (n_grid < 2 * n_modes + 1)
    throw std::invalid_argument("SineTransform: grid too small for dealiasing");
  table_.resize(static_cast<std::size_t>(n_modes) * n_grid);
  for (int k = 0; k < n_modes; ++k)
    for (int j = 0; j < n_grid; ++j)
      table_[static_cast<std::size_t>(k) * n_grid + j] =
          std::sin((k + 1.0) * (j + 1.0) * kPi / (n_grid + 1.0));
  fwd_scale_ = std::sqrt(2.0 / L);
  inv_scale_ = std::sqrt(2.0 / L) * L / (n_grid + 1.0);
}

void SineTransform::to_grid(std::span<const double> modal,
                            std::span<double> phys) const {
  for (int j = 0; j < n_grid; ++j) phys[j] = 0.0;
  for (int k = 0; k < n_modes; ++k) {
    const double c = fwd_scale_ * modal[k];
    if (c == 0.0) continue;
    const double* row = table_.data() + static_cast<std::size_t>(k) * n_grid;
    for (int j = 0; j < n_grid; ++j) phys[j] += c * row[j];
  }
}

void SineTransform::to_modes(std::span<const double> phys,
                             std::span<double> modal) const {
  for (int k = 0; k < n_modes; ++k) {
    const double* row = table_.data() + static_cast<std::size_t>(k) * n_grid;
    double acc = 0.0;
    for (int j = 0; j < n_grid; ++j) acc += phys[j] * row[j];
    modal[k] = inv_scale_ * acc;
  }
}

WaveEngine::WaveEngine(const ModelConfig& cfg)
    : cfg_(&cfg), lambda_(cfg.eigenvalues()),
      tf_(cfg.n_modes, cfg.domain_length) {
  cfg.validate();
  phys_.resize(tf_.n_grid);
  scratch_.resize(cfg.n_modes);
}

double WaveEngine::mass(double t) const {
  const double m = cfg_->epsilon * cfg_->rho.value(t);
  if (m < cfg_->rho_floor) {
    std::ostringstream os;
    os << "eps*rho(t) = " << m << " below floor " << cfg_->rho_floor
       << " at t = " << t << " (degenerate-mass regime)";
    throw std::runtime_error(os.str());
  }
  return m;
}

void WaveEngine::nonlinear_modal(std::span<const double> u,
                                 std::span<double> out) const {
  const auto& nl = cfg_->nonlinearity;
  const int n = cfg_->n_modes;
  switch (nl.kind) {
    case NonlinKind::zero:
      for (int k = 0; k < n; ++k) out[k] = 0.0;
      return;
    case NonlinKind::linear:
      for (int k = 0; k < n; ++k) out[k] = nl.c_lin * u[k];
      return;
    default:
      break;
  }
  tf_.to_grid(u, phys_);
  for (auto& x : phys_) x = nl.f(x);
  tf_.to_modes(phys_, out);
}

void WaveEngine::rhs(double t, std::span<const double> u,
                     std::span<const double> v, std::span<double> du,
                     std::span<double> dv) const {
  const double m = mass(t);
  const int n = cfg_->n_modes;
  nonlinear_modal(u, scratch_);
  const bool has_g = !cfg_->g_modes.empty();
  for (int k = 0; k < n; ++k) {
    du[k] = v[k];
    double force = -cfg_->alpha * v[k] - lambda_[k] * u[k] - scratch_[k];
    if (has_g) force += cfg_->g_modes[k];
    dv[k] = force / m;
  }
}

void WaveEngine::rhs_vpart(double t, std::span<const double> u,
                           std::span<const double> v, std::span<double> du,
                           std::span<double> dv) const {
  const double m = mass(t);
  const auto& nl = cfg_->nonlinearity;
  const int n = cfg_->n_modes;
  // f0 image: zero for the zero/linear kinds, cubic otherwise
  if (nl.kind == NonlinKind::zero || nl.kind == NonlinKind::linear) {
    for (int k = 0; k < n; ++k) scratch_[k] = 0.0;
  } else {
    tf_.to_grid(u, phys_);
    for (auto& x : phys_) x = nl.f0(x);
    tf_.to_modes(phys_, scratch_);
  }
  for (int k = 0; k < n; ++k) {
    du[k] = v[k];
    dv[k] = (-cfg_->alpha * v[k] - lambda_[k] * u[k] - scratch_[k]) / m;
  }
}

void WaveEngine::rhs_wpart(double t, std::span<const double> wu,
                           std::span<const double> wv,
                           std::span<const double> full_u,
                           std::span<const double> vpart_u,
                           std::span<double> du, std::span<double> dv) const {
  const double m = mass(t);
  const auto& nl = cfg_->nonlinearity;
  const int n = cfg_->n_modes;
  // driving term f(u) - f0(v_part), evaluated on one shared grid pass
  if (nl.kind == NonlinKind::zero) {
    for (int k = 0; k < n; ++k) scratch_[k] = 0.0;
  } else if (nl.kind == NonlinKind::linear) {
    for (int k = 0; k < n; ++k) scratch_[k] = nl.c_lin * full_u[k];
  } else {
    std::vector<double> phys_v(tf_.n_grid);
    tf_.to_grid(full_u, phys_);
    tf_.to_grid(vpart_u, phys_v);
    for (int j = 0; j < tf_.n_grid; ++j)
      phys_[j] = nl.f(phys_[j]) - nl.f0(phys_v[j]);
    tf_.to_modes(phys_, scratch_);
  }
  const bool has_g = !cfg_->g_modes.empty();
  for (int k = 0; k < n; ++k) {
    du[k] = wv[k];
    double force = -cfg_->alpha * wv[k] - lambda_[k] * wu[k] - scratch_[k];
    if (has_g) force += cfg_->g_modes[k];
    dv[k] = force / m;
  }
}

std::vector<double> nonlinear_modal(std::span<const double> u,
                                    const ModelConfig& cfg) {
  WaveEngine eng(cfg);
  std::vector<double> out(cfg.n_modes);
  eng.nonlinear_modal(u, out);
  return out;
}

ModalState rhs(const ModalState& z, double t, const ModelConfig& cfg) {
  if (z.modes() != static_cast<std::size_t>(cfg.n_modes))
    throw std::invalid_argument("rhs: state size mismatch");
  WaveEngine eng(cfg);
  ModalState d(cfg.n_modes, t);
  eng.rhs(t, z.u, z.v, d.u, d.v);
  return d;
}

AssumptionReport validate_assumptions(const ModelConfig& cfg, double range_lo,
                                      double range_hi, int samples) {
  if (range_lo > -50.0 || range_hi < 50.0)
    throw std::invalid_argument(
        "validate_assumptions: sample range must span at least [-50, 50]");
  const auto& nl = cfg.nonlinearity;
  const double lambda1 = cfg.eigenvalues()[0];
  AssumptionReport rep;
  auto push = [&rep](const std::string& name, bool pass, double obs,
                     double wit) {
    rep.items.push_back({name, pass, obs, wit});
    rep.all_pass = rep.all_pass && pass;
  };

  push("alpha_positive", cfg.alpha > 0.0, cfg.alpha, 0.0);
  push("f_zero_at_zero", nl.f(0.0) == 0.0, nl.f(0.0), 0.0);

  double worst_growth = 0.0, growth_wit = 0.0;
  double min_tail_ratio = 1e300, tail_wit = 0.0;
  double worst_c1 = 0.0, c1_wit = 0.0;
  double worst_split = 0.0, split_wit = 0.0;
  double worst_f0s = 0.0, f0s_wit = 0.0;
  double worst_f1p = 0.0, f1p_wit = 0.0;
  const double h = 1e-5;
  for (int i = 0; i < samples; ++i) {
    const double s = range_lo + (range_hi - range_lo) * i / (samples - 1.0);
    const double ratio = std::abs(nl.fpp(s)) / (1.0 + std::abs(s));
    if (ratio > worst_growth) {
      worst_growth = ratio;
      growth_wit = s;
    }
    if (std::abs(s) >= 0.5 * std::max(std::abs(range_lo), std::abs(range_hi))) {
      const double fr = nl.f(s) / s;
      if (fr < min_tail_ratio) {
        min_tail_ratio = fr;
        tail_wit = s;
      }
    }
    // smallest c1 making 2 f s >= F - nu s^2 - c1 hold at this sample
    const double need = nl.F(s) - 2.0 * nl.f(s) * s - nl.nu * s * s;
    if (need > worst_c1) {
      worst_c1 = need;
      c1_wit = s;
    }
    const double split_gap = std::abs(nl.f(s) - nl.f0(s) - nl.f1(s));
    if (split_gap > worst_split) {
      worst_split = split_gap;
      split_wit = s;
    }
    const double f0s = nl.f0(s) * s;
    if (f0s < worst_f0s) {
      worst_f0s = f0s;
      f0s_wit = s;
    }
    const double f1p = std::abs((nl.f1(s + h) - nl.f1(s - h)) / (2.0 * h));
    if (f1p > worst_f1p) {
      worst_f1p = f1p;
      f1p_wit = s;
    }
  }

  push("growth_fpp", worst_growth <= nl.growth_c * (1.0 + 1e-9), worst_growth,
       growth_wit);
  push("liminf_f_over_s", min_tail_ratio > -lambda1, min_tail_ratio, tail_wit);
  push("nu_in_range", nl.nu > 0.0 && nl.nu < lambda1, nl.nu, 0.0);
  push("dissipation_c1", worst_c1 <= nl.c1 + 1e-9, worst_c1, c1_wit);
  push("split_sum", worst_split <= 1e-12, worst_split, split_wit);
  push("split_f0_zero", nl.f0(0.0) == 0.0 &&
                            std::abs((nl.f0(h) - nl.f0(-h)) / (2.0 * h)) < 1e-8,
       nl.f0(0.0), 0.0);
  push("split_f0_sign", worst_f0s >= -1e-12, worst_f0s, f0s_wit);
  push("split_f1_bounded", std::isfinite(worst_f1p), worst_f1p, f1p_wit);

  // rho assumptions over the same window, tail checked at +range_hi
  const RhoCheck rc = validate_rho(cfg.rho, range_lo, range_hi, 4001, 1e-3);
  push("rho_decreasing", rc.decreasing, rc.worst_slope, 0.0);
  push("rho_bounded", rc.bounded, rc.sup_abs, 0.0);
  push("rho_tail", rc.tail_ok, rc.tail_value, range_hi);
  return rep;
}

}  // namespace tdwave
