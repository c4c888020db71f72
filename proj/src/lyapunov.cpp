#include "tdwave/lyapunov.hpp"

#include <cmath>
#include <stdexcept>

namespace tdwave {

LyapunovConfig make_lyapunov_config(Functional which, double delta,
                                    const ModelConfig& cfg) {
  if (!(delta >= 0.0) || delta >= 1.0)
    throw std::invalid_argument("LyapunovConfig: delta outside [0, 1)");
  const double lam1 = cfg.eigenvalues()[0];
  const double Lb = cfg.rho.L_bound;
  // |2 rho_eps <u_t, A^s u>| <= rho_eps ||u_t||_s^2 + Lb/lam1 ||u||_{s+1}^2 and
  // alpha ||u||_s^2 <= alpha/lam1 ||u||_{s+1}^2, so the delta block stays below
  // half of the quadratic part whenever
  const double budget = delta * (1.0 + (Lb + cfg.alpha) / lam1);
  if (budget > 0.5)
    throw std::invalid_argument(
        "LyapunovConfig: delta too large for the norm sandwich");
  return LyapunovConfig{which, delta};
}

double lyapunov_eval(const ModalState& z, double t, const ModelConfig& cfg,
                     const LyapunovConfig& lycfg) {
  if (z.modes() != static_cast<std::size_t>(cfg.n_modes))
    throw std::invalid_argument("lyapunov_eval: state size mismatch");
  const auto lam = cfg.eigenvalues();
  const double re = cfg.epsilon * cfg.rho.value(t);
  const double delta = lycfg.delta;
  const bool has_g = !cfg.g_modes.empty();
  const int n = cfg.n_modes;

  switch (lycfg.which) {
    case Functional::phi: {
      // sigma = 1/3 scale
      std::vector<double> fu = nonlinear_modal(z.u, cfg);
      double ut_13 = 0, u_43 = 0, cross_f = 0, cross = 0, u_13 = 0;
      for (int k = 0; k < n; ++k) {
        const double l13 = std::pow(lam[k], 1.0 / 3.0);
        const double l43 = std::pow(lam[k], 4.0 / 3.0);
        ut_13 += l13 * z.v[k] * z.v[k];
        u_43 += l43 * z.u[k] * z.u[k];
        u_13 += l13 * z.u[k] * z.u[k];
        const double gk = has_g ? cfg.g_modes[k] : 0.0;
        cross_f += (fu[k] - gk) * l13 * z.u[k];
        cross += z.v[k] * l13 * z.u[k];
      }
      return re * ut_13 + u_43 + 2.0 * cross_f +
             delta * (2.0 * re * cross + cfg.alpha * u_13);
    }
    case Functional::lambda_fn: {
      double u_2 = 0, ut_1 = 0, g_cross = 0, cross = 0, u_1 = 0;
      for (int k = 0; k < n; ++k) {
        u_2 += lam[k] * lam[k] * z.u[k] * z.u[k];
        ut_1 += lam[k] * z.v[k] * z.v[k];
        u_1 += lam[k] * z.u[k] * z.u[k];
        const double gk = has_g ? cfg.g_modes[k] : 0.0;
        g_cross += gk * lam[k] * z.u[k];
        cross += z.v[k] * lam[k] * z.u[k];
      }
      return u_2 + re * ut_1 - 2.0 * g_cross +
             delta * (2.0 * re * cross + cfg.alpha * u_1);
    }
    case Functional::psi: {
      double wt = 0, w_1 = 0, cross = 0, w_0 = 0;
      for (int k = 0; k < n; ++k) {
        wt += z.v[k] * z.v[k];
        w_1 += lam[k] * z.u[k] * z.u[k];
        w_0 += z.u[k] * z.u[k];
        cross += z.v[k] * z.u[k];
      }
      return re * wt + w_1 + delta * (2.0 * re * cross + cfg.alpha * w_0);
    }
  }
  return 0.0;
}

}  // namespace tdwave
