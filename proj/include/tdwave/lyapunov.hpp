#pragma once

#include "tdwave/model.hpp"
#include "tdwave/state.hpp"

namespace tdwave {

enum class Functional { phi, lambda_fn, psi };

// Multiplier-weighted energy functionals along solutions:
//   phi    : rho_eps ||u_t||^2_{1/3} + ||u||^2_{4/3} + 2<f(u)-g, A^{1/3}u>
//            + delta [ 2 rho_eps <u_t, A^{1/3}u> + alpha ||u||^2_{1/3} ]
//   lambda : ||u||^2_2 + rho_eps ||u_t||^2_1 - 2<g, Au>
//            + delta [ 2 rho_eps <u_t, Au> + alpha ||u||^2_1 ]
//   psi    : rho_eps ||w_t||^2 + ||w||^2_1
//            + delta [ 2 rho_eps <w_t, w> + alpha ||w||^2 ]   (w a difference)
struct LyapunovConfig {
  Functional which = Functional::psi;
  double delta = 0.01;
};

// Validates that delta keeps the functional norm-equivalent (the delta terms
// are dominated via Cauchy-Schwarz and lambda_1 scaling); throws otherwise.
LyapunovConfig make_lyapunov_config(Functional which, double delta,
                                    const ModelConfig& cfg);

double lyapunov_eval(const ModalState& z, double t, const ModelConfig& cfg,
                     const LyapunovConfig& lycfg);

}  // namespace tdwave
