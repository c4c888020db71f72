#pragma once

#include <vector>

#include "tdwave/rho.hpp"
#include "tdwave/state.hpp"

namespace tdwave {

// Evaluates the time-dependent product norms
//   ||(u,v)||^2 = ||u||^2_{sigma+1} + eps * rho(t) * ||v||^2_sigma,
// with the modal norm ||w||^2_s = sum_k lambda_k^s w_k^2.
struct PhaseMetric {
  double epsilon = 1.0;
  double sigma = 0.0;
  RhoProfile rho;
  std::vector<double> eigenvalues;

  PhaseMetric() = default;
  PhaseMetric(double eps, double sig, RhoProfile r, std::vector<double> eigs);

  double rho_eps(double t) const { return epsilon * rho.value(t); }

  double norm_sq(const ModalState& z, double t) const;
  double norm(const ModalState& z, double t) const;
  double dist(const ModalState& a, const ModalState& b, double t) const;
  double dist_sq(const ModalState& a, const ModalState& b, double t) const;

  // u-component / v-component pieces of the product norm
  double u_norm_sq(const ModalState& z) const;  // ||u||^2_{sigma+1}
  double v_norm_sq(const ModalState& z) const;  // ||v||^2_sigma

  PhaseMetric with_epsilon(double eps) const;
  PhaseMetric with_sigma(double sig) const;

  bool compatible(const PhaseMetric& o) const;

  // cached lambda^{sigma+1}, lambda^{sigma}
  const std::vector<double>& u_weights() const { return wu_; }
  const std::vector<double>& v_weights() const { return wv_; }

 private:
  std::vector<double> wu_, wv_;
  void build_weights();
};

}  // namespace tdwave
