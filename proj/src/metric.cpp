#include "tdwave/metric.hpp"

#include <cmath>
#include <stdexcept>

namespace tdwave {

PhaseMetric::PhaseMetric(double eps, double sig, RhoProfile r,
                         std::vector<double> eigs)
    : epsilon(eps), sigma(sig), rho(std::move(r)), eigenvalues(std::move(eigs)) {
  if (!(epsilon > 0.0) || epsilon > 1.0)
    throw std::invalid_argument("PhaseMetric: epsilon must be in (0, 1]");
  if (eigenvalues.empty() || !(eigenvalues[0] > 0.0))
    throw std::invalid_argument("PhaseMetric: need lambda_1 > 0");
  for (std::size_t k = 1; k < eigenvalues.size(); ++k)
    if (!(eigenvalues[k] > eigenvalues[k - 1]))
      throw std::invalid_argument("PhaseMetric: eigenvalues must increase");
  build_weights();
}

void PhaseMetric::build_weights() {
  const std::size_t n = eigenvalues.size();
  wu_.resize(n);
  wv_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    wu_[k] = std::pow(eigenvalues[k], sigma + 1.0);
    wv_[k] = std::pow(eigenvalues[k], sigma);
  }
}

double PhaseMetric::u_norm_sq(const ModalState& z) const {
  if (z.modes() != eigenvalues.size())
    throw std::invalid_argument("PhaseMetric: state/eigenvalue size mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < wu_.size(); ++k) s += wu_[k] * z.u[k] * z.u[k];
  return s;
}

double PhaseMetric::v_norm_sq(const ModalState& z) const {
  if (z.modes() != eigenvalues.size())
    throw std::invalid_argument("PhaseMetric: state/eigenvalue size mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < wv_.size(); ++k) s += wv_[k] * z.v[k] * z.v[k];
  return s;
}

double PhaseMetric::norm_sq(const ModalState& z, double t) const {
  if (!std::isfinite(t))
    throw std::invalid_argument("PhaseMetric::norm_sq: nonfinite time");
  return u_norm_sq(z) + rho_eps(t) * v_norm_sq(z);
}

double PhaseMetric::norm(const ModalState& z, double t) const {
  return std::sqrt(norm_sq(z, t));
}

double PhaseMetric::dist_sq(const ModalState& a, const ModalState& b,
                            double t) const {
  if (a.modes() != eigenvalues.size() || b.modes() != eigenvalues.size())
    throw std::invalid_argument("PhaseMetric::dist: size mismatch");
  const double re = rho_eps(t);
  double su = 0.0, sv = 0.0;
  for (std::size_t k = 0; k < wu_.size(); ++k) {
    const double du = a.u[k] - b.u[k];
    const double dv = a.v[k] - b.v[k];
    su += wu_[k] * du * du;
    sv += wv_[k] * dv * dv;
  }
  return su + re * sv;
}

double PhaseMetric::dist(const ModalState& a, const ModalState& b,
                         double t) const {
  return std::sqrt(dist_sq(a, b, t));
}

PhaseMetric PhaseMetric::with_epsilon(double eps) const {
  return PhaseMetric(eps, sigma, rho, eigenvalues);
}

PhaseMetric PhaseMetric::with_sigma(double sig) const {
  return PhaseMetric(epsilon, sig, rho, eigenvalues);
}

bool PhaseMetric::compatible(const PhaseMetric& o) const {
  return epsilon == o.epsilon && sigma == o.sigma && rho == o.rho &&
         eigenvalues == o.eigenvalues;
}

}  // namespace tdwave
