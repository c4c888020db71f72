#pragma once

// Independent test oracles. These stay deliberately naive; they are the
// ground truth the library kernels are checked against.

#include <cmath>
#include <limits>
#include <vector>

#include "tdwave/cloud.hpp"
#include "tdwave/model.hpp"

namespace oracle {

// exhaustive double-loop max-min distance
inline double hausdorff_brute(const tdwave::PointCloud& from,
                              const tdwave::PointCloud& to) {
  double worst = 0.0;
  for (const auto& x : from.states) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& y : to.states)
      best = std::min(best, from.metric.dist(x, y, from.time));
    worst = std::max(worst, best);
  }
  return worst;
}

// exact minimal covering by cloud points, exhaustive over subset sizes
inline int minimal_cover_brute(const tdwave::PointCloud& cloud, double radius) {
  const int m = static_cast<int>(cloud.size());
  std::vector<std::vector<bool>> covers(m, std::vector<bool>(m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      covers[i][j] =
          cloud.metric.dist(cloud.states[i], cloud.states[j], cloud.time) <=
          radius;
  for (int k = 1; k <= m; ++k) {
    std::vector<int> pick(k);
    for (int i = 0; i < k; ++i) pick[i] = i;
    while (true) {
      std::vector<bool> covered(m, false);
      for (int c : pick)
        for (int j = 0; j < m; ++j)
          if (covers[c][j]) covered[j] = true;
      bool all = true;
      for (bool b : covered) all = all && b;
      if (all) return k;
      int i = k - 1;
      while (i >= 0 && pick[i] == m - k + i) --i;
      if (i < 0) break;
      ++pick[i];
      for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return m;
}

// closed-form solution of e u'' + a u' + l u = 0 (underdamped branch)
struct DampedMode {
  double eps = 1.0, alpha = 1.0, lambda = 1.0;

  void solve(double u0, double v0, double t, double& u, double& v) const {
    const double a = alpha / eps;
    const double w2 = lambda / eps - 0.25 * a * a;
    if (w2 <= 0.0) {  // overdamped
      const double r = std::sqrt(-w2);
      const double m1 = -0.5 * a + r, m2 = -0.5 * a - r;
      const double c2 = (v0 - m1 * u0) / (m2 - m1);
      const double c1 = u0 - c2;
      u = c1 * std::exp(m1 * t) + c2 * std::exp(m2 * t);
      v = c1 * m1 * std::exp(m1 * t) + c2 * m2 * std::exp(m2 * t);
      return;
    }
    const double w = std::sqrt(w2);
    const double damp = std::exp(-0.5 * a * t);
    const double cw = std::cos(w * t), sw = std::sin(w * t);
    const double b = (v0 + 0.5 * a * u0) / w;
    u = damp * (u0 * cw + b * sw);
    v = damp * ((-0.5 * a) * (u0 * cw + b * sw) + w * (-u0 * sw + b * cw));
  }
};

// dense-grid quadrature of the modal coefficient of f(u(x)) against the
// orthonormal sine basis (composite Simpson)
inline double modal_of_f_quadrature(const tdwave::ModelConfig& cfg,
                                    const std::vector<double>& u_modes,
                                    int mode_k, int panels = 20000) {
  const double L = cfg.domain_length;
  const double s2L = std::sqrt(2.0 / L);
  auto u_at = [&](double x) {
    double s = 0.0;
    for (std::size_t m = 0; m < u_modes.size(); ++m)
      s += u_modes[m] * s2L * std::sin((m + 1) * 3.14159265358979323846 * x / L);
    return s;
  };
  auto integrand = [&](double x) {
    return cfg.nonlinearity.f(u_at(x)) * s2L *
           std::sin((mode_k + 1) * 3.14159265358979323846 * x / L);
  };
  double acc = 0.0;
  const double h = L / panels;
  for (int i = 0; i < panels; ++i) {
    const double x0 = i * h;
    acc += h / 6.0 *
           (integrand(x0) + 4.0 * integrand(x0 + 0.5 * h) + integrand(x0 + h));
  }
  return acc;
}

}  // namespace oracle
