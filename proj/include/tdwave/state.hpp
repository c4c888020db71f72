#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace tdwave {

// Galerkin coefficient pair (u, u_t) at a timestamp; the concrete phase-space
// point. Coefficients are taken against the L^2-orthonormal sine basis
// sqrt(2/L) sin(k pi x / L), k = 1..N.
struct ModalState {
  std::vector<double> u;
  std::vector<double> v;
  double time = 0.0;

  ModalState() = default;
  ModalState(std::size_t n, double t) : u(n, 0.0), v(n, 0.0), time(t) {}

  std::size_t modes() const { return u.size(); }

  void require_consistent() const {
    if (u.size() != v.size())
      throw std::invalid_argument("ModalState: u/v length mismatch");
  }
};

inline ModalState operator-(const ModalState& a, const ModalState& b) {
  if (a.u.size() != b.u.size())
    throw std::invalid_argument("ModalState difference: mode count mismatch");
  ModalState d(a.u.size(), a.time);
  for (std::size_t k = 0; k < a.u.size(); ++k) {
    d.u[k] = a.u[k] - b.u[k];
    d.v[k] = a.v[k] - b.v[k];
  }
  return d;
}

inline ModalState operator+(const ModalState& a, const ModalState& b) {
  if (a.u.size() != b.u.size())
    throw std::invalid_argument("ModalState sum: mode count mismatch");
  ModalState s(a.u.size(), a.time);
  for (std::size_t k = 0; k < a.u.size(); ++k) {
    s.u[k] = a.u[k] + b.u[k];
    s.v[k] = a.v[k] + b.v[k];
  }
  return s;
}

inline ModalState scaled(const ModalState& a, double c) {
  ModalState s = a;
  for (auto& x : s.u) x *= c;
  for (auto& x : s.v) x *= c;
  return s;
}

}  // namespace tdwave
