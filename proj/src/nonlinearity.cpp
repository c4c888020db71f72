#include "tdwave/nonlinearity.hpp"

#include <cmath>
#include <stdexcept>

namespace tdwave {

double NonlinearitySpec::f(double s) const {
  switch (kind) {
    case NonlinKind::zero: return 0.0;
    case NonlinKind::linear: return c_lin * s;
    case NonlinKind::cubic: return s * s * s;
    case NonlinKind::cubic_minus_s: return s * s * s - s;
  }
  return 0.0;
}

double NonlinearitySpec::fp(double s) const {
  switch (kind) {
    case NonlinKind::zero: return 0.0;
    case NonlinKind::linear: return c_lin;
    case NonlinKind::cubic: return 3.0 * s * s;
    case NonlinKind::cubic_minus_s: return 3.0 * s * s - 1.0;
  }
  return 0.0;
}

double NonlinearitySpec::fpp(double s) const {
  switch (kind) {
    case NonlinKind::zero:
    case NonlinKind::linear: return 0.0;
    case NonlinKind::cubic:
    case NonlinKind::cubic_minus_s: return 6.0 * s;
  }
  return 0.0;
}

double NonlinearitySpec::F(double s) const {
  switch (kind) {
    case NonlinKind::zero: return 0.0;
    case NonlinKind::linear: return 0.5 * c_lin * s * s;
    case NonlinKind::cubic: return 0.25 * s * s * s * s;
    case NonlinKind::cubic_minus_s: return 0.25 * s * s * s * s - 0.5 * s * s;
  }
  return 0.0;
}

double NonlinearitySpec::f0(double s) const {
  switch (kind) {
    case NonlinKind::zero:
    case NonlinKind::linear: return 0.0;
    case NonlinKind::cubic:
    case NonlinKind::cubic_minus_s: return s * s * s;
  }
  return 0.0;
}

double NonlinearitySpec::f1(double s) const { return f(s) - f0(s); }

std::string NonlinearitySpec::name() const {
  switch (kind) {
    case NonlinKind::zero: return "zero";
    case NonlinKind::linear: return "linear";
    case NonlinKind::cubic: return "cubic";
    case NonlinKind::cubic_minus_s: return "cubic_minus_s";
  }
  return "?";
}

NonlinearitySpec make_nonlinearity(const std::string& name,
                                   const std::vector<double>& params) {
  NonlinearitySpec n;
  if (name == "zero") {
    n.kind = NonlinKind::zero;
    n.growth_c = 0.0;
  } else if (name == "linear") {
    n.kind = NonlinKind::linear;
    n.c_lin = params.empty() ? 1.0 : params[0];
    n.growth_c = 0.0;
  } else if (name == "cubic") {
    n.kind = NonlinKind::cubic;
    n.growth_c = 6.0;
    n.c1 = 0.0;
  } else if (name == "cubic_minus_s") {
    n.kind = NonlinKind::cubic_minus_s;
    n.growth_c = 6.0;
    // 2 f s - F + nu s^2 = (7/4) s^4 - (3/2 - nu) s^2 >= -(3/2-nu)^2/7
    n.c1 = (1.5 - n.nu) * (1.5 - n.nu) / 7.0 + 1e-9;
  } else {
    throw std::invalid_argument("unknown nonlinearity: " + name);
  }
  return n;
}

const AssumptionItem* AssumptionReport::find(const std::string& n) const {
  for (const auto& it : items)
    if (it.name == n) return &it;
  return nullptr;
}

}  // namespace tdwave
