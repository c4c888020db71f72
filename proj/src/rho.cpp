#include "tdwave/rho.hpp"

#include <cmath>
#include <stdexcept>

namespace tdwave {

double RhoProfile::value(double t) const {
  switch (kind) {
    case RhoKind::logistic: {
      const double beta = params.empty() ? 1.0 : params[0];
      // 1/(1+e^{beta t}), written to avoid overflow for large |t|
      const double x = beta * t;
      if (x > 0) {
        const double e = std::exp(-x);
        return e / (1.0 + e);
      }
      return 1.0 / (1.0 + std::exp(x));
    }
    case RhoKind::rational:
      return 0.5 * (1.0 - t / std::sqrt(1.0 + t * t));
    case RhoKind::constant:
      return params.empty() ? 1.0 : params[0];
  }
  return 0.0;
}

double RhoProfile::slope(double t) const {
  switch (kind) {
    case RhoKind::logistic: {
      const double beta = params.empty() ? 1.0 : params[0];
      const double v = value(t);
      return -beta * v * (1.0 - v);
    }
    case RhoKind::rational: {
      const double s = 1.0 + t * t;
      return -0.5 / (s * std::sqrt(s));
    }
    case RhoKind::constant:
      return 0.0;
  }
  return 0.0;
}

RhoProfile RhoProfile::logistic(double beta) {
  return RhoProfile{RhoKind::logistic, {beta}, 1.25};
}

RhoProfile RhoProfile::rational() {
  return RhoProfile{RhoKind::rational, {}, 1.25};
}

RhoProfile RhoProfile::constant(double value) {
  return RhoProfile{RhoKind::constant, {value}, value + 0.25};
}

std::string RhoProfile::name() const {
  switch (kind) {
    case RhoKind::logistic: return "logistic";
    case RhoKind::rational: return "rational";
    case RhoKind::constant: return "constant";
  }
  return "?";
}

RhoProfile make_rho(const std::string& name, const std::vector<double>& params,
                    double L_bound) {
  RhoProfile out;
  if (name == "logistic") {
    out = RhoProfile::logistic(params.empty() ? 1.0 : params[0]);
  } else if (name == "rational") {
    out = RhoProfile::rational();
  } else if (name == "constant") {
    out = RhoProfile::constant(params.empty() ? 1.0 : params[0]);
  } else {
    throw std::invalid_argument("unknown rho profile: " + name);
  }
  if (L_bound > 0) out.L_bound = L_bound;
  return out;
}

RhoCheck validate_rho(const RhoProfile& rho, double t_lo, double t_hi,
                      int samples, double tail_tol) {
  if (samples < 2) throw std::invalid_argument("validate_rho: samples < 2");
  RhoCheck chk;
  chk.decreasing = true;
  chk.worst_slope = -1e300;
  for (int i = 0; i < samples; ++i) {
    const double t = t_lo + (t_hi - t_lo) * i / (samples - 1);
    const double v = rho.value(t);
    const double d = rho.slope(t);
    chk.sup_abs = std::max(chk.sup_abs, std::abs(v) + std::abs(d));
    chk.worst_slope = std::max(chk.worst_slope, d);
    if (d > 0.0) chk.decreasing = false;
  }
  chk.bounded = chk.sup_abs <= rho.L_bound;
  chk.tail_value = rho.value(t_hi);
  chk.tail_ok = chk.tail_value < tail_tol;
  return chk;
}

}  // namespace tdwave
