#pragma once

#include <string>
#include <vector>

namespace tdwave {

enum class RhoKind { logistic, rational, constant };

// Time-dependent propagation-speed profile rho(t). The built-in profiles are
// C^1, nonincreasing and bounded; `constant` is provided for frozen-coefficient
// oracle runs and deliberately fails the tail check in validate_rho.
struct RhoProfile {
  RhoKind kind = RhoKind::logistic;
  std::vector<double> params;  // logistic: {beta}; constant: {value}; rational: {}
  double L_bound = 1.25;       // declared bound on sup |rho| + |rho'|

  double value(double t) const;
  double slope(double t) const;

  static RhoProfile logistic(double beta = 1.0);
  static RhoProfile rational();
  static RhoProfile constant(double value);

  std::string name() const;
  bool operator==(const RhoProfile&) const = default;
};

RhoProfile make_rho(const std::string& name, const std::vector<double>& params,
                    double L_bound);

struct RhoCheck {
  bool decreasing = false;   // rho'(t) <= 0 on all samples
  bool bounded = false;      // sup(|rho| + |rho'|) <= L_bound
  bool tail_ok = false;      // rho(t_hi) < tail_tol
  double sup_abs = 0.0;      // observed sup(|rho| + |rho'|)
  double tail_value = 0.0;   // rho(t_hi)
  double worst_slope = 0.0;  // max rho' observed
  bool all() const { return decreasing && bounded && tail_ok; }
};

// Dense-sampling check of the profile assumptions over [t_lo, t_hi].
RhoCheck validate_rho(const RhoProfile& rho, double t_lo, double t_hi,
                      int samples, double tail_tol);

}  // namespace tdwave
