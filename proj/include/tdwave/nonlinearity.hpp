#pragma once

#include <string>
#include <vector>

namespace tdwave {

enum class NonlinKind { zero, linear, cubic, cubic_minus_s };

// Nonlinearity f with antiderivative F (F(0) = 0) and the splitting
// f = f0 + f1, where f0 carries the superlinear part (f0(0) = f0'(0) = 0,
// f0(s) s >= 0) and f1 has bounded derivative.
struct NonlinearitySpec {
  NonlinKind kind = NonlinKind::cubic;
  double c_lin = 0.0;   // slope for the linear kind
  double growth_c = 6;  // declared c in |f''(s)| <= c (1 + |s|)
  double nu = 0.5;      // declared dissipation constants, 0 < nu < lambda_1
  double c1 = 0.0;

  double f(double s) const;
  double fp(double s) const;
  double fpp(double s) const;
  double F(double s) const;
  double f0(double s) const;
  double f1(double s) const;

  std::string name() const;
  bool operator==(const NonlinearitySpec&) const = default;
};

NonlinearitySpec make_nonlinearity(const std::string& name,
                                   const std::vector<double>& params = {});

struct AssumptionItem {
  std::string name;
  bool pass = false;
  double observed = 0.0;  // tightest constant / worst value seen
  double witness_s = 0.0; // sample point realizing it
};

struct AssumptionReport {
  std::vector<AssumptionItem> items;
  bool all_pass = true;
  const AssumptionItem* find(const std::string& n) const;
};

}  // namespace tdwave
