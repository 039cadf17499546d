#pragma once

#include <functional>
#include <vector>

namespace pfl::quad {

// Gauss-Legendre rule on [-1, 1].
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Nodes by Newton iteration on P_n; rules are cached per order.
const Rule& gauss_legendre(int n);

// Fixed-order Gauss-Legendre on [a, b].
double integrate(const std::function<double(double)>& f, double a, double b, int order = 16);

struct Result {
  double value = 0.0;
  double error_estimate = 0.0;
  int panels = 0;
};

// Adaptive panel bisection; each panel compares one GL pass against the sum
// of its two halves. Splits until the local discrepancy meets the tolerance
// share assigned to the panel.
Result integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol = 1e-12, double rel_tol = 1e-12,
                          int max_depth = 40, int order = 16);

// Same adaptive driver for a vector-valued integrand; panels are accepted
// only when every component passes. The integrand is evaluated once per
// node, which lets callers share expensive common factors.
struct VecResult {
  std::vector<double> value;
  double error_estimate = 0.0;
  int panels = 0;
};

VecResult integrate_adaptive_vec(const std::function<void(double, std::vector<double>&)>& f,
                                 int dim, double a, double b,
                                 double abs_tol = 1e-12, double rel_tol = 1e-12,
                                 int max_depth = 40, int order = 16);

}  // namespace pfl::quad
