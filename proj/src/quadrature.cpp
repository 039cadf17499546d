#include "pfl/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace pfl::quad {

namespace {

Rule build_rule(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: order must be positive");
  Rule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev-based first guess for the i-th root of P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.weights[n - 1 - i] = rule.weights[i];
  }
  return rule;
}

}  // namespace

const Rule& gauss_legendre(int n) {
  static std::map<int, Rule> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
  return it->second;
}

double integrate(const std::function<double(double)>& f, double a, double b, int order) {
  const Rule& rule = gauss_legendre(order);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < order; ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return sum * half;
}

namespace {

void adapt(const std::function<double(double)>& f, double a, double b, double whole,
           double tol, int depth, int max_depth, int order, Result& out) {
  const double mid = 0.5 * (a + b);
  const double left = integrate(f, a, mid, order);
  const double right = integrate(f, mid, b, order);
  const double diff = std::abs(left + right - whole);
  if (diff <= tol || depth >= max_depth) {
    out.value += left + right;
    out.error_estimate += diff;
    out.panels += 2;
    return;
  }
  adapt(f, a, mid, left, 0.5 * tol, depth + 1, max_depth, order, out);
  adapt(f, mid, b, right, 0.5 * tol, depth + 1, max_depth, order, out);
}

}  // namespace

Result integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, double rel_tol, int max_depth, int order) {
  Result out;
  const double whole = integrate(f, a, b, order);
  const double tol = std::max(abs_tol, rel_tol * std::abs(whole));
  adapt(f, a, b, whole, tol, 0, max_depth, order, out);
  return out;
}

namespace {

using VecFn = std::function<void(double, std::vector<double>&)>;

std::vector<double> integrate_vec_panel(const VecFn& f, int dim, double a, double b, int order) {
  const Rule& rule = gauss_legendre(order);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::vector<double> sum(dim, 0.0), val(dim);
  for (int i = 0; i < order; ++i) {
    f(mid + half * rule.nodes[i], val);
    for (int c = 0; c < dim; ++c) sum[c] += rule.weights[i] * val[c];
  }
  for (int c = 0; c < dim; ++c) sum[c] *= half;
  return sum;
}

void adapt_vec(const VecFn& f, int dim, double a, double b, const std::vector<double>& whole,
               double tol, int depth, int max_depth, int order, VecResult& out) {
  const double mid = 0.5 * (a + b);
  const auto left = integrate_vec_panel(f, dim, a, mid, order);
  const auto right = integrate_vec_panel(f, dim, mid, b, order);
  double diff = 0.0;
  for (int c = 0; c < dim; ++c)
    diff = std::max(diff, std::abs(left[c] + right[c] - whole[c]));
  if (diff <= tol || depth >= max_depth) {
    for (int c = 0; c < dim; ++c) out.value[c] += left[c] + right[c];
    out.error_estimate += diff;
    out.panels += 2;
    return;
  }
  adapt_vec(f, dim, a, mid, left, 0.5 * tol, depth + 1, max_depth, order, out);
  adapt_vec(f, dim, mid, b, right, 0.5 * tol, depth + 1, max_depth, order, out);
}

}  // namespace

VecResult integrate_adaptive_vec(const VecFn& f, int dim, double a, double b,
                                 double abs_tol, double rel_tol, int max_depth, int order) {
  VecResult out;
  out.value.assign(dim, 0.0);
  const auto whole = integrate_vec_panel(f, dim, a, b, order);
  double scale = 0.0;
  for (double w : whole) scale = std::max(scale, std::abs(w));
  const double tol = std::max(abs_tol, rel_tol * scale);
  adapt_vec(f, dim, a, b, whole, tol, 0, max_depth, order, out);
  return out;
}

}  // namespace pfl::quad
