#pragma once

#include <algorithm>
#include <functional>
#include <vector>

namespace pfl {

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

// Derivative-free simplex descent with the standard reflection/expansion/
// contraction/shrink coefficients. Converges when the spread of simplex
// values falls below f_tol.
inline NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                    std::vector<double> x0, double initial_step, double f_tol,
                                    int max_iterations) {
  const int n = static_cast<int>(x0.size());
  NelderMeadResult result;

  std::vector<std::vector<double>> simplex(n + 1, x0);
  std::vector<double> values(n + 1);
  for (int i = 0; i < n; ++i) simplex[i + 1][i] += initial_step;
  for (int i = 0; i <= n; ++i) values[i] = f(simplex[i]);
  result.evaluations = n + 1;

  auto order = [&]() {
    std::vector<int> idx(n + 1);
    for (int i = 0; i <= n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return values[a] < values[b]; });
    std::vector<std::vector<double>> s2(n + 1);
    std::vector<double> v2(n + 1);
    for (int i = 0; i <= n; ++i) {
      s2[i] = simplex[idx[i]];
      v2[i] = values[idx[i]];
    }
    simplex.swap(s2);
    values.swap(v2);
  };

  for (int iter = 0; iter < max_iterations; ++iter) {
    order();
    result.iterations = iter;
    if (values[n] - values[0] < f_tol) {
      result.converged = true;
      break;
    }

    std::vector<double> centroid(n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) centroid[j] += simplex[i][j] / n;

    auto blend = [&](double coeff) {
      std::vector<double> x(n);
      for (int j = 0; j < n; ++j) x[j] = centroid[j] + coeff * (simplex[n][j] - centroid[j]);
      return x;
    };

    const auto reflected = blend(-1.0);
    const double fr = f(reflected);
    ++result.evaluations;

    if (fr < values[0]) {
      const auto expanded = blend(-2.0);
      const double fe = f(expanded);
      ++result.evaluations;
      if (fe < fr) {
        simplex[n] = expanded;
        values[n] = fe;
      } else {
        simplex[n] = reflected;
        values[n] = fr;
      }
    } else if (fr < values[n - 1]) {
      simplex[n] = reflected;
      values[n] = fr;
    } else {
      const auto contracted = blend(fr < values[n] ? -0.5 : 0.5);
      const double fc = f(contracted);
      ++result.evaluations;
      if (fc < std::min(fr, values[n])) {
        simplex[n] = contracted;
        values[n] = fc;
      } else {
        for (int i = 1; i <= n; ++i) {
          for (int j = 0; j < n; ++j)
            simplex[i][j] = simplex[0][j] + 0.5 * (simplex[i][j] - simplex[0][j]);
          values[i] = f(simplex[i]);
          ++result.evaluations;
        }
      }
    }
  }
  order();
  result.x = simplex[0];
  result.value = values[0];
  return result;
}

}  // namespace pfl
