#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace hawkes {

/// Adaptive-moment state over a flat parameter vector. The caller owns the
/// learning rate and applies `direction` with its chosen sign; `scale` gives
/// the per-coordinate 1/(sqrt(v_hat)+eps) factors for proximal thresholds.
struct AdamState {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::vector<double> m;
  std::vector<double> v;
  long long steps = 0;

  void resize(std::size_t n) {
    m.assign(n, 0.0);
    v.assign(n, 0.0);
    steps = 0;
  }

  void update(const double* grad, std::size_t n, double* direction,
              double* scale = nullptr) {
    ++steps;
    const double c1 = 1.0 - std::pow(beta1, static_cast<double>(steps));
    const double c2 = 1.0 - std::pow(beta2, static_cast<double>(steps));
    for (std::size_t k = 0; k < n; ++k) {
      m[k] = beta1 * m[k] + (1.0 - beta1) * grad[k];
      v[k] = beta2 * v[k] + (1.0 - beta2) * grad[k] * grad[k];
      const double denom = std::sqrt(v[k] / c2) + eps;
      direction[k] = (m[k] / c1) / denom;
      if (scale) scale[k] = 1.0 / denom;
    }
  }
};

}  // namespace hawkes
