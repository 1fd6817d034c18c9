#include "hawkes/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hawkes {

namespace {

void check_shapes(const ModelParams& params, const KernelSpec& kernel,
                  const EventSequence& seq) {
  if (params.dims != seq.dims)
    throw ValidationError("params/sequence dimension mismatch");
  if (params.basis != kernel.basis_count())
    throw ValidationError("params/kernel basis mismatch");
  if (params.mu.size() != static_cast<std::size_t>(params.dims) ||
      params.w.size() !=
          static_cast<std::size_t>(params.dims) * params.dims * params.basis)
    throw ValidationError("params storage mismatch");
}

double checked_log(double lam, double t) {
  if (!(lam > 0.0) || !std::isfinite(lam)) {
    throw NonFiniteLikelihood("intensity " + std::to_string(lam) +
                              " at event time " + std::to_string(t));
  }
  return std::log(lam);
}

/// Exponential kernel: single pass with per-source decay accumulators
/// A[j] = sum_{t_k <= pos, i_k = j} exp(-zeta (pos - t_k)).
double exp_ll(const ModelParams& params, const KernelSpec& kernel,
              const EventSequence& seq, double from, ParamVec* grad) {
  const int D = params.dims;
  const double zeta = kernel.zeta;
  const double T = seq.horizon;

  std::vector<double> acc(D, 0.0);
  double pos = 0.0;
  double ll = 0.0;
  for (const Event& e : seq.events) {
    const double decay = std::exp(-zeta * (e.time - pos));
    for (int j = 0; j < D; ++j) acc[j] *= decay;
    pos = e.time;
    if (e.time >= from) {
      const int i = e.dim;
      double lam = params.mu[i];
      const double* wrow = params.w.data() + static_cast<std::size_t>(i) * D;
      for (int j = 0; j < D; ++j) lam += wrow[j] * zeta * acc[j];
      ll += checked_log(lam, e.time);
      if (grad) {
        grad->mu[i] += 1.0 / lam;
        double* grow = grad->w.data() + static_cast<std::size_t>(i) * D;
        for (int j = 0; j < D; ++j) grow[j] += zeta * acc[j] / lam;
      }
    }
    acc[e.dim] += 1.0;
  }

  // Compensator over [from, T): mu part plus per-source integrated kernels.
  std::vector<double> cint(D, 0.0);
  for (const Event& e : seq.events) {
    const double lo = std::max(0.0, from - e.time);
    cint[e.dim] += std::exp(-zeta * lo) - std::exp(-zeta * (T - e.time));
  }
  const double window = T - from;
  double comp = 0.0;
  for (int i = 0; i < D; ++i) {
    comp += params.mu[i] * window;
    const double* wrow = params.w.data() + static_cast<std::size_t>(i) * D;
    for (int j = 0; j < D; ++j) comp += wrow[j] * cint[j];
  }
  if (grad) {
    for (int i = 0; i < D; ++i) {
      grad->mu[i] -= window;
      double* grow = grad->w.data() + static_cast<std::size_t>(i) * D;
      for (int j = 0; j < D; ++j) grow[j] -= cint[j];
    }
  }
  const double total = ll - comp;
  if (!std::isfinite(total))
    throw NonFiniteLikelihood("log-likelihood not finite");
  return total;
}

/// Gaussian bank: per-event window scan over the truncated support, with a
/// stamped scratch of per-(source, basis) kernel sums.
double gauss_ll(const ModelParams& params, const KernelSpec& kernel,
                const EventSequence& seq, double from, ParamVec* grad) {
  const int D = params.dims;
  const int M = params.basis;
  const double T = seq.horizon;
  const std::size_t n_events = seq.events.size();

  double support = 0.0;
  for (int m = 0; m < M; ++m) support = std::max(support, kernel.support_end(m));

  std::vector<double> scratch(static_cast<std::size_t>(D) * M, 0.0);
  std::vector<std::size_t> stamp(static_cast<std::size_t>(D) * M,
                                 std::numeric_limits<std::size_t>::max());
  std::vector<std::size_t> touched;
  touched.reserve(64);

  double ll = 0.0;
  for (std::size_t n = 0; n < n_events; ++n) {
    const Event& e = seq.events[n];
    if (e.time < from) continue;
    touched.clear();
    for (std::size_t k = n; k-- > 0;) {
      const double dt = e.time - seq.events[k].time;
      if (dt > support) break;
      const std::size_t base = static_cast<std::size_t>(seq.events[k].dim) * M;
      for (int m = 0; m < M; ++m) {
        const double v = kernel.eval(m, dt);
        if (v > 0.0) {
          const std::size_t idx = base + m;
          if (stamp[idx] != n) {
            stamp[idx] = n;
            scratch[idx] = 0.0;
            touched.push_back(idx);
          }
          scratch[idx] += v;
        }
      }
    }
    const int i = e.dim;
    const double* wrow =
        params.w.data() + static_cast<std::size_t>(i) * D * M;
    double lam = params.mu[i];
    for (std::size_t idx : touched) lam += wrow[idx] * scratch[idx];
    ll += checked_log(lam, e.time);
    if (grad) {
      grad->mu[i] += 1.0 / lam;
      double* grow = grad->w.data() + static_cast<std::size_t>(i) * D * M;
      for (std::size_t idx : touched) grow[idx] += scratch[idx] / lam;
    }
  }

  std::vector<double> cint(static_cast<std::size_t>(D) * M, 0.0);
  for (const Event& e : seq.events) {
    const double lo = std::max(0.0, from - e.time);
    const std::size_t base = static_cast<std::size_t>(e.dim) * M;
    for (int m = 0; m < M; ++m) {
      cint[base + m] += kernel.integral(m, lo, T - e.time);
    }
  }
  const double window = T - from;
  double comp = 0.0;
  for (int i = 0; i < D; ++i) {
    comp += params.mu[i] * window;
    const double* wrow =
        params.w.data() + static_cast<std::size_t>(i) * D * M;
    for (std::size_t jm = 0; jm < cint.size(); ++jm) comp += wrow[jm] * cint[jm];
  }
  if (grad) {
    for (int i = 0; i < D; ++i) {
      grad->mu[i] -= window;
      double* grow = grad->w.data() + static_cast<std::size_t>(i) * D * M;
      for (std::size_t jm = 0; jm < cint.size(); ++jm) grow[jm] -= cint[jm];
    }
  }
  const double total = ll - comp;
  if (!std::isfinite(total))
    throw NonFiniteLikelihood("log-likelihood not finite");
  return total;
}

double ll_dispatch(const ModelParams& params, const KernelSpec& kernel,
                   const EventSequence& seq, double from, ParamVec* grad) {
  check_shapes(params, kernel, seq);
  if (grad) {
    grad->mu.assign(params.mu.size(), 0.0);
    grad->w.assign(params.w.size(), 0.0);
  }
  if (kernel.kind == KernelKind::exponential)
    return exp_ll(params, kernel, seq, from, grad);
  return gauss_ll(params, kernel, seq, from, grad);
}

}  // namespace

double intensity(const ModelParams& params, const KernelSpec& kernel,
                 const EventSequence& seq, int i, double t) {
  check_shapes(params, kernel, seq);
  const int M = params.basis;
  double support = 0.0;
  for (int m = 0; m < M; ++m) support = std::max(support, kernel.support_end(m));

  double lam = params.mu[i];
  for (std::size_t k = seq.events.size(); k-- > 0;) {
    const Event& e = seq.events[k];
    if (e.time >= t) continue;
    const double dt = t - e.time;
    if (dt > support) break;
    for (int m = 0; m < M; ++m) {
      lam += params.w_at(i, e.dim, m) * kernel.eval(m, dt);
    }
  }
  return lam;
}

double log_likelihood(const ModelParams& params, const KernelSpec& kernel,
                      const EventSequence& seq) {
  return ll_dispatch(params, kernel, seq, 0.0, nullptr);
}

ParamVec log_likelihood_grad(const ModelParams& params,
                             const KernelSpec& kernel,
                             const EventSequence& seq) {
  ParamVec grad;
  ll_dispatch(params, kernel, seq, 0.0, &grad);
  return grad;
}

double log_likelihood_with_grad(const ModelParams& params,
                                const KernelSpec& kernel,
                                const EventSequence& seq, ParamVec* grad) {
  return ll_dispatch(params, kernel, seq, 0.0, grad);
}

double log_likelihood_window(const ModelParams& params,
                             const KernelSpec& kernel,
                             const EventSequence& seq, double from) {
  return ll_dispatch(params, kernel, seq, from, nullptr);
}

double compensator_total(const ModelParams& params, const KernelSpec& kernel,
                         const EventSequence& seq, double from) {
  check_shapes(params, kernel, seq);
  const int D = params.dims;
  const int M = params.basis;
  const double T = seq.horizon;
  std::vector<double> cint(static_cast<std::size_t>(D) * M, 0.0);
  for (const Event& e : seq.events) {
    const double lo = std::max(0.0, from - e.time);
    for (int m = 0; m < M; ++m) {
      cint[static_cast<std::size_t>(e.dim) * M + m] +=
          kernel.integral(m, lo, T - e.time);
    }
  }
  double comp = 0.0;
  for (int i = 0; i < D; ++i) {
    comp += params.mu[i] * (T - from);
    const double* wrow =
        params.w.data() + static_cast<std::size_t>(i) * D * M;
    for (std::size_t jm = 0; jm < cint.size(); ++jm) comp += wrow[jm] * cint[jm];
  }
  return comp;
}

std::vector<double> branching_matrix(const ModelParams& params,
                                     const KernelSpec& kernel) {
  const int D = params.dims;
  const int M = params.basis;
  std::vector<double> masses(M);
  for (int m = 0; m < M; ++m) masses[m] = kernel.mass(m);
  std::vector<double> g(static_cast<std::size_t>(D) * D, 0.0);
  for (int i = 0; i < D; ++i) {
    for (int j = 0; j < D; ++j) {
      double sum = 0.0;
      for (int m = 0; m < M; ++m) sum += params.w_at(i, j, m) * masses[m];
      g[static_cast<std::size_t>(i) * D + j] = sum;
    }
  }
  return g;
}

double spectral_radius(const std::vector<double>& mat, int dims) {
  const int D = dims;
  std::vector<double> v(D, 1.0), u(D, 0.0);
  double rho = 0.0;
  for (int iter = 0; iter < 500; ++iter) {
    double norm = 0.0;
    for (int i = 0; i < D; ++i) {
      double s = 0.0;
      const double* row = mat.data() + static_cast<std::size_t>(i) * D;
      for (int j = 0; j < D; ++j) s += row[j] * v[j];
      u[i] = s;
      norm = std::max(norm, std::abs(s));
    }
    if (norm == 0.0) return 0.0;
    for (int i = 0; i < D; ++i) v[i] = u[i] / norm;
    if (std::abs(norm - rho) <= 1e-13 * std::max(1.0, norm)) return norm;
    rho = norm;
  }
  return rho;
}

std::vector<double> stationary_rates(const ModelParams& params,
                                     const KernelSpec& kernel) {
  const int D = params.dims;
  std::vector<double> g = branching_matrix(params, kernel);
  // Solve (I - G) x = mu by Gaussian elimination with partial pivoting.
  std::vector<double> a(static_cast<std::size_t>(D) * (D + 1));
  for (int i = 0; i < D; ++i) {
    for (int j = 0; j < D; ++j) {
      a[static_cast<std::size_t>(i) * (D + 1) + j] =
          (i == j ? 1.0 : 0.0) - g[static_cast<std::size_t>(i) * D + j];
    }
    a[static_cast<std::size_t>(i) * (D + 1) + D] = params.mu[i];
  }
  for (int col = 0; col < D; ++col) {
    int pivot = col;
    for (int r = col + 1; r < D; ++r) {
      if (std::abs(a[static_cast<std::size_t>(r) * (D + 1) + col]) >
          std::abs(a[static_cast<std::size_t>(pivot) * (D + 1) + col]))
        pivot = r;
    }
    if (std::abs(a[static_cast<std::size_t>(pivot) * (D + 1) + col]) < 1e-12)
      throw ValidationError("branching system singular (radius >= 1?)");
    if (pivot != col) {
      for (int c = col; c <= D; ++c)
        std::swap(a[static_cast<std::size_t>(pivot) * (D + 1) + c],
                  a[static_cast<std::size_t>(col) * (D + 1) + c]);
    }
    const double diag = a[static_cast<std::size_t>(col) * (D + 1) + col];
    for (int r = 0; r < D; ++r) {
      if (r == col) continue;
      const double f = a[static_cast<std::size_t>(r) * (D + 1) + col] / diag;
      if (f == 0.0) continue;
      for (int c = col; c <= D; ++c) {
        a[static_cast<std::size_t>(r) * (D + 1) + c] -=
            f * a[static_cast<std::size_t>(col) * (D + 1) + c];
      }
    }
  }
  std::vector<double> x(D);
  for (int i = 0; i < D; ++i) {
    x[i] = a[static_cast<std::size_t>(i) * (D + 1) + D] /
           a[static_cast<std::size_t>(i) * (D + 1) + i];
  }
  return x;
}

std::vector<std::vector<double>> compensator_residuals(
    const ModelParams& params, const KernelSpec& kernel,
    const EventSequence& seq) {
  check_shapes(params, kernel, seq);
  const int D = params.dims;
  const int M = params.basis;
  std::vector<std::vector<double>> residuals(D);
  std::vector<double> pending(D, 0.0);

  if (kernel.kind == KernelKind::exponential) {
    const double zeta = kernel.zeta;
    std::vector<double> acc(D, 0.0);
    double pos = 0.0;
    for (const Event& e : seq.events) {
      const double delta = e.time - pos;
      const double decay = std::exp(-zeta * delta);
      for (int d = 0; d < D; ++d) {
        double exc = 0.0;
        const double* wrow = params.w.data() + static_cast<std::size_t>(d) * D;
        for (int j = 0; j < D; ++j) exc += wrow[j] * acc[j];
        pending[d] += params.mu[d] * delta + exc * (1.0 - decay);
      }
      for (int j = 0; j < D; ++j) acc[j] *= decay;
      residuals[e.dim].push_back(pending[e.dim]);
      pending[e.dim] = 0.0;
      acc[e.dim] += 1.0;
      pos = e.time;
    }
    return residuals;
  }

  double pos = 0.0;
  for (std::size_t n = 0; n < seq.events.size(); ++n) {
    const Event& e = seq.events[n];
    const double delta = e.time - pos;
    for (int d = 0; d < D; ++d) pending[d] += params.mu[d] * delta;
    for (std::size_t k = 0; k < n; ++k) {
      const Event& past = seq.events[k];
      for (int m = 0; m < M; ++m) {
        const double slice =
            kernel.integral(m, pos - past.time, e.time - past.time);
        if (slice <= 0.0) continue;
        for (int d = 0; d < D; ++d) {
          pending[d] += params.w_at(d, past.dim, m) * slice;
        }
      }
    }
    residuals[e.dim].push_back(pending[e.dim]);
    pending[e.dim] = 0.0;
    pos = e.time;
  }
  return residuals;
}

}  // namespace hawkes
