#pragma once

#include <vector>

#include "hawkes/types.hpp"

namespace hawkes {

/// Conditional intensity lambda_i(t) given the strict past (events with
/// t_n < t). Point-query API; the likelihood paths below use recursions
/// instead of calling this per event.
double intensity(const ModelParams& params, const KernelSpec& kernel,
                 const EventSequence& seq, int i, double t);

/// Exact log-likelihood: sum_n log lambda_{i_n}(t_n) - sum_i int_0^T
/// lambda_i. Exponential kernel runs an O(N D) decay recursion; the
/// Gaussian bank uses the truncated-support window. Throws
/// NonFiniteLikelihood if any event intensity is nonpositive or non-finite.
double log_likelihood(const ModelParams& params, const KernelSpec& kernel,
                      const EventSequence& seq);

/// Analytic gradient of log_likelihood in (mu, w).
ParamVec log_likelihood_grad(const ModelParams& params,
                             const KernelSpec& kernel,
                             const EventSequence& seq);

/// Value and (optionally) gradient in one pass; grad may be null.
double log_likelihood_with_grad(const ModelParams& params,
                                const KernelSpec& kernel,
                                const EventSequence& seq, ParamVec* grad);

/// Log-likelihood of the window [from, T): event terms for t_n >= from,
/// compensator over [from, T), with the intensity conditioned on the full
/// history in `seq` (events before `from` included).
double log_likelihood_window(const ModelParams& params,
                             const KernelSpec& kernel,
                             const EventSequence& seq, double from);

/// int_from^T sum_i lambda_i(t) dt via exact kernel integrals.
double compensator_total(const ModelParams& params, const KernelSpec& kernel,
                         const EventSequence& seq, double from = 0.0);

/// Branching matrix G[i][j] = sum_m w(i,j,m) * mass_m, row-major D x D.
std::vector<double> branching_matrix(const ModelParams& params,
                                     const KernelSpec& kernel);

/// Spectral radius of a nonnegative D x D matrix by power iteration.
double spectral_radius(const std::vector<double>& mat, int dims);

/// Expected stationary rates (I - G)^{-1} mu; requires spectral radius < 1.
std::vector<double> stationary_rates(const ModelParams& params,
                                     const KernelSpec& kernel);

/// Time-rescaling residuals per dimension: successive increments of the
/// dimension's compensator at its own event times. Unit-rate exponential
/// under the true model.
std::vector<std::vector<double>> compensator_residuals(
    const ModelParams& params, const KernelSpec& kernel,
    const EventSequence& seq);

}  // namespace hawkes
