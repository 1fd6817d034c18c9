#pragma once

#include <optional>
#include <vector>

#include "hawkes/simulate.hpp"
#include "hawkes/types.hpp"

namespace hawkes {

/// Per-pair weight estimate, summed over basis functions. stds, when present,
/// aggregate the per-basis posterior deviations as sqrt of the sum of squares.
struct EdgeEstimate {
  int dims = 0;
  std::vector<double> weights;  // row-major target i, source j
  std::vector<double> stds;     // empty unless the estimator is posterior-based

  bool has_stds() const { return !stds.empty(); }
  double weight(int i, int j) const {
    return weights[static_cast<std::size_t>(i) * dims + j];
  }
  static EdgeEstimate from_params(const ModelParams& params);
  static EdgeEstimate from_posterior(const ModelParams& mode,
                                     const ParamVec& std_devs);
  void validate() const;
};

double f1_score(const EdgeEstimate& est, const GroundTruth& truth, double eta,
                bool include_self = true);

double precision_at_k(const EdgeEstimate& est, const GroundTruth& truth, int k,
                      bool include_self = true);

double relative_error(const EdgeEstimate& est, const GroundTruth& truth,
                      bool include_self = true);

struct FprFnr {
  std::optional<double> fpr;
  std::optional<double> fnr;
};
FprFnr fpr_fnr(const EdgeEstimate& est, const GroundTruth& truth, double eta,
               bool include_self = true);

/// Held-out log-likelihood over the test window, conditioning on the full
/// preceding history, averaged per test event. Requires test to start at or
/// after the train horizon.
double predictive_loglik(const ModelParams& model, const KernelSpec& kernel,
                         const EventSequence& train, const EventSequence& test);

}  // namespace hawkes
