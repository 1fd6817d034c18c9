#pragma once

#include <vector>

#include "hawkes/penalty.hpp"
#include "hawkes/types.hpp"

namespace hawkes {

struct OptimizerOptions {
  double lr = 0.02;
  double lr_decay = 1.0 - 1e-4;  // multiplicative, applied every iteration
  int max_iters = 5000;
  double tol = 1e-7;    // relative objective improvement considered progress
  int patience = 50;    // iterations without progress before stopping
  double mu_floor = 1e-10;
  bool freeze_w = false;
};

struct FitReport {
  ModelParams params;
  std::vector<double> objective_trace;  // accepted objective values only
  int iterations = 0;
  bool converged = false;
};

/// Minimizes -log_likelihood + penalty over mu >= mu_floor, W >= 0.
/// L2 terms join the smooth gradient; L1 and group-lasso terms are applied
/// by shrinkage after each step.
FitReport fit_mle(const EventSequence& seq, const KernelSpec& kernel,
                  const PenaltySpec& pen, const OptimizerOptions& opts = {});

}  // namespace hawkes
