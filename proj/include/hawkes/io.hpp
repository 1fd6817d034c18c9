#pragma once

#include <string>
#include <vector>

#include "hawkes/mle.hpp"
#include "hawkes/penalty.hpp"
#include "hawkes/simulate.hpp"
#include "hawkes/types.hpp"
#include "hawkes/vi.hpp"

namespace hawkes {

/// Shortest round-trip decimal form of x (stable across runs).
std::string fmt_double(double x);

/// Sidecar path for an event CSV: the .csv suffix becomes .meta.json,
/// otherwise .meta.json is appended.
std::string meta_path_for(const std::string& csv_path);

/// Writes time,dim rows plus a sidecar holding the horizon and dims.
void save_events(const EventSequence& seq, const std::string& path);

/// Reads an event CSV. Horizon and dims come from the sidecar when present;
/// otherwise dims is the largest dim plus one and the horizon sits just
/// above the last event time. Ties are perturbed per the ingestion rule.
EventSequence load_events(const std::string& path);

void save_model(const ModelParams& params, const KernelSpec& kernel,
                const std::string& path);
struct LoadedModel {
  ModelParams params;
  KernelSpec kernel;
};
LoadedModel load_model(const std::string& path);

void save_truth(const GroundTruth& truth, const KernelSpec& kernel,
                const std::string& path);
struct LoadedTruth {
  GroundTruth truth;
  KernelSpec kernel;
};
LoadedTruth load_truth(const std::string& path);

void save_posterior(const VIReport& report, const KernelSpec& kernel,
                    const EmConfig& cfg, const std::string& path);
struct LoadedPosterior {
  VariationalState state;
  PriorSpec prior;
  std::vector<double> elbo_rounds;
  KernelSpec kernel;
};
LoadedPosterior load_posterior(const std::string& path);

/// "exp:zeta=1" or "sg:M=10,Tc=5".
KernelSpec parse_kernel_spec(const std::string& text);

/// "l1:c=0.1", "l2:c=0.05", "gl:c=0.1", terms joined with '+', or "none".
PenaltySpec parse_penalty_spec(const std::string& text);

/// "w=laplace,mu=gaussian" (mu accepts only gaussian); w also accepts
/// gaussian, group-laplace and column-group.
WPrior parse_prior_spec(const std::string& text);

std::string prior_name(WPrior kind);

}  // namespace hawkes
