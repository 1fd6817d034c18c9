#pragma once

#include <cstdint>
#include <vector>

#include "hawkes/rng.hpp"
#include "hawkes/types.hpp"

namespace hawkes {

struct StopRule {
  long long n_events = 0;  // positive: stop after exactly this many events
  double horizon = 0.0;    // positive: stop at this time

  static StopRule by_events(long long n) { return {n, 0.0}; }
  static StopRule by_horizon(double t) { return {0, t}; }
  void validate() const;
};

struct SyntheticConfig {
  int dims = 50;
  double edge_prob = 0.0;  // zero or negative: use log(D)/D
  double mu_lo = 0.0;
  double mu_hi = 0.02;
  double w_lo = 0.1;
  double w_hi = 0.2;
  KernelSpec kernel = KernelSpec::make_exponential(1.0);
  StopRule stop = StopRule::by_events(5000);
  std::uint64_t seed = 1;

  double resolved_edge_prob() const;
  void validate() const;
};

struct GroundTruth {
  int dims = 0;
  std::vector<std::uint8_t> adjacency;  // row-major target i, source j
  ModelParams params;

  bool edge(int i, int j) const {
    return adjacency[static_cast<std::size_t>(i) * dims + j] != 0;
  }
  int edge_count() const;
};

GroundTruth sample_graph(const SyntheticConfig& cfg, Rng& rng);

EventSequence simulate(const GroundTruth& truth, const KernelSpec& kernel,
                       const StopRule& stop, Rng& rng);

/// Samples a graph and one sequence from cfg, all randomness from cfg.seed.
struct SyntheticDraw {
  GroundTruth truth;
  EventSequence seq;
};
SyntheticDraw make_synthetic(const SyntheticConfig& cfg);

}  // namespace hawkes
