#pragma once

#include <vector>

#include "hawkes/types.hpp"

namespace hawkes {

enum class PenaltyKind { l1, l2, group_lasso };

struct PenaltyTerm {
  PenaltyKind kind = PenaltyKind::l1;
  double strength = 0.0;  // the 1/alpha multiplier
};

/// Sum of weighted penalties on W. An empty term list is the unpenalized fit.
struct PenaltySpec {
  std::vector<PenaltyTerm> terms;

  static PenaltySpec none() { return {}; }
  static PenaltySpec single(PenaltyKind kind, double strength);
  PenaltySpec& add(PenaltyKind kind, double strength);

  double value(const ModelParams& params) const;
  double strength_of(PenaltyKind kind) const;
  void validate() const;
};

/// Group shrinkage: v -> 0 when ||v|| <= thr, else v scaled by 1 - thr/||v||.
void group_soft_threshold(double* v, int len, double thr);

}  // namespace hawkes
