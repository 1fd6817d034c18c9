#include "hawkes/penalty.hpp"

#include <cmath>

#include "hawkes/errors.hpp"

namespace hawkes {

PenaltySpec PenaltySpec::single(PenaltyKind kind, double strength) {
  PenaltySpec spec;
  spec.add(kind, strength);
  return spec;
}

PenaltySpec& PenaltySpec::add(PenaltyKind kind, double strength) {
  terms.push_back({kind, strength});
  return *this;
}

double PenaltySpec::strength_of(PenaltyKind kind) const {
  double total = 0.0;
  for (const PenaltyTerm& t : terms) {
    if (t.kind == kind) total += t.strength;
  }
  return total;
}

void PenaltySpec::validate() const {
  for (const PenaltyTerm& t : terms) {
    if (!(t.strength >= 0.0) || !std::isfinite(t.strength))
      throw ValidationError("penalty strength must be finite and nonnegative");
  }
}

double PenaltySpec::value(const ModelParams& params) const {
  const int D = params.dims;
  const int M = params.basis;
  double total = 0.0;
  for (const PenaltyTerm& t : terms) {
    if (t.strength == 0.0) continue;
    double r = 0.0;
    switch (t.kind) {
      case PenaltyKind::l1:
        for (double w : params.w) r += std::abs(w);
        break;
      case PenaltyKind::l2:
        for (double w : params.w) r += w * w;
        break;
      case PenaltyKind::group_lasso:
        for (int i = 0; i < D; ++i) {
          for (int j = 0; j < D; ++j) {
            double sq = 0.0;
            for (int m = 0; m < M; ++m) {
              const double w = params.w_at(i, j, m);
              sq += w * w;
            }
            r += std::sqrt(sq);
          }
        }
        break;
    }
    total += t.strength * r;
  }
  return total;
}

void group_soft_threshold(double* v, int len, double thr) {
  double sq = 0.0;
  for (int k = 0; k < len; ++k) sq += v[k] * v[k];
  const double norm = std::sqrt(sq);
  if (norm <= thr) {
    for (int k = 0; k < len; ++k) v[k] = 0.0;
    return;
  }
  const double scale = 1.0 - thr / norm;
  for (int k = 0; k < len; ++k) v[k] *= scale;
}

}  // namespace hawkes
