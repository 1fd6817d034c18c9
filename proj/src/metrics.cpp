#include "hawkes/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hawkes/errors.hpp"
#include "hawkes/likelihood.hpp"

namespace hawkes {

EdgeEstimate EdgeEstimate::from_params(const ModelParams& params) {
  const int D = params.dims;
  const int M = params.basis;
  EdgeEstimate est;
  est.dims = D;
  est.weights.assign(static_cast<std::size_t>(D) * D, 0.0);
  for (int i = 0; i < D; ++i) {
    for (int j = 0; j < D; ++j) {
      double sum = 0.0;
      for (int m = 0; m < M; ++m) sum += params.w_at(i, j, m);
      est.weights[static_cast<std::size_t>(i) * D + j] = sum;
    }
  }
  return est;
}

EdgeEstimate EdgeEstimate::from_posterior(const ModelParams& mode,
                                          const ParamVec& std_devs) {
  EdgeEstimate est = from_params(mode);
  const int D = mode.dims;
  const int M = mode.basis;
  if (std_devs.w.size() != mode.w.size())
    throw ValidationError("posterior std shape mismatch");
  est.stds.assign(static_cast<std::size_t>(D) * D, 0.0);
  for (int i = 0; i < D; ++i) {
    for (int j = 0; j < D; ++j) {
      double sq = 0.0;
      for (int m = 0; m < M; ++m) {
        const double s = std_devs.w[mode.w_index(i, j, m)];
        sq += s * s;
      }
      est.stds[static_cast<std::size_t>(i) * D + j] = std::sqrt(sq);
    }
  }
  return est;
}

void EdgeEstimate::validate() const {
  if (dims <= 0) throw ValidationError("estimate dims must be positive");
  const std::size_t expect = static_cast<std::size_t>(dims) * dims;
  if (weights.size() != expect)
    throw ValidationError("estimate weight shape mismatch");
  if (!stds.empty() && stds.size() != expect)
    throw ValidationError("estimate std shape mismatch");
}

namespace {

void check_pair(const EdgeEstimate& est, const GroundTruth& truth) {
  est.validate();
  if (est.dims != truth.dims)
    throw ValidationError("estimate/truth dimension mismatch");
}

}  // namespace

double f1_score(const EdgeEstimate& est, const GroundTruth& truth, double eta,
                bool include_self) {
  check_pair(est, truth);
  if (!(eta >= 0.0)) throw ValidationError("eta must be nonnegative");
  const int D = est.dims;
  long tp = 0, fp = 0, fn = 0;
  for (int i = 0; i < D; ++i) {
    for (int j = 0; j < D; ++j) {
      if (!include_self && i == j) continue;
      const bool pred = est.weight(i, j) > eta;
      const bool real = truth.edge(i, j);
      if (pred && real) ++tp;
      if (pred && !real) ++fp;
      if (!pred && real) ++fn;
    }
  }
  const long denom = 2 * tp + fp + fn;
  if (denom == 0) return 0.0;
  return 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
}

double precision_at_k(const EdgeEstimate& est, const GroundTruth& truth, int k,
                      bool include_self) {
  check_pair(est, truth);
  const int D = est.dims;
  const int pairs = include_self ? D * D : D * (D - 1);
  if (k < 1 || k > pairs) throw ValidationError("k out of range");

  struct Entry {
    double key;
    int i, j;
  };
  std::vector<Entry> entries;
  entries.reserve(pairs);
  for (int i = 0; i < D; ++i) {
    for (int j = 0; j < D; ++j) {
      if (!include_self && i == j) continue;
      double key;
      if (est.has_stds()) {
        const double w = est.weight(i, j);
        key = w > 0.0 ? est.stds[static_cast<std::size_t>(i) * D + j] / w
                      : std::numeric_limits<double>::infinity();
      } else {
        key = -est.weight(i, j);
      }
      entries.push_back({key, i, j});
    }
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.key != b.key) return a.key < b.key;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });
  int hits = 0;
  for (int r = 0; r < k; ++r) {
    if (truth.edge(entries[r].i, entries[r].j)) ++hits;
  }
  return static_cast<double>(hits) / k;
}

double relative_error(const EdgeEstimate& est, const GroundTruth& truth,
                      bool include_self) {
  check_pair(est, truth);
  const int D = est.dims;
  const std::vector<double>& tw = truth.params.w;
  const int M = truth.params.basis;

  double min_pos = std::numeric_limits<double>::infinity();
  for (int i = 0; i < D; ++i) {
    for (int j = 0; j < D; ++j) {
      if (!include_self && i == j) continue;
      double sum = 0.0;
      for (int m = 0; m < M; ++m)
        sum += tw[truth.params.w_index(i, j, m)];
      if (sum > 0.0) min_pos = std::min(min_pos, sum);
    }
  }
  if (!std::isfinite(min_pos))
    throw DegenerateTruth("truth has no positive weight");

  double total = 0.0;
  long count = 0;
  for (int i = 0; i < D; ++i) {
    for (int j = 0; j < D; ++j) {
      if (!include_self && i == j) continue;
      double w_true = 0.0;
      for (int m = 0; m < M; ++m)
        w_true += tw[truth.params.w_index(i, j, m)];
      const double w_hat = est.weight(i, j);
      total += w_true > 0.0 ? std::abs(w_hat - w_true) / w_true
                            : w_hat / min_pos;
      ++count;
    }
  }
  return total / static_cast<double>(count);
}

FprFnr fpr_fnr(const EdgeEstimate& est, const GroundTruth& truth, double eta,
               bool include_self) {
  check_pair(est, truth);
  if (!(eta >= 0.0)) throw ValidationError("eta must be nonnegative");
  const int D = est.dims;
  long fp = 0, fn = 0, neg = 0, pos = 0;
  for (int i = 0; i < D; ++i) {
    for (int j = 0; j < D; ++j) {
      if (!include_self && i == j) continue;
      const bool pred = est.weight(i, j) > eta;
      const bool real = truth.edge(i, j);
      if (real) {
        ++pos;
        if (!pred) ++fn;
      } else {
        ++neg;
        if (pred) ++fp;
      }
    }
  }
  FprFnr out;
  if (neg > 0) out.fpr = static_cast<double>(fp) / neg;
  if (pos > 0) out.fnr = static_cast<double>(fn) / pos;
  return out;
}

double predictive_loglik(const ModelParams& model, const KernelSpec& kernel,
                         const EventSequence& train,
                         const EventSequence& test) {
  train.validate();
  test.validate();
  if (train.dims != test.dims)
    throw ValidationError("train/test dimension mismatch");
  if (test.events.empty()) throw EmptySplit("test split has no events");
  if (test.events.front().time < train.horizon)
    throw ValidationError("test events must start at or after train horizon");
  if (test.horizon <= train.horizon)
    throw ValidationError("test horizon must extend past train horizon");

  std::vector<Event> merged;
  merged.reserve(train.events.size() + test.events.size());
  merged.insert(merged.end(), train.events.begin(), train.events.end());
  merged.insert(merged.end(), test.events.begin(), test.events.end());
  const EventSequence full =
      EventSequence::checked(std::move(merged), test.horizon, test.dims);
  const double ll = log_likelihood_window(model, kernel, full, train.horizon);
  return ll / static_cast<double>(test.events.size());
}

}  // namespace hawkes
