#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hawkes/errors.hpp"

namespace hawkes {

struct Event {
  double time = 0.0;
  int dim = 0;
};

/// Ordered marked timestamps (t_n, i_n) over [0, T): times strictly
/// increasing, every time in [0, T), every dim in [0, D).
struct EventSequence {
  std::vector<Event> events;
  double horizon = 0.0;
  int dims = 0;

  std::size_t size() const { return events.size(); }

  /// Validating constructor path: throws ValidationError on any broken
  /// invariant. Input must already be strictly increasing.
  static EventSequence checked(std::vector<Event> events, double horizon,
                               int dims);

  /// Sorts (stable) and applies the tie-breaking rule, then validates.
  static EventSequence ingest(std::vector<Event> events, double horizon,
                              int dims);

  void validate() const;
};

/// Equal timestamps are spread by stable-order epsilon steps (1e-9 per slot,
/// shrunk when the gap to the next distinct time demands it) so strict
/// ordering holds. Input must be sorted (nondecreasing).
void perturb_ties(std::vector<Event>& sorted_events, double horizon);

enum class KernelKind { exponential, gaussian_basis };

/// Excitation basis bank. Exponential: zeta * exp(-zeta t), unit mass.
/// Gaussian basis m: (2 pi b^2)^{-1} exp(-(t - tau_m)^2 / (2 b^2)); note
/// the (2 pi b^2)^{-1} prefactor, so each basis carries mass
/// (2 pi b^2)^{-1/2} over the real line rather than 1. Gaussian evaluation
/// is truncated to zero beyond |t - tau_m| > 6b; integrals use the error
/// function without truncation.
struct KernelSpec {
  KernelKind kind = KernelKind::exponential;
  double zeta = 1.0;             // exponential decay, 1/time
  std::vector<double> centers;   // gaussian centers tau_m, nondecreasing
  double scale = 1.0;            // gaussian common scale b

  static KernelSpec make_exponential(double zeta);
  static KernelSpec make_gaussian(std::vector<double> centers, double scale);
  /// Cutoff parameterization: tau_m = cutoff*(m-1)/M, b = cutoff/(pi*M).
  static KernelSpec make_gaussian_cutoff(int basis_count, double cutoff);

  int basis_count() const {
    return kind == KernelKind::exponential
               ? 1
               : static_cast<int>(centers.size());
  }

  double eval(int m, double t) const;
  /// Integral of basis m over [a, b_upper], 0 <= a <= b_upper (b_upper may
  /// be +infinity).
  double integral(int m, double a, double b_upper) const;
  /// Integral over [0, inf).
  double mass(int m) const;
  /// Smallest t past which eval(m, .) is identically zero (inf for the
  /// exponential kernel).
  double support_end(int m) const;
  /// sup over s >= dt of eval(m, s); the thinning bound building block.
  double max_after(int m, double dt) const;

  void validate() const;
};

/// Exogenous rates mu (length D, strictly positive) and excitation weights
/// w (D x D x M, nonnegative, row-major in (i, j, m)). Convention:
/// w(i, j, m) scales basis m of events from source j in the intensity of
/// target i.
struct ModelParams {
  int dims = 0;
  int basis = 1;
  std::vector<double> mu;
  std::vector<double> w;

  static ModelParams zeros(int dims, int basis);

  std::size_t w_index(int i, int j, int m) const {
    return (static_cast<std::size_t>(i) * dims + j) * basis + m;
  }
  double& w_at(int i, int j, int m) { return w[w_index(i, j, m)]; }
  double w_at(int i, int j, int m) const { return w[w_index(i, j, m)]; }

  void validate() const;
};

/// Plain (mu, w)-shaped arrays: gradients, standard deviations, etc.
struct ParamVec {
  std::vector<double> mu;
  std::vector<double> w;
};

}  // namespace hawkes
