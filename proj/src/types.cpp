#include "hawkes/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hawkes {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTieEpsilon = 1e-9;
constexpr double kGaussianCutoffSigmas = 6.0;

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

EventSequence EventSequence::checked(std::vector<Event> events, double horizon,
                                     int dims) {
  EventSequence seq{std::move(events), horizon, dims};
  seq.validate();
  return seq;
}

EventSequence EventSequence::ingest(std::vector<Event> events, double horizon,
                                    int dims) {
  std::stable_sort(events.begin(), events.end(),
                   [](const Event& a, const Event& b) { return a.time < b.time; });
  perturb_ties(events, horizon);
  return checked(std::move(events), horizon, dims);
}

void EventSequence::validate() const {
  if (dims <= 0) throw ValidationError("dims must be positive");
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw ValidationError("horizon must be positive and finite");
  double prev = -1.0;
  for (std::size_t n = 0; n < events.size(); ++n) {
    const Event& e = events[n];
    if (!(e.time >= 0.0) || !std::isfinite(e.time))
      throw ValidationError("event time must be finite and nonnegative");
    if (e.time >= horizon)
      throw ValidationError("event time must be below the horizon");
    if (e.time <= prev)
      throw ValidationError("event times must be strictly increasing");
    if (e.dim < 0 || e.dim >= dims)
      throw ValidationError("event dim out of range");
    prev = e.time;
  }
}

void perturb_ties(std::vector<Event>& sorted_events, double horizon) {
  const std::size_t n = sorted_events.size();
  std::size_t run_start = 0;
  while (run_start < n) {
    std::size_t run_end = run_start + 1;
    while (run_end < n &&
           sorted_events[run_end].time == sorted_events[run_start].time) {
      ++run_end;
    }
    const std::size_t run_len = run_end - run_start;
    if (run_len > 1) {
      const double t0 = sorted_events[run_start].time;
      const double next =
          run_end < n ? sorted_events[run_end].time : horizon;
      double step = kTieEpsilon;
      // Shrink the step if the run would collide with the next distinct time.
      if (t0 + static_cast<double>(run_len) * step >= next) {
        step = (next - t0) / static_cast<double>(run_len + 1);
      }
      for (std::size_t k = 1; k < run_len; ++k) {
        sorted_events[run_start + k].time = t0 + static_cast<double>(k) * step;
      }
    }
    run_start = run_end;
  }
}

KernelSpec KernelSpec::make_exponential(double zeta) {
  KernelSpec spec;
  spec.kind = KernelKind::exponential;
  spec.zeta = zeta;
  spec.validate();
  return spec;
}

KernelSpec KernelSpec::make_gaussian(std::vector<double> centers, double scale) {
  KernelSpec spec;
  spec.kind = KernelKind::gaussian_basis;
  spec.centers = std::move(centers);
  spec.scale = scale;
  spec.validate();
  return spec;
}

KernelSpec KernelSpec::make_gaussian_cutoff(int basis_count, double cutoff) {
  if (basis_count <= 0) throw ValidationError("basis count must be positive");
  if (!(cutoff > 0.0)) throw ValidationError("cutoff must be positive");
  std::vector<double> centers(basis_count);
  for (int m = 0; m < basis_count; ++m) {
    centers[m] = cutoff * static_cast<double>(m) / basis_count;
  }
  return make_gaussian(std::move(centers), cutoff / (kPi * basis_count));
}

void KernelSpec::validate() const {
  if (kind == KernelKind::exponential) {
    if (!(zeta > 0.0)) throw ValidationError("zeta must be positive");
    return;
  }
  if (centers.empty()) throw ValidationError("gaussian basis needs centers");
  if (!(scale > 0.0)) throw ValidationError("gaussian scale must be positive");
  for (std::size_t m = 0; m + 1 < centers.size(); ++m) {
    if (centers[m] > centers[m + 1])
      throw ValidationError("gaussian centers must be nondecreasing");
  }
  for (double c : centers) {
    if (c < 0.0 || !std::isfinite(c))
      throw ValidationError("gaussian centers must be finite and nonnegative");
  }
}

double KernelSpec::eval(int m, double t) const {
  if (kind == KernelKind::exponential) {
    return zeta * std::exp(-zeta * t);
  }
  const double dt = t - centers[m];
  if (std::abs(dt) > kGaussianCutoffSigmas * scale) return 0.0;
  const double norm = 1.0 / (2.0 * kPi * scale * scale);
  return norm * std::exp(-dt * dt / (2.0 * scale * scale));
}

double KernelSpec::integral(int m, double a, double b_upper) const {
  if (kind == KernelKind::exponential) {
    if (std::isinf(b_upper)) return std::exp(-zeta * a);
    return std::exp(-zeta * a) - std::exp(-zeta * b_upper);
  }
  const double tau = centers[m];
  const double hi = std::isinf(b_upper) ? 1.0 : normal_cdf((b_upper - tau) / scale);
  const double lo = normal_cdf((a - tau) / scale);
  // (2 pi b^2)^{-1} * b sqrt(2 pi) = (2 pi b^2)^{-1/2}
  return (hi - lo) / std::sqrt(2.0 * kPi * scale * scale);
}

double KernelSpec::mass(int m) const {
  return integral(m, 0.0, std::numeric_limits<double>::infinity());
}

double KernelSpec::support_end(int m) const {
  if (kind == KernelKind::exponential)
    return std::numeric_limits<double>::infinity();
  return centers[m] + kGaussianCutoffSigmas * scale;
}

double KernelSpec::max_after(int m, double dt) const {
  if (kind == KernelKind::exponential) return zeta * std::exp(-zeta * dt);
  if (dt <= centers[m]) return 1.0 / (2.0 * kPi * scale * scale);
  return eval(m, dt);
}

ModelParams ModelParams::zeros(int dims, int basis) {
  ModelParams p;
  p.dims = dims;
  p.basis = basis;
  p.mu.assign(static_cast<std::size_t>(dims), 0.0);
  p.w.assign(static_cast<std::size_t>(dims) * dims * basis, 0.0);
  return p;
}

void ModelParams::validate() const {
  if (dims <= 0 || basis <= 0)
    throw ValidationError("params dims and basis must be positive");
  if (mu.size() != static_cast<std::size_t>(dims))
    throw ValidationError("mu size mismatch");
  if (w.size() != static_cast<std::size_t>(dims) * dims * basis)
    throw ValidationError("w size mismatch");
  for (double v : mu) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw ValidationError("mu entries must be strictly positive and finite");
  }
  for (double v : w) {
    if (!(v >= 0.0) || !std::isfinite(v))
      throw ValidationError("w entries must be nonnegative and finite");
  }
}

}  // namespace hawkes
