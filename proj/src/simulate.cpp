#include "hawkes/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "hawkes/errors.hpp"
#include "hawkes/likelihood.hpp"

namespace hawkes {

void StopRule::validate() const {
  const bool by_n = n_events > 0;
  const bool by_t = horizon > 0.0;
  if (by_n == by_t)
    throw ValidationError("stop rule needs exactly one of n_events / horizon");
  if (by_t && !std::isfinite(horizon))
    throw ValidationError("stop horizon must be finite");
}

double SyntheticConfig::resolved_edge_prob() const {
  if (edge_prob > 0.0) return edge_prob;
  return std::log(static_cast<double>(dims)) / dims;
}

void SyntheticConfig::validate() const {
  if (dims <= 0) throw ValidationError("dims must be positive");
  const double p = resolved_edge_prob();
  if (!(p > 0.0 && p <= 1.0))
    throw ValidationError("edge probability must lie in (0, 1]");
  if (!(mu_lo >= 0.0 && mu_hi > mu_lo))
    throw ValidationError("bad mu range");
  if (!(w_lo >= 0.0 && w_hi > w_lo)) throw ValidationError("bad weight range");
  kernel.validate();
  stop.validate();
}

int GroundTruth::edge_count() const {
  int n = 0;
  for (std::uint8_t a : adjacency) n += (a != 0);
  return n;
}

GroundTruth sample_graph(const SyntheticConfig& cfg, Rng& rng) {
  cfg.validate();
  const int D = cfg.dims;
  const int M = cfg.kernel.basis_count();
  const double p = cfg.resolved_edge_prob();

  GroundTruth truth;
  truth.dims = D;
  truth.adjacency.assign(static_cast<std::size_t>(D) * D, 0);
  truth.params = ModelParams::zeros(D, M);
  for (int i = 0; i < D; ++i) {
    double mu = rng.uniform(cfg.mu_lo, cfg.mu_hi);
    while (mu <= 0.0) mu = rng.uniform(cfg.mu_lo, cfg.mu_hi);
    truth.params.mu[i] = mu;
  }
  for (int i = 0; i < D; ++i) {
    for (int j = 0; j < D; ++j) {
      if (!rng.bernoulli(p)) continue;
      truth.adjacency[static_cast<std::size_t>(i) * D + j] = 1;
      for (int m = 0; m < M; ++m) {
        truth.params.w_at(i, j, m) = rng.uniform(cfg.w_lo, cfg.w_hi);
      }
    }
  }
  return truth;
}

namespace {

long long event_cap(const GroundTruth& truth, const KernelSpec& kernel,
                    const StopRule& stop, double rho) {
  double expected;
  if (stop.n_events > 0) {
    expected = static_cast<double>(stop.n_events);
  } else {
    double rate_sum = 0.0;
    if (rho < 0.999) {
      const std::vector<double> rates = stationary_rates(truth.params, kernel);
      for (double r : rates) rate_sum += r;
    } else {
      for (double m : truth.params.mu) rate_sum += m;
      rate_sum *= 10.0;
    }
    expected = rate_sum * stop.horizon;
  }
  const double cap = 100.0 * expected + 1000.0;
  return static_cast<long long>(std::min(cap, 9.0e18));
}

}  // namespace

EventSequence simulate(const GroundTruth& truth, const KernelSpec& kernel,
                       const StopRule& stop, Rng& rng) {
  stop.validate();
  truth.params.validate();
  const ModelParams& params = truth.params;
  const int D = params.dims;
  const int M = kernel.basis_count();
  if (M != params.basis)
    throw ValidationError("truth/kernel basis mismatch");

  const double rho = spectral_radius(branching_matrix(params, kernel), D);
  if (rho >= 1.0) {
    std::fprintf(stderr,
                 "warning: branching spectral radius %.4f >= 1, "
                 "simulation may hit the event cap\n",
                 rho);
  }
  const long long cap = event_cap(truth, kernel, stop, rho);

  double mu_sum = 0.0;
  for (double m : params.mu) mu_sum += m;
  // colsum[j*M+m] = sum_i w(i,j,m), the total outgoing weight of source j.
  std::vector<double> colsum(static_cast<std::size_t>(D) * M, 0.0);
  for (int i = 0; i < D; ++i) {
    for (int j = 0; j < D; ++j) {
      for (int m = 0; m < M; ++m) {
        colsum[static_cast<std::size_t>(j) * M + m] += params.w_at(i, j, m);
      }
    }
  }

  const bool expo = kernel.kind == KernelKind::exponential;
  const double zeta = kernel.zeta;
  double support = 0.0;
  for (int m = 0; m < M; ++m) support = std::max(support, kernel.support_end(m));

  std::vector<Event> events;
  // Exponential state: acc[j] = sum over past events of source j of
  // exp(-zeta (pos - t_k)), valid at time pos.
  std::vector<double> acc(expo ? D : 0, 0.0);
  // Gaussian state: active window [first_active, events.size()) of past
  // events still inside the truncated support at pos.
  std::size_t first_active = 0;
  std::vector<double> scratch(expo ? 0 : static_cast<std::size_t>(D) * M, 0.0);
  std::vector<double> lam_by_dim(D, 0.0);
  double pos = 0.0;

  auto bound_now = [&]() {
    if (expo) {
      double b = mu_sum;
      for (int j = 0; j < D; ++j) b += zeta * colsum[j] * acc[j];
      return b;
    }
    while (first_active < events.size() &&
           pos - events[first_active].time > support)
      ++first_active;
    double b = mu_sum;
    for (std::size_t k = first_active; k < events.size(); ++k) {
      const double dt = pos - events[k].time;
      const std::size_t base = static_cast<std::size_t>(events[k].dim) * M;
      for (int m = 0; m < M; ++m) {
        b += colsum[base + m] * kernel.max_after(m, dt);
      }
    }
    return b;
  };

  // Fills lam_by_dim with the intensities at t (strictly after all accepted
  // events) and returns their sum.
  auto intensities_at = [&](double t) {
    if (expo) {
      const double decay = std::exp(-zeta * (t - pos));
      double total = 0.0;
      for (int i = 0; i < D; ++i) {
        double lam = params.mu[i];
        const double* wrow = params.w.data() + static_cast<std::size_t>(i) * D;
        for (int j = 0; j < D; ++j) lam += zeta * wrow[j] * acc[j] * decay;
        lam_by_dim[i] = lam;
        total += lam;
      }
      return total;
    }
    std::fill(scratch.begin(), scratch.end(), 0.0);
    for (std::size_t k = first_active; k < events.size(); ++k) {
      const double dt = t - events[k].time;
      if (dt > support) continue;
      const std::size_t base = static_cast<std::size_t>(events[k].dim) * M;
      for (int m = 0; m < M; ++m) scratch[base + m] += kernel.eval(m, dt);
    }
    double total = 0.0;
    for (int i = 0; i < D; ++i) {
      double lam = params.mu[i];
      const double* wrow =
          params.w.data() + static_cast<std::size_t>(i) * D * M;
      for (std::size_t jm = 0; jm < scratch.size(); ++jm)
        lam += wrow[jm] * scratch[jm];
      lam_by_dim[i] = lam;
      total += lam;
    }
    return total;
  };

  auto advance_to = [&](double t) {
    if (expo) {
      const double decay = std::exp(-zeta * (t - pos));
      for (int j = 0; j < D; ++j) acc[j] *= decay;
    }
    pos = t;
  };

  double bound = bound_now();
  while (true) {
    double wait = rng.exponential(bound);
    while (wait <= 0.0) wait = rng.exponential(bound);
    const double t = pos + wait;
    if (stop.horizon > 0.0 && t >= stop.horizon) break;

    const double total = intensities_at(t);
    const double v = rng.uniform01() * bound;
    if (v <= total) {
      int dim = D - 1;
      double cum = 0.0;
      for (int i = 0; i < D; ++i) {
        cum += lam_by_dim[i];
        if (v < cum) {
          dim = i;
          break;
        }
      }
      advance_to(t);
      events.push_back({t, dim});
      if (expo) acc[dim] += 1.0;
      if (static_cast<long long>(events.size()) > cap)
        throw SimulationCapExceeded(
            "event cap " + std::to_string(cap) +
            " exceeded, parameters are likely supercritical");
      if (stop.n_events > 0 &&
          static_cast<long long>(events.size()) == stop.n_events)
        break;
    } else {
      advance_to(t);
    }
    bound = bound_now();
  }

  EventSequence seq;
  seq.dims = D;
  seq.events = std::move(events);
  if (stop.horizon > 0.0) {
    seq.horizon = stop.horizon;
  } else {
    const double last = seq.events.back().time;
    seq.horizon = last + last / static_cast<double>(stop.n_events);
  }
  seq.validate();
  return seq;
}

SyntheticDraw make_synthetic(const SyntheticConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  SyntheticDraw draw;
  draw.truth = sample_graph(cfg, rng);
  draw.seq = simulate(draw.truth, cfg.kernel, cfg.stop, rng);
  return draw;
}

}  // namespace hawkes
