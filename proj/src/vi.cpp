#include "hawkes/vi.hpp"

#include <algorithm>
#include <cmath>

#include "hawkes/errors.hpp"
#include "hawkes/likelihood.hpp"

namespace hawkes {

namespace {

constexpr double kLogTwoPi = 1.8378770664093454835606594728112;

std::size_t param_count(int dims, int basis) {
  return static_cast<std::size_t>(dims) +
         static_cast<std::size_t>(dims) * dims * basis;
}

ParamVec zero_like(int dims, int basis) {
  ParamVec v;
  v.mu.assign(static_cast<std::size_t>(dims), 0.0);
  v.w.assign(static_cast<std::size_t>(dims) * dims * basis, 0.0);
  return v;
}

ParamVec draw_noise(int dims, int basis, Rng& rng) {
  ParamVec eps = zero_like(dims, basis);
  for (double& e : eps.mu) e = rng.normal();
  for (double& e : eps.w) e = rng.normal();
  return eps;
}

double entropy_sum(const VariationalState& s) {
  double total = 0.0;
  for (double g : s.gamma_mu.mu) total += g;
  for (double g : s.gamma_mu.w) total += g;
  for (double g : s.gamma_sigma.mu) total += g;
  for (double g : s.gamma_sigma.w) total += g;
  return total;
}

}  // namespace

PriorSpec PriorSpec::uniform(int dims, int basis, WPrior w_kind,
                             double alpha0) {
  PriorSpec p;
  p.dims = dims;
  p.basis = basis;
  p.w_kind = w_kind;
  p.alpha_mu.assign(static_cast<std::size_t>(dims), alpha0);
  p.alpha_w.assign(p.w_alpha_count(), alpha0);
  return p;
}

std::size_t PriorSpec::w_alpha_count() const {
  const std::size_t d = static_cast<std::size_t>(dims);
  switch (w_kind) {
    case WPrior::gaussian:
    case WPrior::laplace:
      return d * d * basis;
    case WPrior::group_laplace:
      return d * d;
    case WPrior::column_group:
      return d;
  }
  return 0;
}

void PriorSpec::validate() const {
  if (dims <= 0 || basis <= 0) throw ValidationError("bad prior shape");
  if (alpha_mu.size() != static_cast<std::size_t>(dims) ||
      alpha_w.size() != w_alpha_count())
    throw ValidationError("prior scale count mismatch");
  for (double a : alpha_mu) {
    if (!(a > 0.0) || !std::isfinite(a))
      throw ValidationError("prior scales must be positive finite");
  }
  for (double a : alpha_w) {
    if (!(a > 0.0) || !std::isfinite(a))
      throw ValidationError("prior scales must be positive finite");
  }
}

void EmConfig::validate() const {
  if (L < 1) throw ValidationError("L must be at least 1");
  if (!(beta >= 0.0 && beta < 1.0)) throw ValidationError("beta not in [0,1)");
  if (!(eta > 0.0)) throw ValidationError("eta must be positive");
  if (t_e < 0 || t_em < 0) throw ValidationError("negative step counts");
  if (!(lr_decay > 0.0 && lr_decay <= 1.0))
    throw ValidationError("lr_decay not in (0,1]");
  if (!(init_gamma_sigma_lo <= init_gamma_sigma_hi))
    throw ValidationError("bad gamma_sigma clip range");
  if (!(init_alpha > 0.0)) throw ValidationError("init_alpha must be positive");
}

VariationalState init_state(int dims, int basis, const EmConfig& cfg,
                            Rng& rng) {
  VariationalState s;
  s.dims = dims;
  s.basis = basis;
  s.gamma_mu = zero_like(dims, basis);
  s.gamma_sigma = zero_like(dims, basis);
  for (double& g : s.gamma_mu.mu)
    g = rng.normal(cfg.init_gamma_mu_mean, cfg.init_gamma_mu_std);
  for (double& g : s.gamma_mu.w)
    g = rng.normal(cfg.init_gamma_mu_mean, cfg.init_gamma_mu_std);
  auto clipped = [&]() {
    const double g =
        rng.normal(cfg.init_gamma_sigma_mean, cfg.init_gamma_sigma_std);
    return std::clamp(g, cfg.init_gamma_sigma_lo, cfg.init_gamma_sigma_hi);
  };
  for (double& g : s.gamma_sigma.mu) g = clipped();
  for (double& g : s.gamma_sigma.w) g = clipped();
  return s;
}

ModelParams reparam_sample(const VariationalState& state, const ParamVec& eps) {
  ModelParams p = ModelParams::zeros(state.dims, state.basis);
  for (std::size_t i = 0; i < p.mu.size(); ++i) {
    p.mu[i] = std::exp(state.gamma_mu.mu[i] +
                       std::exp(state.gamma_sigma.mu[i]) * eps.mu[i]);
  }
  for (std::size_t k = 0; k < p.w.size(); ++k) {
    p.w[k] = std::exp(state.gamma_mu.w[k] +
                      std::exp(state.gamma_sigma.w[k]) * eps.w[k]);
  }
  return p;
}

double log_prior_with_grad(const PriorSpec& prior, const ModelParams& params,
                           ParamVec* grad) {
  prior.validate();
  if (params.dims != prior.dims || params.basis != prior.basis)
    throw ValidationError("prior/params shape mismatch");
  const int D = prior.dims;
  const int M = prior.basis;
  if (grad) {
    grad->mu.assign(params.mu.size(), 0.0);
    grad->w.assign(params.w.size(), 0.0);
  }

  double lp = 0.0;
  for (int i = 0; i < D; ++i) {
    const double a = prior.alpha_mu[i];
    const double x = params.mu[i];
    lp += -x * x / (2.0 * a) - 0.5 * std::log(a) - 0.5 * kLogTwoPi;
    if (grad) grad->mu[i] = -x / a;
  }

  switch (prior.w_kind) {
    case WPrior::gaussian:
      for (std::size_t k = 0; k < params.w.size(); ++k) {
        const double a = prior.alpha_w[k];
        const double x = params.w[k];
        lp += -x * x / (2.0 * a) - 0.5 * std::log(a) - 0.5 * kLogTwoPi;
        if (grad) grad->w[k] = -x / a;
      }
      break;
    case WPrior::laplace:
      for (std::size_t k = 0; k < params.w.size(); ++k) {
        const double a = prior.alpha_w[k];
        const double x = params.w[k];
        lp += -std::abs(x) / a - std::log(2.0 * a);
        if (grad) grad->w[k] = (x > 0.0 ? -1.0 : (x < 0.0 ? 1.0 : 0.0)) / a;
      }
      break;
    case WPrior::group_laplace:
      for (int i = 0; i < D; ++i) {
        for (int j = 0; j < D; ++j) {
          const double a = prior.alpha_w[static_cast<std::size_t>(i) * D + j];
          double sq = 0.0;
          for (int m = 0; m < M; ++m) {
            const double x = params.w_at(i, j, m);
            sq += x * x;
          }
          const double norm = std::sqrt(sq);
          lp += -norm / a - M * std::log(a);
          if (grad && norm > 0.0) {
            for (int m = 0; m < M; ++m) {
              grad->w[params.w_index(i, j, m)] =
                  -params.w_at(i, j, m) / (a * norm);
            }
          }
        }
      }
      break;
    case WPrior::column_group:
      for (int j = 0; j < D; ++j) {
        const double a = prior.alpha_w[j];
        double sq = 0.0;
        for (int i = 0; i < D; ++i) {
          for (int m = 0; m < M; ++m) {
            const double x = params.w_at(i, j, m);
            sq += x * x;
          }
        }
        const double norm = std::sqrt(sq);
        lp += -norm / a - D * std::log(a);
        if (grad && norm > 0.0) {
          for (int i = 0; i < D; ++i) {
            for (int m = 0; m < M; ++m) {
              grad->w[params.w_index(i, j, m)] =
                  -params.w_at(i, j, m) / (a * norm);
            }
          }
        }
      }
      break;
  }
  return lp;
}

double log_prior(const PriorSpec& prior, const ModelParams& params) {
  return log_prior_with_grad(prior, params, nullptr);
}

double sample_joint_with_grad(const VariationalState& state,
                              const PriorSpec& prior,
                              const EventSequence& seq,
                              const KernelSpec& kernel, const ParamVec& eps,
                              ParamVec* grad_gamma_mu,
                              ParamVec* grad_gamma_sigma) {
  const ModelParams theta = reparam_sample(state, eps);
  const bool want_grad = grad_gamma_mu || grad_gamma_sigma;
  ParamVec jll, jpr;
  const double ll =
      log_likelihood_with_grad(theta, kernel, seq, want_grad ? &jll : nullptr);
  const double lp =
      log_prior_with_grad(prior, theta, want_grad ? &jpr : nullptr);
  if (want_grad) {
    for (std::size_t i = 0; i < theta.mu.size(); ++i) {
      const double j = (jll.mu[i] + jpr.mu[i]) * theta.mu[i];
      if (grad_gamma_mu) grad_gamma_mu->mu[i] += j;
      if (grad_gamma_sigma)
        grad_gamma_sigma->mu[i] +=
            j * eps.mu[i] * std::exp(state.gamma_sigma.mu[i]);
    }
    for (std::size_t k = 0; k < theta.w.size(); ++k) {
      const double j = (jll.w[k] + jpr.w[k]) * theta.w[k];
      if (grad_gamma_mu) grad_gamma_mu->w[k] += j;
      if (grad_gamma_sigma)
        grad_gamma_sigma->w[k] +=
            j * eps.w[k] * std::exp(state.gamma_sigma.w[k]);
    }
  }
  return ll + lp;
}

double elbo_estimate(const VariationalState& state, const PriorSpec& prior,
                     const EventSequence& seq, const KernelSpec& kernel,
                     const std::vector<ParamVec>& eps_samples) {
  if (eps_samples.empty()) throw ValidationError("need at least one noise draw");
  double sum = 0.0;
  for (const ParamVec& eps : eps_samples) {
    sum += sample_joint_with_grad(state, prior, seq, kernel, eps, nullptr,
                                  nullptr);
  }
  return sum / static_cast<double>(eps_samples.size()) + entropy_sum(state);
}

VariationalState e_step(const VariationalState& state, const PriorSpec& prior,
                        const EventSequence& seq, const KernelSpec& kernel,
                        const EmConfig& cfg, Rng& rng, EStepContext& ctx,
                        std::vector<double>* trace) {
  cfg.validate();
  const int D = state.dims;
  const int M = state.basis;
  const std::size_t n = param_count(D, M);
  if (!ctx.ready) {
    ctx.adam.resize(2 * n);
    ctx.lr = cfg.eta;
    ctx.ready = true;
  }

  VariationalState cur = state;
  std::vector<double> grad(2 * n), dir(2 * n);
  ParamVec gmu, gsig;
  for (int step = 0; step < cfg.t_e; ++step) {
    gmu = zero_like(D, M);
    gsig = zero_like(D, M);
    double obj_sum = 0.0;
    for (int l = 0; l < cfg.L; ++l) {
      const ParamVec eps = draw_noise(D, M, rng);
      obj_sum +=
          sample_joint_with_grad(cur, prior, seq, kernel, eps, &gmu, &gsig);
    }
    const double inv_l = 1.0 / cfg.L;
    if (trace) trace->push_back(obj_sum * inv_l + entropy_sum(cur));

    std::size_t at = 0;
    for (double g : gmu.mu) grad[at++] = g * inv_l + 1.0;
    for (double g : gmu.w) grad[at++] = g * inv_l + 1.0;
    for (double g : gsig.mu) grad[at++] = g * inv_l + 1.0;
    for (double g : gsig.w) grad[at++] = g * inv_l + 1.0;

    ctx.adam.update(grad.data(), 2 * n, dir.data());
    at = 0;
    for (double& g : cur.gamma_mu.mu) g += ctx.lr * dir[at++];
    for (double& g : cur.gamma_mu.w) g += ctx.lr * dir[at++];
    for (double& g : cur.gamma_sigma.mu) g += ctx.lr * dir[at++];
    for (double& g : cur.gamma_sigma.w) g += ctx.lr * dir[at++];
    ctx.lr *= cfg.lr_decay;
  }
  return cur;
}

VariationalState e_step(const VariationalState& state, const PriorSpec& prior,
                        const EventSequence& seq, const KernelSpec& kernel,
                        const EmConfig& cfg, Rng& rng) {
  EStepContext ctx;
  return e_step(state, prior, seq, kernel, cfg, rng, ctx, nullptr);
}

AlphaUpdate m_step_closed_form(const PriorSpec& prior,
                               const std::vector<ModelParams>& samples) {
  prior.validate();
  if (samples.empty()) throw ValidationError("need at least one sample");
  const int D = prior.dims;
  const int M = prior.basis;
  const double inv_l = 1.0 / static_cast<double>(samples.size());

  AlphaUpdate out;
  out.alpha_mu.assign(prior.alpha_mu.size(), 0.0);
  out.alpha_w.assign(prior.alpha_w.size(), 0.0);
  for (const ModelParams& p : samples) {
    for (int i = 0; i < D; ++i) out.alpha_mu[i] += p.mu[i] * p.mu[i] * inv_l;
    switch (prior.w_kind) {
      case WPrior::gaussian:
        for (std::size_t k = 0; k < p.w.size(); ++k)
          out.alpha_w[k] += p.w[k] * p.w[k] * inv_l;
        break;
      case WPrior::laplace:
        for (std::size_t k = 0; k < p.w.size(); ++k)
          out.alpha_w[k] += std::abs(p.w[k]) * inv_l;
        break;
      case WPrior::group_laplace:
        for (int i = 0; i < D; ++i) {
          for (int j = 0; j < D; ++j) {
            double sq = 0.0;
            for (int m = 0; m < M; ++m) {
              const double x = p.w_at(i, j, m);
              sq += x * x;
            }
            out.alpha_w[static_cast<std::size_t>(i) * D + j] +=
                std::sqrt(sq) / M * inv_l;
          }
        }
        break;
      case WPrior::column_group:
        for (int j = 0; j < D; ++j) {
          double sq = 0.0;
          for (int i = 0; i < D; ++i) {
            for (int m = 0; m < M; ++m) {
              const double x = p.w_at(i, j, m);
              sq += x * x;
            }
          }
          out.alpha_w[j] += std::sqrt(sq) / D * inv_l;
        }
        break;
    }
  }
  return out;
}

PriorSpec m_step(const PriorSpec& prior, const VariationalState& state,
                 const EmConfig& cfg, Rng& rng) {
  cfg.validate();
  std::vector<ModelParams> samples;
  samples.reserve(cfg.L);
  for (int l = 0; l < cfg.L; ++l) {
    samples.push_back(
        reparam_sample(state, draw_noise(state.dims, state.basis, rng)));
  }
  const AlphaUpdate closed = m_step_closed_form(prior, samples);
  PriorSpec next = prior;
  for (std::size_t i = 0; i < next.alpha_mu.size(); ++i) {
    next.alpha_mu[i] =
        cfg.beta * prior.alpha_mu[i] + (1.0 - cfg.beta) * closed.alpha_mu[i];
  }
  for (std::size_t k = 0; k < next.alpha_w.size(); ++k) {
    next.alpha_w[k] =
        cfg.beta * prior.alpha_w[k] + (1.0 - cfg.beta) * closed.alpha_w[k];
  }
  return next;
}

VIReport fit_vi(const EventSequence& seq, const KernelSpec& kernel,
                WPrior w_kind, const EmConfig& cfg) {
  seq.validate();
  kernel.validate();
  cfg.validate();
  if (seq.events.empty())
    throw ValidationError("fit_vi needs a nonempty sequence");

  const int D = seq.dims;
  const int M = kernel.basis_count();
  Rng rng(cfg.seed);

  VIReport report;
  report.state = init_state(D, M, cfg, rng);
  report.prior = PriorSpec::uniform(D, M, w_kind, cfg.init_alpha);
  EStepContext ctx;
  for (int round = 0; round < cfg.t_em; ++round) {
    const std::size_t mark = report.elbo_steps.size();
    report.state = e_step(report.state, report.prior, seq, kernel, cfg, rng,
                          ctx, &report.elbo_steps);
    report.e_steps += cfg.t_e;
    if (report.elbo_steps.size() > mark) {
      double sum = 0.0;
      for (std::size_t k = mark; k < report.elbo_steps.size(); ++k)
        sum += report.elbo_steps[k];
      report.elbo_rounds.push_back(
          sum / static_cast<double>(report.elbo_steps.size() - mark));
    }
    report.prior = m_step(report.prior, report.state, cfg, rng);
  }
  return report;
}

ModelParams posterior_mode(const VariationalState& state) {
  ModelParams p = ModelParams::zeros(state.dims, state.basis);
  for (std::size_t i = 0; i < p.mu.size(); ++i) {
    p.mu[i] = std::exp(state.gamma_mu.mu[i] -
                       std::exp(2.0 * state.gamma_sigma.mu[i]));
  }
  for (std::size_t k = 0; k < p.w.size(); ++k) {
    p.w[k] = std::exp(state.gamma_mu.w[k] -
                      std::exp(2.0 * state.gamma_sigma.w[k]));
  }
  return p;
}

ParamVec posterior_std(const VariationalState& state) {
  ParamVec out = zero_like(state.dims, state.basis);
  auto one = [](double gm, double gs) {
    const double s = std::exp(gs);
    const double s2 = s * s;
    return std::sqrt(std::expm1(s2)) * std::exp(gm + 0.5 * s2);
  };
  for (std::size_t i = 0; i < out.mu.size(); ++i) {
    out.mu[i] = one(state.gamma_mu.mu[i], state.gamma_sigma.mu[i]);
  }
  for (std::size_t k = 0; k < out.w.size(); ++k) {
    out.w[k] = one(state.gamma_mu.w[k], state.gamma_sigma.w[k]);
  }
  return out;
}

}  // namespace hawkes
