#pragma once

#include <cstdint>
#include <vector>

#include "hawkes/adam.hpp"
#include "hawkes/rng.hpp"
#include "hawkes/types.hpp"

namespace hawkes {

enum class WPrior { gaussian, laplace, group_laplace, column_group };

/// Per-parameter (or per-group) prior scales. alpha_mu holds one Gaussian
/// variance per baseline. alpha_w has one entry per weight for gaussian and
/// laplace, one per (target, source) pair for group_laplace, and one per
/// source column for column_group.
struct PriorSpec {
  int dims = 0;
  int basis = 1;
  WPrior w_kind = WPrior::laplace;
  std::vector<double> alpha_mu;
  std::vector<double> alpha_w;

  static PriorSpec uniform(int dims, int basis, WPrior w_kind, double alpha0);
  std::size_t w_alpha_count() const;
  void validate() const;
};

/// Mean-field log-normal posterior: each parameter x has
/// log x ~ Normal(gamma_mu, e^{2 gamma_sigma}).
struct VariationalState {
  int dims = 0;
  int basis = 1;
  ParamVec gamma_mu;
  ParamVec gamma_sigma;
};

struct EmConfig {
  int L = 1;
  double beta = 0.5;
  int t_e = 100;
  int t_em = 100;
  double eta = 0.02;
  double lr_decay = 1.0 - 1e-4;
  std::uint64_t seed = 1;
  double init_gamma_mu_mean = 0.1;
  double init_gamma_mu_std = 0.1;
  double init_gamma_sigma_mean = 0.2;
  double init_gamma_sigma_std = 0.1;
  double init_gamma_sigma_lo = 0.01;
  double init_gamma_sigma_hi = 2.0;
  double init_alpha = 0.1;
  void validate() const;
};

VariationalState init_state(int dims, int basis, const EmConfig& cfg, Rng& rng);

ModelParams reparam_sample(const VariationalState& state, const ParamVec& eps);

double log_prior(const PriorSpec& prior, const ModelParams& params);

/// Value of log_prior plus, when grad is non-null, its gradient in the
/// parameters (overwritten, not accumulated).
double log_prior_with_grad(const PriorSpec& prior, const ModelParams& params,
                           ParamVec* grad);

double elbo_estimate(const VariationalState& state, const PriorSpec& prior,
                     const EventSequence& seq, const KernelSpec& kernel,
                     const std::vector<ParamVec>& eps_samples);

/// One Monte-Carlo objective term: log-likelihood plus log-prior at the
/// reparameterized sample, with chain-rule gradients in (gamma_mu,
/// gamma_sigma) accumulated into the grad outputs when non-null. The entropy
/// term is not included.
double sample_joint_with_grad(const VariationalState& state,
                              const PriorSpec& prior,
                              const EventSequence& seq,
                              const KernelSpec& kernel, const ParamVec& eps,
                              ParamVec* grad_gamma_mu,
                              ParamVec* grad_gamma_sigma);

/// Optimizer state threaded through E-step rounds so successive rounds
/// continue a single ascent.
struct EStepContext {
  AdamState adam;
  double lr = 0.02;
  bool ready = false;
};

/// Runs cfg.t_e ascent steps on the reparameterized objective; records one
/// Monte-Carlo ELBO value per step (at the pre-update state) when trace is
/// non-null.
VariationalState e_step(const VariationalState& state, const PriorSpec& prior,
                        const EventSequence& seq, const KernelSpec& kernel,
                        const EmConfig& cfg, Rng& rng, EStepContext& ctx,
                        std::vector<double>* trace = nullptr);

VariationalState e_step(const VariationalState& state, const PriorSpec& prior,
                        const EventSequence& seq, const KernelSpec& kernel,
                        const EmConfig& cfg, Rng& rng);

struct AlphaUpdate {
  std::vector<double> alpha_mu;
  std::vector<double> alpha_w;
};

/// Evidence-maximizing scale update from sampled parameters: mean square for
/// gaussian, mean magnitude for laplace, mean group norm over group size for
/// the group variants.
AlphaUpdate m_step_closed_form(const PriorSpec& prior,
                               const std::vector<ModelParams>& samples);

/// Momentum-damped scale update with fresh reparameterized samples.
PriorSpec m_step(const PriorSpec& prior, const VariationalState& state,
                 const EmConfig& cfg, Rng& rng);

struct VIReport {
  VariationalState state;
  PriorSpec prior;
  std::vector<double> elbo_steps;   // one Monte-Carlo estimate per E-step
  std::vector<double> elbo_rounds;  // per-round mean of elbo_steps
  int e_steps = 0;
};

VIReport fit_vi(const EventSequence& seq, const KernelSpec& kernel,
                WPrior w_kind, const EmConfig& cfg);

ModelParams posterior_mode(const VariationalState& state);

/// Log-normal standard deviation per parameter:
/// sqrt(e^{s^2}-1) * exp(gamma_mu + s^2/2) with s = e^{gamma_sigma}.
ParamVec posterior_std(const VariationalState& state);

}  // namespace hawkes
