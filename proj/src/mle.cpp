#include "hawkes/mle.hpp"

#include <algorithm>
#include <cmath>

#include "hawkes/adam.hpp"
#include "hawkes/errors.hpp"
#include "hawkes/likelihood.hpp"

namespace hawkes {

FitReport fit_mle(const EventSequence& seq, const KernelSpec& kernel,
                  const PenaltySpec& pen, const OptimizerOptions& opts) {
  seq.validate();
  kernel.validate();
  pen.validate();
  if (seq.events.empty())
    throw ValidationError("fit_mle needs a nonempty sequence");

  const int D = seq.dims;
  const int M = kernel.basis_count();
  const std::size_t nmu = static_cast<std::size_t>(D);
  const std::size_t nw = static_cast<std::size_t>(D) * D * M;
  const std::size_t n = nmu + nw;

  const double c_l2 = pen.strength_of(PenaltyKind::l2);
  const double c_l1 = pen.strength_of(PenaltyKind::l1);
  const double c_gl = pen.strength_of(PenaltyKind::group_lasso);

  FitReport report;
  report.params = ModelParams::zeros(D, M);
  const double mu0 = std::max(
      opts.mu_floor,
      static_cast<double>(seq.events.size()) / (seq.horizon * D));
  for (int i = 0; i < D; ++i) report.params.mu[i] = mu0;

  AdamState adam;
  adam.resize(n);
  std::vector<double> grad(n), dir(n), scale(n);
  ParamVec ll_grad;

  auto objective = [&](const ModelParams& p, ParamVec* g) {
    const double ll = log_likelihood_with_grad(p, kernel, seq, g);
    return -ll + pen.value(p);
  };
  auto load_grad = [&](const ModelParams& p) {
    for (std::size_t i = 0; i < nmu; ++i) grad[i] = -ll_grad.mu[i];
    if (opts.freeze_w) {
      std::fill(grad.begin() + nmu, grad.end(), 0.0);
    } else {
      for (std::size_t k = 0; k < nw; ++k)
        grad[nmu + k] = -ll_grad.w[k] + 2.0 * c_l2 * p.w[k];
    }
  };

  double best = objective(report.params, &ll_grad);
  report.objective_trace.push_back(best);
  load_grad(report.params);

  double lr = opts.lr;
  double backtrack = 1.0;  // direction scale carried across iterations
  int since_progress = 0;
  int iter = 0;
  ModelParams prop = report.params;
  while (iter < opts.max_iters) {
    ++iter;
    adam.update(grad.data(), n, dir.data(), scale.data());

    bool accepted = false;
    double obj = 0.0;
    double trial = std::min(1.0, backtrack * 2.0);
    while (trial >= 1e-6) {
      const double step = lr * trial;
      for (std::size_t i = 0; i < nmu; ++i) {
        prop.mu[i] =
            std::max(opts.mu_floor, report.params.mu[i] - step * dir[i]);
      }
      if (opts.freeze_w) {
        prop.w = report.params.w;
      } else {
        for (std::size_t k = 0; k < nw; ++k) {
          const double moved = report.params.w[k] - step * dir[nmu + k];
          prop.w[k] = std::max(0.0, moved - c_l1 * step * scale[nmu + k]);
        }
        if (c_gl > 0.0) {
          for (std::size_t g = 0; g < nw; g += M) {
            double mean_step = 0.0;
            for (int m = 0; m < M; ++m) mean_step += step * scale[nmu + g + m];
            mean_step /= M;
            group_soft_threshold(prop.w.data() + g, M, c_gl * mean_step);
          }
        }
      }
      obj = objective(prop, &ll_grad);
      if (obj <= best + 1e-9) {
        accepted = true;
        backtrack = trial;
        break;
      }
      trial *= 0.5;
    }
    lr *= opts.lr_decay;

    if (accepted) {
      const bool progress =
          best - obj > opts.tol * std::max(1.0, std::abs(best));
      report.params = prop;
      if (obj < best) best = obj;
      report.objective_trace.push_back(obj);
      load_grad(report.params);
      since_progress = progress ? 0 : since_progress + 1;
    } else {
      ++since_progress;
    }
    if (since_progress >= opts.patience) {
      report.converged = true;
      break;
    }
  }
  report.iterations = iter;
  return report;
}

}  // namespace hawkes
