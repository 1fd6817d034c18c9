#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "hawkes/errors.hpp"
#include "hawkes/harness.hpp"
#include "hawkes/io.hpp"
#include "hawkes/likelihood.hpp"
#include "hawkes/metrics.hpp"
#include "hawkes/mle.hpp"
#include "hawkes/simulate.hpp"
#include "hawkes/version.hpp"
#include "hawkes/vi.hpp"
#include "json.hpp"

namespace {

using namespace hawkes;
using nlohmann::json;

struct SimulateArgs {
  int dims = 20;
  double edge_prob = 0.0;
  std::string kernel = "exp:zeta=1";
  long long n_events = 0;
  double horizon = 0.0;
  double mu_lo = 0.0, mu_hi = 0.02;
  double w_lo = 0.1, w_hi = 0.2;
  std::uint64_t seed = 1;
  std::string out = "events.csv";
  std::string truth_out;
};

int cmd_simulate(const SimulateArgs& a) {
  SyntheticConfig cfg;
  cfg.dims = a.dims;
  cfg.edge_prob = a.edge_prob;
  cfg.kernel = parse_kernel_spec(a.kernel);
  cfg.mu_lo = a.mu_lo;
  cfg.mu_hi = a.mu_hi;
  cfg.w_lo = a.w_lo;
  cfg.w_hi = a.w_hi;
  if (a.horizon > 0.0)
    cfg.stop = StopRule::by_horizon(a.horizon);
  else
    cfg.stop = StopRule::by_events(a.n_events > 0 ? a.n_events : 5000);
  cfg.seed = a.seed;

  const SyntheticDraw draw = make_synthetic(cfg);
  save_events(draw.seq, a.out);
  if (!a.truth_out.empty()) save_truth(draw.truth, cfg.kernel, a.truth_out);
  std::cout << draw.seq.size() << " events over [0, "
            << fmt_double(draw.seq.horizon) << "), " << draw.truth.edge_count()
            << " true edges -> " << a.out << "\n";
  return 0;
}

struct FitMleArgs {
  std::string events;
  std::string kernel = "exp:zeta=1";
  std::string penalty = "none";
  std::string out = "model.json";
  std::string trace_out;
  int max_iters = 5000;
  double lr = 0.02;
  double tol = 1e-7;
};

int cmd_fit_mle(const FitMleArgs& a) {
  const EventSequence seq = load_events(a.events);
  const KernelSpec kernel = parse_kernel_spec(a.kernel);
  const PenaltySpec pen = parse_penalty_spec(a.penalty);
  OptimizerOptions opts;
  opts.max_iters = a.max_iters;
  opts.lr = a.lr;
  opts.tol = a.tol;

  const FitReport report = fit_mle(seq, kernel, pen, opts);
  save_model(report.params, kernel, a.out);
  if (!a.trace_out.empty()) {
    std::ofstream trace(a.trace_out);
    if (!trace) throw ParseError("cannot write " + a.trace_out, 0);
    trace << "# hawkes " << kVersion << "\n";
    trace << "step,objective\n";
    for (std::size_t i = 0; i < report.objective_trace.size(); ++i) {
      trace << i << ',' << fmt_double(report.objective_trace[i]) << '\n';
    }
  }
  std::cout << (report.converged ? "converged" : "hit max iterations")
            << " after " << report.iterations << " iterations, objective "
            << fmt_double(report.objective_trace.back()) << " -> " << a.out
            << "\n";
  return 0;
}

struct FitViArgs {
  std::string events;
  std::string kernel = "exp:zeta=1";
  std::string prior = "w=laplace,mu=gaussian";
  int L = 1;
  double beta = 0.5;
  double eta = 0.02;
  int te = 100;
  int tem = 100;
  std::uint64_t seed = 1;
  std::string out = "posterior.json";
};

int cmd_fit_vi(const FitViArgs& a) {
  const EventSequence seq = load_events(a.events);
  const KernelSpec kernel = parse_kernel_spec(a.kernel);
  const WPrior w_kind = parse_prior_spec(a.prior);
  EmConfig cfg;
  cfg.L = a.L;
  cfg.beta = a.beta;
  cfg.eta = a.eta;
  cfg.t_e = a.te;
  cfg.t_em = a.tem;
  cfg.seed = a.seed;

  const VIReport report = fit_vi(seq, kernel, w_kind, cfg);
  save_posterior(report, kernel, cfg, a.out);
  std::cout << report.e_steps << " ascent steps over " << cfg.t_em
            << " rounds, final round ELBO "
            << fmt_double(report.elbo_rounds.empty()
                              ? 0.0
                              : report.elbo_rounds.back())
            << " -> " << a.out << "\n";
  return 0;
}

struct EvaluateArgs {
  std::string model;
  std::string truth;
  std::string metrics = "f1:eta=0.04,prec@20,relerr,fprfnr:eta=0.04";
  std::string out;
};

int cmd_evaluate(const EvaluateArgs& a) {
  const LoadedTruth truth = load_truth(a.truth);

  EdgeEstimate est;
  {
    std::ifstream probe(a.model);
    if (!probe) throw ParseError("cannot open " + a.model, 0);
    json j;
    try {
      j = json::parse(probe);
    } catch (const json::exception& e) {
      throw ParseError(a.model + ": " + e.what(), 0);
    }
    if (j.contains("gamma_mu")) {
      const LoadedPosterior post = load_posterior(a.model);
      est = EdgeEstimate::from_posterior(posterior_mode(post.state),
                                         posterior_std(post.state));
    } else {
      const LoadedModel model = load_model(a.model);
      est = EdgeEstimate::from_params(model.params);
    }
  }

  json out;
  out["version"] = kVersion;
  for (const std::string& raw : [&] {
         std::vector<std::string> parts;
         std::size_t start = 0;
         while (true) {
           const std::size_t at = a.metrics.find(',', start);
           if (at == std::string::npos) {
             parts.push_back(a.metrics.substr(start));
             return parts;
           }
           parts.push_back(a.metrics.substr(start, at - start));
           start = at + 1;
         }
       }()) {
    if (raw.rfind("f1", 0) == 0) {
      double eta = 0.04;
      const std::size_t at = raw.find("eta=");
      if (at != std::string::npos) eta = std::stod(raw.substr(at + 4));
      out["f1"] = f1_score(est, truth.truth, eta);
    } else if (raw.rfind("prec@", 0) == 0) {
      const int k = std::stoi(raw.substr(5));
      out["precision_at_" + std::to_string(k)] =
          precision_at_k(est, truth.truth, k);
    } else if (raw == "relerr") {
      out["relative_error"] = relative_error(est, truth.truth);
    } else if (raw.rfind("fprfnr", 0) == 0) {
      double eta = 0.04;
      const std::size_t at = raw.find("eta=");
      if (at != std::string::npos) eta = std::stod(raw.substr(at + 4));
      const FprFnr rates = fpr_fnr(est, truth.truth, eta);
      if (rates.fpr)
        out["fpr"] = *rates.fpr;
      else
        out["fpr"] = "absent";
      if (rates.fnr)
        out["fnr"] = *rates.fnr;
      else
        out["fnr"] = "absent";
    } else {
      throw ParseError("unknown metric '" + raw + "'", 0);
    }
  }

  const std::string text = out.dump(2);
  if (a.out.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream f(a.out);
    if (!f) throw ParseError("cannot write " + a.out, 0);
    f << text << '\n';
    std::cout << "metrics -> " << a.out << "\n";
  }
  return 0;
}

struct PredictArgs {
  std::string model;
  std::string train;
  std::string test;
};

int cmd_predict(const PredictArgs& a) {
  std::ifstream probe(a.model);
  if (!probe) throw ParseError("cannot open " + a.model, 0);
  json j;
  try {
    j = json::parse(probe);
  } catch (const json::exception& e) {
    throw ParseError(a.model + ": " + e.what(), 0);
  }

  ModelParams params;
  KernelSpec kernel;
  if (j.contains("gamma_mu")) {
    const LoadedPosterior post = load_posterior(a.model);
    params = posterior_mode(post.state);
    kernel = post.kernel;
  } else {
    const LoadedModel model = load_model(a.model);
    params = model.params;
    kernel = model.kernel;
  }

  const EventSequence train = load_events(a.train);
  const EventSequence test = load_events(a.test);
  const double value = predictive_loglik(params, kernel, train, test);
  std::cout << "predictive log-likelihood per test event: "
            << fmt_double(value) << "\n";
  return 0;
}

struct SweepArgs {
  std::string config;
  std::string out_dir = "results";
};

int cmd_sweep(const SweepArgs& a) {
  const ExperimentConfig cfg = load_experiment_config(a.config);
  const std::vector<ResultRow> rows = run_sweep(cfg);
  std::filesystem::create_directories(a.out_dir);
  write_rows_csv(rows, a.out_dir + "/results.csv");
  emit_plot_data(rows, a.out_dir);
  long failures = 0;
  for (const ResultRow& r : rows) {
    if (r.status != "ok") ++failures;
  }
  std::cout << rows.size() << " result rows (" << failures
            << " failed) -> " << a.out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multivariate Hawkes process toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(hawkes::kVersion));

  SimulateArgs sim;
  CLI::App* c_sim = app.add_subcommand(
      "simulate", "sample a random network and an event sequence from it");
  c_sim->add_option("--dims", sim.dims, "process dimension");
  c_sim->add_option("--edge-prob", sim.edge_prob,
                    "edge probability (0 means log(D)/D)");
  c_sim->add_option("--kernel", sim.kernel, "exp:zeta=1 or sg:M=10,Tc=5");
  c_sim->add_option("--n-events", sim.n_events, "stop after this many events");
  c_sim->add_option("--horizon", sim.horizon, "stop at this time instead");
  c_sim->add_option("--mu-lo", sim.mu_lo, "baseline range low end");
  c_sim->add_option("--mu-hi", sim.mu_hi, "baseline range high end");
  c_sim->add_option("--w-lo", sim.w_lo, "weight range low end");
  c_sim->add_option("--w-hi", sim.w_hi, "weight range high end");
  c_sim->add_option("--seed", sim.seed, "random seed");
  c_sim->add_option("--out", sim.out, "event CSV path");
  c_sim->add_option("--truth", sim.truth_out, "ground-truth JSON path");

  FitMleArgs mle;
  CLI::App* c_mle = app.add_subcommand(
      "fit-mle", "penalized maximum-likelihood fit");
  c_mle->add_option("--events", mle.events, "event CSV path")->required();
  c_mle->add_option("--kernel", mle.kernel, "exp:zeta=1 or sg:M=10,Tc=5");
  c_mle->add_option("--penalty", mle.penalty,
                    "none, l1:c=..., l2:c=..., gl:c=..., joined with +");
  c_mle->add_option("--out", mle.out, "model JSON path");
  c_mle->add_option("--trace", mle.trace_out, "objective trace CSV path");
  c_mle->add_option("--max-iters", mle.max_iters, "iteration cap");
  c_mle->add_option("--lr", mle.lr, "learning rate");
  c_mle->add_option("--tol", mle.tol, "relative improvement tolerance");

  FitViArgs vi;
  CLI::App* c_vi = app.add_subcommand(
      "fit-vi", "variational EM fit with learned per-parameter scales");
  c_vi->add_option("--events", vi.events, "event CSV path")->required();
  c_vi->add_option("--kernel", vi.kernel, "exp:zeta=1 or sg:M=10,Tc=5");
  c_vi->add_option("--prior", vi.prior, "w=laplace,mu=gaussian");
  c_vi->add_option("--L", vi.L, "Monte-Carlo samples per step");
  c_vi->add_option("--beta", vi.beta, "scale-update momentum");
  c_vi->add_option("--eta", vi.eta, "learning rate");
  c_vi->add_option("--te", vi.te, "ascent steps per round");
  c_vi->add_option("--tem", vi.tem, "rounds");
  c_vi->add_option("--seed", vi.seed, "random seed");
  c_vi->add_option("--out", vi.out, "posterior JSON path");

  EvaluateArgs ev;
  CLI::App* c_ev = app.add_subcommand(
      "evaluate", "graph-recovery metrics against a known network");
  c_ev->add_option("--model", ev.model, "model or posterior JSON")->required();
  c_ev->add_option("--truth", ev.truth, "ground-truth JSON")->required();
  c_ev->add_option("--metrics", ev.metrics,
                   "comma list: f1:eta=..., prec@K, relerr, fprfnr:eta=...");
  c_ev->add_option("--out", ev.out, "metrics JSON path (default stdout)");

  PredictArgs pr;
  CLI::App* c_pr = app.add_subcommand(
      "predict", "held-out predictive log-likelihood");
  c_pr->add_option("--model", pr.model, "model or posterior JSON")->required();
  c_pr->add_option("--train", pr.train, "training event CSV")->required();
  c_pr->add_option("--test", pr.test, "test event CSV")->required();

  SweepArgs sw;
  CLI::App* c_sw = app.add_subcommand(
      "sweep", "config-driven experiment sweep with plot-ready output");
  c_sw->add_option("--config", sw.config, "experiment config file")->required();
  c_sw->add_option("--out", sw.out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_sim->parsed()) return cmd_simulate(sim);
    if (c_mle->parsed()) return cmd_fit_mle(mle);
    if (c_vi->parsed()) return cmd_fit_vi(vi);
    if (c_ev->parsed()) return cmd_evaluate(ev);
    if (c_pr->parsed()) return cmd_predict(pr);
    if (c_sw->parsed()) return cmd_sweep(sw);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
