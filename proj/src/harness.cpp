#include "hawkes/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <thread>

#include "hawkes/errors.hpp"
#include "hawkes/io.hpp"
#include "hawkes/rng.hpp"
#include "hawkes/version.hpp"

namespace hawkes {

namespace {

const char* kMetricNames[] = {"f1",  "precision_at_k", "relative_error",
                              "fpr", "fnr",            "predictive_ll"};

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

}  // namespace

std::string estimator_id(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::vi_exp:
      return "vi-exp";
    case EstimatorKind::vi_sg:
      return "vi-sg";
    case EstimatorKind::mle_adm4_like:
      return "mle-adm4-like";
    case EstimatorKind::mle_sglp_like:
      return "mle-sglp-like";
  }
  return "unknown";
}

EstimatorKind parse_estimator_id(const std::string& id) {
  if (id == "vi-exp") return EstimatorKind::vi_exp;
  if (id == "vi-sg") return EstimatorKind::vi_sg;
  if (id == "mle-adm4-like") return EstimatorKind::mle_adm4_like;
  if (id == "mle-sglp-like") return EstimatorKind::mle_sglp_like;
  throw ParseError("unknown estimator '" + id + "'", 0);
}

void ExperimentConfig::validate() const {
  if (values.empty()) throw ValidationError("sweep needs at least one value");
  for (double v : values) {
    if (!(v > 0.0)) throw ValidationError("sweep values must be positive");
  }
  if (estimators.empty()) throw ValidationError("no estimators configured");
  if (graphs < 1 || sims < 1)
    throw ValidationError("graphs and sims must be at least 1");
  if (!(split_fraction > 0.0 && split_fraction < 1.0))
    throw ValidationError("split_fraction must lie in (0,1)");
  if (!(eta >= 0.0)) throw ValidationError("eta must be nonnegative");
  if (top_k < 1) throw ValidationError("top_k must be positive");
  if (vi_te < 0 || vi_tem < 0 || vi_samples < 1 || mle_max_iters < 1)
    throw ValidationError("bad estimator iteration settings");
  if (data_path.empty()) synthetic.validate();
}

TrainTest split_train_test(const EventSequence& seq, double fraction) {
  seq.validate();
  if (!(fraction > 0.0 && fraction < 1.0))
    throw ValidationError("split fraction must lie in (0,1)");
  const std::size_t n = seq.events.size();
  const std::size_t n_train = static_cast<std::size_t>(
      std::ceil(fraction * static_cast<double>(n) - 1e-9));
  if (n_train < 1 || n_train >= n)
    throw EmptySplit("split leaves an empty side (" + std::to_string(n_train) +
                     " of " + std::to_string(n) + " events in train)");

  TrainTest out;
  std::vector<Event> train_events(seq.events.begin(),
                                  seq.events.begin() + n_train);
  const double t_train = std::nextafter(
      train_events.back().time, std::numeric_limits<double>::infinity());
  out.train = EventSequence::checked(std::move(train_events), t_train, seq.dims);
  std::vector<Event> test_events(seq.events.begin() + n_train,
                                 seq.events.end());
  out.test =
      EventSequence::checked(std::move(test_events), seq.horizon, seq.dims);
  return out;
}

namespace {

struct FitOutcome {
  EdgeEstimate est;
  ModelParams predict_params;
};

KernelSpec fit_kernel_for(const ExperimentConfig& cfg, EstimatorKind kind,
                          double sweep_value) {
  const bool sg_estimator =
      kind == EstimatorKind::vi_sg || kind == EstimatorKind::mle_sglp_like;
  if (!sg_estimator) return KernelSpec::make_exponential(cfg.fit_zeta);
  const int basis = cfg.axis == SweepAxis::basis_count
                        ? static_cast<int>(sweep_value)
                        : cfg.fit_basis;
  return KernelSpec::make_gaussian_cutoff(basis, cfg.fit_cutoff);
}

FitOutcome run_estimator(const ExperimentConfig& cfg, EstimatorKind kind,
                         const KernelSpec& kernel, const EventSequence& train,
                         std::uint64_t fit_seed) {
  FitOutcome out;
  switch (kind) {
    case EstimatorKind::vi_exp:
    case EstimatorKind::vi_sg: {
      EmConfig em;
      em.L = cfg.vi_samples;
      em.beta = cfg.vi_beta;
      em.t_e = cfg.vi_te;
      em.t_em = cfg.vi_tem;
      em.eta = cfg.vi_eta;
      em.seed = fit_seed;
      const WPrior prior = kind == EstimatorKind::vi_exp
                               ? WPrior::laplace
                               : WPrior::group_laplace;
      const VIReport report = fit_vi(train, kernel, prior, em);
      out.predict_params = posterior_mode(report.state);
      out.est =
          EdgeEstimate::from_posterior(out.predict_params,
                                       posterior_std(report.state));
      break;
    }
    case EstimatorKind::mle_adm4_like:
    case EstimatorKind::mle_sglp_like: {
      PenaltySpec pen;
      if (kind == EstimatorKind::mle_adm4_like) {
        pen.add(PenaltyKind::l1, cfg.adm4_l1);
      } else {
        pen.add(PenaltyKind::l1, cfg.sglp_l1);
        pen.add(PenaltyKind::group_lasso, cfg.sglp_gl);
      }
      OptimizerOptions opts;
      opts.max_iters = cfg.mle_max_iters;
      const FitReport report = fit_mle(train, kernel, pen, opts);
      out.predict_params = report.params;
      out.est = EdgeEstimate::from_params(report.params);
      break;
    }
  }
  return out;
}

std::vector<ResultRow> run_task(const ExperimentConfig& cfg,
                                const EventSequence* shared_data,
                                std::size_t value_idx, int g, int r,
                                std::size_t est_idx) {
  const double value = cfg.values[value_idx];
  const EstimatorKind kind = cfg.estimators[est_idx];

  ResultRow base;
  base.estimator = estimator_id(kind);
  base.sweep_value = value;
  base.graph = g;
  base.sim = r;

  std::vector<ResultRow> rows;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  try {
    GroundTruth truth;
    EventSequence seq;
    bool have_truth = false;
    if (shared_data) {
      seq = *shared_data;
      if (cfg.axis == SweepAxis::n_events &&
          static_cast<std::size_t>(value) < seq.events.size()) {
        std::vector<Event> cut(seq.events.begin(),
                               seq.events.begin() +
                                   static_cast<std::size_t>(value));
        const double horizon = std::nextafter(
            cut.back().time, std::numeric_limits<double>::infinity());
        seq = EventSequence::checked(std::move(cut), horizon, seq.dims);
      }
    } else {
      SyntheticConfig scfg = cfg.synthetic;
      if (cfg.axis == SweepAxis::n_events)
        scfg.stop = StopRule::by_events(static_cast<long long>(value));
      Rng graph_rng(derive_seed(cfg.seed, 1, static_cast<std::uint64_t>(g)));
      truth = sample_graph(scfg, graph_rng);
      have_truth = true;
      const std::uint64_t sim_seed =
          cfg.axis == SweepAxis::n_events
              ? derive_seed(cfg.seed, 100 + value_idx,
                            static_cast<std::uint64_t>(g),
                            static_cast<std::uint64_t>(r))
              : derive_seed(cfg.seed, 2, static_cast<std::uint64_t>(g),
                            static_cast<std::uint64_t>(r));
      Rng sim_rng(sim_seed);
      seq = simulate(truth, scfg.kernel, scfg.stop, sim_rng);
    }

    const TrainTest split = split_train_test(seq, cfg.split_fraction);
    const KernelSpec fit_kernel = fit_kernel_for(cfg, kind, value);
    const std::uint64_t fit_seed =
        derive_seed(cfg.seed, 7, value_idx * 1000003ULL + est_idx,
                    static_cast<std::uint64_t>(g) * 1009ULL +
                        static_cast<std::uint64_t>(r));

    const double t0 = now_seconds();
    const FitOutcome fit =
        run_estimator(cfg, kind, fit_kernel, split.train, fit_seed);
    base.wall_seconds = now_seconds() - t0;

    auto push = [&](const char* name, double v) {
      ResultRow row = base;
      row.metric = name;
      row.value = v;
      rows.push_back(std::move(row));
    };
    if (have_truth) {
      const int pairs = truth.dims * truth.dims;
      push("f1", f1_score(fit.est, truth, cfg.eta));
      push("precision_at_k",
           precision_at_k(fit.est, truth, std::min(cfg.top_k, pairs)));
      push("relative_error", relative_error(fit.est, truth));
      const FprFnr rates = fpr_fnr(fit.est, truth, cfg.eta);
      push("fpr", rates.fpr.value_or(nan));
      push("fnr", rates.fnr.value_or(nan));
    }
    push("predictive_ll", predictive_loglik(fit.predict_params, fit_kernel,
                                            split.train, split.test));
  } catch (const std::exception& e) {
    std::string status = e.what();
    std::replace(status.begin(), status.end(), ',', ';');
    std::replace(status.begin(), status.end(), '\n', ' ');
    rows.clear();
    for (const char* name : kMetricNames) {
      ResultRow row = base;
      row.metric = name;
      row.value = nan;
      row.status = "error: " + status;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

int pool_size(std::size_t task_count) {
  int n = 0;
  if (const char* env = std::getenv("HAWKES_THREADS")) {
    n = std::atoi(env);
  }
  if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
  if (n <= 0) n = 1;
  return static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(n), task_count));
}

}  // namespace

std::vector<ResultRow> run_sweep(const ExperimentConfig& cfg) {
  cfg.validate();

  EventSequence loaded;
  const EventSequence* shared_data = nullptr;
  if (!cfg.data_path.empty()) {
    loaded = load_events(cfg.data_path);
    shared_data = &loaded;
  }
  const int graphs = shared_data ? 1 : cfg.graphs;
  const int sims = shared_data ? 1 : cfg.sims;

  struct Task {
    std::size_t value_idx;
    int g;
    int r;
    std::size_t est_idx;
  };
  std::vector<Task> tasks;
  for (std::size_t vi = 0; vi < cfg.values.size(); ++vi) {
    for (int g = 0; g < graphs; ++g) {
      for (int r = 0; r < sims; ++r) {
        for (std::size_t e = 0; e < cfg.estimators.size(); ++e) {
          tasks.push_back({vi, g, r, e});
        }
      }
    }
  }

  std::vector<std::vector<ResultRow>> slots(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      const Task& t = tasks[i];
      slots[i] = run_task(cfg, shared_data, t.value_idx, t.g, t.r, t.est_idx);
    }
  };
  const int threads = pool_size(tasks.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  std::vector<ResultRow> rows;
  for (const std::vector<ResultRow>& slot : slots) {
    rows.insert(rows.end(), slot.begin(), slot.end());
  }
  std::sort(rows.begin(), rows.end(),
            [](const ResultRow& a, const ResultRow& b) {
              if (a.sweep_value != b.sweep_value)
                return a.sweep_value < b.sweep_value;
              if (a.estimator != b.estimator) return a.estimator < b.estimator;
              if (a.graph != b.graph) return a.graph < b.graph;
              if (a.sim != b.sim) return a.sim < b.sim;
              return a.metric < b.metric;
            });
  return rows;
}

void write_rows_csv(const std::vector<ResultRow>& rows,
                    const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path, 0);
  out << "# hawkes " << kVersion << '\n';
  out << "estimator,sweep_value,graph,sim,metric,value,wall_seconds,status\n";
  for (const ResultRow& r : rows) {
    out << r.estimator << ',' << fmt_double(r.sweep_value) << ',' << r.graph
        << ',' << r.sim << ',' << r.metric << ',' << fmt_double(r.value) << ','
        << fmt_double(r.wall_seconds) << ',' << r.status << '\n';
  }
}

void emit_plot_data(const std::vector<ResultRow>& rows,
                    const std::string& out_dir) {
  if (rows.empty()) throw ValidationError("no rows to aggregate");
  std::filesystem::create_directories(out_dir);

  std::vector<std::string> metrics;
  for (const ResultRow& r : rows) {
    if (std::find(metrics.begin(), metrics.end(), r.metric) == metrics.end())
      metrics.push_back(r.metric);
  }

  for (const std::string& metric : metrics) {
    struct Group {
      double sweep_value;
      std::string estimator;
      std::vector<double> values;
    };
    std::vector<Group> groups;
    for (const ResultRow& r : rows) {
      if (r.metric != metric || r.status != "ok" || !std::isfinite(r.value))
        continue;
      auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& g) {
        return g.sweep_value == r.sweep_value && g.estimator == r.estimator;
      });
      if (it == groups.end()) {
        groups.push_back({r.sweep_value, r.estimator, {}});
        it = groups.end() - 1;
      }
      it->values.push_back(r.value);
    }

    std::ofstream out(out_dir + "/" + metric + ".csv");
    if (!out) throw ParseError("cannot write plot file for " + metric, 0);
    out << "# hawkes " << kVersion << '\n';
    out << "sweep_value,estimator,mean,std,n\n";
    for (const Group& g : groups) {
      const std::size_t n = g.values.size();
      double mean = 0.0;
      for (double v : g.values) mean += v;
      mean /= static_cast<double>(n);
      double sd = 0.0;
      if (n > 1) {
        double sq = 0.0;
        for (double v : g.values) sq += (v - mean) * (v - mean);
        sd = std::sqrt(sq / static_cast<double>(n - 1));
      }
      out << fmt_double(g.sweep_value) << ',' << g.estimator << ','
          << fmt_double(mean) << ',' << fmt_double(sd) << ',' << n << '\n';
    }
  }
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path, 0);

  ExperimentConfig cfg;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = line;
    const std::size_t hash = t.find('#');
    if (hash != std::string::npos) t = t.substr(0, hash);
    std::size_t a = 0, b = t.size();
    while (a < b && std::isspace(static_cast<unsigned char>(t[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(t[b - 1]))) --b;
    t = t.substr(a, b - a);
    if (t.empty()) continue;

    const std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ParseError("expected key=value", line_no);
    std::string key = t.substr(0, eq);
    std::string value = t.substr(eq + 1);
    while (!key.empty() && std::isspace(static_cast<unsigned char>(key.back())))
      key.pop_back();
    std::size_t vs = 0;
    while (vs < value.size() &&
           std::isspace(static_cast<unsigned char>(value[vs])))
      ++vs;
    std::size_t ve = value.size();
    while (ve > vs && std::isspace(static_cast<unsigned char>(value[ve - 1])))
      --ve;
    value = value.substr(vs, ve - vs);

    auto as_double = [&](const std::string& s) {
      double v = 0.0;
      const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
      if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw ParseError("bad number '" + s + "'", line_no);
      return v;
    };
    auto as_int = [&](const std::string& s) {
      return static_cast<int>(as_double(s));
    };
    auto split_list = [](const std::string& s) {
      std::vector<std::string> parts;
      std::size_t start = 0;
      while (true) {
        const std::size_t at = s.find(',', start);
        std::string part = at == std::string::npos
                               ? s.substr(start)
                               : s.substr(start, at - start);
        std::size_t a = 0;
        while (a < part.size() &&
               std::isspace(static_cast<unsigned char>(part[a])))
          ++a;
        std::size_t b = part.size();
        while (b > a && std::isspace(static_cast<unsigned char>(part[b - 1])))
          --b;
        parts.push_back(part.substr(a, b - a));
        if (at == std::string::npos) return parts;
        start = at + 1;
      }
    };

    if (key == "dims") {
      cfg.synthetic.dims = as_int(value);
    } else if (key == "edge_prob") {
      cfg.synthetic.edge_prob = as_double(value);
    } else if (key == "mu_lo") {
      cfg.synthetic.mu_lo = as_double(value);
    } else if (key == "mu_hi") {
      cfg.synthetic.mu_hi = as_double(value);
    } else if (key == "w_lo") {
      cfg.synthetic.w_lo = as_double(value);
    } else if (key == "w_hi") {
      cfg.synthetic.w_hi = as_double(value);
    } else if (key == "data_kernel") {
      cfg.synthetic.kernel = parse_kernel_spec(value);
    } else if (key == "n_events") {
      cfg.synthetic.stop = StopRule::by_events(static_cast<long long>(
          as_double(value)));
    } else if (key == "horizon") {
      cfg.synthetic.stop = StopRule::by_horizon(as_double(value));
    } else if (key == "data") {
      cfg.data_path = value;
    } else if (key == "estimators") {
      cfg.estimators.clear();
      for (const std::string& id : split_list(value))
        cfg.estimators.push_back(parse_estimator_id(id));
    } else if (key == "axis") {
      if (value == "n_events")
        cfg.axis = SweepAxis::n_events;
      else if (value == "M" || value == "basis_count")
        cfg.axis = SweepAxis::basis_count;
      else
        throw ParseError("axis must be n_events or M", line_no);
    } else if (key == "values") {
      cfg.values.clear();
      for (const std::string& v : split_list(value))
        cfg.values.push_back(as_double(v));
    } else if (key == "graphs") {
      cfg.graphs = as_int(value);
    } else if (key == "sims") {
      cfg.sims = as_int(value);
    } else if (key == "split_fraction") {
      cfg.split_fraction = as_double(value);
    } else if (key == "eta") {
      cfg.eta = as_double(value);
    } else if (key == "top_k") {
      cfg.top_k = as_int(value);
    } else if (key == "seed") {
      std::uint64_t v = 0;
      const auto res =
          std::from_chars(value.data(), value.data() + value.size(), v);
      if (res.ec != std::errc() || res.ptr != value.data() + value.size())
        throw ParseError("bad seed '" + value + "'", line_no);
      cfg.seed = v;
    } else if (key == "vi_te") {
      cfg.vi_te = as_int(value);
    } else if (key == "vi_tem") {
      cfg.vi_tem = as_int(value);
    } else if (key == "vi_samples" || key == "vi_L") {
      cfg.vi_samples = as_int(value);
    } else if (key == "vi_beta") {
      cfg.vi_beta = as_double(value);
    } else if (key == "vi_eta") {
      cfg.vi_eta = as_double(value);
    } else if (key == "mle_max_iters") {
      cfg.mle_max_iters = as_int(value);
    } else if (key == "adm4_l1") {
      cfg.adm4_l1 = as_double(value);
    } else if (key == "sglp_l1") {
      cfg.sglp_l1 = as_double(value);
    } else if (key == "sglp_gl") {
      cfg.sglp_gl = as_double(value);
    } else if (key == "fit_zeta") {
      cfg.fit_zeta = as_double(value);
    } else if (key == "fit_basis") {
      cfg.fit_basis = as_int(value);
    } else if (key == "fit_cutoff") {
      cfg.fit_cutoff = as_double(value);
    } else {
      throw ParseError("unknown config key '" + key + "'", line_no);
    }
  }
  return cfg;
}

}  // namespace hawkes
