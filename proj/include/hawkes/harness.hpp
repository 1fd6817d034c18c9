#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hawkes/metrics.hpp"
#include "hawkes/mle.hpp"
#include "hawkes/simulate.hpp"
#include "hawkes/vi.hpp"

namespace hawkes {

enum class SweepAxis { n_events, basis_count };

enum class EstimatorKind { vi_exp, vi_sg, mle_adm4_like, mle_sglp_like };

std::string estimator_id(EstimatorKind kind);
EstimatorKind parse_estimator_id(const std::string& id);

struct ExperimentConfig {
  ExperimentConfig() { synthetic.dims = 20; }

  SyntheticConfig synthetic;  // ignored when data_path is set
  std::string data_path;      // observed event CSV instead of synthetic draws
  std::vector<EstimatorKind> estimators = {EstimatorKind::vi_exp,
                                           EstimatorKind::mle_adm4_like};
  SweepAxis axis = SweepAxis::n_events;
  std::vector<double> values = {1000};
  int graphs = 5;
  int sims = 3;
  double split_fraction = 0.7;
  double eta = 0.04;
  int top_k = 20;
  std::uint64_t seed = 1;

  // estimator knobs
  int vi_te = 100;
  int vi_tem = 100;
  int vi_samples = 1;
  double vi_beta = 0.5;
  double vi_eta = 0.02;
  int mle_max_iters = 5000;
  double adm4_l1 = 0.05;
  double sglp_l1 = 0.075;
  double sglp_gl = 0.025;
  double fit_zeta = 1.0;
  int fit_basis = 10;
  double fit_cutoff = 5.0;

  void validate() const;
};

struct ResultRow {
  std::string estimator;
  double sweep_value = 0.0;
  int graph = 0;
  int sim = 0;
  std::string metric;
  double value = 0.0;
  double wall_seconds = 0.0;
  std::string status = "ok";
};

/// First ceil(fraction * N) events with a horizon just above the last of
/// them; the rest keep the original horizon.
struct TrainTest {
  EventSequence train;
  EventSequence test;
};
TrainTest split_train_test(const EventSequence& seq, double fraction);

/// Runs every (sweep value, graph, sim, estimator) task on a worker pool
/// (HAWKES_THREADS overrides the pool size) and returns rows sorted by
/// sweep value, estimator, graph, sim, metric. Task failures land in the
/// status field instead of aborting the sweep.
std::vector<ResultRow> run_sweep(const ExperimentConfig& cfg);

void write_rows_csv(const std::vector<ResultRow>& rows,
                    const std::string& path);

/// One CSV per metric under out_dir: sweep_value, estimator, mean, std, n
/// aggregated over finite ok-status values in sorted row order.
void emit_plot_data(const std::vector<ResultRow>& rows,
                    const std::string& out_dir);

ExperimentConfig load_experiment_config(const std::string& path);

}  // namespace hawkes
