// Acceptance suite: every release criterion in one binary, one PASS/FAIL
// line each. Exit code = number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "setpredict/cli/checks.hpp"
#include "setpredict/cli/commands.hpp"
#include "setpredict/cli/trainer.hpp"
#include "setpredict/data.hpp"
#include "setpredict/inference.hpp"
#include "setpredict/loss.hpp"
#include "setpredict/metrics.hpp"
#include "setpredict/network.hpp"
#include "setpredict/oracle.hpp"
#include "setpredict/rng.hpp"

using namespace setpredict;
namespace cli = setpredict::cli;

namespace {

int failures = 0;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void report(int index, const std::string& name, bool passed, const std::string& detail) {
  std::printf("[%d] %-28s %s (%s)\n", index, name.c_str(), passed ? "PASS" : "FAIL",
              detail.c_str());
  std::fflush(stdout);
  if (!passed) ++failures;
}

void criterion_map_oracle() {
  const auto start = std::chrono::steady_clock::now();
  cli::CheckOptions options;
  options.seed = 101;
  options.trials = 1000;
  const cli::CheckResult result = cli::check_map_oracle_equivalence(options);
  const double elapsed = seconds_since(start);
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "trials=%llu failures=%llu max|dlog|=%.2e runtime=%.1fs limit=60s",
                static_cast<unsigned long long>(result.trials),
                static_cast<unsigned long long>(result.failures), result.max_error,
                elapsed);
  report(1, "map-oracle-equivalence", result.failures == 0 && elapsed < 60.0, detail);
}

void criterion_gradient_exactness() {
  const auto start = std::chrono::steady_clock::now();
  cli::CheckOptions options;
  options.seed = 202;
  options.trials = 100;
  const cli::CheckResult result = cli::check_gradient_end_to_end(options);
  const double elapsed = seconds_since(start);
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "trials=%llu failures=%llu max_rel_err=%.2e runtime=%.1fs limit=60s",
                static_cast<unsigned long long>(result.trials),
                static_cast<unsigned long long>(result.failures), result.max_error,
                elapsed);
  report(2, "gradient-exactness", result.failures == 0 && elapsed < 60.0, detail);
}

void criterion_dc_soundness() {
  cli::CheckOptions options;
  options.seed = 303;
  options.trials = 1000;
  const cli::CheckResult result = cli::check_dc_soundness(options);
  char detail[120];
  std::snprintf(detail, sizeof(detail), "trials=%llu failures=%llu max|sum-1|=%.2e",
                static_cast<unsigned long long>(result.trials),
                static_cast<unsigned long long>(result.failures), result.max_error);
  report(3, "dc-soundness", result.failures == 0, detail);
}

void criterion_threshold_reduction() {
  cli::CheckOptions options;
  options.seed = 404;
  options.trials = 1000;
  const cli::CheckResult result = cli::check_threshold_reduction(options);
  char detail[120];
  std::snprintf(detail, sizeof(detail), "trials=%llu failures=%llu (u grid incl. 2.36)",
                static_cast<unsigned long long>(result.trials),
                static_cast<unsigned long long>(result.failures));
  report(4, "threshold-reduction", result.failures == 0, detail);
}

void criterion_invariances() {
  cli::CheckOptions options;
  options.seed = 505;
  options.trials = 500;
  const cli::CheckResult result = cli::check_invariances(options);
  char detail[120];
  std::snprintf(detail, sizeof(detail), "trials=%llu failures=%llu max_err=%.2e",
                static_cast<unsigned long long>(result.trials),
                static_cast<unsigned long long>(result.failures), result.max_error);
  report(5, "invariance-suite", result.failures == 0, detail);
}

void criterion_metrics_fixture() {
  const std::vector<LabelSet> truth = {LabelSet({0, 1}), LabelSet({1, 2})};
  const std::vector<LabelSet> preds = {LabelSet({0, 2}), LabelSet({1, 2})};
  const EvalReport report_fixture = evaluate(preds, truth, 3);
  bool ok = report_fixture.c_p == 5.0 / 6.0 && report_fixture.c_r == 5.0 / 6.0 &&
            report_fixture.c_f1 == 5.0 / 6.0 && report_fixture.o_p == 0.75 &&
            report_fixture.o_r == 0.75 && report_fixture.o_f1 == 0.75 &&
            report_fixture.i_p == 0.75 && report_fixture.i_r == 0.75 &&
            report_fixture.i_f1 == 0.75;

  // best_k against an explicit rescan.
  Rng rng(606);
  const int num_labels = 6;
  std::vector<std::vector<double>> scores;
  std::vector<LabelSet> gts;
  for (int i = 0; i < 60; ++i) {
    std::vector<double> row(static_cast<std::size_t>(num_labels));
    for (double& v : row) v = rng.normal();
    scores.push_back(row);
    std::vector<int> g;
    for (int l = 0; l < num_labels; ++l) {
      if (rng.uniform() < 0.3) g.push_back(l);
    }
    gts.emplace_back(std::move(g));
  }
  for (F1Target target :
       {F1Target::kPerClass, F1Target::kOverall, F1Target::kPerInstance}) {
    const auto [k_star, chosen] = best_k(scores, gts, num_labels, target);
    double best_f1 = -1.0;
    int expected_k = 1;
    for (int k = 1; k <= num_labels; ++k) {
      std::vector<LabelSet> topk_preds;
      for (const auto& row : scores) topk_preds.push_back(topk_set(row, k));
      const double f1 = f1_of(evaluate(topk_preds, gts, num_labels), target);
      if (f1 > best_f1) {
        best_f1 = f1;
        expected_k = k;
      }
    }
    if (k_star != expected_k || f1_of(chosen, target) != best_f1) ok = false;
  }
  report(6, "metrics-fixture", ok, ok ? "exact 5/6 and 0.75, best_k scan matches" : "mismatch");
}

void criterion_benchmark() {
  const auto start = std::chrono::steady_clock::now();

  SynthConfig synth;
  synth.feature_dim = 20;
  synth.num_labels = 10;
  synth.num_samples = 6000;
  synth.max_cardinality = 4;
  synth.prototype_scale = 1.0;
  synth.noise_scale = 0.1;
  synth.seed = 7;
  const Dataset dataset = generate(synth);
  const auto parts = split(dataset, {0.8, 0.1, 0.1}, synth.seed);

  cli::BenchmarkPipelineOptions options;
  options.hidden_widths = {64, 64};
  options.dropout_rate = 0.5;
  options.u = 2.36;
  options.cfg.epochs = 60;
  options.cfg.seed = 1;
  const std::vector<cli::BenchmarkRow> rows =
      cli::run_benchmark_pipeline(parts[0], parts[1], parts[2], options);

  const EvalReport* topk = nullptr;
  const EvalReport* ds = nullptr;
  const EvalReport* jds = nullptr;
  const EvalReport* gt_card = nullptr;
  for (const cli::BenchmarkRow& row : rows) {
    if (row.name == "bce-topk-best") topk = &row.report;
    if (row.name == "ds") ds = &row.report;
    if (row.name == "jds") jds = &row.report;
    if (row.name == "gt-cardinality") gt_card = &row.report;
  }

  // Constant modal-cardinality predictor as the MAE baseline.
  const CardinalityStats stats = cardinality_stats(parts[0]);
  int modal = 0;
  for (int m = 1; m <= stats.max_cardinality(); ++m) {
    if (stats.counts()[static_cast<std::size_t>(m)] >
        stats.counts()[static_cast<std::size_t>(modal)]) {
      modal = m;
    }
  }
  double modal_mae = 0.0;
  for (const Sample& sample : parts[2].samples) {
    modal_mae += std::abs(sample.labels.cardinality() - modal);
  }
  modal_mae /= static_cast<double>(parts[2].samples.size());

  const double elapsed = seconds_since(start);
  const bool have_rows = topk && ds && jds && gt_card;
  bool ok = have_rows && elapsed < 300.0;
  if (have_rows) {
    ok = ok && jds->o_f1 >= topk->o_f1 - 0.01;
    ok = ok && jds->cardinality_mae <= modal_mae;
    ok = ok && gt_card->c_f1 >= jds->c_f1 && gt_card->o_f1 >= jds->o_f1 &&
         gt_card->i_f1 >= jds->i_f1;
    ok = ok && gt_card->c_f1 >= ds->c_f1 && gt_card->o_f1 >= ds->o_f1 &&
         gt_card->i_f1 >= ds->i_f1;
  }
  char detail[240];
  std::snprintf(detail, sizeof(detail),
                "jds O-F1=%.4f topk:best O-F1=%.4f jds MAE=%.4f modal MAE=%.4f "
                "gt-card O-F1=%.4f ds O-F1=%.4f runtime=%.0fs limit=300s",
                jds ? jds->o_f1 : -1.0, topk ? topk->o_f1 : -1.0,
                jds ? jds->cardinality_mae : -1.0, modal_mae,
                gt_card ? gt_card->o_f1 : -1.0, ds ? ds->o_f1 : -1.0, elapsed);
  report(7, "synthetic-benchmark", ok, detail);
}

void criterion_training_sanity() {
  SynthConfig synth;
  synth.feature_dim = 6;
  synth.num_labels = 4;
  synth.num_samples = 32;
  synth.max_cardinality = 3;
  synth.noise_scale = 0.2;
  synth.seed = 808;
  const Dataset dataset = generate(synth);
  const CardinalityStats stats = cardinality_stats(dataset);

  Architecture arch;
  arch.input_dim = synth.feature_dim;
  arch.hidden_widths = {16};
  arch.num_labels = synth.num_labels;
  arch.dropout_rate = 0.0;  // dropout off
  TrainConfig cfg;

  const auto run_descent = [&](std::vector<double>& final_flat, double& initial,
                               double& final_value) {
    ModelParams params = init(arch, 909);
    OptimizerState state = OptimizerState::zeros_like(params);
    ParamGrads grads = ParamGrads::zeros_like(params);
    initial = batch_objective_with_grad(params, dataset.samples, stats, cfg, grads);
    final_value = initial;
    for (int iter = 0; iter < 100; ++iter) {
      sgd_step(params, grads, state, 1e-4, 0.0, 0.0);
      final_value = batch_objective_with_grad(params, dataset.samples, stats, cfg, grads);
      if (!std::isfinite(final_value)) return false;
    }
    final_flat = params.flatten();
    return true;
  };

  std::vector<double> first_run, second_run;
  double initial_a = 0.0, final_a = 0.0, initial_b = 0.0, final_b = 0.0;
  const bool finite_a = run_descent(first_run, initial_a, final_a);
  const bool finite_b = run_descent(second_run, initial_b, final_b);
  const bool ok = finite_a && finite_b && final_a < initial_a && first_run == second_run &&
                  initial_a == initial_b && final_a == final_b;
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "initial=%.6f final=%.6f finite=%s repeat_bitwise=%s",
                initial_a, final_a, (finite_a && finite_b) ? "yes" : "no",
                first_run == second_run ? "yes" : "no");
  report(8, "training-sanity", ok, detail);
}

}  // namespace

int main() {
  criterion_map_oracle();
  criterion_gradient_exactness();
  criterion_dc_soundness();
  criterion_threshold_reduction();
  criterion_invariances();
  criterion_metrics_fixture();
  criterion_benchmark();
  criterion_training_sanity();
  if (failures == 0) {
    std::printf("all criteria passed\n");
  } else {
    std::printf("%d criterion(s) failed\n", failures);
  }
  return failures;
}
