#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "setpredict/cli/checks.hpp"
#include "setpredict/cli/trainer.hpp"
#include "setpredict/data.hpp"
#include "setpredict/loss.hpp"
#include "setpredict/metrics.hpp"
#include "setpredict/network.hpp"

namespace setpredict::cli {

// Exit codes shared by every subcommand: 0 success, 1 check/validation
// failure, 2 usage error.
inline constexpr int kExitSuccess = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

struct GenerateOptions {
  SynthConfig synth;
  std::vector<double> fractions{0.8, 0.1, 0.1};
  std::string out_dir;
};

struct TrainOptions {
  std::string train_path;
  std::string val_path;
  std::string model_path;
  std::string log_path;  // defaults to model_path + ".log.csv"
  std::vector<int> hidden_widths{64, 64};
  double dropout_rate = 0.5;
  double u = 2.36;
  TrainConfig cfg;
};

struct EvalOptions {
  std::string model_path;
  std::string data_path;
  std::string decoder = "jds";  // jds | ds | topk:<k> | topk:best
  std::optional<double> u_override;
  std::string report_path;  // optional JSON output
};

struct InferOptions {
  std::string model_path;
  std::string data_path;
  std::optional<double> u_override;
};

struct BenchmarkCliOptions {
  std::string data_dir;  // expects train.jsonl / val.jsonl / test.jsonl
  std::string out_prefix;  // optional: writes <prefix>.txt and <prefix>.json
  std::vector<int> hidden_widths{64, 64};
  double dropout_rate = 0.5;
  double u = 2.36;
  TrainConfig cfg;
};

struct VerifyOptions {
  std::uint64_t seed = 11;
  int trials = 1000;
  bool inject_gradient_error = false;
};

int run_generate(const GenerateOptions& options, std::ostream& out);
int run_train(const TrainOptions& options, std::ostream& out);
int run_eval(const EvalOptions& options, std::ostream& out);
int run_infer(const InferOptions& options, std::ostream& out);
int run_benchmark(const BenchmarkCliOptions& options, std::ostream& out);
int run_verify(const VerifyOptions& options, std::ostream& out);

// One line of the decoder-comparison table.
struct BenchmarkRow {
  std::string name;
  EvalReport report;
  int k = -1;  // top-k rows only
};

struct BenchmarkPipelineOptions {
  std::vector<int> hidden_widths{64, 64};
  double dropout_rate = 0.5;
  double u = 2.36;
  TrainConfig cfg;
};

// Trains the joint model plus the sequential baseline pair (classifier, then
// a cardinality head warm-started from it) and evaluates the four decoders
// on the test split. Shared by the benchmark subcommand and the acceptance
// suite.
std::vector<BenchmarkRow> run_benchmark_pipeline(const Dataset& train_set,
                                                 const Dataset& val_set,
                                                 const Dataset& test_set,
                                                 const BenchmarkPipelineOptions& options);

// Flat key/value text block, one metric per line.
void print_report(const EvalReport& report, std::ostream& out);

}  // namespace setpredict::cli
