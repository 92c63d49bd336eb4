#include <algorithm>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "setpredict/cli/commands.hpp"

namespace cli = setpredict::cli;

namespace {

void add_train_config_flags(CLI::App* cmd, setpredict::TrainConfig& cfg) {
  cmd->add_option("--epochs", cfg.epochs, "training epochs")->capture_default_str();
  cmd->add_option("--batch-size", cfg.batch_size, "mini-batch size")->capture_default_str();
  cmd->add_option("--lr", cfg.base_lr, "initial learning rate")->capture_default_str();
  cmd->add_option("--lr-decay", cfg.lr_decay, "per-epoch learning-rate decay factor")
      ->capture_default_str();
  cmd->add_option("--momentum", cfg.momentum, "SGD momentum")->capture_default_str();
  cmd->add_option("--gamma", cfg.gamma, "weight decay coefficient")->capture_default_str();
  cmd->add_option("--seed", cfg.seed, "training seed")->capture_default_str();
  const std::map<std::string, setpredict::BceMode> modes{
      {"full", setpredict::BceMode::kFull},
      {"positive_only", setpredict::BceMode::kPositiveOnly}};
  cmd->add_option("--bce-mode", cfg.bce_mode, "full or positive_only")
      ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"joint cardinality and label-set prediction"};
  app.set_config("--config", "", "read option defaults from a TOML file (flags win)");
  app.require_subcommand(1);

  cli::GenerateOptions generate_options;
  auto* generate_cmd =
      app.add_subcommand("generate", "generate a synthetic multi-label dataset");
  generate_cmd->add_option("--l", generate_options.synth.feature_dim, "feature dimension")
      ->capture_default_str();
  generate_cmd->add_option("--M", generate_options.synth.num_labels, "number of labels")
      ->capture_default_str();
  generate_cmd->add_option("--n", generate_options.synth.num_samples, "number of samples")
      ->capture_default_str();
  auto* max_cardinality_opt =
      generate_cmd
          ->add_option("--max-cardinality", generate_options.synth.max_cardinality,
                       "largest label-set size to generate (default min(4, M))")
          ->capture_default_str();
  generate_cmd
      ->add_option("--prototype-scale", generate_options.synth.prototype_scale,
                   "scale of the per-class prototype vectors")
      ->capture_default_str();
  generate_cmd->add_option("--noise-scale", generate_options.synth.noise_scale,
                           "feature noise standard deviation")
      ->capture_default_str();
  generate_cmd->add_option("--seed", generate_options.synth.seed, "generator seed")
      ->capture_default_str();
  generate_cmd
      ->add_option("--fractions", generate_options.fractions,
                   "train/val/test fractions, must sum to 1")
      ->delimiter(',')
      ->expected(3);
  generate_cmd->add_option("--out", generate_options.out_dir, "output directory")
      ->required();

  cli::TrainOptions train_options;
  auto* train_cmd = app.add_subcommand("train", "train a joint model");
  train_cmd->add_option("--train", train_options.train_path, "training split (JSONL)")
      ->required();
  train_cmd->add_option("--val", train_options.val_path, "validation split (JSONL)")
      ->required();
  train_cmd->add_option("--out", train_options.model_path, "model artifact path (JSON)")
      ->required();
  train_cmd->add_option("--log", train_options.log_path,
                        "per-epoch CSV log path (default <out>.log.csv)");
  train_cmd->add_option("--hidden", train_options.hidden_widths, "hidden layer widths")
      ->delimiter(',');
  train_cmd->add_option("--dropout", train_options.dropout_rate, "hidden dropout rate")
      ->capture_default_str();
  train_cmd->add_option("--u", train_options.u, "unit of hyper-volume stored in the artifact")
      ->capture_default_str();
  add_train_config_flags(train_cmd, train_options.cfg);

  cli::EvalOptions eval_options;
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a model on a dataset");
  eval_cmd->add_option("--model", eval_options.model_path, "model artifact")->required();
  eval_cmd->add_option("--data", eval_options.data_path, "dataset (JSONL)")->required();
  eval_cmd
      ->add_option("--decoder", eval_options.decoder, "jds | ds | topk:<k> | topk:best")
      ->capture_default_str();
  eval_cmd->add_option("--u", eval_options.u_override, "override the artifact's u");
  eval_cmd->add_option("--report", eval_options.report_path, "write the report as JSON");

  cli::InferOptions infer_options;
  auto* infer_cmd = app.add_subcommand("infer", "MAP set prediction per sample");
  infer_cmd->add_option("--model", infer_options.model_path, "model artifact")->required();
  infer_cmd->add_option("--data", infer_options.data_path, "dataset (JSONL)")->required();
  infer_cmd->add_option("--u", infer_options.u_override, "override the artifact's u");

  cli::BenchmarkCliOptions benchmark_options;
  auto* benchmark_cmd = app.add_subcommand(
      "benchmark", "train joint + sequential baselines and compare decoders");
  benchmark_cmd
      ->add_option("--data", benchmark_options.data_dir,
                   "directory with train.jsonl / val.jsonl / test.jsonl")
      ->required();
  benchmark_cmd->add_option("--out", benchmark_options.out_prefix,
                            "write <prefix>.txt and <prefix>.json");
  benchmark_cmd->add_option("--hidden", benchmark_options.hidden_widths,
                            "hidden layer widths")
      ->delimiter(',');
  benchmark_cmd
      ->add_option("--dropout", benchmark_options.dropout_rate, "hidden dropout rate")
      ->capture_default_str();
  benchmark_cmd->add_option("--u", benchmark_options.u, "unit of hyper-volume")
      ->capture_default_str();
  add_train_config_flags(benchmark_cmd, benchmark_options.cfg);

  cli::VerifyOptions verify_options;
  auto* verify_cmd =
      app.add_subcommand("verify", "run the oracle-backed verification suite");
  verify_cmd->add_option("--seed", verify_options.seed, "check seed")->capture_default_str();
  verify_cmd->add_option("--trials", verify_options.trials, "trials per check")
      ->capture_default_str();
  verify_cmd
      ->add_flag("--inject-gradient-error", verify_options.inject_gradient_error,
                 "negative control: perturb one analytic gradient")
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kExitSuccess : cli::kExitUsage;
  }

  try {
    if (generate_cmd->parsed()) {
      if (max_cardinality_opt->count() == 0) {
        generate_options.synth.max_cardinality =
            std::min(4, generate_options.synth.num_labels);
      }
      return cli::run_generate(generate_options, std::cout);
    }
    if (train_cmd->parsed()) return cli::run_train(train_options, std::cout);
    if (eval_cmd->parsed()) return cli::run_eval(eval_options, std::cout);
    if (infer_cmd->parsed()) return cli::run_infer(infer_options, std::cout);
    if (benchmark_cmd->parsed()) return cli::run_benchmark(benchmark_options, std::cout);
    if (verify_cmd->parsed()) return cli::run_verify(verify_options, std::cout);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kExitFailure;
  }
  return cli::kExitUsage;
}
