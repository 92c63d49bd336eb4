#include "setpredict/cli/trainer.hpp"

#include <cmath>
#include <stdexcept>

#include "setpredict/rng.hpp"

namespace setpredict::cli {

namespace {

void mask_components(DualOutput& grad_dual, LossComponents components) {
  if (components == LossComponents::kBceOnly) {
    std::fill(grad_dual.card_preacts.begin(), grad_dual.card_preacts.end(), 0.0);
  } else if (components == LossComponents::kCardinalityOnly) {
    std::fill(grad_dual.label_logits.begin(), grad_dual.label_logits.end(), 0.0);
  }
}

double component_loss(const SampleLossBreakdown& breakdown, LossComponents components) {
  switch (components) {
    case LossComponents::kJoint: return breakdown.total;
    case LossComponents::kBceOnly: return breakdown.bce_term;
    case LossComponents::kCardinalityOnly: return breakdown.cardinality_term;
  }
  return breakdown.total;
}

// Mean of the active loss blocks plus the L2 monitor term, eval mode.
double objective(const ModelParams& params, const Dataset& dataset,
                 const CardinalityStats& stats, const TrainConfig& cfg,
                 LossComponents components) {
  Rng unused(0);
  double sum = 0.0;
  for (const Sample& sample : dataset.samples) {
    const DualOutput out = forward(params, sample.features, ForwardMode::kEval, unused);
    sum += component_loss(sample_loss(out, sample.labels, stats, cfg), components);
  }
  return sum / static_cast<double>(dataset.samples.size()) +
         cfg.gamma * params.weight_squared_norm();
}

}  // namespace

TrainResult train(const Dataset& train_set, const Dataset& val_set,
                  const CardinalityStats& stats, const TrainerOptions& options) {
  options.arch.validate();
  options.cfg.validate();
  if (train_set.samples.empty() || val_set.samples.empty()) {
    throw std::invalid_argument("train: empty train or validation split");
  }
  if (train_set.feature_dim != options.arch.input_dim ||
      train_set.num_labels != options.arch.num_labels) {
    throw std::invalid_argument("train: dataset dimensions disagree with architecture");
  }

  const TrainConfig& cfg = options.cfg;
  ModelParams params =
      options.init_params ? *options.init_params : init(options.arch, cfg.seed);
  if (options.init_params) {
    const Architecture& donor = params.arch;
    if (donor.input_dim != options.arch.input_dim ||
        donor.hidden_widths != options.arch.hidden_widths ||
        donor.num_labels != options.arch.num_labels) {
      throw std::invalid_argument("train: warm-start parameters have a different shape");
    }
    params.arch = options.arch;  // dropout may differ from the donor run
  }
  OptimizerState state = OptimizerState::zeros_like(params);

  const Rng root(cfg.seed);
  Rng shuffle_rng = root.split("shuffle");
  Rng dropout_rng = root.split("dropout");

  const std::size_t n = train_set.samples.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;

  TrainResult result;
  result.params = params;
  result.selected_epoch = -1;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const double lr = lr_schedule(epoch, cfg.base_lr, cfg.lr_decay);
    state.epoch = epoch;

    for (std::size_t i = n; i > 1; --i) {
      const std::size_t j = shuffle_rng.uniform_int(i);
      std::swap(order[i - 1], order[j]);
    }

    for (std::size_t begin = 0; begin < n; begin += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t end = std::min(n, begin + static_cast<std::size_t>(cfg.batch_size));
      ParamGrads batch_grads = ParamGrads::zeros_like(params);
      const double inv_batch = 1.0 / static_cast<double>(end - begin);
      for (std::size_t i = begin; i < end; ++i) {
        const Sample& sample = train_set.samples[order[i]];
        ActivationCache cache;
        const DualOutput out =
            forward(params, sample.features, ForwardMode::kTrain, dropout_rng, &cache);
        DualOutput grad_dual = sample_loss_grad(out, sample.labels, stats, cfg);
        mask_components(grad_dual, options.components);
        batch_grads.accumulate(backward(params, cache, grad_dual), inv_batch);
      }
      sgd_step(params, batch_grads, state, lr, cfg.momentum, cfg.gamma);
    }

    EpochLog entry;
    entry.epoch = epoch;
    entry.learning_rate = lr;
    entry.train_objective = objective(params, train_set, stats, cfg, options.components);
    entry.val_objective = objective(params, val_set, stats, cfg, options.components);
    if (!std::isfinite(entry.train_objective) || !std::isfinite(entry.val_objective)) {
      throw std::runtime_error("train: objective became non-finite at epoch " +
                               std::to_string(epoch));
    }
    result.log.push_back(entry);

    if (result.selected_epoch < 0 || entry.val_objective < result.final_val_objective) {
      result.selected_epoch = epoch;
      result.final_val_objective = entry.val_objective;
      result.final_train_objective = entry.train_objective;
      result.params = params;
    }
  }
  return result;
}

}  // namespace setpredict::cli
