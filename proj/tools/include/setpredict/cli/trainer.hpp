#pragma once

#include <optional>
#include <vector>

#include "setpredict/data.hpp"
#include "setpredict/loss.hpp"
#include "setpredict/network.hpp"

namespace setpredict::cli {

// Which loss blocks drive the updates. kJoint is the proposed model;
// kBceOnly / kCardinalityOnly reproduce the sequential baseline, which trains
// the classifier and the cardinality head as separate networks.
enum class LossComponents { kJoint, kBceOnly, kCardinalityOnly };

struct EpochLog {
  int epoch = 0;
  double learning_rate = 0.0;
  double train_objective = 0.0;
  double val_objective = 0.0;
};

struct TrainResult {
  ModelParams params;  // snapshot from the selected epoch
  int selected_epoch = 0;
  double final_train_objective = 0.0;
  double final_val_objective = 0.0;
  std::vector<EpochLog> log;
};

struct TrainerOptions {
  Architecture arch;
  TrainConfig cfg;
  LossComponents components = LossComponents::kJoint;
  // When set, training continues from these parameters instead of a fresh
  // init (the sequential baseline warm-starts its cardinality head from the
  // classifier weights).
  std::optional<ModelParams> init_params;
};

// Mini-batch SGD with momentum, weight decay on weights, per-epoch lr decay
// and dropout. After every epoch the objective is evaluated on both splits
// and the epoch with the lowest validation objective is kept. Deterministic:
// everything is driven by cfg.seed. Throws on a non-finite objective.
TrainResult train(const Dataset& train_set, const Dataset& val_set,
                  const CardinalityStats& stats, const TrainerOptions& options);

}  // namespace setpredict::cli
