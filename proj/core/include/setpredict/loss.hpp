#pragma once

#include <cstdint>
#include <span>

#include "setpredict/data.hpp"
#include "setpredict/network.hpp"
#include "setpredict/set_model.hpp"

namespace setpredict {

// kFull pairs every label with its complement term; kPositiveOnly keeps only
// the selected-label terms, the literal form of the joint objective.
enum class BceMode { kFull, kPositiveOnly };

struct TrainConfig {
  double gamma = 5e-4;  // weight decay, weights only
  BceMode bce_mode = BceMode::kFull;
  double base_lr = 1e-3;
  double lr_decay = 0.95;
  double momentum = 0.9;
  int epochs = 60;
  int batch_size = 32;
  std::uint64_t seed = 0;

  void validate() const;
};

// The two negated log-probability summands of the per-sample objective.
// Both are >= 0; total = bce_term + cardinality_term. The m*log(u) term is a
// per-sample constant during training and is dropped here, so u only enters
// at inference time.
struct SampleLossBreakdown {
  double bce_term = 0.0;
  double cardinality_term = 0.0;
  double total = 0.0;
};

SampleLossBreakdown sample_loss(const DualOutput& out, const LabelSet& labels,
                                const CardinalityStats& stats, const TrainConfig& cfg);

// Gradients of sample_loss().total w.r.t. the network outputs:
//   d/dO^l = sigma(O^l) - z^l                          (full mode)
//   d/da_j = -dc_grad_alpha(m)_j * sigma(a_j)          (softplus derivative)
// Shaped like DualOutput so it chains directly into backward().
DualOutput sample_loss_grad(const DualOutput& out, const LabelSet& labels,
                            const CardinalityStats& stats, const TrainConfig& cfg);

// Mean sample loss over the batch plus gamma * |weights|^2, evaluated in
// deterministic eval mode.
double batch_objective(const ModelParams& params, std::span<const Sample> batch,
                       const CardinalityStats& stats, const TrainConfig& cfg);

// batch_objective together with its exact parameter gradient (the L2 term
// contributes 2*gamma*w on weights). Used for plain full-batch descent and
// for finite-difference checks of the composed objective.
double batch_objective_with_grad(const ModelParams& params, std::span<const Sample> batch,
                                 const CardinalityStats& stats, const TrainConfig& cfg,
                                 ParamGrads& grads_out);

}  // namespace setpredict
