#include "setpredict/loss.hpp"

#include <cmath>
#include <stdexcept>

namespace setpredict {

void TrainConfig::validate() const {
  if (gamma < 0.0) throw std::invalid_argument("TrainConfig: gamma >= 0 required");
  if (epochs < 1) throw std::invalid_argument("TrainConfig: epochs >= 1 required");
  if (batch_size < 1) throw std::invalid_argument("TrainConfig: batch_size >= 1 required");
  if (base_lr <= 0.0) throw std::invalid_argument("TrainConfig: base_lr > 0 required");
  if (lr_decay <= 0.0 || lr_decay > 1.0) {
    throw std::invalid_argument("TrainConfig: lr_decay must be in (0, 1]");
  }
  if (momentum < 0.0 || momentum >= 1.0) {
    throw std::invalid_argument("TrainConfig: momentum must be in [0, 1)");
  }
}

namespace {

void require_shapes(const DualOutput& out, const LabelSet& labels,
                    const CardinalityStats& stats) {
  const int num_labels = static_cast<int>(out.label_logits.size());
  if (static_cast<int>(out.card_preacts.size()) != num_labels + 1) {
    throw std::invalid_argument("loss: card_preacts must have M+1 entries");
  }
  if (stats.max_cardinality() != num_labels) {
    throw std::invalid_argument("loss: stats must cover 0..M");
  }
  if (labels.max_index() >= num_labels) {
    throw std::invalid_argument("loss: label index out of range");
  }
}

}  // namespace

SampleLossBreakdown sample_loss(const DualOutput& out, const LabelSet& labels,
                                const CardinalityStats& stats, const TrainConfig& cfg) {
  require_shapes(out, labels, stats);
  const int num_labels = static_cast<int>(out.label_logits.size());

  double bce = 0.0;
  for (int l = 0; l < num_labels; ++l) {
    const double logit = out.label_logits[static_cast<std::size_t>(l)];
    const bool positive = labels.contains(l);
    if (positive) {
      bce -= log_sigmoid(logit);
    } else if (cfg.bce_mode == BceMode::kFull) {
      bce -= log_sigmoid(-logit);  // log(1 - sigma(x)) = log sigma(-x)
    }
  }

  const AlphaVector alpha = alpha_link(out.card_preacts);
  SampleLossBreakdown breakdown;
  breakdown.bce_term = bce;
  breakdown.cardinality_term = -dc_log_pmf(labels.cardinality(), alpha, stats);
  breakdown.total = breakdown.bce_term + breakdown.cardinality_term;
  return breakdown;
}

DualOutput sample_loss_grad(const DualOutput& out, const LabelSet& labels,
                            const CardinalityStats& stats, const TrainConfig& cfg) {
  require_shapes(out, labels, stats);
  const int num_labels = static_cast<int>(out.label_logits.size());

  DualOutput grad;
  grad.label_logits.resize(static_cast<std::size_t>(num_labels));
  for (int l = 0; l < num_labels; ++l) {
    const double s = sigmoid(out.label_logits[static_cast<std::size_t>(l)]);
    const double z = labels.contains(l) ? 1.0 : 0.0;
    // Positive-only mode keeps just the -z*log(sigma) terms.
    grad.label_logits[static_cast<std::size_t>(l)] =
        cfg.bce_mode == BceMode::kFull ? s - z : z * (s - 1.0);
  }

  const AlphaVector alpha = alpha_link(out.card_preacts);
  const std::vector<double> dc_grad = dc_grad_alpha(labels.cardinality(), alpha, stats);
  grad.card_preacts.resize(dc_grad.size());
  for (std::size_t j = 0; j < dc_grad.size(); ++j) {
    grad.card_preacts[j] = -dc_grad[j] * sigmoid(out.card_preacts[j]);
  }
  return grad;
}

double batch_objective(const ModelParams& params, std::span<const Sample> batch,
                       const CardinalityStats& stats, const TrainConfig& cfg) {
  if (batch.empty()) throw std::invalid_argument("batch_objective: empty batch");
  Rng unused(0);
  double sum = 0.0;
  for (const Sample& sample : batch) {
    const DualOutput out = forward(params, sample.features, ForwardMode::kEval, unused);
    sum += sample_loss(out, sample.labels, stats, cfg).total;
  }
  return sum / static_cast<double>(batch.size()) + cfg.gamma * params.weight_squared_norm();
}

double batch_objective_with_grad(const ModelParams& params, std::span<const Sample> batch,
                                 const CardinalityStats& stats, const TrainConfig& cfg,
                                 ParamGrads& grads_out) {
  if (batch.empty()) throw std::invalid_argument("batch_objective_with_grad: empty batch");
  Rng unused(0);
  grads_out = ParamGrads::zeros_like(params);
  double sum = 0.0;
  const double inv_n = 1.0 / static_cast<double>(batch.size());
  for (const Sample& sample : batch) {
    ActivationCache cache;
    const DualOutput out = forward(params, sample.features, ForwardMode::kEval, unused, &cache);
    sum += sample_loss(out, sample.labels, stats, cfg).total;
    const DualOutput grad_dual = sample_loss_grad(out, sample.labels, stats, cfg);
    grads_out.accumulate(backward(params, cache, grad_dual), inv_n);
  }
  for (std::size_t i = 0; i < params.layers.size(); ++i) {
    const auto& w = params.layers[i].weights.data;
    auto& gw = grads_out.layers[i].weights.data;
    for (std::size_t k = 0; k < w.size(); ++k) gw[k] += 2.0 * cfg.gamma * w[k];
  }
  return sum * inv_n + cfg.gamma * params.weight_squared_norm();
}

}  // namespace setpredict
