#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "setpredict/rng.hpp"
#include "setpredict/set_model.hpp"

namespace setpredict {

// Row-major dense matrix, double precision throughout so finite-difference
// gradient checks are meaningful.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

  double& operator()(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  double operator()(int r, int c) const {
    return data[static_cast<std::size_t>(r) * cols + c];
  }
};

// Feed-forward trunk shared by the label and cardinality heads. The single
// output layer emits M label logits followed by M+1 cardinality
// pre-activations.
struct Architecture {
  int input_dim = 0;
  std::vector<int> hidden_widths;
  int num_labels = 0;
  double dropout_rate = 0.5;

  int output_dim() const { return 2 * num_labels + 1; }
  void validate() const;

  bool operator==(const Architecture&) const = default;
};

struct LayerParams {
  Matrix weights;  // out x in
  std::vector<double> bias;
};

// One shared parameter set: hidden layers then the dual-head output layer.
struct ModelParams {
  Architecture arch;
  std::vector<LayerParams> layers;

  std::size_t parameter_count() const;
  double weight_squared_norm() const;  // weights only, biases excluded
  std::vector<double> flatten() const;
  void unflatten(std::span<const double> values);
};

// Gradients (or momentum buffers) with the same shapes as ModelParams.
struct ParamGrads {
  std::vector<LayerParams> layers;

  static ParamGrads zeros_like(const ModelParams& params);
  void accumulate(const ParamGrads& other, double scale = 1.0);
  void scale(double factor);
};

// Per-sample network outputs: M label logits O^l and M+1 cardinality
// pre-activations (mapped to alpha by alpha_link).
struct DualOutput {
  std::vector<double> label_logits;
  std::vector<double> card_preacts;
};

enum class ForwardMode { kEval, kTrain };

// Everything backward() needs from the matching forward() call.
struct ActivationCache {
  ForwardMode mode = ForwardMode::kEval;
  std::vector<std::vector<double>> inputs;   // inputs[i] feeds layer i; inputs[0] = x
  std::vector<std::vector<double>> preacts;  // affine outputs per layer
  std::vector<std::vector<double>> dropout_scale;  // per hidden layer, train mode only
};

struct OptimizerState {
  ParamGrads momentum;
  double learning_rate = 0.0;
  int epoch = 0;

  static OptimizerState zeros_like(const ModelParams& params);
};

// Deterministic initialisation: weights zero-mean normal with scale
// 1/sqrt(fan_in), biases zero.
ModelParams init(const Architecture& arch, std::uint64_t seed);

// Hidden layers are affine -> ReLU -> inverted dropout (train mode only);
// the output layer is affine. Eval mode is deterministic and dropout-free.
DualOutput forward(const ModelParams& params, std::span<const double> x,
                   ForwardMode mode, Rng& rng, ActivationCache* cache = nullptr);

// Multiplies each entry by 0 or 1/(1-rate) so the rng-expectation equals the
// input. Scale factors are reported through `scale_out` for backward.
void apply_inverted_dropout(std::vector<double>& activations, double rate, Rng& rng,
                            std::vector<double>& scale_out);

// alpha_j = softplus(a_j) + 1e-6: strictly positive, smooth, monotone.
AlphaVector alpha_link(std::span<const double> card_preacts);
inline constexpr double kAlphaFloor = 1e-6;

// Chain rule from gradients w.r.t. DualOutput back to parameter gradients.
// The dropout scales recorded in the cache are reused. Throws if the cache
// does not match the parameter shapes.
ParamGrads backward(const ModelParams& params, const ActivationCache& cache,
                    const DualOutput& grad_dual);

// v <- momentum * v + grads + weight_decay * w;  w <- w - lr * v.
// Weight decay touches weights only, never biases.
void sgd_step(ModelParams& params, const ParamGrads& grads, OptimizerState& state,
              double lr, double momentum, double weight_decay);

// base_lr * decay^epoch; non-increasing in epoch.
double lr_schedule(int epoch, double base_lr, double decay = 0.95);

}  // namespace setpredict
