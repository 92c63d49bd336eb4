#include "setpredict/network.hpp"

#include <cmath>
#include <stdexcept>

namespace setpredict {

void Architecture::validate() const {
  if (input_dim < 1) throw std::invalid_argument("Architecture: input_dim >= 1 required");
  if (num_labels < 1) throw std::invalid_argument("Architecture: num_labels >= 1 required");
  for (int w : hidden_widths) {
    if (w < 1) throw std::invalid_argument("Architecture: hidden widths must be >= 1");
  }
  if (dropout_rate < 0.0 || dropout_rate >= 1.0) {
    throw std::invalid_argument("Architecture: dropout_rate must be in [0, 1)");
  }
}

std::size_t ModelParams::parameter_count() const {
  std::size_t n = 0;
  for (const auto& layer : layers) {
    n += layer.weights.data.size() + layer.bias.size();
  }
  return n;
}

double ModelParams::weight_squared_norm() const {
  double sum = 0.0;
  for (const auto& layer : layers) {
    for (double w : layer.weights.data) sum += w * w;
  }
  return sum;
}

std::vector<double> ModelParams::flatten() const {
  std::vector<double> flat;
  flat.reserve(parameter_count());
  for (const auto& layer : layers) {
    flat.insert(flat.end(), layer.weights.data.begin(), layer.weights.data.end());
    flat.insert(flat.end(), layer.bias.begin(), layer.bias.end());
  }
  return flat;
}

void ModelParams::unflatten(std::span<const double> values) {
  if (values.size() != parameter_count()) {
    throw std::invalid_argument("ModelParams::unflatten: size mismatch");
  }
  std::size_t offset = 0;
  for (auto& layer : layers) {
    for (double& w : layer.weights.data) w = values[offset++];
    for (double& b : layer.bias) b = values[offset++];
  }
}

ParamGrads ParamGrads::zeros_like(const ModelParams& params) {
  ParamGrads grads;
  grads.layers.reserve(params.layers.size());
  for (const auto& layer : params.layers) {
    LayerParams zero;
    zero.weights = Matrix(layer.weights.rows, layer.weights.cols);
    zero.bias.assign(layer.bias.size(), 0.0);
    grads.layers.push_back(std::move(zero));
  }
  return grads;
}

void ParamGrads::accumulate(const ParamGrads& other, double scale) {
  if (layers.size() != other.layers.size()) {
    throw std::invalid_argument("ParamGrads::accumulate: shape mismatch");
  }
  for (std::size_t i = 0; i < layers.size(); ++i) {
    auto& dst = layers[i];
    const auto& src = other.layers[i];
    if (dst.weights.data.size() != src.weights.data.size() ||
        dst.bias.size() != src.bias.size()) {
      throw std::invalid_argument("ParamGrads::accumulate: shape mismatch");
    }
    for (std::size_t k = 0; k < dst.weights.data.size(); ++k) {
      dst.weights.data[k] += scale * src.weights.data[k];
    }
    for (std::size_t k = 0; k < dst.bias.size(); ++k) {
      dst.bias[k] += scale * src.bias[k];
    }
  }
}

void ParamGrads::scale(double factor) {
  for (auto& layer : layers) {
    for (double& w : layer.weights.data) w *= factor;
    for (double& b : layer.bias) b *= factor;
  }
}

OptimizerState OptimizerState::zeros_like(const ModelParams& params) {
  OptimizerState state;
  state.momentum = ParamGrads::zeros_like(params);
  return state;
}

ModelParams init(const Architecture& arch, std::uint64_t seed) {
  arch.validate();
  Rng rng = Rng(seed).split("init");
  ModelParams params;
  params.arch = arch;

  std::vector<int> dims;
  dims.push_back(arch.input_dim);
  for (int w : arch.hidden_widths) dims.push_back(w);
  dims.push_back(arch.output_dim());

  for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
    LayerParams layer;
    layer.weights = Matrix(dims[i + 1], dims[i]);
    const double scale = 1.0 / std::sqrt(static_cast<double>(dims[i]));
    for (double& w : layer.weights.data) w = scale * rng.normal();
    layer.bias.assign(static_cast<std::size_t>(dims[i + 1]), 0.0);
    params.layers.push_back(std::move(layer));
  }
  return params;
}

namespace {

std::vector<double> affine(const LayerParams& layer, std::span<const double> in) {
  if (static_cast<int>(in.size()) != layer.weights.cols) {
    throw std::invalid_argument("forward: input dimension mismatch");
  }
  std::vector<double> out(layer.bias);
  for (int r = 0; r < layer.weights.rows; ++r) {
    const double* row = &layer.weights.data[static_cast<std::size_t>(r) * layer.weights.cols];
    double acc = 0.0;
    for (int c = 0; c < layer.weights.cols; ++c) acc += row[c] * in[static_cast<std::size_t>(c)];
    out[static_cast<std::size_t>(r)] += acc;
  }
  return out;
}

}  // namespace

void apply_inverted_dropout(std::vector<double>& activations, double rate, Rng& rng,
                            std::vector<double>& scale_out) {
  scale_out.resize(activations.size());
  if (rate <= 0.0) {
    std::fill(scale_out.begin(), scale_out.end(), 1.0);
    return;
  }
  const double keep_scale = 1.0 / (1.0 - rate);
  for (std::size_t i = 0; i < activations.size(); ++i) {
    const double s = rng.uniform() < rate ? 0.0 : keep_scale;
    scale_out[i] = s;
    activations[i] *= s;
  }
}

DualOutput forward(const ModelParams& params, std::span<const double> x,
                   ForwardMode mode, Rng& rng, ActivationCache* cache) {
  if (static_cast<int>(x.size()) != params.arch.input_dim) {
    throw std::invalid_argument("forward: feature vector has wrong dimension");
  }
  if (cache) {
    cache->mode = mode;
    cache->inputs.clear();
    cache->preacts.clear();
    cache->dropout_scale.clear();
  }

  std::vector<double> h(x.begin(), x.end());
  const std::size_t num_layers = params.layers.size();
  for (std::size_t i = 0; i < num_layers; ++i) {
    if (cache) cache->inputs.push_back(h);
    std::vector<double> z = affine(params.layers[i], h);
    if (cache) cache->preacts.push_back(z);
    if (i + 1 == num_layers) {
      h = std::move(z);  // output layer stays linear
      break;
    }
    for (double& v : z) v = v > 0.0 ? v : 0.0;
    if (mode == ForwardMode::kTrain) {
      std::vector<double> scale;
      apply_inverted_dropout(z, params.arch.dropout_rate, rng, scale);
      if (cache) cache->dropout_scale.push_back(std::move(scale));
    }
    h = std::move(z);
  }

  const int m = params.arch.num_labels;
  DualOutput out;
  out.label_logits.assign(h.begin(), h.begin() + m);
  out.card_preacts.assign(h.begin() + m, h.end());
  return out;
}

AlphaVector alpha_link(std::span<const double> card_preacts) {
  std::vector<double> alpha(card_preacts.size());
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    alpha[i] = softplus(card_preacts[i]) + kAlphaFloor;
  }
  return AlphaVector(std::move(alpha));
}

ParamGrads backward(const ModelParams& params, const ActivationCache& cache,
                    const DualOutput& grad_dual) {
  const std::size_t num_layers = params.layers.size();
  if (cache.inputs.size() != num_layers || cache.preacts.size() != num_layers) {
    throw std::invalid_argument("backward: cache does not match network depth");
  }
  if (cache.mode == ForwardMode::kTrain &&
      cache.dropout_scale.size() + 1 != num_layers) {
    throw std::invalid_argument("backward: cache is missing dropout scales");
  }
  const int m = params.arch.num_labels;
  if (static_cast<int>(grad_dual.label_logits.size()) != m ||
      static_cast<int>(grad_dual.card_preacts.size()) != m + 1) {
    throw std::invalid_argument("backward: grad_dual has wrong shape");
  }

  std::vector<double> g;
  g.reserve(grad_dual.label_logits.size() + grad_dual.card_preacts.size());
  g.insert(g.end(), grad_dual.label_logits.begin(), grad_dual.label_logits.end());
  g.insert(g.end(), grad_dual.card_preacts.begin(), grad_dual.card_preacts.end());

  ParamGrads grads = ParamGrads::zeros_like(params);
  for (std::size_t i = num_layers; i-- > 0;) {
    const LayerParams& layer = params.layers[i];
    const std::vector<double>& in = cache.inputs[i];
    if (static_cast<int>(g.size()) != layer.weights.rows ||
        static_cast<int>(in.size()) != layer.weights.cols) {
      throw std::invalid_argument("backward: cache shapes do not match parameters");
    }

    auto& layer_grads = grads.layers[i];
    for (int r = 0; r < layer.weights.rows; ++r) {
      const double gr = g[static_cast<std::size_t>(r)];
      layer_grads.bias[static_cast<std::size_t>(r)] = gr;
      double* wrow = &layer_grads.weights.data[static_cast<std::size_t>(r) * layer.weights.cols];
      for (int c = 0; c < layer.weights.cols; ++c) {
        wrow[c] = gr * in[static_cast<std::size_t>(c)];
      }
    }

    if (i == 0) break;

    // Propagate to the previous layer's post-activation output.
    std::vector<double> g_prev(static_cast<std::size_t>(layer.weights.cols), 0.0);
    for (int r = 0; r < layer.weights.rows; ++r) {
      const double gr = g[static_cast<std::size_t>(r)];
      const double* wrow = &layer.weights.data[static_cast<std::size_t>(r) * layer.weights.cols];
      for (int c = 0; c < layer.weights.cols; ++c) {
        g_prev[static_cast<std::size_t>(c)] += gr * wrow[c];
      }
    }
    // Through dropout, then ReLU of layer i-1.
    if (cache.mode == ForwardMode::kTrain) {
      const auto& scale = cache.dropout_scale[i - 1];
      for (std::size_t k = 0; k < g_prev.size(); ++k) g_prev[k] *= scale[k];
    }
    const auto& z_prev = cache.preacts[i - 1];
    for (std::size_t k = 0; k < g_prev.size(); ++k) {
      if (z_prev[k] <= 0.0) g_prev[k] = 0.0;
    }
    g = std::move(g_prev);
  }
  return grads;
}

void sgd_step(ModelParams& params, const ParamGrads& grads, OptimizerState& state,
              double lr, double momentum, double weight_decay) {
  if (grads.layers.size() != params.layers.size() ||
      state.momentum.layers.size() != params.layers.size()) {
    throw std::invalid_argument("sgd_step: shape mismatch");
  }
  state.learning_rate = lr;
  for (std::size_t i = 0; i < params.layers.size(); ++i) {
    auto& w = params.layers[i].weights.data;
    auto& b = params.layers[i].bias;
    const auto& gw = grads.layers[i].weights.data;
    const auto& gb = grads.layers[i].bias;
    auto& vw = state.momentum.layers[i].weights.data;
    auto& vb = state.momentum.layers[i].bias;
    for (std::size_t k = 0; k < w.size(); ++k) {
      vw[k] = momentum * vw[k] + gw[k] + weight_decay * w[k];
      w[k] -= lr * vw[k];
    }
    for (std::size_t k = 0; k < b.size(); ++k) {
      vb[k] = momentum * vb[k] + gb[k];
      b[k] -= lr * vb[k];
    }
  }
}

double lr_schedule(int epoch, double base_lr, double decay) {
  if (epoch < 0) throw std::invalid_argument("lr_schedule: epoch must be >= 0");
  return base_lr * std::pow(decay, epoch);
}

}  // namespace setpredict
