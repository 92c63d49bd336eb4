#include "setpredict/cli/artifact.hpp"

#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace setpredict::cli {

using nlohmann::ordered_json;

ModelArtifact::ModelArtifact(ModelParams params_, CardinalityStats stats_,
                             HyperVolumeUnit u_, TrainConfig train_config_,
                             int selected_epoch_, double final_train_objective_,
                             double final_val_objective_)
    : params(std::move(params_)),
      stats(std::move(stats_)),
      u(u_),
      train_config(train_config_),
      selected_epoch(selected_epoch_),
      final_train_objective(final_train_objective_),
      final_val_objective(final_val_objective_) {
  params.arch.validate();
  if (stats.max_cardinality() != params.arch.num_labels) {
    throw std::invalid_argument("ModelArtifact: stats must cover 0..num_labels");
  }
  const int expected_out = params.arch.output_dim();
  if (params.layers.empty() ||
      params.layers.back().weights.rows != expected_out) {
    throw std::invalid_argument("ModelArtifact: parameter shapes do not match architecture");
  }
}

namespace {

ordered_json to_json(const ModelArtifact& artifact) {
  ordered_json doc;
  doc["format_version"] = artifact.format_version;

  ordered_json arch;
  arch["input_dim"] = artifact.params.arch.input_dim;
  arch["hidden_widths"] = artifact.params.arch.hidden_widths;
  arch["num_labels"] = artifact.params.arch.num_labels;
  arch["dropout_rate"] = artifact.params.arch.dropout_rate;
  doc["architecture"] = arch;

  ordered_json layers = ordered_json::array();
  for (const auto& layer : artifact.params.layers) {
    ordered_json entry;
    entry["rows"] = layer.weights.rows;
    entry["cols"] = layer.weights.cols;
    entry["weights"] = layer.weights.data;
    entry["bias"] = layer.bias;
    layers.push_back(std::move(entry));
  }
  doc["layers"] = layers;

  ordered_json stats;
  stats["counts"] = artifact.stats.counts();
  stats["total"] = artifact.stats.total();
  doc["cardinality_stats"] = stats;

  doc["u"] = artifact.u.u;

  ordered_json cfg;
  cfg["gamma"] = artifact.train_config.gamma;
  cfg["bce_mode"] =
      artifact.train_config.bce_mode == BceMode::kFull ? "full" : "positive_only";
  cfg["base_lr"] = artifact.train_config.base_lr;
  cfg["lr_decay"] = artifact.train_config.lr_decay;
  cfg["momentum"] = artifact.train_config.momentum;
  cfg["epochs"] = artifact.train_config.epochs;
  cfg["batch_size"] = artifact.train_config.batch_size;
  cfg["seed"] = artifact.train_config.seed;
  doc["train_config"] = cfg;

  doc["selected_epoch"] = artifact.selected_epoch;
  doc["final_train_objective"] = artifact.final_train_objective;
  doc["final_val_objective"] = artifact.final_val_objective;
  return doc;
}

ModelArtifact from_json(const ordered_json& doc) {
  const int version = doc.at("format_version").get<int>();
  if (version != kArtifactFormatVersion) {
    throw std::runtime_error("model artifact: unsupported format_version " +
                             std::to_string(version));
  }

  Architecture arch;
  const auto& arch_doc = doc.at("architecture");
  arch.input_dim = arch_doc.at("input_dim").get<int>();
  arch.hidden_widths = arch_doc.at("hidden_widths").get<std::vector<int>>();
  arch.num_labels = arch_doc.at("num_labels").get<int>();
  arch.dropout_rate = arch_doc.at("dropout_rate").get<double>();

  ModelParams params;
  params.arch = arch;
  for (const auto& entry : doc.at("layers")) {
    LayerParams layer;
    layer.weights.rows = entry.at("rows").get<int>();
    layer.weights.cols = entry.at("cols").get<int>();
    layer.weights.data = entry.at("weights").get<std::vector<double>>();
    layer.bias = entry.at("bias").get<std::vector<double>>();
    if (layer.weights.data.size() !=
            static_cast<std::size_t>(layer.weights.rows) * layer.weights.cols ||
        layer.bias.size() != static_cast<std::size_t>(layer.weights.rows)) {
      throw std::runtime_error("model artifact: inconsistent layer shapes");
    }
    params.layers.push_back(std::move(layer));
  }

  const auto& stats_doc = doc.at("cardinality_stats");
  CardinalityStats stats(stats_doc.at("counts").get<std::vector<std::uint64_t>>(),
                         stats_doc.at("total").get<std::uint64_t>());

  HyperVolumeUnit u(doc.at("u").get<double>());

  TrainConfig cfg;
  const auto& cfg_doc = doc.at("train_config");
  cfg.gamma = cfg_doc.at("gamma").get<double>();
  const std::string mode = cfg_doc.at("bce_mode").get<std::string>();
  if (mode == "full") {
    cfg.bce_mode = BceMode::kFull;
  } else if (mode == "positive_only") {
    cfg.bce_mode = BceMode::kPositiveOnly;
  } else {
    throw std::runtime_error("model artifact: unknown bce_mode '" + mode + "'");
  }
  cfg.base_lr = cfg_doc.at("base_lr").get<double>();
  cfg.lr_decay = cfg_doc.at("lr_decay").get<double>();
  cfg.momentum = cfg_doc.at("momentum").get<double>();
  cfg.epochs = cfg_doc.at("epochs").get<int>();
  cfg.batch_size = cfg_doc.at("batch_size").get<int>();
  cfg.seed = cfg_doc.at("seed").get<std::uint64_t>();

  return ModelArtifact(std::move(params), std::move(stats), u, cfg,
                       doc.at("selected_epoch").get<int>(),
                       doc.at("final_train_objective").get<double>(),
                       doc.at("final_val_objective").get<double>());
}

}  // namespace

void save_artifact(const ModelArtifact& artifact, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_artifact: cannot open " + path);
  out << to_json(artifact).dump(2) << '\n';
  if (!out) throw std::runtime_error("save_artifact: write failed for " + path);
}

ModelArtifact load_artifact(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_artifact: cannot open " + path);
  ordered_json doc;
  try {
    doc = ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("load_artifact: " + path + ": " + e.what());
  }
  return from_json(doc);
}

}  // namespace setpredict::cli
