#pragma once

#include <cstdint>
#include <string>

#include "setpredict/loss.hpp"
#include "setpredict/network.hpp"
#include "setpredict/set_model.hpp"

namespace setpredict::cli {

inline constexpr int kArtifactFormatVersion = 1;

// Everything inference needs in one document: the trained parameters, the
// training-set cardinality histogram and the hyper-volume unit, plus the
// training configuration and objective values for provenance.
struct ModelArtifact {
  int format_version = kArtifactFormatVersion;
  ModelParams params;
  CardinalityStats stats;
  HyperVolumeUnit u;
  TrainConfig train_config;
  int selected_epoch = 0;
  double final_train_objective = 0.0;
  double final_val_objective = 0.0;

  ModelArtifact(ModelParams params_, CardinalityStats stats_, HyperVolumeUnit u_,
                TrainConfig train_config_, int selected_epoch_,
                double final_train_objective_, double final_val_objective_);
};

// Single JSON document; floats round-trip exactly, load-then-save is
// byte-identical.
void save_artifact(const ModelArtifact& artifact, const std::string& path);
ModelArtifact load_artifact(const std::string& path);

}  // namespace setpredict::cli
