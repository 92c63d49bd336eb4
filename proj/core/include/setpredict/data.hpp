#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "setpredict/set_model.hpp"

namespace setpredict {

// One training pair: feature vector and its ground-truth label set.
struct Sample {
  std::vector<double> features;
  LabelSet labels;
};

struct Dataset {
  int feature_dim = 0;
  int num_labels = 0;
  std::vector<Sample> samples;

  std::size_t size() const { return samples.size(); }
};

// Configuration of the synthetic multi-label generator. Features are sums of
// per-class prototype vectors plus Gaussian noise, so in the noiseless limit
// the label set is recoverable from the features.
struct SynthConfig {
  int feature_dim = 20;
  int num_labels = 10;
  int num_samples = 6000;
  int max_cardinality = 4;
  double prototype_scale = 1.0;
  double noise_scale = 0.1;
  std::uint64_t seed = 0;

  void validate() const;
  // Target cardinality pmf over 0..max_cardinality: skewed so most mass sits
  // on one to three labels.
  std::vector<double> cardinality_pmf() const;
};

Dataset generate(const SynthConfig& cfg);

// counts[m] = number of samples with |labels| = m, for m in 0..M.
CardinalityStats cardinality_stats(const Dataset& dataset);

// Deterministic shuffle, then partition by cumulative fractions.
// Fractions must be positive and sum to 1.
std::vector<Dataset> split(const Dataset& dataset, const std::vector<double>& fractions,
                           std::uint64_t seed);

// JSON Lines on disk: a header line {"l":...,"M":...} followed by one
// {"x":[...],"labels":[...]} object per sample. write/read round-trips
// floats exactly. Malformed lines are rejected with their line number.
void write_dataset(const Dataset& dataset, const std::string& path);
Dataset read_dataset(const std::string& path);

}  // namespace setpredict
