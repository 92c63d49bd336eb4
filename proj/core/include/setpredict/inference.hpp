#pragma once

#include <span>
#include <vector>

#include "setpredict/network.hpp"
#include "setpredict/set_model.hpp"

namespace setpredict {

// Per-label selection scores c^l = log(u) + log(sigma(O^l)); each entry is
// <= log(u).
struct ScoreVector {
  std::vector<double> c;
};

struct MapResult {
  LabelSet labels;
  int m_star = 0;
  double log_score = 0.0;
};

ScoreVector label_scores(std::span<const double> label_logits, HyperVolumeUnit u);

// Exact MAP set decoding. Sorts the scores descending (ties to the lower
// label index), sweeps every cardinality m evaluating
//   dc_log_pmf(m) + sum of the m best scores,
// and keeps the maximising m (ties to the smaller m). log_score is the
// set_log_density of the returned set. The empty set is a legal output.
MapResult map_set(const DualOutput& out, const CardinalityStats& stats,
                  HyperVolumeUnit u);

// The k labels with the highest logits, ties to the lower index.
LabelSet topk_set(std::span<const double> label_logits, int k);

// Sequential decoding: pick the modal cardinality of the DC pmf first (ties
// to the smaller m), then the top-m labels. u plays no role here.
LabelSet sequential_set(const DualOutput& out, const CardinalityStats& stats);

}  // namespace setpredict
