#pragma once

#include <span>
#include <vector>

#include "setpredict/set_model.hpp"

namespace setpredict {

// Multi-label scores: precision/recall/F1 averaged per class (c_*), pooled
// over all decisions (o_*, micro) and averaged per instance (i_*), plus the
// cardinality error. Every F1 is the harmonic mean of its aggregated P and R
// (0 when P + R = 0).
struct EvalReport {
  double c_p = 0.0, c_r = 0.0, c_f1 = 0.0;
  double o_p = 0.0, o_r = 0.0, o_f1 = 0.0;
  double i_p = 0.0, i_r = 0.0, i_f1 = 0.0;
  double cardinality_mae = 0.0;
  double cardinality_sd = 0.0;
};

// Empty-denominator conventions (fixed so fixtures are exact):
//  - per class: no predictions and no ground truth -> class excluded; only
//    one side present -> the undefined ratio counts as 0;
//  - per image: empty prediction and empty ground truth -> P = R = 1;
//    otherwise an empty side contributes 0;
//  - pooled: 0/0 -> 1 when the other pool is empty too, else 0.
EvalReport evaluate(std::span<const LabelSet> predictions,
                    std::span<const LabelSet> ground_truth, int num_labels);

enum class F1Target { kPerClass, kOverall, kPerInstance };

// Exhaustive scan of k in 1..M for fixed-size top-k prediction; returns the
// k maximising the chosen F1 (ties to the smaller k) and its report.
std::pair<int, EvalReport> best_k(std::span<const std::vector<double>> score_matrix,
                                  std::span<const LabelSet> ground_truth, int num_labels,
                                  F1Target target);

// Mean and population standard deviation of ||pred_i| - |gt_i||.
std::pair<double, double> cardinality_error(std::span<const LabelSet> predictions,
                                            std::span<const LabelSet> ground_truth);

double f1_of(const EvalReport& report, F1Target target);

}  // namespace setpredict
