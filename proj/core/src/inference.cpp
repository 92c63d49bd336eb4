#include "setpredict/inference.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace setpredict {

ScoreVector label_scores(std::span<const double> label_logits, HyperVolumeUnit u) {
  ScoreVector scores;
  scores.c.resize(label_logits.size());
  const double log_u = std::log(u.u);
  for (std::size_t l = 0; l < label_logits.size(); ++l) {
    scores.c[l] = log_u + log_sigmoid(label_logits[l]);
  }
  return scores;
}

namespace {

// Label indices ordered by descending score, equal scores by lower index.
std::vector<int> score_order(const std::vector<double>& c) {
  std::vector<int> order(c.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return c[static_cast<std::size_t>(a)] > c[static_cast<std::size_t>(b)];
  });
  return order;
}

}  // namespace

MapResult map_set(const DualOutput& out, const CardinalityStats& stats,
                  HyperVolumeUnit u) {
  const int num_labels = static_cast<int>(out.label_logits.size());
  if (stats.max_cardinality() != num_labels) {
    throw std::invalid_argument("map_set: stats must cover 0..M");
  }
  const AlphaVector alpha = alpha_link(out.card_preacts);
  const ScoreVector scores = label_scores(out.label_logits, u);
  const std::vector<int> order = score_order(scores.c);

  // Cardinality sweep over all m; the prefix of the sorted scores is the
  // best set of each size.
  int best_m = 0;
  double best_objective = dc_log_pmf(0, alpha, stats);
  double prefix = 0.0;
  for (int m = 1; m <= num_labels; ++m) {
    prefix += scores.c[static_cast<std::size_t>(order[static_cast<std::size_t>(m - 1)])];
    const double objective = dc_log_pmf(m, alpha, stats) + prefix;
    if (objective > best_objective) {
      best_objective = objective;
      best_m = m;
    }
  }

  MapResult result;
  result.m_star = best_m;
  result.labels = LabelSet(
      std::vector<int>(order.begin(), order.begin() + best_m));
  result.log_score = set_log_density(result.labels, out.label_logits, alpha, stats, u);
  return result;
}

LabelSet topk_set(std::span<const double> label_logits, int k) {
  const int num_labels = static_cast<int>(label_logits.size());
  if (k < 0 || k > num_labels) {
    throw std::invalid_argument("topk_set: k must be in 0..M");
  }
  std::vector<int> order(static_cast<std::size_t>(num_labels));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return label_logits[static_cast<std::size_t>(a)] >
           label_logits[static_cast<std::size_t>(b)];
  });
  return LabelSet(std::vector<int>(order.begin(), order.begin() + k));
}

LabelSet sequential_set(const DualOutput& out, const CardinalityStats& stats) {
  const int num_labels = static_cast<int>(out.label_logits.size());
  if (stats.max_cardinality() != num_labels) {
    throw std::invalid_argument("sequential_set: stats must cover 0..M");
  }
  const AlphaVector alpha = alpha_link(out.card_preacts);
  const std::vector<double> pmf = dc_pmf(alpha, stats);
  int m_hat = 0;
  for (int m = 1; m < static_cast<int>(pmf.size()); ++m) {
    if (pmf[static_cast<std::size_t>(m)] > pmf[static_cast<std::size_t>(m_hat)]) {
      m_hat = m;
    }
  }
  return topk_set(out.label_logits, m_hat);
}

}  // namespace setpredict
