#include "setpredict/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "setpredict/inference.hpp"

namespace setpredict {

namespace {

double harmonic_mean(double p, double r) {
  if (p == r) return p;  // keeps H(x, x) = x exact
  return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
}

std::size_t intersection_size(const LabelSet& a, const LabelSet& b) {
  std::size_t count = 0;
  for (int label : a.indices()) {
    if (b.contains(label)) ++count;
  }
  return count;
}

void require_valid(std::span<const LabelSet> predictions,
                   std::span<const LabelSet> ground_truth, int num_labels) {
  if (predictions.size() != ground_truth.size()) {
    throw std::invalid_argument("evaluate: prediction/ground-truth length mismatch");
  }
  for (const auto& set : predictions) {
    if (set.max_index() >= num_labels) {
      throw std::invalid_argument("evaluate: predicted label index out of range");
    }
  }
  for (const auto& set : ground_truth) {
    if (set.max_index() >= num_labels) {
      throw std::invalid_argument("evaluate: ground-truth label index out of range");
    }
  }
}

}  // namespace

EvalReport evaluate(std::span<const LabelSet> predictions,
                    std::span<const LabelSet> ground_truth, int num_labels) {
  require_valid(predictions, ground_truth, num_labels);
  const std::size_t n = predictions.size();

  EvalReport report;

  // Per-class tallies.
  std::vector<std::size_t> tp(static_cast<std::size_t>(num_labels), 0);
  std::vector<std::size_t> pred_count(static_cast<std::size_t>(num_labels), 0);
  std::vector<std::size_t> gt_count(static_cast<std::size_t>(num_labels), 0);

  std::size_t pooled_tp = 0, pooled_pred = 0, pooled_gt = 0;
  double inst_p_sum = 0.0, inst_r_sum = 0.0;
  double abs_err_sum = 0.0, abs_err_sq_sum = 0.0;

  for (std::size_t i = 0; i < n; ++i) {
    const LabelSet& pred = predictions[i];
    const LabelSet& gt = ground_truth[i];
    const std::size_t hit = intersection_size(pred, gt);

    for (int label : pred.indices()) {
      pred_count[static_cast<std::size_t>(label)]++;
      if (gt.contains(label)) tp[static_cast<std::size_t>(label)]++;
    }
    for (int label : gt.indices()) gt_count[static_cast<std::size_t>(label)]++;

    pooled_tp += hit;
    pooled_pred += pred.indices().size();
    pooled_gt += gt.indices().size();

    if (pred.empty() && gt.empty()) {
      inst_p_sum += 1.0;
      inst_r_sum += 1.0;
    } else {
      inst_p_sum += pred.empty() ? 0.0 : static_cast<double>(hit) / pred.indices().size();
      inst_r_sum += gt.empty() ? 0.0 : static_cast<double>(hit) / gt.indices().size();
    }

    const double err = std::abs(pred.cardinality() - gt.cardinality());
    abs_err_sum += err;
    abs_err_sq_sum += err * err;
  }

  double class_p_sum = 0.0, class_r_sum = 0.0;
  std::size_t included_classes = 0;
  for (int label = 0; label < num_labels; ++label) {
    const auto idx = static_cast<std::size_t>(label);
    if (pred_count[idx] == 0 && gt_count[idx] == 0) continue;
    ++included_classes;
    class_p_sum += pred_count[idx] > 0 ? static_cast<double>(tp[idx]) / pred_count[idx] : 0.0;
    class_r_sum += gt_count[idx] > 0 ? static_cast<double>(tp[idx]) / gt_count[idx] : 0.0;
  }
  report.c_p = included_classes > 0 ? class_p_sum / included_classes : 1.0;
  report.c_r = included_classes > 0 ? class_r_sum / included_classes : 1.0;
  report.c_f1 = harmonic_mean(report.c_p, report.c_r);

  report.o_p = pooled_pred > 0 ? static_cast<double>(pooled_tp) / pooled_pred
                               : (pooled_gt == 0 ? 1.0 : 0.0);
  report.o_r = pooled_gt > 0 ? static_cast<double>(pooled_tp) / pooled_gt
                             : (pooled_pred == 0 ? 1.0 : 0.0);
  report.o_f1 = harmonic_mean(report.o_p, report.o_r);

  report.i_p = n > 0 ? inst_p_sum / static_cast<double>(n) : 1.0;
  report.i_r = n > 0 ? inst_r_sum / static_cast<double>(n) : 1.0;
  report.i_f1 = harmonic_mean(report.i_p, report.i_r);

  if (n > 0) {
    report.cardinality_mae = abs_err_sum / static_cast<double>(n);
    const double mean_sq = abs_err_sq_sum / static_cast<double>(n);
    const double variance = std::max(0.0, mean_sq - report.cardinality_mae * report.cardinality_mae);
    report.cardinality_sd = std::sqrt(variance);
  }
  return report;
}

double f1_of(const EvalReport& report, F1Target target) {
  switch (target) {
    case F1Target::kPerClass: return report.c_f1;
    case F1Target::kOverall: return report.o_f1;
    case F1Target::kPerInstance: return report.i_f1;
  }
  throw std::invalid_argument("f1_of: unknown target");
}

std::pair<int, EvalReport> best_k(std::span<const std::vector<double>> score_matrix,
                                  std::span<const LabelSet> ground_truth, int num_labels,
                                  F1Target target) {
  if (score_matrix.empty() || score_matrix.size() != ground_truth.size()) {
    throw std::invalid_argument("best_k: empty input or length mismatch");
  }
  int best = 1;
  EvalReport best_report;
  double best_f1 = -1.0;
  for (int k = 1; k <= num_labels; ++k) {
    std::vector<LabelSet> predictions;
    predictions.reserve(score_matrix.size());
    for (const auto& logits : score_matrix) {
      predictions.push_back(topk_set(logits, k));
    }
    EvalReport report = evaluate(predictions, ground_truth, num_labels);
    const double f1 = f1_of(report, target);
    if (f1 > best_f1) {
      best_f1 = f1;
      best = k;
      best_report = report;
    }
  }
  return {best, best_report};
}

std::pair<double, double> cardinality_error(std::span<const LabelSet> predictions,
                                            std::span<const LabelSet> ground_truth) {
  if (predictions.empty() || predictions.size() != ground_truth.size()) {
    throw std::invalid_argument("cardinality_error: empty input or length mismatch");
  }
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const double err = std::abs(predictions[i].cardinality() - ground_truth[i].cardinality());
    sum += err;
    sum_sq += err * err;
  }
  const double n = static_cast<double>(predictions.size());
  const double mae = sum / n;
  const double sd = std::sqrt(std::max(0.0, sum_sq / n - mae * mae));
  return {mae, sd};
}

}  // namespace setpredict
