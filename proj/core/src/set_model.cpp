#include "setpredict/set_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace setpredict {

LabelSet::LabelSet(std::vector<int> indices) : indices_(std::move(indices)) {
  std::sort(indices_.begin(), indices_.end());
  if (!indices_.empty() && indices_.front() < 0) {
    throw std::invalid_argument("LabelSet: negative label index");
  }
  if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end()) {
    throw std::invalid_argument("LabelSet: duplicate label index");
  }
}

bool LabelSet::contains(int label) const {
  return std::binary_search(indices_.begin(), indices_.end(), label);
}

int LabelSet::max_index() const { return indices_.empty() ? -1 : indices_.back(); }

CardinalityStats::CardinalityStats(std::vector<std::uint64_t> counts,
                                   std::uint64_t total)
    : counts_(std::move(counts)), total_(total) {
  if (counts_.empty()) {
    throw std::invalid_argument("CardinalityStats: counts must have M+1 entries");
  }
  const std::uint64_t sum =
      std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
  if (sum != total_) {
    throw std::invalid_argument("CardinalityStats: total != sum of counts");
  }
}

CardinalityStats CardinalityStats::from_counts(std::vector<std::uint64_t> counts) {
  const std::uint64_t total =
      std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  return CardinalityStats(std::move(counts), total);
}

AlphaVector::AlphaVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) {
    throw std::invalid_argument("AlphaVector: empty");
  }
  sum_ = 0.0;
  for (double a : values_) {
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw std::invalid_argument("AlphaVector: entries must be finite and > 0");
    }
    sum_ += a;
  }
}

HyperVolumeUnit::HyperVolumeUnit(double u_) : u(u_) {
  if (!(u > 0.0) || !std::isfinite(u)) {
    throw std::invalid_argument("HyperVolumeUnit: u must be finite and > 0");
  }
}

double sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double log_sigmoid(double x) {
  // -log(1 + e^{-x}) for x >= 0, x - log(1 + e^x) otherwise.
  return x >= 0.0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

double softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

namespace {

void require_consistent(const AlphaVector& alpha, const CardinalityStats& stats) {
  if (alpha.size() != static_cast<int>(stats.counts().size())) {
    throw std::invalid_argument("alpha and cardinality stats disagree on M");
  }
}

}  // namespace

double dc_log_pmf(int m, const AlphaVector& alpha, const CardinalityStats& stats) {
  require_consistent(alpha, stats);
  if (m < 0 || m > stats.max_cardinality()) {
    throw std::domain_error("dc_log_pmf: cardinality m=" + std::to_string(m) +
                            " outside 0.." + std::to_string(stats.max_cardinality()));
  }
  // The predictive is a plain ratio, so the log splits exactly; no lgamma.
  const double numer = alpha.values()[static_cast<std::size_t>(m)] +
                       static_cast<double>(stats.counts()[static_cast<std::size_t>(m)]);
  const double denom = alpha.sum() + static_cast<double>(stats.total());
  return std::log(numer) - std::log(denom);
}

std::vector<double> dc_pmf(const AlphaVector& alpha, const CardinalityStats& stats) {
  require_consistent(alpha, stats);
  const double denom = alpha.sum() + static_cast<double>(stats.total());
  std::vector<double> pmf(alpha.values().size());
  for (std::size_t m = 0; m < pmf.size(); ++m) {
    pmf[m] = (alpha.values()[m] + static_cast<double>(stats.counts()[m])) / denom;
  }
  return pmf;
}

std::vector<double> dc_grad_alpha(int m, const AlphaVector& alpha,
                                  const CardinalityStats& stats) {
  require_consistent(alpha, stats);
  if (m < 0 || m > stats.max_cardinality()) {
    throw std::domain_error("dc_grad_alpha: cardinality out of range");
  }
  const double denom = alpha.sum() + static_cast<double>(stats.total());
  const double numer = alpha.values()[static_cast<std::size_t>(m)] +
                       static_cast<double>(stats.counts()[static_cast<std::size_t>(m)]);
  std::vector<double> grad(alpha.values().size(), -1.0 / denom);
  grad[static_cast<std::size_t>(m)] += 1.0 / numer;
  return grad;
}

double set_log_density(const LabelSet& labels, std::span<const double> label_logits,
                       const AlphaVector& alpha, const CardinalityStats& stats,
                       HyperVolumeUnit u) {
  const int num_labels = static_cast<int>(label_logits.size());
  if (stats.max_cardinality() != num_labels) {
    throw std::invalid_argument("set_log_density: stats must cover 0..M");
  }
  if (labels.max_index() >= num_labels) {
    throw std::invalid_argument("set_log_density: label index out of range");
  }
  const int m = labels.cardinality();
  double value = dc_log_pmf(m, alpha, stats) + static_cast<double>(m) * std::log(u.u);
  for (int label : labels.indices()) {
    value += log_sigmoid(label_logits[static_cast<std::size_t>(label)]);
  }
  return value;
}

}  // namespace setpredict
