#include "setpredict/oracle.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace setpredict {
namespace oracle {

namespace {

constexpr int kMaxEnumerableLabels = 20;

std::vector<int> mask_to_indices(std::uint32_t mask) {
  std::vector<int> indices;
  for (int l = 0; mask != 0; ++l, mask >>= 1) {
    if (mask & 1u) indices.push_back(l);
  }
  return indices;
}

// Sorted index sequences compared lexicographically.
bool lex_less(const std::vector<int>& a, const std::vector<int>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

void require_enumerable(int num_labels, const char* who) {
  if (num_labels > kMaxEnumerableLabels) {
    throw std::invalid_argument(std::string(who) + ": refusing M > 20 (2^M subsets)");
  }
}

}  // namespace

MapResult brute_force_map(const DualOutput& out, const CardinalityStats& stats,
                          HyperVolumeUnit u) {
  const int num_labels = static_cast<int>(out.label_logits.size());
  require_enumerable(num_labels, "brute_force_map");
  if (stats.max_cardinality() != num_labels) {
    throw std::invalid_argument("brute_force_map: stats must cover 0..M");
  }
  const AlphaVector alpha = alpha_link(out.card_preacts);

  bool have_best = false;
  std::vector<int> best_indices;
  double best_score = 0.0;
  const std::uint64_t subset_count = std::uint64_t{1} << num_labels;
  for (std::uint64_t mask = 0; mask < subset_count; ++mask) {
    std::vector<int> indices = mask_to_indices(static_cast<std::uint32_t>(mask));
    const LabelSet candidate(indices);
    const double score = set_log_density(candidate, out.label_logits, alpha, stats, u);
    bool better = false;
    if (!have_best || score > best_score) {
      better = true;
    } else if (score == best_score) {
      if (indices.size() < best_indices.size()) {
        better = true;
      } else if (indices.size() == best_indices.size() && lex_less(indices, best_indices)) {
        better = true;
      }
    }
    if (better) {
      have_best = true;
      best_indices = std::move(indices);
      best_score = score;
    }
  }

  MapResult result;
  result.labels = LabelSet(best_indices);
  result.m_star = result.labels.cardinality();
  result.log_score = best_score;
  return result;
}

std::vector<double> finite_diff_grad(const std::function<double(std::span<const double>)>& f,
                                     std::span<const double> point, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("finite_diff_grad: step must be > 0");
  std::vector<double> probe(point.begin(), point.end());
  std::vector<double> grad(point.size());
  for (std::size_t j = 0; j < probe.size(); ++j) {
    const double original = probe[j];
    probe[j] = original + step;
    const double f_plus = f(probe);
    probe[j] = original - step;
    const double f_minus = f(probe);
    probe[j] = original;
    if (std::isnan(f_plus) || std::isnan(f_minus)) {
      throw std::runtime_error("finite_diff_grad: NaN in probe evaluation");
    }
    grad[j] = (f_plus - f_minus) / (2.0 * step);
  }
  return grad;
}

double enumerate_set_mass(const DualOutput& out, const CardinalityStats& stats,
                          HyperVolumeUnit u) {
  const int num_labels = static_cast<int>(out.label_logits.size());
  require_enumerable(num_labels, "enumerate_set_mass");
  const AlphaVector alpha = alpha_link(out.card_preacts);
  double mass = 0.0;
  const std::uint64_t subset_count = std::uint64_t{1} << num_labels;
  for (std::uint64_t mask = 0; mask < subset_count; ++mask) {
    const LabelSet candidate(mask_to_indices(static_cast<std::uint32_t>(mask)));
    mass += std::exp(set_log_density(candidate, out.label_logits, alpha, stats, u));
  }
  return mass;
}

}  // namespace oracle
}  // namespace setpredict
