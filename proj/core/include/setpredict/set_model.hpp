#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace setpredict {

// Unordered collection of distinct label indices. Stored sorted ascending;
// construction rejects duplicates and negative indices. Whether every index
// is < M is checked by the operations that know M.
class LabelSet {
 public:
  LabelSet() = default;
  explicit LabelSet(std::vector<int> indices);

  const std::vector<int>& indices() const { return indices_; }
  int cardinality() const { return static_cast<int>(indices_.size()); }
  bool empty() const { return indices_.empty(); }
  bool contains(int label) const;
  int max_index() const;  // -1 when empty

  bool operator==(const LabelSet&) const = default;

 private:
  std::vector<int> indices_;
};

// Training-set cardinality histogram: counts[m] samples of cardinality m,
// m in {0,...,M}, total = sum of counts. total == 0 is legal (the posterior
// predictive then reduces to alpha_m / sum(alpha)).
class CardinalityStats {
 public:
  CardinalityStats(std::vector<std::uint64_t> counts, std::uint64_t total);
  static CardinalityStats from_counts(std::vector<std::uint64_t> counts);

  const std::vector<std::uint64_t>& counts() const { return counts_; }
  std::uint64_t total() const { return total_; }
  // M, i.e. counts has M+1 slots.
  int max_cardinality() const { return static_cast<int>(counts_.size()) - 1; }

 private:
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_;
};

// Concentration parameters of the Dirichlet prior over cardinality event
// probabilities, one slot per cardinality value 0..M. Entries must be
// strictly positive and finite.
class AlphaVector {
 public:
  explicit AlphaVector(std::vector<double> values);

  const std::vector<double>& values() const { return values_; }
  double sum() const { return sum_; }
  int size() const { return static_cast<int>(values_.size()); }

 private:
  std::vector<double> values_;
  double sum_;
};

// Unit of hyper-volume in feature space; makes set densities of different
// cardinalities comparable. Tuned scalar, u > 0.
struct HyperVolumeUnit {
  double u;
  explicit HyperVolumeUnit(double u_);
};

double sigmoid(double x);
// log(sigma(x)) without overflow/cancellation for large |x|.
double log_sigmoid(double x);
// log(1 + e^x), stable at both ends.
double softplus(double x);

// Dirichlet-Categorical posterior predictive,
//   DC(m) = (alpha_m + C_m) / (sum_m' alpha_m' + C),
// in the log domain. Throws std::domain_error for m outside 0..M and
// std::invalid_argument on a size mismatch between alpha and stats.
double dc_log_pmf(int m, const AlphaVector& alpha, const CardinalityStats& stats);

// The full pmf over m = 0..M; entries positive, sums to 1.
std::vector<double> dc_pmf(const AlphaVector& alpha, const CardinalityStats& stats);

// d log DC(m) / d alpha_j = delta_{j,m}/(alpha_m + C_m) - 1/(sum alpha + C).
std::vector<double> dc_grad_alpha(int m, const AlphaVector& alpha,
                                  const CardinalityStats& stats);

// Log-density of a label set under the joint model:
//   log DC(m) + m log u + sum_{l in labels} log sigma(O^l).
// The per-label product does not normalise over subsets; this is the
// unnormalised score that training and MAP inference maximise.
double set_log_density(const LabelSet& labels, std::span<const double> label_logits,
                       const AlphaVector& alpha, const CardinalityStats& stats,
                       HyperVolumeUnit u);

}  // namespace setpredict
