#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace setpredict::cli {

struct CheckResult {
  std::string name;
  std::uint64_t trials = 0;
  std::uint64_t failures = 0;
  double max_error = 0.0;

  bool passed() const { return failures == 0; }
};

struct CheckOptions {
  std::uint64_t seed = 11;
  int trials = 1000;
  // Negative control: perturbs one analytic gradient entry by 1e-3 so the
  // gradient check must fail.
  bool inject_gradient_error = false;
};

// map_set vs subset enumeration, exact set membership and log-score
// agreement, per M in 1..12 and u in {0.5, 1, 2.36, 10}.
CheckResult check_map_oracle_equivalence(const CheckOptions& options);

// End-to-end analytic parameter gradients of the per-sample loss vs central
// finite differences on random small networks.
CheckResult check_gradient_end_to_end(const CheckOptions& options);

// Cardinality pmf normalisation and positivity, and the analytic alpha
// gradient vs finite differences.
CheckResult check_dc_soundness(const CheckOptions& options);

// Under a uniform cardinality pmf the MAP set must reduce to
// {l : u * sigma(O^l) > 1}; cross-checked against enumeration.
CheckResult check_threshold_reduction(const CheckOptions& options);

// Joint-relabeling invariance of the set density, the decoder and the
// metrics, plus stability of selected labels under score raises.
CheckResult check_invariances(const CheckOptions& options);

// The suite behind `set-predict verify`.
std::vector<CheckResult> run_all_checks(const CheckOptions& options);

}  // namespace setpredict::cli
