#include "setpredict/cli/checks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "setpredict/inference.hpp"
#include "setpredict/loss.hpp"
#include "setpredict/metrics.hpp"
#include "setpredict/network.hpp"
#include "setpredict/oracle.hpp"
#include "setpredict/rng.hpp"
#include "setpredict/set_model.hpp"

namespace setpredict::cli {

namespace {

double rel_err(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

CardinalityStats random_stats(Rng& rng, int num_labels) {
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(num_labels) + 1, 0);
  if (rng.uniform() >= 0.1) {  // keep the degenerate total = 0 case in play
    for (auto& c : counts) c = rng.uniform_int(101);
  }
  return CardinalityStats::from_counts(std::move(counts));
}

DualOutput random_dual(Rng& rng, int num_labels, double logit_range = 6.0) {
  DualOutput out;
  out.label_logits.resize(static_cast<std::size_t>(num_labels));
  for (double& v : out.label_logits) v = rng.uniform(-logit_range, logit_range);
  out.card_preacts.resize(static_cast<std::size_t>(num_labels) + 1);
  for (double& v : out.card_preacts) v = rng.uniform(-3.0, 3.0);
  return out;
}

std::vector<int> random_permutation(Rng& rng, int n) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = n; i > 1; --i) {
    const int j = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(i)));
    std::swap(perm[static_cast<std::size_t>(i - 1)], perm[static_cast<std::size_t>(j)]);
  }
  return perm;
}

LabelSet permute_labels(const LabelSet& labels, const std::vector<int>& perm) {
  std::vector<int> mapped;
  mapped.reserve(labels.indices().size());
  for (int l : labels.indices()) mapped.push_back(perm[static_cast<std::size_t>(l)]);
  return LabelSet(std::move(mapped));
}

std::vector<double> permute_values(const std::vector<double>& values,
                                   const std::vector<int>& perm) {
  std::vector<double> out(values.size());
  for (std::size_t l = 0; l < values.size(); ++l) {
    out[static_cast<std::size_t>(perm[l])] = values[l];
  }
  return out;
}

constexpr double kUGrid[] = {0.5, 1.0, 2.36, 10.0};

}  // namespace

CheckResult check_map_oracle_equivalence(const CheckOptions& options) {
  CheckResult result{.name = "map-oracle-equivalence"};
  Rng rng = Rng(options.seed).split("map-oracle");
  for (int num_labels = 1; num_labels <= 12; ++num_labels) {
    for (int t = 0; t < options.trials; ++t) {
      const DualOutput out = random_dual(rng, num_labels);
      const CardinalityStats stats = random_stats(rng, num_labels);
      for (double u_value : kUGrid) {
        const HyperVolumeUnit u(u_value);
        const MapResult fast = map_set(out, stats, u);
        const MapResult slow = oracle::brute_force_map(out, stats, u);
        const double diff = std::abs(fast.log_score - slow.log_score);
        result.max_error = std::max(result.max_error, diff);
        ++result.trials;
        if (fast.labels != slow.labels || diff > 1e-9) ++result.failures;
      }
    }
  }
  return result;
}

CheckResult check_gradient_end_to_end(const CheckOptions& options) {
  CheckResult result{.name = "gradient-end-to-end"};
  Rng rng = Rng(options.seed).split("gradient");
  const int trials = std::min(options.trials, 1000);
  for (int t = 0; t < trials; ++t) {
    Architecture arch;
    arch.input_dim = 1 + static_cast<int>(rng.uniform_int(10));
    arch.num_labels = 1 + static_cast<int>(rng.uniform_int(6));
    arch.dropout_rate = 0.0;
    const int depth = 1 + static_cast<int>(rng.uniform_int(2));
    for (int i = 0; i < depth; ++i) {
      arch.hidden_widths.push_back(1 + static_cast<int>(rng.uniform_int(16)));
    }

    ModelParams params = init(arch, rng.next_u64());
    // Fresh inits have zero biases; shift everything so the check probes a
    // generic point rather than a symmetric one.
    std::vector<double> flat = params.flatten();
    for (double& v : flat) v += 0.1 * rng.normal();
    params.unflatten(flat);

    std::vector<double> x(static_cast<std::size_t>(arch.input_dim));
    for (double& v : x) v = rng.normal();
    std::vector<int> picked;
    for (int l = 0; l < arch.num_labels; ++l) {
      if (rng.uniform() < 0.4) picked.push_back(l);
    }
    const LabelSet labels(picked);
    const CardinalityStats stats = random_stats(rng, arch.num_labels);
    TrainConfig cfg;
    cfg.gamma = 0.0;
    cfg.bce_mode = t % 2 == 0 ? BceMode::kFull : BceMode::kPositiveOnly;

    Rng unused(0);
    ActivationCache cache;
    const DualOutput out = forward(params, x, ForwardMode::kEval, unused, &cache);
    const DualOutput grad_dual = sample_loss_grad(out, labels, stats, cfg);
    const ParamGrads grads = backward(params, cache, grad_dual);
    // Flatten in parameter order so entries line up with ModelParams::flatten.
    std::vector<double> analytic;
    analytic.reserve(params.parameter_count());
    for (const auto& layer : grads.layers) {
      analytic.insert(analytic.end(), layer.weights.data.begin(), layer.weights.data.end());
      analytic.insert(analytic.end(), layer.bias.begin(), layer.bias.end());
    }
    if (options.inject_gradient_error && !analytic.empty()) {
      analytic[0] += 1e-3;
    }

    ModelParams probe = params;
    const auto scalar_loss = [&](std::span<const double> point) {
      probe.unflatten(point);
      Rng inner(0);
      const DualOutput probe_out = forward(probe, x, ForwardMode::kEval, inner);
      return sample_loss(probe_out, labels, stats, cfg).total;
    };
    const std::vector<double> numeric =
        oracle::finite_diff_grad(scalar_loss, params.flatten(), 1e-5);

    ++result.trials;
    bool ok = true;
    for (std::size_t j = 0; j < analytic.size(); ++j) {
      if (std::max(std::abs(analytic[j]), std::abs(numeric[j])) <= 1e-6) continue;
      const double err = rel_err(analytic[j], numeric[j]);
      result.max_error = std::max(result.max_error, err);
      if (err > 1e-4) ok = false;
    }
    if (!ok) ++result.failures;
  }
  return result;
}

CheckResult check_dc_soundness(const CheckOptions& options) {
  CheckResult result{.name = "dc-soundness"};
  Rng rng = Rng(options.seed).split("dc");
  for (int t = 0; t < options.trials; ++t) {
    const int num_labels = 1 + static_cast<int>(rng.uniform_int(12));
    std::vector<double> alpha_values(static_cast<std::size_t>(num_labels) + 1);
    for (double& a : alpha_values) a = rng.uniform(0.05, 5.0);
    const AlphaVector alpha(alpha_values);
    const CardinalityStats stats = random_stats(rng, num_labels);

    ++result.trials;
    bool ok = true;

    const std::vector<double> pmf = dc_pmf(alpha, stats);
    double sum = 0.0;
    for (double p : pmf) {
      sum += p;
      if (!(p > 0.0)) ok = false;
    }
    const double norm_err = std::abs(sum - 1.0);
    result.max_error = std::max(result.max_error, norm_err);
    if (norm_err > 1e-12) ok = false;

    const int m = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(num_labels) + 1));
    const std::vector<double> analytic = dc_grad_alpha(m, alpha, stats);
    const auto log_pmf_of = [&](std::span<const double> point) {
      return dc_log_pmf(m, AlphaVector(std::vector<double>(point.begin(), point.end())), stats);
    };
    const std::vector<double> numeric =
        oracle::finite_diff_grad(log_pmf_of, alpha_values, 1e-5);
    for (std::size_t j = 0; j < analytic.size(); ++j) {
      if (std::max(std::abs(analytic[j]), std::abs(numeric[j])) <= 1e-9) continue;
      const double err = rel_err(analytic[j], numeric[j]);
      if (err > 1e-6) ok = false;
    }
    if (!ok) ++result.failures;
  }
  return result;
}

CheckResult check_threshold_reduction(const CheckOptions& options) {
  CheckResult result{.name = "threshold-reduction"};
  Rng rng = Rng(options.seed).split("threshold");
  for (int t = 0; t < options.trials; ++t) {
    const int num_labels = 1 + static_cast<int>(rng.uniform_int(12));
    DualOutput out = random_dual(rng, num_labels);
    // Equal pre-activations and equal counts force a uniform cardinality pmf.
    const double preact = rng.uniform(-2.0, 2.0);
    std::fill(out.card_preacts.begin(), out.card_preacts.end(), preact);
    const std::uint64_t per_bin = rng.uniform_int(51);
    const CardinalityStats stats = CardinalityStats::from_counts(
        std::vector<std::uint64_t>(static_cast<std::size_t>(num_labels) + 1, per_bin));
    const double u_value =
        t % 5 == 4 ? rng.uniform(0.3, 5.0) : kUGrid[static_cast<std::size_t>(t % 5) % 4];
    const HyperVolumeUnit u(u_value);

    std::vector<int> expected;
    for (int l = 0; l < num_labels; ++l) {
      if (u_value * sigmoid(out.label_logits[static_cast<std::size_t>(l)]) > 1.0) {
        expected.push_back(l);
      }
    }
    const LabelSet expected_set(expected);

    ++result.trials;
    if (map_set(out, stats, u).labels != expected_set ||
        oracle::brute_force_map(out, stats, u).labels != expected_set) {
      ++result.failures;
    }
  }
  return result;
}

CheckResult check_invariances(const CheckOptions& options) {
  CheckResult result{.name = "invariance-suite"};
  Rng rng = Rng(options.seed).split("invariance");
  const int trials = std::max(options.trials, 500);
  for (int t = 0; t < trials; ++t) {
    const int num_labels = 2 + static_cast<int>(rng.uniform_int(9));
    const DualOutput out = random_dual(rng, num_labels);
    const CardinalityStats stats = random_stats(rng, num_labels);
    const AlphaVector alpha = alpha_link(out.card_preacts);
    const HyperVolumeUnit u(rng.uniform(0.3, 5.0));
    const std::vector<int> perm = random_permutation(rng, num_labels);

    ++result.trials;
    bool ok = true;

    // Joint relabeling leaves the set density unchanged (up to summation
    // order in the label terms).
    std::vector<int> members;
    for (int l = 0; l < num_labels; ++l) {
      if (rng.uniform() < 0.4) members.push_back(l);
    }
    const LabelSet labels(members);
    const double base = set_log_density(labels, out.label_logits, alpha, stats, u);
    const std::vector<double> permuted_logits = permute_values(out.label_logits, perm);
    const double mapped = set_log_density(permute_labels(labels, perm), permuted_logits,
                                          alpha, stats, u);
    const double density_err = std::abs(base - mapped);
    result.max_error = std::max(result.max_error, density_err);
    if (density_err > 1e-12) ok = false;

    // The decoder is equivariant: decoding permuted logits permutes the set.
    DualOutput permuted_out = out;
    permuted_out.label_logits = permuted_logits;
    if (map_set(permuted_out, stats, u).labels !=
        permute_labels(map_set(out, stats, u).labels, perm)) {
      ok = false;
    }

    // Metrics are invariant under class relabeling and sample reordering.
    const std::size_t n = 5 + rng.uniform_int(20);
    std::vector<LabelSet> preds, gts;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<int> p_members, g_members;
      for (int l = 0; l < num_labels; ++l) {
        if (rng.uniform() < 0.3) p_members.push_back(l);
        if (rng.uniform() < 0.3) g_members.push_back(l);
      }
      preds.emplace_back(std::move(p_members));
      gts.emplace_back(std::move(g_members));
    }
    const EvalReport base_report = evaluate(preds, gts, num_labels);

    std::vector<LabelSet> relabeled_preds, relabeled_gts;
    for (std::size_t i = 0; i < n; ++i) {
      relabeled_preds.push_back(permute_labels(preds[i], perm));
      relabeled_gts.push_back(permute_labels(gts[i], perm));
    }
    const EvalReport relabeled = evaluate(relabeled_preds, relabeled_gts, num_labels);

    std::vector<LabelSet> shuffled_preds = preds, shuffled_gts = gts;
    const std::vector<int> sample_perm = random_permutation(rng, static_cast<int>(n));
    for (std::size_t i = 0; i < n; ++i) {
      shuffled_preds[static_cast<std::size_t>(sample_perm[i])] = preds[i];
      shuffled_gts[static_cast<std::size_t>(sample_perm[i])] = gts[i];
    }
    const EvalReport shuffled = evaluate(shuffled_preds, shuffled_gts, num_labels);

    const auto report_close = [&](const EvalReport& a, const EvalReport& b) {
      const double scores[][2] = {
          {a.c_p, b.c_p}, {a.c_r, b.c_r}, {a.c_f1, b.c_f1},
          {a.o_p, b.o_p}, {a.o_r, b.o_r}, {a.o_f1, b.o_f1},
          {a.i_p, b.i_p}, {a.i_r, b.i_r}, {a.i_f1, b.i_f1},
          {a.cardinality_mae, b.cardinality_mae}, {a.cardinality_sd, b.cardinality_sd}};
      for (const auto& pair : scores) {
        const double err = std::abs(pair[0] - pair[1]);
        result.max_error = std::max(result.max_error, err);
        if (err > 1e-12) return false;
      }
      return true;
    };
    if (!report_close(base_report, relabeled) || !report_close(base_report, shuffled)) {
      ok = false;
    }

    if (!ok) ++result.failures;
  }

  // Score-raising stability gets its own trial quota: raising a selected
  // label's logit must keep it selected. Instances whose MAP set is empty
  // carry no selected label and are redrawn.
  int raise_events = 0;
  int attempts = 0;
  while (raise_events < trials && attempts < 50 * trials) {
    ++attempts;
    const int num_labels = 2 + static_cast<int>(rng.uniform_int(9));
    const DualOutput out = random_dual(rng, num_labels);
    const CardinalityStats stats = random_stats(rng, num_labels);
    const HyperVolumeUnit u(rng.uniform(0.3, 5.0));
    const MapResult base_map = map_set(out, stats, u);
    if (base_map.labels.empty()) continue;

    ++raise_events;
    ++result.trials;
    const auto& selected = base_map.labels.indices();
    const int raised =
        selected[rng.uniform_int(static_cast<std::uint64_t>(selected.size()))];
    DualOutput raised_out = out;
    raised_out.label_logits[static_cast<std::size_t>(raised)] += rng.uniform(0.1, 5.0);
    const MapResult raised_map = map_set(raised_out, stats, u);
    if (!raised_map.labels.contains(raised) ||
        raised_map.labels != oracle::brute_force_map(raised_out, stats, u).labels) {
      ++result.failures;
    }
  }
  if (raise_events < trials) ++result.failures;  // could not reach the quota
  return result;
}

std::vector<CheckResult> run_all_checks(const CheckOptions& options) {
  return {check_map_oracle_equivalence(options), check_gradient_end_to_end(options),
          check_dc_soundness(options), check_threshold_reduction(options),
          check_invariances(options)};
}

}  // namespace setpredict::cli
