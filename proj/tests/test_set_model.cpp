#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "setpredict/oracle.hpp"
#include "setpredict/rng.hpp"
#include "setpredict/set_model.hpp"

using namespace setpredict;

namespace {

CardinalityStats stats_of(std::vector<std::uint64_t> counts) {
  return CardinalityStats::from_counts(std::move(counts));
}

// Logit whose sigmoid is p.
double logit(double p) { return std::log(p / (1.0 - p)); }

}  // namespace

TEST_CASE("LabelSet validates and sorts") {
  const LabelSet set(std::vector<int>{4, 1, 2});
  CHECK(set.indices() == std::vector<int>{1, 2, 4});
  CHECK(set.cardinality() == 3);
  CHECK(set.contains(2));
  CHECK_FALSE(set.contains(3));
  CHECK(set.max_index() == 4);
  CHECK_THROWS_AS(LabelSet(std::vector<int>{1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(LabelSet(std::vector<int>{-1}), std::invalid_argument);
  CHECK(LabelSet{}.max_index() == -1);
}

TEST_CASE("CardinalityStats checks its total") {
  CHECK_THROWS_AS(CardinalityStats({1, 2, 3}, 5), std::invalid_argument);
  const auto stats = stats_of({1, 2, 3});
  CHECK(stats.total() == 6);
  CHECK(stats.max_cardinality() == 2);
  // Degenerate empty histogram is legal.
  CHECK(stats_of({0, 0}).total() == 0);
}

TEST_CASE("AlphaVector and HyperVolumeUnit reject invalid values") {
  CHECK_THROWS_AS(AlphaVector({1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(AlphaVector({1.0, -2.0}), std::invalid_argument);
  CHECK_THROWS_AS(AlphaVector({std::nan("")}), std::invalid_argument);
  CHECK_THROWS_AS(HyperVolumeUnit(0.0), std::invalid_argument);
  CHECK_THROWS_AS(HyperVolumeUnit(-1.0), std::invalid_argument);
}

TEST_CASE("dc_log_pmf matches direct arithmetic") {
  SUBCASE("full symmetry forces the uniform pmf") {
    const AlphaVector alpha({1.0, 1.0, 1.0});
    const auto stats = stats_of({1, 1, 1});
    CHECK(dc_log_pmf(1, alpha, stats) ==
          doctest::Approx(std::log(1.0 / 3.0)).epsilon(1e-14));
  }
  SUBCASE("asymmetric instance") {
    const AlphaVector alpha({0.5, 2.0, 1.5});
    const auto stats = stats_of({10, 30, 60});
    CHECK(dc_log_pmf(1, alpha, stats) ==
          doctest::Approx(std::log(32.0 / 104.0)).epsilon(1e-14));
    CHECK(dc_log_pmf(1, alpha, stats) == doctest::Approx(-1.178655).epsilon(1e-6));
  }
  SUBCASE("mass concentrated at zero approaches log 1 from below") {
    const double eps = 1e-6;
    const AlphaVector alpha({eps, eps, eps});
    const auto stats = stats_of({100, 0, 0});
    const double value = dc_log_pmf(0, alpha, stats);
    CHECK(value == doctest::Approx(std::log((eps + 100.0) / (3 * eps + 100.0))).epsilon(1e-12));
    CHECK(value < 0.0);
    CHECK(value > -1e-7);
  }
  SUBCASE("total = 0 reduces to alpha_m / sum alpha") {
    const AlphaVector alpha({1.0, 3.0});
    CHECK(dc_log_pmf(1, alpha, stats_of({0, 0})) ==
          doctest::Approx(std::log(0.75)).epsilon(1e-14));
  }
  SUBCASE("errors") {
    const AlphaVector alpha({1.0, 1.0});
    CHECK_THROWS_AS(dc_log_pmf(2, alpha, stats_of({1, 1})), std::domain_error);
    CHECK_THROWS_AS(dc_log_pmf(-1, alpha, stats_of({1, 1})), std::domain_error);
    CHECK_THROWS_AS(dc_log_pmf(0, alpha, stats_of({1, 1, 1})), std::invalid_argument);
  }
}

TEST_CASE("dc_pmf values, normalisation and consistency with the log form") {
  const AlphaVector alpha({0.5, 2.0, 1.5});
  const auto stats = stats_of({10, 30, 60});
  const auto pmf = dc_pmf(alpha, stats);
  CHECK(pmf[0] == doctest::Approx(10.5 / 104.0).epsilon(1e-14));
  CHECK(pmf[1] == doctest::Approx(32.0 / 104.0).epsilon(1e-14));
  CHECK(pmf[2] == doctest::Approx(61.5 / 104.0).epsilon(1e-14));

  Rng rng(123);
  for (int trial = 0; trial < 1000; ++trial) {
    const int num_labels = 1 + static_cast<int>(rng.uniform_int(12));
    std::vector<double> values(static_cast<std::size_t>(num_labels) + 1);
    for (double& a : values) a = rng.uniform(0.01, 8.0);
    std::vector<std::uint64_t> counts(values.size());
    for (auto& c : counts) c = rng.uniform_int(200);
    const AlphaVector a(values);
    const auto s = CardinalityStats::from_counts(counts);
    const auto p = dc_pmf(a, s);
    double sum = 0.0;
    for (std::size_t m = 0; m < p.size(); ++m) {
      CHECK(p[m] > 0.0);
      CHECK(std::exp(dc_log_pmf(static_cast<int>(m), a, s)) ==
            doctest::Approx(p[m]).epsilon(1e-12));
      sum += p[m];
    }
    CHECK(std::abs(sum - 1.0) <= 1e-12);
  }
}

TEST_CASE("dc_grad_alpha matches hand arithmetic and finite differences") {
  const AlphaVector alpha({0.5, 2.0, 1.5});
  const auto stats = stats_of({10, 30, 60});
  const auto grad = dc_grad_alpha(1, alpha, stats);
  CHECK(grad[0] == doctest::Approx(-1.0 / 104.0).epsilon(1e-14));
  CHECK(grad[1] == doctest::Approx(1.0 / 32.0 - 1.0 / 104.0).epsilon(1e-14));
  CHECK(grad[2] == doctest::Approx(-1.0 / 104.0).epsilon(1e-14));

  SUBCASE("entries sum to the algebraic identity") {
    Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
      const int num_labels = 1 + static_cast<int>(rng.uniform_int(10));
      std::vector<double> values(static_cast<std::size_t>(num_labels) + 1);
      for (double& a : values) a = rng.uniform(0.05, 5.0);
      std::vector<std::uint64_t> counts(values.size());
      for (auto& c : counts) c = rng.uniform_int(100);
      const AlphaVector a(values);
      const auto s = CardinalityStats::from_counts(counts);
      const int m = static_cast<int>(rng.uniform_int(values.size()));
      const auto g = dc_grad_alpha(m, a, s);
      double sum = 0.0;
      for (double v : g) sum += v;
      const double expected =
          1.0 / (values[static_cast<std::size_t>(m)] + static_cast<double>(counts[static_cast<std::size_t>(m)])) -
          static_cast<double>(num_labels + 1) / (a.sum() + static_cast<double>(s.total()));
      CHECK(sum == doctest::Approx(expected).epsilon(1e-10));
    }
  }

  SUBCASE("uniform instance has equal off-m entries") {
    const AlphaVector a({2.0, 2.0, 2.0, 2.0});
    const auto s = stats_of({5, 5, 5, 5});
    const auto g = dc_grad_alpha(2, a, s);
    CHECK(g[0] == g[1]);
    CHECK(g[1] == g[3]);
  }

  SUBCASE("central finite differences agree") {
    Rng rng(17);
    for (int trial = 0; trial < 100; ++trial) {
      const int num_labels = 1 + static_cast<int>(rng.uniform_int(8));
      std::vector<double> values(static_cast<std::size_t>(num_labels) + 1);
      for (double& a : values) a = rng.uniform(0.05, 5.0);
      std::vector<std::uint64_t> counts(values.size());
      for (auto& c : counts) c = rng.uniform_int(100);
      const auto s = CardinalityStats::from_counts(counts);
      const int m = static_cast<int>(rng.uniform_int(values.size()));
      const auto analytic = dc_grad_alpha(m, AlphaVector(values), s);
      const auto numeric = oracle::finite_diff_grad(
          [&](std::span<const double> point) {
            return dc_log_pmf(m, AlphaVector({point.begin(), point.end()}), s);
          },
          values, 1e-5);
      for (std::size_t j = 0; j < analytic.size(); ++j) {
        if (std::abs(analytic[j]) <= 1e-9) continue;
        CHECK(std::abs(analytic[j] - numeric[j]) / std::abs(analytic[j]) <= 1e-6);
      }
    }
  }
}

TEST_CASE("set_log_density composes the three terms") {
  // dc pmf (0.1, 0.2, 0.5, 0.2) via alpha = (1,2,5,2) and an empty histogram.
  const AlphaVector alpha({1.0, 2.0, 5.0, 2.0});
  const auto stats = stats_of({0, 0, 0, 0});
  const std::vector<double> logits = {logit(0.9), logit(0.6), logit(0.2)};
  const HyperVolumeUnit unit(1.0);

  SUBCASE("empty set is just the cardinality term") {
    CHECK(set_log_density(LabelSet{}, logits, alpha, stats, unit) ==
          dc_log_pmf(0, alpha, stats));
  }
  SUBCASE("two-label example") {
    const double value =
        set_log_density(LabelSet({0, 1}), logits, alpha, stats, unit);
    CHECK(value == doctest::Approx(std::log(0.5) + std::log(0.9) + std::log(0.6))
                       .epsilon(1e-12));
    CHECK(value == doctest::Approx(-1.30933).epsilon(1e-5));
  }
  SUBCASE("joint relabeling leaves the value unchanged") {
    const std::vector<double> permuted = {logits[2], logits[0], logits[1]};
    // labels {0,1} relabeled by 0->1, 1->2, 2->0.
    CHECK(set_log_density(LabelSet({1, 2}), permuted, alpha, stats, unit) ==
          doctest::Approx(set_log_density(LabelSet({0, 1}), logits, alpha, stats, unit))
              .epsilon(1e-14));
  }
  SUBCASE("raising u helps non-empty sets only") {
    Rng rng(31);
    for (int trial = 0; trial < 100; ++trial) {
      const double lo = rng.uniform(0.2, 2.0);
      const double hi = lo * rng.uniform(1.1, 4.0);
      const double empty_lo =
          set_log_density(LabelSet{}, logits, alpha, stats, HyperVolumeUnit(lo));
      const double empty_hi =
          set_log_density(LabelSet{}, logits, alpha, stats, HyperVolumeUnit(hi));
      CHECK(empty_lo == empty_hi);
      const double one_lo =
          set_log_density(LabelSet({1}), logits, alpha, stats, HyperVolumeUnit(lo));
      const double one_hi =
          set_log_density(LabelSet({1}), logits, alpha, stats, HyperVolumeUnit(hi));
      CHECK(one_hi > one_lo);
    }
  }
  SUBCASE("dimension mismatches are rejected") {
    CHECK_THROWS_AS(set_log_density(LabelSet({3}), logits, alpha, stats, unit),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        set_log_density(LabelSet{}, std::vector<double>{0.0}, alpha, stats, unit),
        std::invalid_argument);
  }
}

TEST_CASE("stable log-sigmoid and softplus") {
  CHECK(log_sigmoid(0.0) == doctest::Approx(-std::log(2.0)).epsilon(1e-15));
  CHECK(log_sigmoid(-745.0) == doctest::Approx(-745.0).epsilon(1e-12));
  CHECK(log_sigmoid(40.0) < 0.0);
  CHECK(std::isfinite(log_sigmoid(-5000.0)));
  CHECK(softplus(0.0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(softplus(-745.0) > 0.0);
  CHECK(softplus(50.0) == doctest::Approx(50.0).epsilon(1e-12));
}
