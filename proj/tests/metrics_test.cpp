// Tests for the ranking metrics. Frozen values come from evaluating the
// DCG formula by hand; the random-permutation baseline checks position
// accuracy against its analytic expectation.

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "pufferkit/metrics.hpp"
#include "pufferkit/numeric.hpp"

namespace pufferkit {
namespace {

using Ids = std::vector<std::size_t>;
using Counts = std::vector<std::int64_t>;

TEST(IdealRankingTest, SortsByCountThenId) {
  EXPECT_EQ(ideal_ranking(Counts{3, 7, 7, 1}), (Ids{1, 2, 0, 3}));
  EXPECT_EQ(ideal_ranking(Counts{0, 0, 0}), (Ids{0, 1, 2}));
  EXPECT_EQ(ideal_ranking(Counts{5}), (Ids{0}));
  EXPECT_THROW(ideal_ranking(Counts{}), validation_error);
  EXPECT_THROW(ideal_ranking(Counts{1, -2}), validation_error);
}

TEST(AccuracyTest, ExactPositionMatchOnly) {
  const Counts counts{10, 5, 1};
  const auto ideal = ideal_ranking(counts);
  ASSERT_EQ(ideal, (Ids{0, 1, 2}));

  for (std::size_t k = 1; k <= 3; ++k) EXPECT_EQ(acc_at_k(ideal, ideal, k), 1);

  const Ids swapped{1, 0, 2};
  EXPECT_EQ(acc_at_k(swapped, ideal, 1), 0);
  EXPECT_EQ(acc_at_k(swapped, ideal, 2), 0);
  EXPECT_EQ(acc_at_k(swapped, ideal, 3), 1);

  EXPECT_THROW(acc_at_k(swapped, ideal, 0), validation_error);
  EXPECT_THROW(acc_at_k(swapped, ideal, 4), validation_error);
}

TEST(AccuracyTest, RandomPermutationMatchesUniformBaseline) {
  // 78 categories with distinct counts: a uniformly random prediction
  // puts the right category first with probability 1/78
  const std::size_t n = 78;
  Counts counts(n);
  for (std::size_t i = 0; i < n; ++i) counts[i] = static_cast<std::int64_t>(n - i);
  const auto ideal = ideal_ranking(counts);

  auto rng = trial_rng(41, 0);
  const int repeats = 20000;
  int hits = 0;
  Ids perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (int r = 0; r < repeats; ++r) {
    std::shuffle(perm.begin(), perm.end(), rng);
    hits += acc_at_k(perm, ideal, 1);
  }
  const double p = 1.0 / static_cast<double>(n);
  const double sigma = std::sqrt(p * (1.0 - p) / repeats);
  EXPECT_NEAR(static_cast<double>(hits) / repeats, p, 3.0 * sigma);
}

TEST(HitRateTest, CountsOverlapIgnoringOrder) {
  EXPECT_DOUBLE_EQ(hit_rate_at_k({2, 0, 1}, {0, 1, 2}), 1.0);
  EXPECT_DOUBLE_EQ(hit_rate_at_k({3, 4, 5}, {0, 1, 2}), 0.0);
  EXPECT_DOUBLE_EQ(hit_rate_at_k({0, 1, 5}, {0, 1, 2}), 2.0 / 3.0);
  EXPECT_THROW(hit_rate_at_k({0, 1}, {0, 1, 2}), validation_error);
  EXPECT_THROW(hit_rate_at_k({}, {}), validation_error);
}

TEST(NdcgTest, MatchesHandComputedValue) {
  const Counts counts{10, 5, 1};
  // predicted counts (5, 10, 1): DCG = 5 + 10/log2(3) + 1/2
  const double dcg = 5.0 + 10.0 / std::log2(3.0) + 0.5;
  const double idcg = 10.0 + 5.0 / std::log2(3.0) + 0.5;
  EXPECT_NEAR(dcg, 11.8093, 1e-4);
  EXPECT_NEAR(idcg, 13.6546, 1e-4);
  EXPECT_NEAR(ndcg_at_k({1, 0, 2}, counts, 3), dcg / idcg, 1e-12);
  EXPECT_NEAR(ndcg_at_k({1, 0, 2}, counts, 3), 0.8649, 1e-4);

  EXPECT_DOUBLE_EQ(ndcg_at_k({0, 1, 2}, counts, 3), 1.0);
  EXPECT_LT(ndcg_at_k({2, 1, 0}, counts, 3), 1.0);

  // vacuous instance: nothing to rank, scored as perfect
  EXPECT_DOUBLE_EQ(ndcg_at_k({1, 0}, Counts{0, 0, 0}, 2), 1.0);

  EXPECT_THROW(ndcg_at_k({0, 0, 1}, counts, 3), validation_error);
  EXPECT_THROW(ndcg_at_k({0, 1, 3}, counts, 3), validation_error);
  EXPECT_THROW(ndcg_at_k({0, 1, 2}, counts, 4), validation_error);
}

TEST(NdcgTest, OneExactlyWhenCountSequenceIsIdeal) {
  auto rng = trial_rng(42, 7);
  std::uniform_int_distribution<int> count_dist(0, 3);
  std::uniform_int_distribution<std::size_t> size_dist(2, 6);
  for (int inst = 0; inst < 500; ++inst) {
    const std::size_t n = size_dist(rng);
    Counts counts(n);
    for (auto& c : counts) c = count_dist(rng);
    Ids perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    const std::size_t k = 1 + size_dist(rng) % n;
    const Ids predicted(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(k));

    const double v = ndcg_at_k(predicted, counts, k);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0 + 1e-12);

    const auto ideal = ideal_ranking(counts);
    bool same_counts = true;
    for (std::size_t i = 0; i < k; ++i)
      same_counts = same_counts && counts[predicted[i]] == counts[ideal[i]];
    double idcg = 0.0;
    for (std::size_t i = 1; i <= k; ++i)
      idcg += static_cast<double>(counts[ideal[i - 1]]) / std::log2(static_cast<double>(i) + 1.0);
    if (idcg == 0.0) continue;  // vacuous, pinned to 1 by definition
    if (same_counts)
      EXPECT_NEAR(v, 1.0, 1e-12);
    else
      EXPECT_LT(v, 1.0 - 1e-12);
  }
}

TEST(L1ErrorTest, ComparesCountsPositionwise) {
  const Counts counts{10, 5, 1};
  EXPECT_EQ(l1_count_error({0, 1, 2}, counts, 3), 0);
  EXPECT_EQ(l1_count_error({1, 0, 2}, counts, 3), 10);
  EXPECT_EQ(l1_count_error({1, 0, 2}, counts, 1), 5);

  // swapping equal counts is free
  const Counts tied{5, 5, 2};
  EXPECT_EQ(l1_count_error({1, 0, 2}, tied, 3), 0);

  EXPECT_THROW(l1_count_error({0, 1}, counts, 3), validation_error);
  EXPECT_THROW(l1_count_error({0, 3, 1}, counts, 3), validation_error);
}

TEST(ScoresTest, ContainmentDominatesPositionAccuracy) {
  auto rng = trial_rng(43, 0);
  std::uniform_int_distribution<int> count_dist(0, 5);
  for (int inst = 0; inst < 300; ++inst) {
    const std::size_t n = 3 + inst % 5;
    RankedResult r;
    r.true_counts.resize(n);
    for (auto& c : r.true_counts) c = count_dist(rng);
    Ids perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    r.k = 1 + static_cast<std::size_t>(count_dist(rng)) % n;
    r.predicted.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(r.k));

    const auto s = score_ranked_result(r);
    ASSERT_EQ(s.acc.size(), r.k);
    const double acc_rate =
        static_cast<double>(std::accumulate(s.acc.begin(), s.acc.end(), 0)) /
        static_cast<double>(r.k);
    EXPECT_GE(s.hit_rate + 1e-12, acc_rate);
    if (std::all_of(s.acc.begin(), s.acc.end(), [](int a) { return a == 1; })) {
      EXPECT_EQ(s.l1, 0);
      EXPECT_DOUBLE_EQ(s.hit_rate, 1.0);
    }
    EXPECT_GE(s.l1, 0);
  }
}

TEST(ScoresTest, ValidationRejectsMalformedInstances) {
  RankedResult r;
  r.true_counts = {4, 3, 2};
  r.k = 2;
  r.predicted = {0, 1};
  EXPECT_NO_THROW(validate_ranked_result(r));

  auto bad = r;
  bad.predicted = {0, 0};
  EXPECT_THROW(validate_ranked_result(bad), validation_error);
  bad = r;
  bad.predicted = {0, 7};
  EXPECT_THROW(validate_ranked_result(bad), validation_error);
  bad = r;
  bad.k = 4;
  bad.predicted = {0, 1, 2, 0};
  EXPECT_THROW(validate_ranked_result(bad), validation_error);
  bad = r;
  bad.k = 0;
  bad.predicted = {};
  EXPECT_THROW(validate_ranked_result(bad), validation_error);
  bad = r;
  bad.true_counts = {4, -1, 2};
  EXPECT_THROW(validate_ranked_result(bad), validation_error);
  bad = r;
  bad.predicted = {0};
  EXPECT_THROW(validate_ranked_result(bad), validation_error);
}

}  // namespace
}  // namespace pufferkit
