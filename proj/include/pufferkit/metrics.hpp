// Copyright 2026 The Pufferkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Ranking-quality and count-error metrics for top-K query evaluation.
// The ground-truth ranking breaks count ties by ascending category id,
// and the same tie-break feeds position accuracy, the NDCG ideal, and
// the L1 count error, so every metric is deterministic.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <vector>

#include "pufferkit/common.hpp"

namespace pufferkit {

// One scored instance: an ordered top-k prediction against the true
// per-category counts.
struct RankedResult {
  std::vector<std::size_t> predicted;  // ordered category ids, length k
  std::vector<std::int64_t> true_counts;  // indexed by category id
  std::size_t k = 0;
};

namespace detail {

inline void require_counts(const std::vector<std::int64_t>& counts) {
  if (counts.empty()) throw validation_error("metrics: need at least one category count");
  for (std::int64_t c : counts)
    if (c < 0) throw validation_error("metrics: counts must be nonnegative");
}

inline void require_distinct_ids(const std::vector<std::size_t>& ids, std::size_t categories) {
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] >= categories) throw validation_error("metrics: category id out of range");
    for (std::size_t j = i + 1; j < ids.size(); ++j)
      if (ids[i] == ids[j]) throw validation_error("metrics: category ids must be distinct");
  }
}

}  // namespace detail

inline void validate_ranked_result(const RankedResult& r) {
  detail::require_counts(r.true_counts);
  if (r.k < 1 || r.k > r.true_counts.size())
    throw validation_error("metrics: k must be in [1, number of categories]");
  if (r.predicted.size() != r.k)
    throw validation_error("metrics: prediction must list exactly k categories");
  detail::require_distinct_ids(r.predicted, r.true_counts.size());
}

// Category ids ordered by count descending, id ascending on ties.
inline std::vector<std::size_t> ideal_ranking(const std::vector<std::int64_t>& counts) {
  detail::require_counts(counts);
  std::vector<std::size_t> ids(counts.size());
  std::iota(ids.begin(), ids.end(), std::size_t{0});
  std::sort(ids.begin(), ids.end(), [&](std::size_t a, std::size_t b) {
    return counts[a] != counts[b] ? counts[a] > counts[b] : a < b;
  });
  return ids;
}

// 1 iff the k-th prediction names exactly the k-th true category.
inline int acc_at_k(const std::vector<std::size_t>& predicted,
                    const std::vector<std::size_t>& true_ranking, std::size_t k) {
  if (k < 1 || k > predicted.size() || k > true_ranking.size())
    throw validation_error("acc_at_k: k must be within both rankings");
  return predicted[k - 1] == true_ranking[k - 1] ? 1 : 0;
}

// Unordered overlap with the true top set, as a fraction of its size.
inline double hit_rate_at_k(const std::vector<std::size_t>& predicted,
                            const std::vector<std::size_t>& true_topk) {
  if (true_topk.empty()) throw validation_error("hit_rate_at_k: true top set must be nonempty");
  if (predicted.size() != true_topk.size())
    throw validation_error("hit_rate_at_k: prediction and true top set sizes differ");
  std::size_t hits = 0;
  for (std::size_t id : predicted)
    if (std::find(true_topk.begin(), true_topk.end(), id) != true_topk.end()) ++hits;
  return static_cast<double>(hits) / static_cast<double>(true_topk.size());
}

// DCG over the first k predictions with the true count as relevance,
// normalized by the DCG of the ideal ranking. An all-zero ideal prefix
// makes the instance vacuous and scores 1.
inline double ndcg_at_k(const std::vector<std::size_t>& predicted,
                        const std::vector<std::int64_t>& true_counts, std::size_t k) {
  detail::require_counts(true_counts);
  if (k < 1 || k > predicted.size() || k > true_counts.size())
    throw validation_error("ndcg_at_k: k must be within the prediction and the categories");
  detail::require_distinct_ids(predicted, true_counts.size());
  const auto ideal = ideal_ranking(true_counts);
  double dcg = 0.0, idcg = 0.0;
  for (std::size_t i = 1; i <= k; ++i) {
    const double discount = std::log2(static_cast<double>(i) + 1.0);
    dcg += static_cast<double>(true_counts[predicted[i - 1]]) / discount;
    idcg += static_cast<double>(true_counts[ideal[i - 1]]) / discount;
  }
  return idcg == 0.0 ? 1.0 : dcg / idcg;
}

// Sum over positions of |predicted count - true count|. Swapping two
// equal-count categories costs nothing.
inline std::int64_t l1_count_error(const std::vector<std::size_t>& predicted,
                                   const std::vector<std::int64_t>& true_counts, std::size_t k) {
  detail::require_counts(true_counts);
  if (k < 1 || k > predicted.size() || k > true_counts.size())
    throw validation_error("l1_count_error: k must be within the prediction and the categories");
  detail::require_distinct_ids(predicted, true_counts.size());
  const auto ideal = ideal_ranking(true_counts);
  std::int64_t total = 0;
  for (std::size_t i = 0; i < k; ++i)
    total += std::abs(true_counts[predicted[i]] - true_counts[ideal[i]]);
  return total;
}

// All metrics of one instance in one pass, sharing the tie-broken ideal.
struct RankingScores {
  std::vector<int> acc;  // position-exact indicator per k = 1..K
  double hit_rate = 0.0;
  double ndcg = 0.0;
  std::int64_t l1 = 0;
};

inline RankingScores score_ranked_result(const RankedResult& r) {
  validate_ranked_result(r);
  const auto ideal = ideal_ranking(r.true_counts);
  const std::vector<std::size_t> true_topk(ideal.begin(),
                                           ideal.begin() + static_cast<std::ptrdiff_t>(r.k));
  RankingScores s;
  for (std::size_t k = 1; k <= r.k; ++k)
    s.acc.push_back(acc_at_k(r.predicted, ideal, k));
  s.hit_rate = hit_rate_at_k(r.predicted, true_topk);
  s.ndcg = ndcg_at_k(r.predicted, r.true_counts, r.k);
  s.l1 = l1_count_error(r.predicted, r.true_counts, r.k);
  return s;
}

}  // namespace pufferkit
