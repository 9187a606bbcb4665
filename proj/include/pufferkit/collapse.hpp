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

// Three mechanisms whose single runs leak nothing about the secret yet
// whose repeated runs reveal it after about three draws. Each comes with
// its Bayesian attack, exact single-run and two-run likelihood matrices
// built by enumeration, and a Monte-Carlo estimator for the expected
// number of runs until the attack reaches a verdict.

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pufferkit/common.hpp"
#include "pufferkit/linalg.hpp"
#include "pufferkit/nfc.hpp"
#include "pufferkit/numeric.hpp"

namespace pufferkit {

enum class CollapseKind { kExample1, kExample2, kExample3 };

// One scenario struct for all three demonstrations; unused fields stay
// empty. Example 1: an explicit prior over tagged datasets. Example 2: a
// bit-vector length. Example 3: additionally a marked subset per side and
// the declared bounds on the marked-set conditionals.
struct CollapseScenario {
  CollapseKind kind = CollapseKind::kExample1;
  std::uint64_t seed = 0;

  // examples 1 and 3
  std::vector<std::string> dataset_ids;
  std::vector<bool> sigma1_side;  // true: secret sigma1 holds, else sigma2
  Vec prior;

  // example 2
  std::size_t bit_count = 0;

  // example 3
  std::vector<bool> marked;  // member of the marked subset of its own side
  double l_t = 0.0, u_t = 0.0, l_f = 0.0, u_f = 0.0;
};

inline CollapseScenario default_example1_scenario() {
  CollapseScenario sc;
  sc.kind = CollapseKind::kExample1;
  sc.dataset_ids = {"A1", "A2", "B1", "B2"};
  sc.sigma1_side = {true, true, false, false};
  sc.prior = {0.25, 0.25, 0.25, 0.25};
  return sc;
}

inline CollapseScenario default_example2_scenario(std::size_t bit_count = 3) {
  CollapseScenario sc;
  sc.kind = CollapseKind::kExample2;
  sc.bit_count = bit_count;
  return sc;
}

inline CollapseScenario default_example3_scenario() {
  CollapseScenario sc;
  sc.kind = CollapseKind::kExample3;
  sc.dataset_ids = {"T1", "T2", "T3", "F1", "F2", "F3"};
  sc.sigma1_side = {true, true, true, false, false, false};
  sc.prior = Vec(6, 1.0 / 6.0);
  sc.marked = {true, false, false, true, false, false};
  sc.l_t = 0.2;
  sc.u_t = 0.5;
  sc.l_f = 0.2;
  sc.u_f = 0.5;
  return sc;
}

namespace detail {

// Prior mass and per-dataset conditional of one side.
inline double side_mass(const CollapseScenario& sc, bool sigma1) {
  double mass = 0.0;
  for (std::size_t d = 0; d < sc.prior.size(); ++d)
    if (sc.sigma1_side[d] == sigma1) mass += sc.prior[d];
  return mass;
}

inline std::size_t positive_count(const CollapseScenario& sc, bool sigma1) {
  std::size_t n = 0;
  for (std::size_t d = 0; d < sc.prior.size(); ++d)
    if (sc.sigma1_side[d] == sigma1 && sc.prior[d] > 0.0) ++n;
  return n;
}

inline void validate_explicit_prior(const CollapseScenario& sc) {
  const std::size_t n = sc.dataset_ids.size();
  if (n == 0 || sc.sigma1_side.size() != n || sc.prior.size() != n)
    throw validation_error("collapse scenario: dataset fields must have matching sizes");
  double sum = 0.0;
  for (double p : sc.prior) {
    if (p < 0.0) throw validation_error("collapse scenario: prior entries must be nonnegative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw validation_error("collapse scenario: prior must sum to 1");
}

inline double marked_conditional(const CollapseScenario& sc, bool sigma1) {
  double marked_mass = 0.0;
  for (std::size_t d = 0; d < sc.prior.size(); ++d)
    if (sc.sigma1_side[d] == sigma1 && sc.marked[d]) marked_mass += sc.prior[d];
  return marked_mass / side_mass(sc, sigma1);
}

}  // namespace detail

inline void validate_collapse_scenario(const CollapseScenario& sc) {
  switch (sc.kind) {
    case CollapseKind::kExample1:
      detail::validate_explicit_prior(sc);
      // two draws per side must be possible, otherwise the counterfactual
      // slot can never vary and no run count reveals the secret
      if (detail::positive_count(sc, true) < 2 || detail::positive_count(sc, false) < 2)
        throw validation_error(
            "collapse scenario: each secret needs at least 2 datasets with positive prior");
      return;
    case CollapseKind::kExample2:
      if (sc.bit_count < 3)
        throw validation_error("collapse scenario: bit count must be at least 3");
      if (sc.bit_count > 20)
        throw validation_error("collapse scenario: bit count above 20 is not supported");
      return;
    case CollapseKind::kExample3: {
      detail::validate_explicit_prior(sc);
      if (sc.marked.size() != sc.dataset_ids.size())
        throw validation_error("collapse scenario: marked flags must match the dataset count");
      if (!(0.0 < sc.l_t && sc.l_t <= sc.u_t && sc.u_t < 1.0) ||
          !(0.0 < sc.l_f && sc.l_f <= sc.u_f && sc.u_f < 1.0))
        throw validation_error("collapse scenario: bounds must satisfy 0 < L <= U < 1");
      if (detail::side_mass(sc, true) <= 0.0 || detail::side_mass(sc, false) <= 0.0)
        throw validation_error("collapse scenario: both sides need positive prior mass");
      const double t = detail::marked_conditional(sc, true);
      const double f = detail::marked_conditional(sc, false);
      if (t < sc.l_t - 1e-12 || t > sc.u_t + 1e-12 || f < sc.l_f - 1e-12 || f > sc.u_f + 1e-12)
        throw validation_error(
            "collapse scenario: realized marked-set conditionals fall outside the bounds");
      return;
    }
  }
  throw validation_error("collapse scenario: unknown kind");
}

// ---------------------------------------------------------------------------
// Example 1: output the true dataset in its secret's slot and a fresh
// counterfactual from the opposite secret's conditional in the other slot.

struct Example1Output {
  std::size_t sigma1_dataset = 0;
  std::size_t sigma2_dataset = 0;
};

enum class SecretVerdict { kSigma1, kSigma2, kUnknown };

namespace detail {

inline std::size_t sample_conditional(const CollapseScenario& sc, bool sigma1,
                                      std::mt19937_64& rng) {
  const double mass = side_mass(sc, sigma1);
  const double u = uniform_open(rng) * mass;
  double acc = 0.0;
  std::size_t last = sc.prior.size();
  for (std::size_t d = 0; d < sc.prior.size(); ++d) {
    if (sc.sigma1_side[d] != sigma1 || sc.prior[d] <= 0.0) continue;
    acc += sc.prior[d];
    last = d;
    if (u < acc) return d;
  }
  return last;  // guard against accumulated rounding at u ~ mass
}

}  // namespace detail

inline Example1Output example1_run(const CollapseScenario& sc, std::size_t true_dataset,
                                   std::mt19937_64& rng) {
  validate_collapse_scenario(sc);
  if (sc.kind != CollapseKind::kExample1)
    throw validation_error("example1_run: scenario kind mismatch");
  if (true_dataset >= sc.dataset_ids.size() || sc.prior[true_dataset] <= 0.0)
    throw validation_error("example1_run: true dataset must be in the prior support");
  const bool truth_is_sigma1 = sc.sigma1_side[true_dataset];
  const std::size_t counterfactual = detail::sample_conditional(sc, !truth_is_sigma1, rng);
  return truth_is_sigma1 ? Example1Output{true_dataset, counterfactual}
                         : Example1Output{counterfactual, true_dataset};
}

// The slot that never changes across runs holds the true dataset. A
// verdict needs the other slot to actually vary; anything else is unknown.
inline SecretVerdict example1_attack(const std::vector<Example1Output>& outputs) {
  if (outputs.empty()) return SecretVerdict::kUnknown;
  bool first_varies = false, second_varies = false;
  for (const auto& o : outputs) {
    if (o.sigma1_dataset != outputs.front().sigma1_dataset) first_varies = true;
    if (o.sigma2_dataset != outputs.front().sigma2_dataset) second_varies = true;
  }
  if (!first_varies && second_varies) return SecretVerdict::kSigma1;
  if (first_varies && !second_varies) return SecretVerdict::kSigma2;
  return SecretVerdict::kUnknown;
}

// Reveal-time bound from the largest single-dataset conditional: the
// counterfactual slot repeats its first value with at most that
// probability per run.
inline double example1_expected_runs_bound(const CollapseScenario& sc) {
  validate_collapse_scenario(sc);
  if (sc.kind != CollapseKind::kExample1)
    throw validation_error("example1_expected_runs_bound: scenario kind mismatch");
  double q_max = 0.0;
  for (std::size_t d = 0; d < sc.prior.size(); ++d) {
    if (sc.prior[d] <= 0.0) continue;
    q_max = std::max(q_max, sc.prior[d] / detail::side_mass(sc, sc.sigma1_side[d]));
  }
  return 1.0 + 1.0 / (1.0 - q_max);
}

// ---------------------------------------------------------------------------
// Example 2: a fair coin picks between the xor tuple (x2^x1, ..., xn^x1)
// and a parity bit (all bits when the length is odd, all but x1 when even).

struct Example2Output {
  bool is_parity = false;
  std::vector<int> xor_tuple;  // empty for parity outputs
  int parity = 0;
};

namespace detail {

inline void require_bits(const std::vector<int>& bits, std::size_t bit_count) {
  if (bits.size() != bit_count)
    throw validation_error("example2: bit vector length must match the scenario");
  for (int b : bits)
    if (b != 0 && b != 1) throw validation_error("example2: bits must be 0 or 1");
}

}  // namespace detail

inline Example2Output example2_run(std::size_t bit_count, const std::vector<int>& bits,
                                   std::mt19937_64& rng) {
  if (bit_count < 3) throw validation_error("example2_run: bit count must be at least 3");
  detail::require_bits(bits, bit_count);
  Example2Output out;
  if (uniform_open(rng) < 0.5) {
    out.is_parity = false;
    out.xor_tuple.reserve(bit_count - 1);
    for (std::size_t i = 1; i < bit_count; ++i) out.xor_tuple.push_back(bits[i] ^ bits[0]);
  } else {
    out.is_parity = true;
    int p = 0;
    for (std::size_t i = bit_count % 2 == 1 ? 0 : 1; i < bit_count; ++i) p ^= bits[i];
    out.parity = p;
  }
  return out;
}

// With one tuple and one parity output the whole input reconstructs: the
// xor of the tuple equals the parity with x1 folded in either way, so
// x1 = xor(tuple) ^ parity for both length parities, then each remaining
// bit unfolds from its tuple slot.
inline std::optional<std::vector<int>> example2_attack(
    const std::vector<Example2Output>& outputs) {
  const Example2Output* tuple = nullptr;
  const Example2Output* parity = nullptr;
  for (const auto& o : outputs) {
    if (o.is_parity) {
      if (parity && parity->parity != o.parity)
        throw integrity_error("example2_attack: inconsistent parity outputs");
      parity = &o;
    } else {
      if (tuple && tuple->xor_tuple != o.xor_tuple)
        throw integrity_error("example2_attack: inconsistent tuple outputs");
      tuple = &o;
    }
  }
  if (!tuple || !parity) return std::nullopt;
  int tuple_xor = 0;
  for (int v : tuple->xor_tuple) tuple_xor ^= v;
  const int x1 = tuple_xor ^ parity->parity;
  std::vector<int> bits{x1};
  for (int v : tuple->xor_tuple) bits.push_back(v ^ x1);
  return bits;
}

// ---------------------------------------------------------------------------
// Example 3: datasets classify into four cases by secret truth and marked
// membership; the output pair carries the true case label in its slot and
// a fair coin in the other slot.

struct Example3Output {
  std::string sigma1_case;  // "1a" or "1b"
  std::string sigma2_case;  // "2a" or "2b"
};

inline std::string classify_example3_case(const CollapseScenario& sc, std::size_t dataset) {
  validate_collapse_scenario(sc);
  if (sc.kind != CollapseKind::kExample3)
    throw validation_error("classify_example3_case: scenario kind mismatch");
  if (dataset >= sc.dataset_ids.size())
    throw validation_error("classify_example3_case: dataset index out of range");
  if (sc.sigma1_side[dataset]) return sc.marked[dataset] ? "1a" : "1b";
  return sc.marked[dataset] ? "2a" : "2b";
}

inline Example3Output example3_run(const CollapseScenario& sc, std::size_t true_dataset,
                                   std::mt19937_64& rng) {
  const std::string label = classify_example3_case(sc, true_dataset);
  if (sc.prior[true_dataset] <= 0.0)
    throw validation_error("example3_run: true dataset must be in the prior support");
  const bool coin = uniform_open(rng) < 0.5;
  Example3Output out;
  if (label[0] == '1') {
    out.sigma1_case = label;
    out.sigma2_case = coin ? "2a" : "2b";
  } else {
    out.sigma2_case = label;
    out.sigma1_case = coin ? "1a" : "1b";
  }
  return out;
}

inline std::optional<std::string> example3_attack(const std::vector<Example3Output>& outputs) {
  if (outputs.empty()) return std::nullopt;
  bool first_varies = false, second_varies = false;
  for (const auto& o : outputs) {
    if (o.sigma1_case != outputs.front().sigma1_case) first_varies = true;
    if (o.sigma2_case != outputs.front().sigma2_case) second_varies = true;
  }
  if (!first_varies && second_varies) return outputs.front().sigma1_case;
  if (first_varies && !second_varies) return outputs.front().sigma2_case;
  return std::nullopt;
}

inline SecretVerdict example3_secret(const std::string& case_label) {
  if (case_label == "1a" || case_label == "1b") return SecretVerdict::kSigma1;
  if (case_label == "2a" || case_label == "2b") return SecretVerdict::kSigma2;
  throw validation_error("example3_secret: unknown case label '" + case_label + "'");
}

// Single-run privacy level when only bounds on the marked-set conditionals
// are known: the worst log output-likelihood ratio over the four output
// pairs, each ranging over an interval as the conditionals t and f sweep
// their bounds. The maximum is over the eight interval endpoints.
inline double example3_epsilon_bound(double l_t, double u_t, double l_f, double u_f) {
  if (!(0.0 < l_t && l_t <= u_t && u_t < 1.0) || !(0.0 < l_f && l_f <= u_f && u_f < 1.0))
    throw validation_error("example3_epsilon_bound: bounds must satisfy 0 < L <= U < 1");
  const double endpoints[8] = {
      l_t / u_f,                   u_t / l_f,                    // both cases marked
      (1.0 - u_t) / u_f,           (1.0 - l_t) / l_f,            // left unmarked
      l_t / (1.0 - l_f),           u_t / (1.0 - u_f),            // right unmarked
      (1.0 - u_t) / (1.0 - l_f),   (1.0 - l_t) / (1.0 - u_f)};   // both unmarked
  double eps = 0.0;
  for (double e : endpoints) eps = std::max(eps, std::abs(std::log(e)));
  return eps;
}

// ---------------------------------------------------------------------------
// Exact likelihood matrices, one row per secret. Entries are conditional
// output probabilities marginalized over the prior by direct enumeration.

inline LikelihoodMatrix example1_single_run_matrix(const CollapseScenario& sc) {
  validate_collapse_scenario(sc);
  if (sc.kind != CollapseKind::kExample1)
    throw validation_error("example1_single_run_matrix: scenario kind mismatch");
  std::vector<std::size_t> side1, side2;
  for (std::size_t d = 0; d < sc.dataset_ids.size(); ++d)
    (sc.sigma1_side[d] ? side1 : side2).push_back(d);
  const double m1 = detail::side_mass(sc, true), m2 = detail::side_mass(sc, false);

  LikelihoodMatrix lm;
  lm.datasets = {{"sigma1", {"sigma1"}}, {"sigma2", {"sigma2"}}};
  lm.probs = Mat(2, side1.size() * side2.size());
  std::size_t col = 0;
  for (std::size_t a : side1)
    for (std::size_t b : side2) {
      lm.outputs.push_back(sc.dataset_ids[a] + "|" + sc.dataset_ids[b]);
      // truth a with counterfactual b, and truth b with counterfactual a,
      // give the same product, which is the whole zero-leakage point
      lm.probs(0, col) = (sc.prior[a] / m1) * (sc.prior[b] / m2);
      lm.probs(1, col) = (sc.prior[b] / m2) * (sc.prior[a] / m1);
      ++col;
    }
  return lm;
}

inline LikelihoodMatrix example1_two_run_matrix(const CollapseScenario& sc) {
  validate_collapse_scenario(sc);
  if (sc.kind != CollapseKind::kExample1)
    throw validation_error("example1_two_run_matrix: scenario kind mismatch");
  std::vector<std::size_t> side1, side2;
  for (std::size_t d = 0; d < sc.dataset_ids.size(); ++d)
    (sc.sigma1_side[d] ? side1 : side2).push_back(d);
  const double m1 = detail::side_mass(sc, true), m2 = detail::side_mass(sc, false);

  const std::size_t singles = side1.size() * side2.size();
  std::vector<std::string> single_labels;
  single_labels.reserve(singles);
  for (std::size_t a : side1)
    for (std::size_t b : side2)
      single_labels.push_back(sc.dataset_ids[a] + "|" + sc.dataset_ids[b]);

  LikelihoodMatrix lm;
  lm.datasets = {{"sigma1", {"sigma1"}}, {"sigma2", {"sigma2"}}};
  lm.probs = Mat(2, singles * singles);
  for (std::size_t c1 = 0; c1 < singles; ++c1)
    for (std::size_t c2 = 0; c2 < singles; ++c2)
      lm.outputs.push_back(single_labels[c1] + ";" + single_labels[c2]);

  // The true dataset is fixed across the two runs; only counterfactuals
  // redraw. Under sigma1 the first slot repeats, under sigma2 the second.
  std::size_t c1 = 0;
  for (std::size_t i1 = 0; i1 < side1.size(); ++i1)
    for (std::size_t j1 = 0; j1 < side2.size(); ++j1, ++c1) {
      std::size_t c2 = 0;
      for (std::size_t i2 = 0; i2 < side1.size(); ++i2)
        for (std::size_t j2 = 0; j2 < side2.size(); ++j2, ++c2) {
          const std::size_t col = c1 * singles + c2;
          if (i1 == i2) {
            const double truth = sc.prior[side1[i1]] / m1;
            lm.probs(0, col) = truth * (sc.prior[side2[j1]] / m2) * (sc.prior[side2[j2]] / m2);
          }
          if (j1 == j2) {
            const double truth = sc.prior[side2[j1]] / m2;
            lm.probs(1, col) = truth * (sc.prior[side1[i1]] / m1) * (sc.prior[side1[i2]] / m1);
          }
        }
    }
  return lm;
}

namespace detail {

// Output column layout for the bit mechanism: all xor tuples, then the two
// parity symbols.
inline std::string tuple_label(const std::vector<int>& tuple) {
  std::string s = "A:";
  for (int v : tuple) s += static_cast<char>('0' + v);
  return s;
}

}  // namespace detail

inline LikelihoodMatrix example2_single_run_matrix(std::size_t bit_count) {
  if (bit_count < 3 || bit_count > 16)
    throw validation_error("example2_single_run_matrix: bit count must be in [3, 16]");
  const std::size_t suffixes = std::size_t{1} << (bit_count - 1);
  LikelihoodMatrix lm;
  lm.datasets = {{"sigma1", {"sigma1"}}, {"sigma2", {"sigma2"}}};
  lm.probs = Mat(2, suffixes + 2);
  for (std::size_t t = 0; t < suffixes; ++t) {
    std::vector<int> tuple;
    for (std::size_t i = 0; i < bit_count - 1; ++i) tuple.push_back((t >> i) & 1u);
    lm.outputs.push_back(detail::tuple_label(tuple));
  }
  lm.outputs.push_back("B:0");
  lm.outputs.push_back("B:1");

  const double w = 0.5 / static_cast<double>(suffixes);  // coin times uniform suffix
  for (int x1 = 0; x1 <= 1; ++x1) {
    const std::size_t row = static_cast<std::size_t>(x1);
    const std::uint64_t flip = x1 == 1 ? suffixes - 1 : 0u;  // xor with x1 in every slot
    for (std::uint64_t s = 0; s < suffixes; ++s) {
      lm.probs(row, static_cast<std::size_t>(s ^ flip)) += w;
      int parity = std::popcount(s) & 1;
      if (bit_count % 2 == 1) parity ^= x1;  // odd length folds x1 into the parity
      lm.probs(row, suffixes + static_cast<std::size_t>(parity)) += w;
    }
  }
  return lm;
}

inline LikelihoodMatrix example2_two_run_matrix(std::size_t bit_count) {
  if (bit_count < 3 || bit_count > 8)
    throw validation_error("example2_two_run_matrix: bit count must be in [3, 8]");
  const std::size_t suffixes = std::size_t{1} << (bit_count - 1);
  const std::size_t singles = suffixes + 2;
  const auto single = example2_single_run_matrix(bit_count);

  LikelihoodMatrix lm;
  lm.datasets = {{"sigma1", {"sigma1"}}, {"sigma2", {"sigma2"}}};
  lm.probs = Mat(2, singles * singles);
  for (std::size_t c1 = 0; c1 < singles; ++c1)
    for (std::size_t c2 = 0; c2 < singles; ++c2)
      lm.outputs.push_back(single.outputs[c1] + ";" + single.outputs[c2]);

  // Per secret the dataset is fixed across runs, so outputs pair up per
  // suffix: the tuple is determined and the parity is determined, each
  // drawn with an independent fair coin.
  const double w = 0.25 / static_cast<double>(suffixes);
  for (int x1 = 0; x1 <= 1; ++x1) {
    const std::size_t row = static_cast<std::size_t>(x1);
    const std::uint64_t flip = x1 == 1 ? suffixes - 1 : 0u;
    for (std::uint64_t s = 0; s < suffixes; ++s) {
      const std::size_t tuple_col = static_cast<std::size_t>(s ^ flip);
      int parity = std::popcount(s) & 1;
      if (bit_count % 2 == 1) parity ^= x1;
      const std::size_t parity_col = suffixes + static_cast<std::size_t>(parity);
      const std::size_t cols[2] = {tuple_col, parity_col};
      for (std::size_t first : cols)
        for (std::size_t second : cols) lm.probs(row, first * singles + second) += w;
    }
  }
  return lm;
}

inline LikelihoodMatrix example3_single_run_matrix(const CollapseScenario& sc) {
  validate_collapse_scenario(sc);
  if (sc.kind != CollapseKind::kExample3)
    throw validation_error("example3_single_run_matrix: scenario kind mismatch");
  const double t = detail::marked_conditional(sc, true);
  const double f = detail::marked_conditional(sc, false);
  LikelihoodMatrix lm;
  lm.datasets = {{"sigma1", {"sigma1"}}, {"sigma2", {"sigma2"}}};
  lm.outputs = {"1a|2a", "1a|2b", "1b|2a", "1b|2b"};
  lm.probs = Mat(2, 4);
  lm.probs(0, 0) = 0.5 * t;
  lm.probs(0, 1) = 0.5 * t;
  lm.probs(0, 2) = 0.5 * (1.0 - t);
  lm.probs(0, 3) = 0.5 * (1.0 - t);
  lm.probs(1, 0) = 0.5 * f;
  lm.probs(1, 1) = 0.5 * (1.0 - f);
  lm.probs(1, 2) = 0.5 * f;
  lm.probs(1, 3) = 0.5 * (1.0 - f);
  return lm;
}

// ---------------------------------------------------------------------------
// Monte-Carlo expected runs until the attack reaches a verdict.

struct RunsEstimate {
  double mean = 0.0;
  double stderr_value = 0.0;
  std::size_t trials = 0;
  std::size_t censored = 0;  // trials stopped at the run cap, counted at the cap
};

inline constexpr std::size_t kRunsCap = 1000000;

namespace detail {

inline std::size_t sample_from_prior(const CollapseScenario& sc, std::mt19937_64& rng) {
  const double u = uniform_open(rng);
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t d = 0; d < sc.prior.size(); ++d) {
    if (sc.prior[d] <= 0.0) continue;
    acc += sc.prior[d];
    last = d;
    if (u < acc) return d;
  }
  return last;
}

// Incremental forms of the attacks, equivalent to re-running them on the
// accumulated history each round but O(1) per run, so a censored trial
// costs a million steps instead of a trillion.
inline std::size_t example1_trial(const CollapseScenario& sc, std::mt19937_64& rng) {
  const std::size_t truth = sample_from_prior(sc, rng);
  const bool truth_sigma1 = sc.sigma1_side[truth];
  Example1Output first{};
  bool varied1 = false, varied2 = false;
  for (std::size_t runs = 1; runs <= kRunsCap; ++runs) {
    const Example1Output out = example1_run(sc, truth, rng);
    if (runs == 1) {
      first = out;
      continue;
    }
    varied1 = varied1 || out.sigma1_dataset != first.sigma1_dataset;
    varied2 = varied2 || out.sigma2_dataset != first.sigma2_dataset;
    if (varied1 != varied2) {
      const SecretVerdict verdict =
          varied2 ? SecretVerdict::kSigma1 : SecretVerdict::kSigma2;
      if (verdict != (truth_sigma1 ? SecretVerdict::kSigma1 : SecretVerdict::kSigma2))
        throw integrity_error("estimate_expected_runs: attack produced a wrong verdict");
      return runs;
    }
  }
  return kRunsCap;
}

inline std::size_t example2_trial(const CollapseScenario& sc, std::mt19937_64& rng) {
  std::vector<int> bits(sc.bit_count);
  for (auto& b : bits) b = uniform_open(rng) < 0.5 ? 0 : 1;
  std::vector<Example2Output> seen;
  bool have_tuple = false, have_parity = false;
  for (std::size_t runs = 1; runs <= kRunsCap; ++runs) {
    const Example2Output out = example2_run(sc.bit_count, bits, rng);
    if (out.is_parity ? !have_parity : !have_tuple) {
      seen.push_back(out);
      (out.is_parity ? have_parity : have_tuple) = true;
    }
    if (have_tuple && have_parity) {
      const auto recovered = example2_attack(seen);
      if (!recovered || *recovered != bits)
        throw integrity_error("estimate_expected_runs: attack produced a wrong verdict");
      return runs;
    }
  }
  return kRunsCap;
}

inline std::size_t example3_trial(const CollapseScenario& sc, std::mt19937_64& rng) {
  const std::size_t truth = sample_from_prior(sc, rng);
  const std::string true_case = classify_example3_case(sc, truth);
  Example3Output first;
  bool varied1 = false, varied2 = false;
  for (std::size_t runs = 1; runs <= kRunsCap; ++runs) {
    const Example3Output out = example3_run(sc, truth, rng);
    if (runs == 1) {
      first = out;
      continue;
    }
    varied1 = varied1 || out.sigma1_case != first.sigma1_case;
    varied2 = varied2 || out.sigma2_case != first.sigma2_case;
    if (varied1 != varied2) {
      const std::string verdict = varied2 ? first.sigma1_case : first.sigma2_case;
      if (verdict != true_case)
        throw integrity_error("estimate_expected_runs: attack produced a wrong verdict");
      return runs;
    }
  }
  return kRunsCap;
}

}  // namespace detail

inline RunsEstimate estimate_expected_runs(const CollapseScenario& sc, std::size_t trials) {
  validate_collapse_scenario(sc);
  if (trials < 1) throw validation_error("estimate_expected_runs: need at least one trial");
  std::vector<double> samples;
  samples.reserve(trials);
  RunsEstimate est;
  est.trials = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    auto rng = trial_rng(sc.seed, t);
    std::size_t runs = 0;
    switch (sc.kind) {
      case CollapseKind::kExample1: runs = detail::example1_trial(sc, rng); break;
      case CollapseKind::kExample2: runs = detail::example2_trial(sc, rng); break;
      case CollapseKind::kExample3: runs = detail::example3_trial(sc, rng); break;
    }
    if (runs >= kRunsCap) ++est.censored;
    samples.push_back(static_cast<double>(runs));
  }
  const auto [mean, se] = mean_stderr(samples);
  est.mean = mean;
  est.stderr_value = se;
  return est;
}

}  // namespace pufferkit
