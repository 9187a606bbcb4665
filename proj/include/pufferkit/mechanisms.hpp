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
//
// Release mechanisms calibrated against an influence curve: the curve
// turns a correlation-aware privacy budget eps_p into a plain per-entry
// noise budget eps_dp = (eps_p - a) / b, choosing the curve point that
// leaves the most noise budget. Every release carries a receipt recording
// the calibration so compositions can be audited later.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "pufferkit/common.hpp"
#include "pufferkit/influence.hpp"
#include "pufferkit/numeric.hpp"

namespace pufferkit {

// Standard Laplace draw via inverse CDF from a single open-interval
// uniform; scale is the usual b parameter.
inline double sample_laplace(double scale, std::mt19937_64& rng) {
  if (!(scale > 0.0)) throw validation_error("sample_laplace: scale must be positive");
  const double u = uniform_open(rng) - 0.5;
  return -scale * (u >= 0.0 ? 1.0 : -1.0) * std::log(1.0 - 2.0 * std::fabs(u));
}

// Exponential mechanism over explicit utilities: Pr(i) proportional to
// exp(eps * u_i / (2 * sensitivity)). eps = 0 degenerates to uniform.
inline int exponential_select(const std::vector<double>& utilities, double eps,
                              double sensitivity, std::mt19937_64& rng) {
  if (utilities.empty()) throw validation_error("exponential_select: no candidates");
  if (!(sensitivity > 0.0))
    throw validation_error("exponential_select: sensitivity must be positive");
  if (eps < 0.0) throw validation_error("exponential_select: negative budget");
  double top = utilities[0];
  for (double u : utilities) top = std::max(top, u);
  std::vector<double> w(utilities.size());
  double total = 0.0;
  for (std::size_t i = 0; i < utilities.size(); ++i)
    total += w[i] = std::exp(eps * (utilities[i] - top) / (2.0 * sensitivity));
  const double pick = uniform_open(rng) * total;
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    acc += w[i];
    if (pick < acc) return static_cast<int>(i);
  }
  return static_cast<int>(w.size() - 1);
}

// Outcome of calibrating eps_p against a curve: the usable curve point
// with the largest per-entry budget, or the uniform group fallback
// eps_p / entry_count when no point has a < eps_p.
struct EpsilonDpChoice {
  double eps_dp = 0.0;
  double a = 0.0;
  int b = 0;
  bool fallback = false;
};

inline EpsilonDpChoice best_epsilon_dp(const AbCurve& curve, double eps_p,
                                       std::size_t entry_count) {
  validate_curve(curve);
  if (!(eps_p > 0.0)) throw validation_error("best_epsilon_dp: eps_p must be positive");
  if (entry_count == 0) throw validation_error("best_epsilon_dp: entry_count must be >= 1");
  EpsilonDpChoice best;
  for (const CurvePoint& pt : curve.points) {
    if (pt.a >= eps_p) continue;
    const double eps_dp = (eps_p - pt.a) / static_cast<double>(pt.b);
    if (eps_dp > best.eps_dp) best = {eps_dp, pt.a, pt.b, false};
  }
  if (best.eps_dp == 0.0) {
    best = {eps_p / static_cast<double>(entry_count), 0.0,
            static_cast<int>(entry_count), true};
  }
  return best;
}

// Per-entry budget when a quilt of card hidden entries leaks e of the
// eps_p budget through its surroundings.
inline double mqm_epsilon(double eps_p, double e, std::size_t card) {
  if (!(eps_p > 0.0)) throw validation_error("mqm_epsilon: eps_p must be positive");
  if (e < 0.0 || e >= eps_p)
    throw validation_error("mqm_epsilon: leakage must lie in [0, eps_p)");
  if (card == 0) throw validation_error("mqm_epsilon: cardinality must be >= 1");
  return (eps_p - e) / static_cast<double>(card);
}

// Correlation-oblivious baseline: split eps_p across the whole group.
inline double group_dp_epsilon(double eps_p, std::size_t group_size) {
  if (!(eps_p > 0.0)) throw validation_error("group_dp_epsilon: eps_p must be positive");
  if (group_size == 0) throw validation_error("group_dp_epsilon: group size must be >= 1");
  return eps_p / static_cast<double>(group_size);
}

// Calibration record attached to every release. The invariant checked by
// validate_receipt is the one compositions rely on: b * eps_dp + a stays
// within the claimed eps_p.
struct MechanismReceipt {
  std::string kind;
  double eps_p = 0.0;
  double a = 0.0;
  int b = 0;
  double eps_dp = 0.0;
  bool fallback = false;
  std::size_t output_dim = 0;
  std::uint64_t seed = 0;
};

inline void validate_receipt(const MechanismReceipt& r) {
  if (r.kind.empty()) throw validation_error("receipt: missing kind");
  if (!(r.eps_p > 0.0) || !(r.eps_dp > 0.0) || r.b < 1 || r.a < 0.0)
    throw validation_error("receipt: non-positive calibration fields");
  if (static_cast<double>(r.b) * r.eps_dp + r.a > r.eps_p + 1e-9)
    throw validation_error("receipt: calibration exceeds claimed budget");
}

struct LaplaceRelease {
  Vec values;
  MechanismReceipt receipt;
};

// Laplace release of a vector statistic with total L1 sensitivity
// l1_sensitivity to one entry change: eps_dp is split evenly across the
// output coordinates.
inline LaplaceRelease pufferfish_laplace(const Vec& true_values, double eps_p,
                                         const AbCurve& curve, std::size_t entry_count,
                                         double l1_sensitivity, std::mt19937_64& rng,
                                         std::uint64_t seed_label = 0) {
  if (true_values.empty()) throw validation_error("pufferfish_laplace: empty statistic");
  if (!(l1_sensitivity > 0.0))
    throw validation_error("pufferfish_laplace: sensitivity must be positive");
  const EpsilonDpChoice choice = best_epsilon_dp(curve, eps_p, entry_count);
  const double dim = static_cast<double>(true_values.size());
  const double scale = l1_sensitivity * dim / choice.eps_dp;
  LaplaceRelease out;
  out.values.reserve(true_values.size());
  for (double v : true_values) out.values.push_back(v + sample_laplace(scale, rng));
  out.receipt = {"laplace",   eps_p,          choice.a,
                 choice.b,    choice.eps_dp,  choice.fallback,
                 true_values.size(), seed_label};
  validate_receipt(out.receipt);
  return out;
}

struct TopkRelease {
  std::vector<int> order;  // selected candidate indices, best first
  MechanismReceipt receipt;
};

// Iterated exponential mechanism: k selection rounds, each at eps_dp / k,
// winners removed as they are drawn. The release is the whole selection
// order.
inline TopkRelease pufferfish_exponential_topk(const std::vector<double>& utilities,
                                               std::size_t k, double eps_p,
                                               const AbCurve& curve,
                                               std::size_t entry_count,
                                               double sensitivity, std::mt19937_64& rng,
                                               std::uint64_t seed_label = 0) {
  if (k == 0 || k > utilities.size())
    throw validation_error("pufferfish_exponential_topk: need 1 <= k <= #candidates");
  const EpsilonDpChoice choice = best_epsilon_dp(curve, eps_p, entry_count);
  const double eps_round = choice.eps_dp / static_cast<double>(k);
  std::vector<int> alive(utilities.size());
  for (std::size_t i = 0; i < alive.size(); ++i) alive[i] = static_cast<int>(i);
  TopkRelease out;
  for (std::size_t round = 0; round < k; ++round) {
    std::vector<double> u(alive.size());
    for (std::size_t i = 0; i < alive.size(); ++i)
      u[i] = utilities[static_cast<std::size_t>(alive[i])];
    const int pick = exponential_select(u, eps_round, sensitivity, rng);
    out.order.push_back(alive[static_cast<std::size_t>(pick)]);
    alive.erase(alive.begin() + pick);
  }
  out.receipt = {"exponential-topk", eps_p,         choice.a,
                 choice.b,           choice.eps_dp, choice.fallback,
                 k,                  seed_label};
  validate_receipt(out.receipt);
  return out;
}

struct MqmRelease {
  Vec values;  // noisy answers, one per count query
  std::vector<MechanismReceipt> receipts;
};

// Baseline that splits eps_p evenly across the scalar count queries and
// answers each one independently through pufferfish_laplace. Composing
// the receipts never claims more than eps_p.
inline MqmRelease mqm_laplace_baseline(const Vec& counts, double eps_p, const AbCurve& curve,
                                       std::size_t entry_count, std::mt19937_64& rng,
                                       std::uint64_t seed_label = 0) {
  if (counts.empty()) throw validation_error("mqm_laplace_baseline: no count queries");
  if (!(eps_p > 0.0)) throw validation_error("mqm_laplace_baseline: eps_p must be positive");
  const double per_query = eps_p / static_cast<double>(counts.size());
  MqmRelease out;
  out.values.reserve(counts.size());
  for (double c : counts) {
    const LaplaceRelease rel =
        pufferfish_laplace({c}, per_query, curve, entry_count, 1.0, rng, seed_label);
    out.values.push_back(rel.values[0]);
    out.receipts.push_back(rel.receipt);
  }
  return out;
}

// Convenience form for two-state chains: derives the closed-form curve
// from the chain parameters before delegating.
inline MqmRelease mqm_laplace_baseline(const Vec& counts, double p, double q, double eps_p,
                                       int b_max, std::size_t entry_count, std::mt19937_64& rng,
                                       std::uint64_t seed_label = 0) {
  if (b_max < 1) throw validation_error("mqm_laplace_baseline: b_max must be >= 1");
  AbCurve curve;
  curve.provenance = "closed-form";
  for (int b = 1; b <= b_max; ++b)
    curve.points.push_back({b, binary_chain_ab_point({p, q}, b)});
  return mqm_laplace_baseline(counts, eps_p, curve, entry_count, rng, seed_label);
}

}  // namespace pufferkit
