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
// Influence curves: how strongly a secret entry of a correlated sequence
// can show through the entries a mechanism is allowed to reveal. A curve
// point (b, a) says: if at least the secret and at most b entries total
// are kept hidden, every assignment of the revealed entries shifts the
// posterior log-odds of the secret by at most a.

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "pufferkit/common.hpp"
#include "pufferkit/linalg.hpp"
#include "pufferkit/numeric.hpp"
#include "pufferkit/priors.hpp"

namespace pufferkit {

struct CurvePoint {
  int b = 0;
  double a = 0.0;
};

struct AbCurve {
  std::vector<CurvePoint> points;
  std::string provenance;  // "closed-form", "sweep", "oracle", "user-supplied"
};

inline void validate_curve(const AbCurve& curve) {
  static const char* kKinds[] = {"closed-form", "sweep", "oracle", "user-supplied"};
  bool known = false;
  for (const char* k : kKinds) known = known || curve.provenance == k;
  if (!known) throw validation_error("curve provenance '" + curve.provenance + "' unknown");
  if (curve.points.empty()) throw validation_error("curve has no points");
  int prev_b = 0;
  for (const CurvePoint& pt : curve.points) {
    if (pt.b <= prev_b) throw validation_error("curve budgets must be strictly increasing");
    if (!(pt.a >= 0.0)) throw validation_error("curve influence values must be >= 0");
    prev_b = pt.b;
  }
}

inline nlohmann::json curve_to_json(const AbCurve& curve) {
  validate_curve(curve);
  nlohmann::json pts = nlohmann::json::array();
  for (const CurvePoint& pt : curve.points) pts.push_back({{"b", pt.b}, {"a", pt.a}});
  return {{"points", std::move(pts)}, {"provenance", curve.provenance}};
}

inline AbCurve curve_from_json(const nlohmann::json& j) {
  AbCurve curve;
  curve.provenance = j.at("provenance").get<std::string>();
  for (const auto& pt : j.at("points"))
    curve.points.push_back({pt.at("b").get<int>(), pt.at("a").get<double>()});
  validate_curve(curve);
  return curve;
}

// Two-state chain parameterized by its diagonal: p = stay probability in
// state 0, q = stay probability in state 1.
struct BinaryChain {
  double p = 0.5;
  double q = 0.5;
};

namespace detail {

inline void validate_binary_chain(const BinaryChain& c) {
  if (!(c.p > 0.0 && c.p < 1.0 && c.q > 0.0 && c.q < 1.0))
    throw validation_error("binary chain needs stay probabilities strictly inside (0,1)");
}

// d-step transition entries in closed form via the eigendecomposition:
// lambda = p+q-1, pi = ((1-q), (1-p)) / (2-p-q).
struct BinaryStep {
  double p00, p01, p10, p11;
};

inline BinaryStep binary_chain_power(const BinaryChain& c, int d) {
  const double pi0 = (1.0 - c.q) / (2.0 - c.p - c.q);
  const double pi1 = (1.0 - c.p) / (2.0 - c.p - c.q);
  const double ld = std::pow(c.p + c.q - 1.0, d);
  return {pi0 + ld * pi1, pi1 * (1.0 - ld), pi0 * (1.0 - ld), pi1 + ld * pi0};
}

// Observation log-ratio extremes at distance d: smax = max over the
// observed value of log P^d(0,.)/P^d(1,.), smin likewise for the flipped
// ratio. Both are >= 0.
inline std::pair<double, double> binary_step_extremes(const BinaryChain& c, int d) {
  const BinaryStep s = binary_chain_power(c, d);
  const double s0 = std::log(s.p00 / s.p10);
  const double s1 = std::log(s.p01 / s.p11);
  return {std::max(s0, s1), std::max(-s0, -s1)};
}

}  // namespace detail

// Influence point for a two-state chain with both window ends strictly
// interior. Minimizes over all split windows d_left + d_right - 1 <= b;
// for nonnegative-eigenvalue chains this lands on the balanced split.
inline double binary_chain_ab_point(const BinaryChain& chain, int b) {
  detail::validate_binary_chain(chain);
  if (b < 1) throw validation_error("binary_chain_ab_point: b >= 1 required");
  std::vector<std::pair<double, double>> s(static_cast<std::size_t>(b) + 1);
  for (int d = 1; d <= b; ++d) s[d] = detail::binary_step_extremes(chain, d);
  double best = kInf;
  for (int dl = 1; dl <= b; ++dl) {
    for (int dr = 1; dl + dr - 1 <= b; ++dr) {
      const double v = std::max(s[dl].first + s[dr].first, s[dl].second + s[dr].second);
      best = std::min(best, v);
    }
  }
  return best;
}

// Same, but aware of the actual chain extent. A window end that runs off
// the sequence boundary ("saturated") contributes no leakage at all,
// which matters for slow chains and generous budgets. Two-state chains
// are reversible at stationarity, so the left side reuses the forward
// closed form.
inline double binary_chain_ab_point(const BinaryChain& chain, int b,
                                    std::size_t length, std::size_t secret_index) {
  detail::validate_binary_chain(chain);
  if (b < 1) throw validation_error("binary_chain_ab_point: b >= 1 required");
  if (secret_index >= length)
    throw validation_error("binary_chain_ab_point: secret index outside the chain");
  if (static_cast<std::size_t>(b) + 2 > length)
    throw validation_error("binary_chain_ab_point: budget too large for chain length (b <= T-2)");
  const int dl_max = static_cast<int>(std::min<std::size_t>(secret_index + 1, b));
  const int dr_max = static_cast<int>(std::min<std::size_t>(length - secret_index, b));
  const int d_top = std::max(dl_max, dr_max);
  std::vector<std::pair<double, double>> s(static_cast<std::size_t>(d_top) + 1, {0.0, 0.0});
  for (int d = 1; d <= d_top; ++d) s[d] = detail::binary_step_extremes(chain, d);
  double best = kInf;
  for (int dl = 1; dl <= dl_max; ++dl) {
    const bool sat_l = static_cast<std::size_t>(dl) == secret_index + 1;
    for (int dr = 1; dr <= dr_max && dl + dr - 1 <= b; ++dr) {
      const bool sat_r = static_cast<std::size_t>(dr) == length - secret_index;
      const double plus = (sat_l ? 0.0 : s[dl].first) + (sat_r ? 0.0 : s[dr].first);
      const double minus = (sat_l ? 0.0 : s[dl].second) + (sat_r ? 0.0 : s[dr].second);
      best = std::min(best, std::max(plus, minus));
    }
  }
  return best;
}

namespace detail {

// Log-ratio extreme tables for a general chain: fwd[d][v*m+w] is the
// largest log P^d(v,.)/P^d(w,.) over observed values at distance d to the
// right of the secret; rev[d] the same for the reversed chain, which
// governs observations to the left under a stationary start.
struct WindowTables {
  std::size_t m = 0;
  std::vector<std::vector<double>> fwd, rev;
};

inline std::vector<double> log_ratio_extremes(const Mat& pd) {
  const std::size_t m = pd.rows;
  std::vector<double> out(m * m, 0.0);
  for (std::size_t v = 0; v < m; ++v) {
    for (std::size_t w = 0; w < m; ++w) {
      if (v == w) continue;
      double best = -kInf;
      for (std::size_t r = 0; r < m; ++r) {
        const double num = pd(v, r), den = pd(w, r);
        if (num > 0.0 && den > 0.0)
          best = std::max(best, std::log(num / den));
        else if (num > 0.0)
          best = kInf;
      }
      out[v * m + w] = best;
    }
  }
  return out;
}

inline WindowTables build_window_tables(const Mat& p, std::size_t d_max) {
  const std::size_t m = p.rows;
  const Vec pi = stationary_distribution(p);
  Mat rev(m, m);
  for (std::size_t v = 0; v < m; ++v) {
    if (pi[v] <= 0.0)
      throw numeric_error("window tables: stationary mass vanished at a state");
    for (std::size_t u = 0; u < m; ++u) rev(v, u) = pi[u] * p(u, v) / pi[v];
  }
  WindowTables t;
  t.m = m;
  t.fwd.resize(d_max + 1);
  t.rev.resize(d_max + 1);
  Mat fpow = identity(m), rpow = identity(m);
  for (std::size_t d = 1; d <= d_max; ++d) {
    fpow = mat_mul(fpow, p);
    rpow = mat_mul(rpow, rev);
    t.fwd[d] = log_ratio_extremes(fpow);
    t.rev[d] = log_ratio_extremes(rpow);
  }
  return t;
}

inline double window_pair_value(const WindowTables& t, std::size_t va, std::size_t vb,
                                int dl, bool sat_l, int dr, bool sat_r) {
  const std::size_t m = t.m;
  const double ab = (sat_l ? 0.0 : t.rev[dl][va * m + vb]) +
                    (sat_r ? 0.0 : t.fwd[dr][va * m + vb]);
  const double ba = (sat_l ? 0.0 : t.rev[dl][vb * m + va]) +
                    (sat_r ? 0.0 : t.fwd[dr][vb * m + va]);
  return std::max(ab, ba);
}

}  // namespace detail

// Influence point for one ordered-agnostic secret pair (two candidate
// values of the entry at secret_index) of a general finite chain started
// at stationarity: minimum over all windows of at most b hidden entries
// around the secret. Exact, O(b * m^3).
inline double chain_pair_ab_point(const Mat& p, std::size_t length,
                                  std::size_t secret_index, int b,
                                  std::size_t value_a, std::size_t value_b) {
  validate_transition_matrix(p);
  if (b < 1) throw validation_error("chain_pair_ab_point: b >= 1 required");
  if (secret_index >= length)
    throw validation_error("chain_pair_ab_point: secret index outside the chain");
  if (static_cast<std::size_t>(b) + 2 > length)
    throw validation_error("chain_pair_ab_point: budget too large for chain length (b <= T-2)");
  if (value_a >= p.rows || value_b >= p.rows || value_a == value_b)
    throw validation_error("chain_pair_ab_point: bad secret value pair");
  const std::size_t dl_max = std::min<std::size_t>(secret_index + 1, b);
  const std::size_t dr_max = std::min<std::size_t>(length - secret_index, b);
  const auto tables = detail::build_window_tables(p, std::max(dl_max, dr_max));
  double best = kInf;
  for (std::size_t dl = 1; dl <= dl_max; ++dl) {
    const bool sat_l = dl == secret_index + 1;
    for (std::size_t dr = 1; dr <= dr_max && dl + dr - 1 <= static_cast<std::size_t>(b); ++dr) {
      const bool sat_r = dr == length - secret_index;
      best = std::min(best, detail::window_pair_value(tables, value_a, value_b,
                                                      static_cast<int>(dl), sat_l,
                                                      static_cast<int>(dr), sat_r));
    }
  }
  return best;
}

// Whole-curve variant covering every secret pair at the given entry: for
// each budget the window is optimized per pair, then the worst pair is
// reported, so one curve certifies all pairwise secrets at that entry.
inline AbCurve chain_ab_curve(const Mat& p, std::size_t length,
                              std::size_t secret_index, int b_max) {
  validate_transition_matrix(p);
  if (b_max < 1) throw validation_error("chain_ab_curve: b_max >= 1 required");
  if (secret_index >= length)
    throw validation_error("chain_ab_curve: secret index outside the chain");
  if (static_cast<std::size_t>(b_max) + 2 > length)
    throw validation_error("chain_ab_curve: budget too large for chain length (b <= T-2)");
  const std::size_t m = p.rows;
  const std::size_t dl_max = std::min<std::size_t>(secret_index + 1, b_max);
  const std::size_t dr_max = std::min<std::size_t>(length - secret_index, b_max);
  const auto tables = detail::build_window_tables(p, std::max(dl_max, dr_max));
  AbCurve curve;
  curve.provenance = "oracle";
  for (int b = 1; b <= b_max; ++b) {
    double worst_pair = 0.0;
    for (std::size_t va = 0; va < m; ++va) {
      for (std::size_t vb = va + 1; vb < m; ++vb) {
        double best_window = kInf;
        for (std::size_t dl = 1; dl <= dl_max && dl <= static_cast<std::size_t>(b); ++dl) {
          const bool sat_l = dl == secret_index + 1;
          for (std::size_t dr = 1;
               dr <= dr_max && dl + dr - 1 <= static_cast<std::size_t>(b); ++dr) {
            const bool sat_r = dr == length - secret_index;
            best_window = std::min(
                best_window, detail::window_pair_value(tables, va, vb, static_cast<int>(dl),
                                                       sat_l, static_cast<int>(dr), sat_r));
          }
        }
        worst_pair = std::max(worst_pair, best_window);
      }
    }
    curve.points.push_back({b, worst_pair});
  }
  return curve;
}

// Fully explicit prior over fixed-length sequences; the independent
// ground truth the analytic curves are checked against.
struct ExplicitPrior {
  std::vector<int> radix;  // alphabet size per position
  std::vector<std::pair<std::vector<int>, double>> support;
};

struct SecretPair {
  int index = 0;
  int value_a = 0;
  int value_b = 1;
};

inline ExplicitPrior enumerate_markov_prior(const Mat& p, std::size_t length) {
  validate_transition_matrix(p);
  if (length == 0) throw validation_error("enumerate_markov_prior: empty chain");
  const std::size_t m = p.rows;
  std::size_t total = 1;
  for (std::size_t t = 0; t < length; ++t) {
    total *= m;
    if (total > (1u << 20))
      throw validation_error("enumerate_markov_prior: state space above 2^20 sequences");
  }
  const Vec pi = stationary_distribution(p);
  ExplicitPrior prior;
  prior.radix.assign(length, static_cast<int>(m));
  prior.support.reserve(total);
  std::vector<int> seq(length, 0);
  for (std::size_t n = 0; n < total; ++n) {
    double prob = pi[static_cast<std::size_t>(seq[0])];
    for (std::size_t t = 0; t + 1 < length; ++t)
      prob *= p(static_cast<std::size_t>(seq[t]), static_cast<std::size_t>(seq[t + 1]));
    prior.support.push_back({seq, prob});
    for (std::size_t t = length; t-- > 0;) {
      if (++seq[t] < static_cast<int>(m)) break;
      seq[t] = 0;
    }
  }
  return prior;
}

// Brute-force influence point: enumerate hidden sets directly on the
// explicit prior and take the worst revealed assignment for each. The
// hidden set must contain the secret index plus all of must_hide and may
// have at most b entries; exhaustive mode tries every such subset,
// otherwise only contiguous windows.
inline double brute_force_ab_oracle(const ExplicitPrior& prior, const SecretPair& secret,
                                    int b, const std::vector<int>& must_hide = {},
                                    bool exhaustive = false) {
  const std::size_t t = prior.radix.size();
  if (t == 0 || t > 24) throw validation_error("oracle: 1..24 positions supported");
  for (int r : prior.radix)
    if (r < 2) throw validation_error("oracle: alphabet sizes must be >= 2");
  if (secret.index < 0 || static_cast<std::size_t>(secret.index) >= t)
    throw validation_error("oracle: secret index out of range");
  if (secret.value_a == secret.value_b || secret.value_a < 0 || secret.value_b < 0 ||
      secret.value_a >= prior.radix[secret.index] ||
      secret.value_b >= prior.radix[secret.index])
    throw validation_error("oracle: bad secret value pair");
  if (b < 1) throw validation_error("oracle: b >= 1 required");

  double total = 0.0, marg_a = 0.0, marg_b = 0.0;
  for (const auto& [seq, prob] : prior.support) {
    if (seq.size() != t) throw validation_error("oracle: sequence length mismatch");
    if (prob < 0.0) throw validation_error("oracle: negative probability");
    for (std::size_t i = 0; i < t; ++i)
      if (seq[i] < 0 || seq[i] >= prior.radix[i])
        throw validation_error("oracle: sequence value out of range");
    total += prob;
    if (seq[secret.index] == secret.value_a) marg_a += prob;
    if (seq[secret.index] == secret.value_b) marg_b += prob;
  }
  if (std::fabs(total - 1.0) > 1e-6)
    throw validation_error("oracle: prior mass sums to " + std::to_string(total));
  if (marg_a <= 0.0 || marg_b <= 0.0)
    throw validation_error("oracle: a secret value has zero prior probability");

  std::uint32_t targets = 1u << secret.index;
  for (int i : must_hide) {
    if (i < 0 || static_cast<std::size_t>(i) >= t)
      throw validation_error("oracle: must_hide index out of range");
    targets |= 1u << i;
  }
  if (std::popcount(targets) > b)
    throw validation_error("oracle: required hidden entries already exceed b");

  std::vector<std::uint32_t> hidden_sets;
  if (exhaustive) {
    if (t > 16) throw validation_error("oracle: exhaustive mode supports up to 16 positions");
    for (std::uint32_t mask = 0; mask < (1u << t); ++mask)
      if ((mask & targets) == targets && std::popcount(mask) <= b)
        hidden_sets.push_back(mask);
  } else {
    const int lo_t = std::countr_zero(targets);
    const int hi_t = 31 - std::countl_zero(targets);
    for (int lo = std::max(0, hi_t - b + 1); lo <= lo_t; ++lo) {
      for (int hi = hi_t; hi < static_cast<int>(t) && hi - lo + 1 <= b; ++hi) {
        std::uint32_t mask = 0;
        for (int i = lo; i <= hi; ++i) mask |= 1u << i;
        hidden_sets.push_back(mask);
      }
    }
  }

  double best = kInf;
  std::vector<std::size_t> stride(t, 0);
  for (const std::uint32_t mask : hidden_sets) {
    std::size_t cells = 1;
    for (std::size_t i = t; i-- > 0;) {
      if (mask & (1u << i)) continue;
      stride[i] = cells;
      cells *= static_cast<std::size_t>(prior.radix[i]);
      if (cells > (1u << 20))
        throw validation_error("oracle: revealed state space above 2^20 cells");
    }
    std::vector<double> cond_a(cells, 0.0), cond_b(cells, 0.0);
    for (const auto& [seq, prob] : prior.support) {
      if (prob == 0.0) continue;
      const int v = seq[secret.index];
      if (v != secret.value_a && v != secret.value_b) continue;
      std::size_t cell = 0;
      for (std::size_t i = 0; i < t; ++i)
        if (!(mask & (1u << i))) cell += stride[i] * static_cast<std::size_t>(seq[i]);
      (v == secret.value_a ? cond_a : cond_b)[cell] += prob;
    }
    double part = 0.0;
    for (std::size_t cell = 0; cell < cells && part < kInf; ++cell) {
      const double pa = cond_a[cell] / marg_a;
      const double pb = cond_b[cell] / marg_b;
      if (pa > 0.0 && pb > 0.0)
        part = std::max(part, std::fabs(std::log(pa / pb)));
      else if (pa > 0.0 || pb > 0.0)
        part = kInf;
    }
    best = std::min(best, part);
  }
  return best;
}

struct GaussianSweepParams {
  double gamma = 5.0;             // sweep half-width for revealed values and bins
  double delta = 0.1;             // secret bin width
  std::size_t mu_grid_points = 2001;
};

// Influence curve for a stationary squared-exponential Gaussian sequence.
// Secrets are width-delta bins of the centre coordinate; for each budget
// the hidden set keeps the b-1 nearest neighbours and the revealed block
// collapses to its one-dimensional conditional mean, which is swept over
// its reachable range. Grid maxima make each point a (slightly) inner
// approximation, tightened to be non-increasing across budgets.
inline AbCurve gaussian_ab_curve(std::size_t n, double lengthscale, int b_max,
                                 const GaussianSweepParams& params = {}) {
  if (b_max < 1 || static_cast<std::size_t>(b_max) >= n)
    throw validation_error("gaussian_ab_curve: need 1 <= b_max < n");
  if (params.gamma <= 0.0 || params.delta <= 0.0 || params.delta >= params.gamma ||
      params.mu_grid_points < 3)
    throw validation_error("gaussian_ab_curve: bad sweep parameters");
  const Mat sigma = gaussian_covariance(n, lengthscale);
  const std::size_t centre = (n + 1) / 2 - 1;

  // Bin grid over [-gamma, gamma-delta] at half-bin steps, shared by all
  // budgets; baseline is the unit-variance marginal of the centre site.
  std::vector<double> r_grid;
  for (double r = -params.gamma; r <= params.gamma - params.delta + 1e-12;
       r += params.delta / 2.0)
    r_grid.push_back(r);
  std::vector<double> log_base(r_grid.size());
  for (std::size_t k = 0; k < r_grid.size(); ++k) {
    const double mass = normal_cdf(r_grid[k] + params.delta) - normal_cdf(r_grid[k]);
    log_base[k] = std::log(std::max(mass, 1e-300));
  }

  // Neighbour order: farthest first, ties to the lower index; budget b
  // reveals the first n-b of these.
  std::vector<std::size_t> by_distance;
  for (std::size_t j = 0; j < n; ++j)
    if (j != centre) by_distance.push_back(j);
  std::sort(by_distance.begin(), by_distance.end(), [&](std::size_t x, std::size_t y) {
    const std::size_t dx = x > centre ? x - centre : centre - x;
    const std::size_t dy = y > centre ? y - centre : centre - y;
    return dx != dy ? dx > dy : x < y;
  });

  AbCurve curve;
  curve.provenance = "sweep";
  double running = kInf;
  for (int b = 1; b <= b_max; ++b) {
    const std::size_t m = n - static_cast<std::size_t>(b);
    std::vector<std::size_t> revealed(by_distance.begin(), by_distance.begin() + m);
    Mat s_ll(m, m);
    Vec s_lc(m);
    for (std::size_t i = 0; i < m; ++i) {
      s_lc[i] = sigma(revealed[i], centre);
      for (std::size_t j = 0; j < m; ++j) s_ll(i, j) = sigma(revealed[i], revealed[j]);
    }
    const Vec w = solve_linear(s_ll, s_lc);
    double var = sigma(centre, centre), mu_bound = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      var -= s_lc[i] * w[i];
      mu_bound += std::fabs(w[i]);
    }
    mu_bound *= params.gamma;
    if (var <= 0.0)
      throw numeric_error("gaussian_ab_curve: conditional variance collapsed at b=" +
                          std::to_string(b));
    const double sd = std::sqrt(var);

    double worst = 0.0;
    for (std::size_t g = 0; g < params.mu_grid_points; ++g) {
      const double mu = -mu_bound + 2.0 * mu_bound * static_cast<double>(g) /
                                        static_cast<double>(params.mu_grid_points - 1);
      double hi = -kInf, lo = kInf;
      for (std::size_t k = 0; k < r_grid.size(); ++k) {
        const double mass = normal_cdf((r_grid[k] + params.delta - mu) / sd) -
                            normal_cdf((r_grid[k] - mu) / sd);
        const double f = std::log(std::max(mass, 1e-300)) - log_base[k];
        hi = std::max(hi, f);
        lo = std::min(lo, f);
      }
      worst = std::max(worst, hi - lo);
    }
    running = std::min(running, worst);
    curve.points.push_back({b, running});
  }
  return curve;
}

}  // namespace pufferkit
