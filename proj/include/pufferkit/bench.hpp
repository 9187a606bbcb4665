// Copyright 2026 The Pufferkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Experiment harness: synthesize sticky-chain sequences, release the top-K
// state counts through four budget-matched mechanisms, score the predicted
// rankings, and aggregate per-trial metric means into emit-able reports.
//
// The four arms share one ledger discipline: every run must compose to the
// configured budget (exactly for the single-release and linear arms, never
// above it for the multi-query arm).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "pufferkit/common.hpp"
#include "pufferkit/composition.hpp"
#include "pufferkit/influence.hpp"
#include "pufferkit/linalg.hpp"
#include "pufferkit/mechanisms.hpp"
#include "pufferkit/metrics.hpp"
#include "pufferkit/numeric.hpp"

namespace pufferkit {

// Mechanism arms, in report order. "ours-exp" and "mqm" translate the budget
// through the entry influence curve; the "gdp-*" arms pay the full group
// factor (budget / entry_count) instead.
inline const std::vector<std::string>& known_mechanisms() {
  static const std::vector<std::string> kAll = {"ours-exp", "mqm", "gdp-exp",
                                                "gdp-lap"};
  return kAll;
}

inline Vec geometric_weights(std::size_t m, double ratio) {
  if (m == 0) throw validation_error("geometric_weights: need at least one state");
  if (!(ratio > 0.0) || ratio > 1.0)
    throw validation_error("geometric_weights: ratio must be in (0, 1]");
  Vec w(m);
  double total = 0.0;
  double cur = 1.0;
  for (std::size_t i = 0; i < m; ++i, cur *= ratio) total += w[i] = cur;
  for (double& x : w) x /= total;
  return w;
}

// Defaults are the frozen benchmark setting: a mildly skewed visit profile
// keeps the true ranking stable and every mechanism off its floor and
// ceiling across the budget range, and 80 groups per trial separate the
// four accuracy curves well beyond their standard errors.
struct ExperimentConfig {
  std::size_t num_states = 10;
  double self_weight = 0.8;  // P = s*I + (1-s)*1*w^T
  Vec base_weights = geometric_weights(10, 0.95);  // empty means uniform
  std::size_t length = 200;  // entries per sequence; one sequence = one unit
  std::size_t num_sequences = 500;  // per group
  std::size_t groups = 80;
  std::size_t k = 3;
  std::vector<double> eps_p = {0.5, 1.0, 2.0, 3.0, 4.0, 5.0};
  std::size_t trials = 20;
  std::uint64_t seed = 0;
  int b_max = 100;
  std::vector<std::string> mechanisms = known_mechanisms();
};

inline void validate_experiment_config(const ExperimentConfig& cfg) {
  if (cfg.num_states < 2)
    throw validation_error("experiment config: need at least two states");
  if (!(cfg.self_weight >= 0.0) || cfg.self_weight >= 1.0)
    throw validation_error("experiment config: self weight must be in [0, 1)");
  if (!cfg.base_weights.empty()) {
    if (cfg.base_weights.size() != cfg.num_states)
      throw validation_error("experiment config: base weight count != num_states");
    double total = 0.0;
    for (double w : cfg.base_weights) {
      if (!(w > 0.0))
        throw validation_error("experiment config: base weights must be positive");
      total += w;
    }
    if (std::abs(total - 1.0) > 1e-9)
      throw validation_error("experiment config: base weights must sum to 1");
  }
  if (cfg.length < 3)
    throw validation_error("experiment config: sequence length must be >= 3");
  if (cfg.num_sequences == 0)
    throw validation_error("experiment config: need at least one sequence");
  if (cfg.groups == 0)
    throw validation_error("experiment config: need at least one group");
  if (cfg.k == 0 || cfg.k > cfg.num_states)
    throw validation_error("experiment config: need 1 <= k <= num_states");
  if (cfg.eps_p.empty())
    throw validation_error("experiment config: need at least one budget");
  for (double e : cfg.eps_p)
    if (!(e > 0.0))
      throw validation_error("experiment config: budgets must be positive");
  if (cfg.trials == 0)
    throw validation_error("experiment config: need at least one trial");
  if (cfg.b_max < 1)
    throw validation_error("experiment config: b_max must be >= 1");
  if (static_cast<std::size_t>(cfg.b_max) + 2 > cfg.length)
    throw validation_error("experiment config: b_max too large for the chain (b <= T-2)");
  if (cfg.mechanisms.empty())
    throw validation_error("experiment config: need at least one mechanism");
  const auto& all = known_mechanisms();
  for (std::size_t i = 0; i < cfg.mechanisms.size(); ++i) {
    const std::string& name = cfg.mechanisms[i];
    if (std::find(all.begin(), all.end(), name) == all.end())
      throw validation_error("experiment config: unknown mechanism '" + name + "'");
    for (std::size_t j = i + 1; j < cfg.mechanisms.size(); ++j)
      if (cfg.mechanisms[j] == name)
        throw validation_error("experiment config: duplicate mechanism '" + name + "'");
  }
}

// Resolved stationary target (empty base_weights selects uniform).
inline Vec config_weights(const ExperimentConfig& cfg) {
  if (!cfg.base_weights.empty()) return cfg.base_weights;
  return Vec(cfg.num_states, 1.0 / static_cast<double>(cfg.num_states));
}

// P = s*I + (1-s)*1*w^T. Every row mixes toward w, so w is the exact
// stationary distribution for any s in [0, 1).
inline Mat sticky_transition_matrix(std::size_t m, double self_weight, const Vec& w) {
  if (m < 2) throw validation_error("sticky chain: need at least two states");
  if (!(self_weight >= 0.0) || self_weight >= 1.0)
    throw validation_error("sticky chain: self weight must be in [0, 1)");
  if (w.size() != m) throw validation_error("sticky chain: weight size != m");
  double total = 0.0;
  for (double x : w) {
    if (!(x > 0.0)) throw validation_error("sticky chain: weights must be positive");
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw validation_error("sticky chain: weights must sum to 1");
  Mat p(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      p(i, j) = (1.0 - self_weight) * w[j] + (i == j ? self_weight : 0.0);
  return p;
}

struct SyntheticDataset {
  std::vector<std::vector<int>> sequences;
  std::vector<std::int64_t> counts;  // occurrences per state, all sequences
};

namespace detail {

inline std::size_t sample_categorical(const Vec& cdf, double u) {
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  const std::size_t i = static_cast<std::size_t>(it - cdf.begin());
  return std::min(i, cdf.size() - 1);  // guard the u ~ 1 edge
}

inline Vec cumulative(const Vec& w) {
  Vec cdf(w.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) cdf[i] = acc += w[i];
  return cdf;
}

}  // namespace detail

// One group's worth of sequences, started from the stationary distribution.
inline SyntheticDataset generate_dataset(const ExperimentConfig& cfg,
                                         std::mt19937_64& rng) {
  validate_experiment_config(cfg);
  const Vec w = config_weights(cfg);
  const Mat p = sticky_transition_matrix(cfg.num_states, cfg.self_weight, w);
  const Vec start_cdf = detail::cumulative(w);
  std::vector<Vec> row_cdf(cfg.num_states);
  for (std::size_t i = 0; i < cfg.num_states; ++i) {
    Vec row(cfg.num_states);
    for (std::size_t j = 0; j < cfg.num_states; ++j) row[j] = p(i, j);
    row_cdf[i] = detail::cumulative(row);
  }
  SyntheticDataset out;
  out.sequences.resize(cfg.num_sequences);
  out.counts.assign(cfg.num_states, 0);
  for (auto& seq : out.sequences) {
    seq.resize(cfg.length);
    std::size_t state = detail::sample_categorical(start_cdf, uniform_open(rng));
    seq[0] = static_cast<int>(state);
    ++out.counts[state];
    for (std::size_t t = 1; t < cfg.length; ++t) {
      state = detail::sample_categorical(row_cdf[state], uniform_open(rng));
      seq[t] = static_cast<int>(state);
      ++out.counts[state];
    }
  }
  return out;
}

// Influence curve for the configured chain, secret at the middle entry.
// Computed once per experiment; covers every secret pair at that entry.
inline AbCurve experiment_curve(const ExperimentConfig& cfg) {
  validate_experiment_config(cfg);
  const Mat p = sticky_transition_matrix(cfg.num_states, cfg.self_weight,
                                         config_weights(cfg));
  return chain_ab_curve(p, cfg.length, cfg.length / 2, cfg.b_max);
}

namespace detail {

// Degenerate curve whose only point can never win the translation, so
// best_epsilon_dp always lands on the group fallback eps_p / entry_count.
// This is how the group-DP arms reuse the Pufferfish mechanism code paths.
inline AbCurve group_fallback_curve() {
  AbCurve c;
  c.provenance = "user-supplied";
  c.points = {{1, kInf}};
  return c;
}

// Rank state ids by noisy value, descending, ties toward the smaller id.
inline std::vector<std::size_t> rank_by_value(const Vec& values, std::size_t k) {
  std::vector<std::size_t> ids(values.size());
  std::iota(ids.begin(), ids.end(), std::size_t{0});
  std::sort(ids.begin(), ids.end(), [&](std::size_t a, std::size_t b) {
    if (values[a] != values[b]) return values[a] > values[b];
    return a < b;
  });
  ids.resize(k);
  return ids;
}

}  // namespace detail

struct MechanismRun {
  std::vector<std::size_t> predicted;  // k state ids, best first
  CompositionLedger ledger;
};

// One mechanism arm on one group's counts. The caller owns budget checks.
inline MechanismRun run_mechanism(const ExperimentConfig& cfg,
                                  const std::string& mechanism,
                                  const std::vector<std::int64_t>& counts,
                                  double eps_p, const AbCurve& curve,
                                  std::mt19937_64& rng,
                                  std::uint64_t seed_label = 0) {
  if (counts.size() != cfg.num_states)
    throw validation_error("run_mechanism: count vector size != num_states");
  Vec utilities(counts.begin(), counts.end());
  MechanismRun out;
  const std::string family = "bench";
  if (mechanism == "ours-exp" || mechanism == "gdp-exp") {
    const AbCurve& used =
        mechanism == "ours-exp" ? curve : detail::group_fallback_curve();
    const TopkRelease rel = pufferfish_exponential_topk(
        utilities, cfg.k, eps_p, used, cfg.length, 1.0, rng, seed_label);
    for (int id : rel.order) out.predicted.push_back(static_cast<std::size_t>(id));
    out.ledger.add(ledger_entry_from_receipt(rel.receipt, family));
    return out;
  }
  if (mechanism == "mqm" || mechanism == "gdp-lap") {
    const AbCurve& used =
        mechanism == "mqm" ? curve : detail::group_fallback_curve();
    const MqmRelease rel = mqm_laplace_baseline(utilities, eps_p, used,
                                                cfg.length, rng, seed_label);
    out.predicted = detail::rank_by_value(rel.values, cfg.k);
    for (const MechanismReceipt& r : rel.receipts)
      out.ledger.add(ledger_entry_from_receipt(r, family));
    return out;
  }
  throw validation_error("run_mechanism: unknown mechanism '" + mechanism + "'");
}

struct MetricSummary {
  double mean = 0.0;
  double stderr_value = 0.0;
};

struct ReportCell {
  double eps_p = 0.0;
  std::string mechanism;
  // Ordered: acc@1..acc@k, hit_rate, ndcg, l1_error.
  std::vector<std::pair<std::string, MetricSummary>> metrics;
};

struct Report {
  ExperimentConfig config;
  std::vector<ReportCell> cells;  // eps_p major, mechanism in config order
  double runtime_seconds = 0.0;
};

inline std::vector<std::string> metric_names(std::size_t k) {
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= k; ++i) names.push_back("acc@" + std::to_string(i));
  names.push_back("hit_rate");
  names.push_back("ndcg");
  names.push_back("l1_error");
  return names;
}

inline Report run_experiment(const ExperimentConfig& cfg) {
  validate_experiment_config(cfg);
  const auto started = std::chrono::steady_clock::now();
  const AbCurve curve = experiment_curve(cfg);
  const std::vector<std::string> names = metric_names(cfg.k);
  const std::size_t n_metrics = names.size();

  // samples[eps][mech][metric] = one value per trial (mean over groups).
  std::vector<std::vector<std::vector<std::vector<double>>>> samples(
      cfg.eps_p.size(),
      std::vector<std::vector<std::vector<double>>>(
          cfg.mechanisms.size(), std::vector<std::vector<double>>(n_metrics)));

  for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
    std::mt19937_64 rng = trial_rng(cfg.seed, trial);
    std::vector<std::vector<std::int64_t>> group_counts;
    group_counts.reserve(cfg.groups);
    for (std::size_t g = 0; g < cfg.groups; ++g)
      group_counts.push_back(generate_dataset(cfg, rng).counts);

    for (std::size_t ei = 0; ei < cfg.eps_p.size(); ++ei) {
      const double eps = cfg.eps_p[ei];
      for (std::size_t mi = 0; mi < cfg.mechanisms.size(); ++mi) {
        const std::string& mech = cfg.mechanisms[mi];
        std::vector<double> totals(n_metrics, 0.0);
        for (std::size_t g = 0; g < cfg.groups; ++g) {
          const MechanismRun run = run_mechanism(cfg, mech, group_counts[g],
                                                 eps, curve, rng, trial);
          // Refuse to continue past an overspent ledger; the single-release
          // and linear arms must also land exactly on the budget.
          run.ledger.remaining(eps * (1.0 + 1e-9) + 1e-12);
          const double spent = run.ledger.total();
          if (mech != "mqm" && std::abs(spent - eps) > 1e-9 * std::max(1.0, eps))
            throw integrity_error("run_experiment: " + mech +
                                  " did not spend its exact budget");
          RankedResult instance;
          instance.predicted = run.predicted;
          instance.true_counts = group_counts[g];
          instance.k = cfg.k;
          const RankingScores scores = score_ranked_result(instance);
          for (std::size_t i = 0; i < cfg.k; ++i)
            totals[i] += static_cast<double>(scores.acc[i]);
          totals[cfg.k] += scores.hit_rate;
          totals[cfg.k + 1] += scores.ndcg;
          totals[cfg.k + 2] += static_cast<double>(scores.l1);
        }
        for (std::size_t i = 0; i < n_metrics; ++i)
          samples[ei][mi][i].push_back(totals[i] /
                                       static_cast<double>(cfg.groups));
      }
    }
  }

  Report report;
  report.config = cfg;
  for (std::size_t ei = 0; ei < cfg.eps_p.size(); ++ei) {
    for (std::size_t mi = 0; mi < cfg.mechanisms.size(); ++mi) {
      ReportCell cell;
      cell.eps_p = cfg.eps_p[ei];
      cell.mechanism = cfg.mechanisms[mi];
      for (std::size_t i = 0; i < n_metrics; ++i) {
        const auto [mean, se] = mean_stderr(samples[ei][mi][i]);
        cell.metrics.push_back({names[i], {mean, se}});
      }
      report.cells.push_back(std::move(cell));
    }
  }
  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
          .count();
  return report;
}

// --- serialization ---

inline nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  return nlohmann::json{{"num_states", cfg.num_states},
                        {"self_weight", cfg.self_weight},
                        {"base_weights", cfg.base_weights},
                        {"length", cfg.length},
                        {"num_sequences", cfg.num_sequences},
                        {"groups", cfg.groups},
                        {"k", cfg.k},
                        {"eps_p", cfg.eps_p},
                        {"trials", cfg.trials},
                        {"seed", cfg.seed},
                        {"b_max", cfg.b_max},
                        {"mechanisms", cfg.mechanisms}};
}

// Overlay semantics: absent keys keep the base value, unknown keys are
// rejected so config typos fail loudly instead of silently running defaults.
inline ExperimentConfig config_from_json(const nlohmann::json& j,
                                         ExperimentConfig base = {}) {
  if (!j.is_object()) throw validation_error("experiment config: expected a JSON object");
  static const std::vector<std::string> kKeys = {
      "num_states", "self_weight", "base_weights", "length",
      "num_sequences", "groups", "k", "eps_p", "trials", "seed",
      "b_max", "mechanisms"};
  for (const auto& item : j.items())
    if (std::find(kKeys.begin(), kKeys.end(), item.key()) == kKeys.end())
      throw validation_error("experiment config: unknown key '" + item.key() + "'");
  try {
    if (j.contains("num_states")) base.num_states = j["num_states"].get<std::size_t>();
    if (j.contains("self_weight")) base.self_weight = j["self_weight"].get<double>();
    if (j.contains("base_weights")) base.base_weights = j["base_weights"].get<Vec>();
    if (j.contains("length")) base.length = j["length"].get<std::size_t>();
    if (j.contains("num_sequences"))
      base.num_sequences = j["num_sequences"].get<std::size_t>();
    if (j.contains("groups")) base.groups = j["groups"].get<std::size_t>();
    if (j.contains("k")) base.k = j["k"].get<std::size_t>();
    if (j.contains("eps_p")) base.eps_p = j["eps_p"].get<std::vector<double>>();
    if (j.contains("trials")) base.trials = j["trials"].get<std::size_t>();
    if (j.contains("seed")) base.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("b_max")) base.b_max = j["b_max"].get<int>();
    if (j.contains("mechanisms"))
      base.mechanisms = j["mechanisms"].get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw validation_error(std::string("experiment config: ") + e.what());
  }
  validate_experiment_config(base);
  return base;
}

namespace detail {

inline std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace detail

struct CsvRow {
  double eps_p = 0.0;
  std::string mechanism;
  std::string metric;
  double mean = 0.0;
  double stderr_value = 0.0;
};

inline std::vector<CsvRow> report_rows(const Report& report) {
  std::vector<CsvRow> rows;
  for (const ReportCell& cell : report.cells)
    for (const auto& [name, summary] : cell.metrics)
      rows.push_back({cell.eps_p, cell.mechanism, name, summary.mean,
                      summary.stderr_value});
  return rows;
}

inline std::string rows_to_csv(const std::vector<CsvRow>& rows) {
  std::string out = "eps_p,mechanism,metric,mean,stderr\n";
  for (const CsvRow& r : rows) {
    out += detail::format_double(r.eps_p);
    out += ',';
    out += r.mechanism;
    out += ',';
    out += r.metric;
    out += ',';
    out += detail::format_double(r.mean);
    out += ',';
    out += detail::format_double(r.stderr_value);
    out += '\n';
  }
  return out;
}

inline std::string report_to_csv(const Report& report) {
  return rows_to_csv(report_rows(report));
}

inline std::vector<CsvRow> parse_report_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "eps_p,mechanism,metric,mean,stderr")
    throw validation_error("report csv: missing or malformed header");
  std::vector<CsvRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string cell;
    std::vector<std::string> parts;
    while (std::getline(fields, cell, ',')) parts.push_back(cell);
    if (parts.size() != 5)
      throw validation_error("report csv: expected 5 fields, got line '" + line + "'");
    CsvRow row;
    try {
      row.eps_p = std::stod(parts[0]);
      row.mechanism = parts[1];
      row.metric = parts[2];
      row.mean = std::stod(parts[3]);
      row.stderr_value = std::stod(parts[4]);
    } catch (const std::exception&) {
      throw validation_error("report csv: non-numeric field in line '" + line + "'");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// One table per metric, each with a row per budget and a column per
// mechanism, mirroring the per-metric tables of ranking benchmarks.
inline std::string report_to_markdown(const Report& report) {
  const std::vector<std::string> names = metric_names(report.config.k);
  const auto& mechs = report.config.mechanisms;
  std::ostringstream out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    out << "### " << names[i] << "\n\n";
    out << "| eps_p |";
    for (const auto& m : mechs) out << ' ' << m << " |";
    out << "\n|---|";
    for (std::size_t j = 0; j < mechs.size(); ++j) out << "---|";
    out << '\n';
    for (double eps : report.config.eps_p) {
      out << "| " << detail::format_double(eps) << " |";
      for (const auto& m : mechs) {
        for (const ReportCell& cell : report.cells) {
          if (cell.eps_p != eps || cell.mechanism != m) continue;
          const MetricSummary& s = cell.metrics[i].second;
          char buf[64];
          std::snprintf(buf, sizeof(buf), " %.4f ± %.4f |", s.mean,
                        s.stderr_value);
          out << buf;
          break;
        }
      }
      out << '\n';
    }
    out << '\n';
  }
  return out.str();
}

inline nlohmann::json report_to_json(const Report& report) {
  nlohmann::json cells = nlohmann::json::array();
  for (const ReportCell& cell : report.cells) {
    nlohmann::json metrics = nlohmann::json::object();
    for (const auto& [name, summary] : cell.metrics)
      metrics[name] = {{"mean", summary.mean}, {"stderr", summary.stderr_value}};
    cells.push_back({{"eps_p", cell.eps_p},
                     {"mechanism", cell.mechanism},
                     {"metrics", metrics}});
  }
  return nlohmann::json{{"config", config_to_json(report.config)},
                        {"runtime_seconds", report.runtime_seconds},
                        {"cells", cells}};
}

// format is one of "csv", "json", "markdown".
inline void emit_report(const Report& report, const std::string& format,
                        const std::string& path) {
  std::string payload;
  if (format == "csv") {
    payload = report_to_csv(report);
  } else if (format == "json") {
    payload = report_to_json(report).dump(2);
    payload += '\n';
  } else if (format == "markdown") {
    payload = report_to_markdown(report);
  } else {
    throw validation_error("emit_report: unknown format '" + format + "'");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw validation_error("emit_report: cannot open '" + path + "'");
  out << payload;
  if (!out) throw validation_error("emit_report: write failed for '" + path + "'");
}

}  // namespace pufferkit
