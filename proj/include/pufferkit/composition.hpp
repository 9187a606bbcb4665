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
// Budget composition across releases on the same data. Correlated-prior
// budgets compose sub-additively: the prior-leakage part a is paid only
// once (the worst one), the per-entry noise parts accumulate. A ledger
// persists release records so long-running pipelines can account across
// processes; records from unrelated settings must never be mixed, so
// every record names its family and the ledger enforces agreement.

#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "pufferkit/common.hpp"
#include "pufferkit/mechanisms.hpp"

namespace pufferkit {

inline double compose_linear_dp(const std::vector<double>& eps) {
  double total = 0.0;
  for (double e : eps) {
    if (!(e >= 0.0)) throw validation_error("compose_linear_dp: negative budget");
    total += e;
  }
  return total;
}

// Sub-additive composition of (eps_p, a) budget pairs: the combined
// releases satisfy max a + sum (eps_p - a). Empty input composes to zero.
inline double compose_pufferfish(const std::vector<std::pair<double, double>>& budgets) {
  if (budgets.empty()) return 0.0;
  double max_a = 0.0, noise_sum = 0.0;
  for (const auto& [eps_p, a] : budgets) {
    if (!(eps_p > 0.0) || a < 0.0 || a > eps_p)
      throw validation_error("compose_pufferfish: need 0 <= a <= eps_p, eps_p > 0");
    max_a = std::max(max_a, a);
    noise_sum += eps_p - a;
  }
  return max_a + noise_sum;
}

struct LedgerEntry {
  std::string family;  // identifies the prior/secret setting, set by the caller
  std::string kind;
  double eps_p = 0.0;
  double a = 0.0;
  int b = 0;
  bool fallback = false;
  std::uint64_t seed = 0;
};

inline LedgerEntry ledger_entry_from_receipt(const MechanismReceipt& r,
                                             const std::string& family) {
  validate_receipt(r);
  if (family.empty()) throw validation_error("ledger entry: empty family");
  return {family, r.kind, r.eps_p, r.a, r.b, r.fallback, r.seed};
}

inline void validate_ledger_entry(const LedgerEntry& e) {
  if (e.family.empty() || e.kind.empty())
    throw validation_error("ledger entry: family and kind are required");
  if (!(e.eps_p > 0.0) || e.a < 0.0 || e.a > e.eps_p || e.b < 1)
    throw validation_error("ledger entry: bad budget fields");
}

// Append-only record of releases against one data setting.
class CompositionLedger {
 public:
  void add(const LedgerEntry& entry) {
    validate_ledger_entry(entry);
    if (!entries_.empty() && entries_.front().family != entry.family)
      throw integrity_error("ledger: record family '" + entry.family +
                            "' does not match existing family '" +
                            entries_.front().family + "'");
    entries_.push_back(entry);
  }

  const std::vector<LedgerEntry>& entries() const { return entries_; }

  double total() const {
    std::vector<std::pair<double, double>> budgets;
    budgets.reserve(entries_.size());
    for (const LedgerEntry& e : entries_) budgets.push_back({e.eps_p, e.a});
    return compose_pufferfish(budgets);
  }

  // Budget left under the cap; a ledger already past the cap is an error
  // state the caller must surface, not a number.
  double remaining(double cap) const {
    if (!(cap > 0.0)) throw validation_error("ledger: cap must be positive");
    const double left = cap - total();
    if (left < 0.0)
      throw budget_error("budget exhausted: composed total " + std::to_string(total()) +
                         " exceeds cap " + std::to_string(cap));
    return left;
  }

  void save_jsonl(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw validation_error("ledger: cannot open " + path + " for writing");
    for (const LedgerEntry& e : entries_) {
      const nlohmann::json j = {{"family", e.family}, {"kind", e.kind},
                                {"eps_p", e.eps_p},   {"a", e.a},
                                {"b", e.b},           {"fallback", e.fallback},
                                {"seed", e.seed}};
      out << j.dump() << '\n';
    }
  }

  static CompositionLedger load_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("ledger: cannot open " + path);
    CompositionLedger ledger;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(line);
      } catch (const nlohmann::json::exception& e) {
        throw validation_error("ledger: bad record on line " + std::to_string(line_no) +
                               ": " + e.what());
      }
      LedgerEntry entry;
      entry.family = j.at("family").get<std::string>();
      entry.kind = j.at("kind").get<std::string>();
      entry.eps_p = j.at("eps_p").get<double>();
      entry.a = j.at("a").get<double>();
      entry.b = j.at("b").get<int>();
      entry.fallback = j.value("fallback", false);
      entry.seed = j.value("seed", std::uint64_t{0});
      ledger.add(entry);
    }
    return ledger;
  }

 private:
  std::vector<LedgerEntry> entries_;
};

}  // namespace pufferkit
