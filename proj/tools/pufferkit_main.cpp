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

// Command line front end. Subcommands:
//   curve          influence curves (two-state closed form, general chain
//                  oracle, Gaussian sweep) printed as JSON
//   mechanize      one mechanism release, receipt appended to a ledger file
//   bench          the synthetic ranking benchmark with report emission
//   nfc-check      no-free-lunch certificate check for a likelihood matrix
//   collapse-demo  Monte-Carlo demos of the protocol-collapse examples
//   budget         composed ledger total against an optional cap
//
// Exit codes: 0 success (and help), 1 unexpected error or failed check,
// 2 validation or usage error, 3 budget exhausted.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pufferkit/bench.hpp"
#include "pufferkit/collapse.hpp"
#include "pufferkit/composition.hpp"
#include "pufferkit/influence.hpp"
#include "pufferkit/mechanisms.hpp"
#include "pufferkit/nfc.hpp"

namespace {

using namespace pufferkit;

nlohmann::json receipt_to_json(const MechanismReceipt& r) {
  return nlohmann::json{{"kind", r.kind},       {"eps_p", r.eps_p},
                        {"a", r.a},             {"b", r.b},
                        {"eps_dp", r.eps_dp},   {"fallback", r.fallback},
                        {"output_dim", r.output_dim}, {"seed", r.seed}};
}

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw validation_error(path + ": " + e.what());
  }
  return j;
}

struct GlobalOpts {
  std::uint64_t seed = 0;
  std::string config_path;
  std::string out_dir = ".";
  std::string format = "csv";
};

struct CurveOpts {
  std::string kind = "markov";
  double p = 0.5, q = 0.5;
  int b_max = 8;
  std::size_t length = 0;  // 0: both window ends treated as interior
  std::size_t secret = 0;
  bool secret_set = false;
  std::string transition_path;
  std::size_t n = 21;
  double lengthscale = 1.0;
  double gamma = 5.0, delta = 0.1;
};

int run_curve(const CurveOpts& opt) {
  AbCurve curve;
  if (opt.kind == "markov") {
    const BinaryChain chain{opt.p, opt.q};
    curve.provenance = "closed-form";
    for (int b = 1; b <= opt.b_max; ++b) {
      const double a =
          opt.length == 0
              ? binary_chain_ab_point(chain, b)
              : binary_chain_ab_point(chain, b, opt.length,
                                      opt.secret_set ? opt.secret
                                                     : opt.length / 2);
      curve.points.push_back({b, a});
    }
  } else if (opt.kind == "chain") {
    if (opt.transition_path.empty())
      throw validation_error("curve: --transition is required for --kind chain");
    if (opt.length == 0)
      throw validation_error("curve: --length is required for --kind chain");
    const nlohmann::json j = load_json_file(opt.transition_path);
    if (!j.is_array() || j.empty())
      throw validation_error("curve: transition file must hold a 2D array");
    Mat p(j.size(), j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (!j[i].is_array() || j[i].size() != j.size())
        throw validation_error("curve: transition matrix must be square");
      for (std::size_t c = 0; c < j.size(); ++c)
        p(i, c) = j[i][c].get<double>();
    }
    curve = chain_ab_curve(p, opt.length,
                           opt.secret_set ? opt.secret : opt.length / 2,
                           opt.b_max);
  } else {  // gaussian
    GaussianSweepParams params;
    params.gamma = opt.gamma;
    params.delta = opt.delta;
    curve = gaussian_ab_curve(opt.n, opt.lengthscale, opt.b_max, params);
  }
  validate_curve(curve);
  std::cout << curve_to_json(curve).dump(2) << '\n';
  return 0;
}

struct MechanizeOpts {
  std::string mechanism = "laplace";
  std::vector<double> values;
  double eps_p = 0.0;
  double p = 0.5, q = 0.5;
  int b_max = 8;
  std::size_t length = 0;
  std::string curve_path;
  double sensitivity = 1.0;
  std::size_t k = 1;
  std::string ledger_path;
  std::string family = "cli";
};

int run_mechanize(const MechanizeOpts& opt, const GlobalOpts& global) {
  if (opt.length == 0)
    throw validation_error("mechanize: --length (protected entry count) is required");
  AbCurve curve;
  if (!opt.curve_path.empty()) {
    curve = curve_from_json(load_json_file(opt.curve_path));
  } else {
    const BinaryChain chain{opt.p, opt.q};
    curve.provenance = "closed-form";
    for (int b = 1; b <= opt.b_max; ++b)
      curve.points.push_back(
          {b, binary_chain_ab_point(chain, b, opt.length, opt.length / 2)});
  }
  std::mt19937_64 rng = trial_rng(global.seed, 0);

  nlohmann::json out;
  MechanismReceipt receipt;
  if (opt.mechanism == "laplace") {
    const LaplaceRelease rel =
        pufferfish_laplace(opt.values, opt.eps_p, curve, opt.length,
                           opt.sensitivity, rng, global.seed);
    receipt = rel.receipt;
    out = {{"kind", "laplace"}, {"values", rel.values}};
  } else if (opt.mechanism == "exp") {
    const TopkRelease rel =
        pufferfish_exponential_topk(opt.values, opt.k, opt.eps_p, curve,
                                    opt.length, opt.sensitivity, rng,
                                    global.seed);
    receipt = rel.receipt;
    out = {{"kind", "exponential-topk"}, {"order", rel.order}};
  } else {
    throw validation_error("mechanize: unknown mechanism '" + opt.mechanism + "'");
  }
  out["receipt"] = receipt_to_json(receipt);

  if (!opt.ledger_path.empty()) {
    CompositionLedger ledger;
    if (std::filesystem::exists(opt.ledger_path))
      ledger = CompositionLedger::load_jsonl(opt.ledger_path);
    ledger.add(ledger_entry_from_receipt(receipt, opt.family));
    ledger.save_jsonl(opt.ledger_path);
    out["ledger"] = {{"path", opt.ledger_path},
                     {"entries", ledger.entries().size()},
                     {"total", ledger.total()}};
  }
  std::cout << out.dump(2) << '\n';
  return 0;
}

int run_bench(const GlobalOpts& global, bool seed_overridden) {
  ExperimentConfig cfg;
  if (!global.config_path.empty())
    cfg = config_from_json(load_json_file(global.config_path), cfg);
  if (seed_overridden) cfg.seed = global.seed;
  const Report report = run_experiment(cfg);
  const std::string ext = global.format == "markdown" ? "md" : global.format;
  const std::string path = global.out_dir + "/report." + ext;
  emit_report(report, global.format, path);
  std::cout << "wrote " << path << " (" << report.cells.size() << " cells, "
            << report.runtime_seconds << " s)\n";
  return 0;
}

struct NfcOpts {
  std::string matrix_path;
  double eps = 0.0;
  std::vector<std::string> pairs;  // "left:right"
};

int run_nfc_check(const NfcOpts& opt) {
  const LikelihoodMatrix lm =
      likelihood_matrix_from_json(load_json_file(opt.matrix_path));
  std::vector<SecretLabelPair> pairs;
  if (!opt.pairs.empty()) {
    for (const std::string& spec : opt.pairs) {
      const auto colon = spec.find(':');
      if (colon == std::string::npos || colon == 0 || colon + 1 == spec.size())
        throw validation_error("nfc-check: --pair expects left:right, got '" +
                               spec + "'");
      pairs.push_back({spec.substr(0, colon), spec.substr(colon + 1)});
    }
  } else {
    const std::vector<std::string> secrets = distinct_secrets(lm);
    for (std::size_t i = 0; i < secrets.size(); ++i)
      for (std::size_t j = i + 1; j < secrets.size(); ++j)
        pairs.push_back({secrets[i], secrets[j]});
    if (pairs.empty())
      throw validation_error("nfc-check: matrix has fewer than two secrets");
  }
  const NfcReport report = check_nfc(lm, pairs, opt.eps);
  nlohmann::json violations = nlohmann::json::array();
  for (const NfcViolation& v : report.violations)
    violations.push_back({{"pair", v.pair.left + ":" + v.pair.right},
                          {"dataset", v.left_id},
                          {"epsilon0", v.epsilon0},
                          {"witness_output", v.witness_label}});
  const nlohmann::json out = {{"pass", report.pass},
                              {"epsilon", report.epsilon},
                              {"certificates", report.certificates.size()},
                              {"violations", violations},
                              {"note", report.note}};
  std::cout << out.dump(2) << '\n';
  return report.pass ? 0 : 1;
}

struct CollapseOpts {
  int example = 1;
  std::size_t trials = 100000;
};

int run_collapse_demo(const CollapseOpts& opt, const GlobalOpts& global) {
  CollapseScenario sc;
  if (opt.example == 1) {
    sc = default_example1_scenario();
  } else if (opt.example == 2) {
    sc = default_example2_scenario();
  } else if (opt.example == 3) {
    sc = default_example3_scenario();
  } else {
    throw validation_error("collapse-demo: --example must be 1, 2, or 3");
  }
  sc.seed = global.seed;
  const RunsEstimate est = estimate_expected_runs(sc, opt.trials);
  nlohmann::json out = {{"example", opt.example},
                        {"trials", est.trials},
                        {"mean_runs", est.mean},
                        {"stderr", est.stderr_value},
                        {"censored", est.censored},
                        {"attacks", "sound"}};
  if (opt.example == 1) {
    out["expected_runs_bound"] = example1_expected_runs_bound(sc);
  } else {
    // Both bit-release demos follow the same three-run law.
    out["expected_runs_law"] = 3.0;
  }
  if (opt.example == 3)
    out["epsilon_bound"] =
        example3_epsilon_bound(sc.l_t, sc.u_t, sc.l_f, sc.u_f);
  std::cout << out.dump(2) << '\n';
  return 0;
}

struct BudgetOpts {
  std::string ledger_path;
  double cap = 0.0;
  bool cap_set = false;
};

int run_budget(const BudgetOpts& opt) {
  const CompositionLedger ledger =
      CompositionLedger::load_jsonl(opt.ledger_path);
  nlohmann::json out = {{"entries", ledger.entries().size()},
                        {"total", ledger.total()}};
  if (opt.cap_set) {
    out["cap"] = opt.cap;
    out["remaining"] = ledger.remaining(opt.cap);  // throws when exhausted
  }
  std::cout << out.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "pufferkit: influence curves, budget-translated mechanisms, "
      "composition ledgers, no-free-lunch checks, and a ranking benchmark"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOpts global;
  auto* seed_opt = app.add_option("--seed", global.seed, "Random seed");
  app.add_option("--config", global.config_path,
                 "JSON experiment config (bench)");
  app.add_option("--out", global.out_dir, "Output directory (bench)");
  app.add_option("--format", global.format, "Report format (bench)")
      ->check(CLI::IsMember({"csv", "json", "markdown"}));

  CurveOpts curve_opt;
  auto* curve_cmd =
      app.add_subcommand("curve", "Compute an (a,b) influence curve");
  curve_cmd->add_option("--kind", curve_opt.kind, "Curve family")
      ->check(CLI::IsMember({"markov", "chain", "gaussian"}));
  curve_cmd->add_option("--p", curve_opt.p, "Two-state stay probability (state 0)");
  curve_cmd->add_option("--q", curve_opt.q, "Two-state stay probability (state 1)");
  curve_cmd->add_option("--b-max", curve_opt.b_max, "Largest budget point");
  curve_cmd->add_option("--length", curve_opt.length,
                        "Chain length (enables boundary saturation)");
  auto* secret_opt = curve_cmd->add_option("--secret", curve_opt.secret,
                                           "Secret entry index (default: middle)");
  curve_cmd->add_option("--transition", curve_opt.transition_path,
                        "JSON file with a square transition matrix (chain)");
  curve_cmd->add_option("--n", curve_opt.n, "Sequence length (gaussian)");
  curve_cmd->add_option("--ell", curve_opt.lengthscale,
                        "Correlation lengthscale (gaussian)");
  curve_cmd->add_option("--gamma", curve_opt.gamma, "Sweep half-width (gaussian)");
  curve_cmd->add_option("--delta", curve_opt.delta, "Secret bin width (gaussian)");

  MechanizeOpts mech_opt;
  auto* mech_cmd = app.add_subcommand(
      "mechanize", "Run one mechanism and append its receipt to a ledger");
  mech_cmd->add_option("--mechanism", mech_opt.mechanism, "laplace or exp")
      ->check(CLI::IsMember({"laplace", "exp"}));
  mech_cmd->add_option("--values", mech_opt.values, "Query answers")
      ->delimiter(',')
      ->required();
  mech_cmd->add_option("--eps-p", mech_opt.eps_p, "Pufferfish budget")->required();
  mech_cmd->add_option("--p", mech_opt.p, "Two-state stay probability (state 0)");
  mech_cmd->add_option("--q", mech_opt.q, "Two-state stay probability (state 1)");
  mech_cmd->add_option("--b-max", mech_opt.b_max, "Largest curve budget point");
  mech_cmd->add_option("--length", mech_opt.length,
                       "Protected entry count (chain length)");
  mech_cmd->add_option("--curve", mech_opt.curve_path,
                       "JSON curve file (overrides --p/--q)");
  mech_cmd->add_option("--sensitivity", mech_opt.sensitivity,
                       "Per-entry query sensitivity");
  mech_cmd->add_option("--k", mech_opt.k, "Selections for exp top-k");
  mech_cmd->add_option("--ledger", mech_opt.ledger_path, "Ledger JSONL path");
  mech_cmd->add_option("--family", mech_opt.family,
                       "Ledger family (one prior/secret setting)");

  auto* bench_cmd = app.add_subcommand(
      "bench", "Run the synthetic ranking benchmark and write a report");

  NfcOpts nfc_opt;
  auto* nfc_cmd = app.add_subcommand(
      "nfc-check", "Check no-free-lunch certificates for a likelihood matrix");
  nfc_cmd->add_option("--matrix", nfc_opt.matrix_path, "Likelihood matrix JSON")
      ->required();
  nfc_cmd->add_option("--eps", nfc_opt.eps, "Privacy level to certify")
      ->required();
  nfc_cmd->add_option("--pair", nfc_opt.pairs,
                      "Secret pair left:right (repeatable; default all pairs)");

  CollapseOpts collapse_opt;
  auto* collapse_cmd = app.add_subcommand(
      "collapse-demo", "Estimate expected runs for a collapse example");
  collapse_cmd->add_option("--example", collapse_opt.example, "1, 2, or 3");
  collapse_cmd->add_option("--trials", collapse_opt.trials, "Monte-Carlo trials");

  BudgetOpts budget_opt;
  auto* budget_cmd =
      app.add_subcommand("budget", "Compose a ledger and check a cap");
  budget_cmd->add_option("--ledger", budget_opt.ledger_path, "Ledger JSONL path")
      ->required();
  auto* cap_opt = budget_cmd->add_option("--cap", budget_opt.cap,
                                         "Total budget cap to check against");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  curve_opt.secret_set = secret_opt->count() > 0;
  budget_opt.cap_set = cap_opt->count() > 0;

  try {
    if (*curve_cmd) return run_curve(curve_opt);
    if (*mech_cmd) return run_mechanize(mech_opt, global);
    if (*bench_cmd) return run_bench(global, seed_opt->count() > 0);
    if (*nfc_cmd) return run_nfc_check(nfc_opt);
    if (*collapse_cmd) return run_collapse_demo(collapse_opt, global);
    if (*budget_cmd) return run_budget(budget_opt);
  } catch (const validation_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const budget_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
