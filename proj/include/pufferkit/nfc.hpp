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

// Composability audit for finite mechanisms. A mechanism passes at level
// epsilon when, for every ordered pair of secrets and every dataset
// consistent with the left secret, some convex combination of the
// right-secret rows dominates the left row's log-likelihoods within
// epsilon. The optimal level per (pair, left dataset) is a small linear
// program; its dual produces the combination as a checkable certificate.
// Passing is necessary for linear composition, never sufficient.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "pufferkit/common.hpp"
#include "pufferkit/linalg.hpp"
#include "pufferkit/lp.hpp"

namespace pufferkit {

struct DatasetTag {
  std::string id;
  std::vector<std::string> secrets;  // which secret labels hold on this dataset
};

// Rows are datasets, columns are outputs, entries are Pr(M(D_row) = col).
struct LikelihoodMatrix {
  std::vector<DatasetTag> datasets;
  std::vector<std::string> outputs;
  Mat probs;
};

inline void validate_likelihood_matrix(const LikelihoodMatrix& lm) {
  if (lm.datasets.empty() || lm.outputs.empty())
    throw validation_error("likelihood matrix: needs at least one dataset and one output");
  if (lm.probs.rows != lm.datasets.size() || lm.probs.cols != lm.outputs.size())
    throw validation_error("likelihood matrix: probs shape does not match the labels");
  for (std::size_t d = 0; d < lm.probs.rows; ++d) {
    double sum = 0.0;
    for (std::size_t w = 0; w < lm.probs.cols; ++w) {
      const double p = lm.probs(d, w);
      if (p < -1e-12 || p > 1.0 + 1e-12)
        throw validation_error("likelihood matrix: entry out of [0,1] in row " + std::to_string(d));
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-10)
      throw validation_error("likelihood matrix: row " + std::to_string(d) +
                             " sums to " + std::to_string(sum));
  }
}

// Ordered secret pair; the audit bounds how far the left secret's
// likelihoods can rise above the right secret's.
struct SecretLabelPair {
  std::string left;
  std::string right;
};

// Convex weights over the right-secret datasets certifying
//   log Pr(M(D_left) = w) <= epsilon0 + sum_l beta_l log Pr(M(D_l) = w)
// for every output w. No certificate exists when the optimal level is
// infinite (some left-supported output set escapes every right row).
struct NfcCertificate {
  SecretLabelPair pair;
  std::size_t left_dataset = 0;
  std::vector<std::size_t> right_datasets;  // row indices satisfying pair.right
  Vec beta;                                 // aligned with right_datasets
  double epsilon0 = 0.0;                    // optimal program value, kInf when absent
  bool has_certificate = true;
};

inline bool is_one_hot(const Vec& beta, double tol = 1e-9) {
  std::size_t hot = 0;
  for (double b : beta) {
    if (b > 1.0 - tol) ++hot;
    else if (b > tol) return false;
  }
  return hot == 1;
}

inline std::vector<std::size_t> datasets_with_secret(const LikelihoodMatrix& lm,
                                                     const std::string& label) {
  std::vector<std::size_t> rows;
  for (std::size_t d = 0; d < lm.datasets.size(); ++d) {
    const auto& tags = lm.datasets[d].secrets;
    if (std::find(tags.begin(), tags.end(), label) != tags.end()) rows.push_back(d);
  }
  return rows;
}

inline std::vector<std::string> distinct_secrets(const LikelihoodMatrix& lm) {
  std::vector<std::string> labels;
  for (const auto& d : lm.datasets)
    for (const auto& s : d.secrets)
      if (std::find(labels.begin(), labels.end(), s) == labels.end()) labels.push_back(s);
  std::sort(labels.begin(), labels.end());
  return labels;
}

namespace detail {

// Support screening. K: outputs carrying left mass. C: right rows positive
// on all of K. A right row with a zero inside K is never binding: shifting
// negligible weight onto that output drives its constraint arbitrarily
// high without moving the others, so only C-rows constrain the optimum.
// When C is empty that argument applies to every right row at once and the
// optimal level is infinite.
struct NfcSupport {
  std::vector<std::size_t> outputs_k;
  std::vector<std::size_t> rights_c;
};

inline NfcSupport nfc_support(const LikelihoodMatrix& lm, std::size_t left,
                              const std::vector<std::size_t>& rights) {
  NfcSupport sup;
  for (std::size_t w = 0; w < lm.probs.cols; ++w)
    if (lm.probs(left, w) > 0.0) sup.outputs_k.push_back(w);
  for (std::size_t ell : rights) {
    bool positive_on_k = true;
    for (std::size_t w : sup.outputs_k)
      if (!(lm.probs(ell, w) > 0.0)) { positive_on_k = false; break; }
    if (positive_on_k) sup.rights_c.push_back(ell);
  }
  return sup;
}

// Level certified by explicit weights: the largest gap between the left
// row's log-likelihood and the beta-weighted right rows'. Second value is
// the output where the gap is attained.
inline std::pair<double, std::size_t> certified_bound(const LikelihoodMatrix& lm,
                                                      std::size_t left,
                                                      const std::vector<std::size_t>& rights,
                                                      const Vec& beta) {
  if (beta.size() != rights.size())
    throw validation_error("certified_bound: weight count does not match right datasets");
  double best = -kInf;
  std::size_t arg = 0;
  for (std::size_t w = 0; w < lm.probs.cols; ++w) {
    const double pl = lm.probs(left, w);
    if (!(pl > 0.0)) continue;
    double rhs = 0.0;
    bool infinite = false;
    for (std::size_t i = 0; i < rights.size(); ++i) {
      if (!(beta[i] > 0.0)) continue;
      const double pr = lm.probs(rights[i], w);
      if (!(pr > 0.0)) { infinite = true; break; }
      rhs += beta[i] * std::log(pr);
    }
    const double v = infinite ? kInf : std::log(pl) - rhs;
    if (v > best) { best = v; arg = w; }
  }
  return {best, arg};
}

inline void require_left_consistent(const LikelihoodMatrix& lm, const SecretLabelPair& pair,
                                    std::size_t left_dataset) {
  if (left_dataset >= lm.datasets.size())
    throw validation_error("nfc: left dataset index out of range");
  const auto& tags = lm.datasets[left_dataset].secrets;
  if (std::find(tags.begin(), tags.end(), pair.left) == tags.end())
    throw validation_error("nfc: dataset '" + lm.datasets[left_dataset].id +
                           "' does not satisfy secret '" + pair.left + "'");
}

}  // namespace detail

// Optimal audit level for one (pair, left dataset) program: the best bound
// an adversarial convex weighting of outputs can force simultaneously
// against every right-secret row. Never negative; the left row itself as
// the weighting gives a relative-entropy lower bound of zero.
inline double primal_nfc_epsilon(const LikelihoodMatrix& lm, const SecretLabelPair& pair,
                                 std::size_t left_dataset) {
  validate_likelihood_matrix(lm);
  detail::require_left_consistent(lm, pair, left_dataset);
  const auto rights = datasets_with_secret(lm, pair.right);
  if (rights.empty())
    throw validation_error("nfc: no dataset satisfies secret '" + pair.right + "'");

  const auto sup = detail::nfc_support(lm, left_dataset, rights);
  if (sup.rights_c.empty()) return kInf;

  // Variables: weights over the supported outputs, then the level itself.
  // Maximize the level subject to every C-row constraint and the simplex.
  const std::size_t nk = sup.outputs_k.size();
  const std::size_t nc = sup.rights_c.size();
  Vec c(nk + 1, 0.0);
  c[nk] = 1.0;
  Mat a_ub(nc, nk + 1);
  Vec b_ub(nc, 0.0);
  for (std::size_t i = 0; i < nc; ++i) {
    const std::size_t ell = sup.rights_c[i];
    for (std::size_t j = 0; j < nk; ++j) {
      const std::size_t w = sup.outputs_k[j];
      a_ub(i, j) = -(std::log(lm.probs(left_dataset, w)) - std::log(lm.probs(ell, w)));
    }
    a_ub(i, nk) = 1.0;
  }
  Mat a_eq(1, nk + 1);
  for (std::size_t j = 0; j < nk; ++j) a_eq(0, j) = 1.0;
  const Vec b_eq{1.0};

  const LpResult r = lp_solve(c, a_ub, b_ub, a_eq, b_eq);
  if (r.status == LpStatus::unbounded) return kInf;
  if (r.status != LpStatus::optimal)
    throw numeric_error("nfc: level program unexpectedly infeasible");
  return r.objective;
}

namespace detail {

// Dual program solved directly: minimize the certified level over convex
// weights. Only used when neither uniform nor single-row weights are
// optimal. The level variable is split into two nonnegative parts for the
// standard-form solver.
inline NfcCertificate solve_dual_lp(const LikelihoodMatrix& lm, const SecretLabelPair& pair,
                                    std::size_t left_dataset) {
  const auto rights = datasets_with_secret(lm, pair.right);
  const auto sup = nfc_support(lm, left_dataset, rights);
  if (sup.rights_c.empty())
    throw validation_error("nfc: dual program requires a finite optimal level");

  const std::size_t nc = sup.rights_c.size();
  const std::size_t nk = sup.outputs_k.size();
  Vec c(nc + 2, 0.0);
  c[nc] = -1.0;  // level = u - v, minimized
  c[nc + 1] = 1.0;
  Mat a_ub(nk, nc + 2);
  Vec b_ub(nk, 0.0);
  for (std::size_t j = 0; j < nk; ++j) {
    const std::size_t w = sup.outputs_k[j];
    for (std::size_t i = 0; i < nc; ++i)
      a_ub(j, i) = -std::log(lm.probs(sup.rights_c[i], w));
    a_ub(j, nc) = -1.0;
    a_ub(j, nc + 1) = 1.0;
    b_ub[j] = -std::log(lm.probs(left_dataset, w));
  }
  Mat a_eq(1, nc + 2);
  for (std::size_t i = 0; i < nc; ++i) a_eq(0, i) = 1.0;
  const Vec b_eq{1.0};

  const LpResult r = lp_solve(c, a_ub, b_ub, a_eq, b_eq);
  if (r.status != LpStatus::optimal)
    throw numeric_error("nfc: certificate program must be solvable when the level is finite");

  NfcCertificate cert;
  cert.pair = pair;
  cert.left_dataset = left_dataset;
  cert.right_datasets = rights;
  cert.beta.assign(rights.size(), 0.0);
  for (std::size_t i = 0; i < nc; ++i) {
    const auto pos = std::find(rights.begin(), rights.end(), sup.rights_c[i]);
    cert.beta[static_cast<std::size_t>(pos - rights.begin())] = r.x[i];
  }
  cert.epsilon0 = -r.objective;
  return cert;
}

}  // namespace detail

// Optimal certificate for one (pair, left dataset) program. Preference
// order when several weightings achieve the optimum: uniform, then single
// dataset, then whatever vertex the program returns. Uniform first keeps
// the zero-leakage case readable; single-dataset certificates are the
// classic indistinguishability bounds.
inline NfcCertificate dual_nfc_beta(const LikelihoodMatrix& lm, const SecretLabelPair& pair,
                                    std::size_t left_dataset) {
  const double eps0 = primal_nfc_epsilon(lm, pair, left_dataset);
  const auto rights = datasets_with_secret(lm, pair.right);

  NfcCertificate cert;
  cert.pair = pair;
  cert.left_dataset = left_dataset;
  cert.right_datasets = rights;
  cert.epsilon0 = eps0;
  if (std::isinf(eps0)) {
    cert.has_certificate = false;
    return cert;
  }

  const double tol = 1e-9;
  Vec uniform(rights.size(), 1.0 / static_cast<double>(rights.size()));
  if (detail::certified_bound(lm, left_dataset, rights, uniform).first <= eps0 + tol) {
    cert.beta = std::move(uniform);
    return cert;
  }
  for (std::size_t k = 0; k < rights.size(); ++k) {
    Vec one_hot(rights.size(), 0.0);
    one_hot[k] = 1.0;
    if (detail::certified_bound(lm, left_dataset, rights, one_hot).first <= eps0 + tol) {
      cert.beta = std::move(one_hot);
      return cert;
    }
  }
  NfcCertificate solved = detail::solve_dual_lp(lm, pair, left_dataset);
  solved.epsilon0 = eps0;  // strong duality; report the primal optimum
  return solved;
}

struct NfcViolation {
  SecretLabelPair pair;
  std::size_t left_dataset = 0;
  std::string left_id;
  double epsilon0 = 0.0;
  std::size_t witness_output = 0;
  std::string witness_label;
};

struct NfcReport {
  bool pass = false;
  double epsilon = 0.0;
  std::vector<NfcCertificate> certificates;
  std::vector<NfcViolation> violations;
  std::string note;
};

namespace detail {

// Evidence output for an infinite level: prefer one the right secret can
// never produce, otherwise one escaping at least one right row.
inline std::size_t infinite_witness(const LikelihoodMatrix& lm, std::size_t left,
                                    const std::vector<std::size_t>& rights) {
  std::size_t partial = lm.probs.cols;
  for (std::size_t w = 0; w < lm.probs.cols; ++w) {
    if (!(lm.probs(left, w) > 0.0)) continue;
    std::size_t zeros = 0;
    for (std::size_t ell : rights)
      if (!(lm.probs(ell, w) > 0.0)) ++zeros;
    if (zeros == rights.size()) return w;
    if (zeros > 0 && partial == lm.probs.cols) partial = w;
  }
  if (partial == lm.probs.cols)
    throw numeric_error("nfc: infinite level without an escaping output");
  return partial;
}

}  // namespace detail

// Audits every ordered secret pair derived from the given list (each pair
// and its reverse; the two directions have independent programs) against
// every dataset consistent with the left secret. Certificates are kept
// for the passing programs, violations carry the optimal level and an
// evidence output. A pass means the necessary conditions hold; it does
// not by itself make the mechanism composable.
inline NfcReport check_nfc(const LikelihoodMatrix& lm, const std::vector<SecretLabelPair>& pairs,
                           double epsilon) {
  validate_likelihood_matrix(lm);
  if (!(epsilon >= 0.0)) throw validation_error("check_nfc: epsilon must be nonnegative");
  if (pairs.empty()) throw validation_error("check_nfc: need at least one secret pair");

  std::vector<SecretLabelPair> ordered;
  auto push_unique = [&ordered](const SecretLabelPair& p) {
    for (const auto& q : ordered)
      if (q.left == p.left && q.right == p.right) return;
    ordered.push_back(p);
  };
  for (const auto& p : pairs) {
    push_unique(p);
    push_unique({p.right, p.left});
  }

  NfcReport report;
  report.epsilon = epsilon;
  const double slack = 1e-9;  // solver tolerance; boundary programs audit as passing
  for (const auto& p : ordered) {
    const auto lefts = datasets_with_secret(lm, p.left);
    if (lefts.empty())
      throw validation_error("check_nfc: no dataset satisfies secret '" + p.left + "'");
    for (std::size_t left : lefts) {
      NfcCertificate cert = dual_nfc_beta(lm, p, left);
      if (cert.has_certificate && cert.epsilon0 <= epsilon + slack) {
        report.certificates.push_back(std::move(cert));
        continue;
      }
      NfcViolation v;
      v.pair = p;
      v.left_dataset = left;
      v.left_id = lm.datasets[left].id;
      v.epsilon0 = cert.epsilon0;
      v.witness_output =
          cert.has_certificate
              ? detail::certified_bound(lm, left, cert.right_datasets, cert.beta).second
              : detail::infinite_witness(lm, left, cert.right_datasets);
      v.witness_label = lm.outputs[v.witness_output];
      report.violations.push_back(std::move(v));
    }
  }
  report.pass = report.violations.empty();
  report.note = report.pass ? "necessary conditions hold; composability itself is not implied"
                            : "necessary conditions violated";
  return report;
}

// Applies a randomized output transformation. Channel column w is the
// distribution of the new output given old output w, so the new likelihood
// rows are probs * channel^T and stay row-stochastic.
inline LikelihoodMatrix postprocess(const LikelihoodMatrix& lm, const Mat& channel) {
  validate_likelihood_matrix(lm);
  if (channel.rows == 0 || channel.cols != lm.outputs.size())
    throw validation_error("postprocess: channel shape does not match the output count");
  for (std::size_t w = 0; w < channel.cols; ++w) {
    double sum = 0.0;
    for (std::size_t r = 0; r < channel.rows; ++r) {
      if (channel(r, w) < -1e-12)
        throw validation_error("postprocess: channel entries must be nonnegative");
      sum += channel(r, w);
    }
    if (std::abs(sum - 1.0) > 1e-10)
      throw validation_error("postprocess: channel column " + std::to_string(w) +
                             " sums to " + std::to_string(sum));
  }

  LikelihoodMatrix out;
  out.datasets = lm.datasets;
  out.outputs.reserve(channel.rows);
  for (std::size_t r = 0; r < channel.rows; ++r) out.outputs.push_back("y" + std::to_string(r));
  out.probs = Mat(lm.probs.rows, channel.rows);
  for (std::size_t d = 0; d < lm.probs.rows; ++d)
    for (std::size_t r = 0; r < channel.rows; ++r) {
      double acc = 0.0;
      for (std::size_t w = 0; w < channel.cols; ++w) acc += lm.probs(d, w) * channel(r, w);
      out.probs(d, r) = acc;
    }
  return out;
}

// Three datasets over four outputs, tuned so the first row passes the
// audit at epsilon = 0.1 only through the evenly split certificate over
// the other two rows; both single-row certificates overshoot (about 0.15).
// Merging outputs 0 and 2 replaces the geometric mean inside that
// certificate with an arithmetic mean, so the merged ratio and with it the
// optimal level can only drop below 0.1. A deliberately fragile instance
// for probing how output transformations move non-single-row certificates.
inline LikelihoodMatrix output_merge_demo_matrix() {
  const double q0 = 0.11648, q1 = 0.38352, q2 = 0.10540, q3 = 0.39460;
  const double c = std::exp(0.1) * std::sqrt(q0 * q2);
  LikelihoodMatrix lm;
  lm.datasets = {{"d1", {"s1"}}, {"d2", {"s2"}}, {"d3", {"s2"}}};
  lm.outputs = {"w0", "w1", "w2", "w3"};
  lm.probs = Mat(3, 4);
  const double row0[4] = {c, 0.5 - c, c, 0.5 - c};
  const double row1[4] = {q0, q1, q2, q3};
  const double row2[4] = {q2, q3, q0, q1};
  for (std::size_t w = 0; w < 4; ++w) {
    lm.probs(0, w) = row0[w];
    lm.probs(1, w) = row1[w];
    lm.probs(2, w) = row2[w];
  }
  return lm;
}

// Deterministic merge of outputs 0 and 2; outputs 1 and 3 pass through.
inline Mat output_merge_demo_channel() {
  Mat ch(3, 4);
  ch(0, 0) = 1.0;
  ch(0, 2) = 1.0;
  ch(1, 1) = 1.0;
  ch(2, 3) = 1.0;
  return ch;
}

namespace detail {

inline void require_same_program(const std::vector<NfcCertificate>& certs) {
  if (certs.empty()) throw validation_error("certificates: empty collection");
  const auto& head = certs.front();
  for (const auto& c : certs) {
    if (!c.has_certificate)
      throw validation_error("certificates: infinite-level entries carry no weights");
    if (c.pair.left != head.pair.left || c.pair.right != head.pair.right ||
        c.left_dataset != head.left_dataset || c.right_datasets != head.right_datasets ||
        c.beta.size() != c.right_datasets.size())
      throw validation_error("certificates: redundancy is defined within a single program");
  }
}

inline bool redundant_given(const std::vector<const NfcCertificate*>& others,
                            const NfcCertificate& target) {
  if (others.empty()) return false;
  const std::size_t n = others.size();
  const std::size_t m = target.beta.size();
  // Feasibility: convex lambda over the others reproducing target's weights
  // with no larger certified level. Any feasible point witnesses that the
  // target inequality is a consequence of the rest.
  const Vec c(n, 0.0);
  Mat a_ub(1, n);
  for (std::size_t i = 0; i < n; ++i) a_ub(0, i) = others[i]->epsilon0;
  const Vec b_ub{target.epsilon0};
  Mat a_eq(m + 1, n);
  Vec b_eq(m + 1, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t i = 0; i < n; ++i) a_eq(k, i) = others[i]->beta[k];
    b_eq[k] = target.beta[k];
  }
  for (std::size_t i = 0; i < n; ++i) a_eq(m, i) = 1.0;
  b_eq[m] = 1.0;
  return lp_solve(c, a_ub, b_ub, a_eq, b_eq).status == LpStatus::optimal;
}

}  // namespace detail

// True when the certificate at `which` is a convex combination of the
// others with no smaller level, i.e. the inequality it encodes is already
// implied and the constraint can be dropped.
inline bool certificate_is_redundant(const std::vector<NfcCertificate>& certs,
                                     std::size_t which) {
  if (which >= certs.size())
    throw validation_error("certificate_is_redundant: index out of range");
  detail::require_same_program(certs);
  std::vector<const NfcCertificate*> others;
  for (std::size_t i = 0; i < certs.size(); ++i)
    if (i != which) others.push_back(&certs[i]);
  return detail::redundant_given(others, certs[which]);
}

// Greedy non-redundant subset, scanning in index order so duplicated
// constraints keep their last copy. Returns the kept indices.
inline std::vector<std::size_t> nonredundant_certificates(
    const std::vector<NfcCertificate>& certs) {
  detail::require_same_program(certs);
  std::vector<std::size_t> active(certs.size());
  std::iota(active.begin(), active.end(), std::size_t{0});
  for (std::size_t i = 0; i < certs.size() && active.size() > 1; ++i) {
    const auto pos = std::find(active.begin(), active.end(), i);
    if (pos == active.end()) continue;
    std::vector<const NfcCertificate*> others;
    for (std::size_t j : active)
      if (j != i) others.push_back(&certs[j]);
    if (detail::redundant_given(others, certs[i])) active.erase(pos);
  }
  return active;
}

inline nlohmann::json likelihood_matrix_to_json(const LikelihoodMatrix& lm) {
  nlohmann::json datasets = nlohmann::json::array();
  for (const auto& d : lm.datasets)
    datasets.push_back({{"id", d.id}, {"secrets", d.secrets}});
  nlohmann::json probs = nlohmann::json::array();
  for (std::size_t d = 0; d < lm.probs.rows; ++d) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t w = 0; w < lm.probs.cols; ++w) row.push_back(lm.probs(d, w));
    probs.push_back(std::move(row));
  }
  return {{"datasets", std::move(datasets)}, {"outputs", lm.outputs}, {"probs", std::move(probs)}};
}

inline LikelihoodMatrix likelihood_matrix_from_json(const nlohmann::json& j) {
  LikelihoodMatrix lm;
  try {
    for (const auto& d : j.at("datasets")) {
      DatasetTag tag;
      tag.id = d.at("id").get<std::string>();
      tag.secrets = d.at("secrets").get<std::vector<std::string>>();
      lm.datasets.push_back(std::move(tag));
    }
    lm.outputs = j.at("outputs").get<std::vector<std::string>>();
    const auto& probs = j.at("probs");
    lm.probs = Mat(lm.datasets.size(), lm.outputs.size());
    if (probs.size() != lm.datasets.size())
      throw validation_error("likelihood matrix json: probs row count mismatch");
    for (std::size_t d = 0; d < lm.probs.rows; ++d) {
      const auto row = probs.at(d).get<std::vector<double>>();
      if (row.size() != lm.probs.cols)
        throw validation_error("likelihood matrix json: ragged probs row " + std::to_string(d));
      for (std::size_t w = 0; w < lm.probs.cols; ++w) lm.probs(d, w) = row[w];
    }
  } catch (const nlohmann::json::exception& e) {
    throw validation_error(std::string("likelihood matrix json: ") + e.what());
  }
  validate_likelihood_matrix(lm);
  return lm;
}

inline nlohmann::json certificate_to_json(const NfcCertificate& cert) {
  nlohmann::json j{{"pair", {{"left", cert.pair.left}, {"right", cert.pair.right}}},
                   {"left_dataset", cert.left_dataset},
                   {"right_datasets", cert.right_datasets},
                   {"has_certificate", cert.has_certificate}};
  if (cert.has_certificate) {
    j["epsilon0"] = cert.epsilon0;
    j["beta"] = cert.beta;
  } else {
    j["epsilon0"] = nullptr;  // infinite
  }
  return j;
}

inline nlohmann::json nfc_report_to_json(const NfcReport& report) {
  nlohmann::json certs = nlohmann::json::array();
  for (const auto& c : report.certificates) certs.push_back(certificate_to_json(c));
  nlohmann::json viols = nlohmann::json::array();
  for (const auto& v : report.violations) {
    viols.push_back({{"pair", {{"left", v.pair.left}, {"right", v.pair.right}}},
                     {"left_dataset", v.left_dataset},
                     {"left_id", v.left_id},
                     {"epsilon0", std::isinf(v.epsilon0) ? nlohmann::json(nullptr)
                                                         : nlohmann::json(v.epsilon0)},
                     {"witness_output", v.witness_output},
                     {"witness_label", v.witness_label}});
  }
  return {{"pass", report.pass},      {"epsilon", report.epsilon},
          {"note", report.note},      {"certificates", std::move(certs)},
          {"violations", std::move(viols)}};
}

}  // namespace pufferkit
