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

#pragma once

#include <cmath>
#include <cstddef>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pufferkit/common.hpp"
#include "pufferkit/linalg.hpp"
#include "pufferkit/numeric.hpp"

namespace pufferkit {

inline void validate_transition_matrix(const Mat& p) {
  if (p.rows == 0 || p.rows != p.cols)
    throw validation_error("transition matrix must be square and nonempty");
  for (std::size_t i = 0; i < p.rows; ++i) {
    double row_sum = 0.0;
    for (std::size_t j = 0; j < p.cols; ++j) {
      if (p(i, j) < -1e-12 || p(i, j) > 1.0 + 1e-12)
        throw validation_error("transition entry outside [0,1] at row " +
                               std::to_string(i));
      row_sum += p(i, j);
    }
    if (std::fabs(row_sum - 1.0) > 1e-9)
      throw validation_error("transition row " + std::to_string(i) +
                             " sums to " + std::to_string(row_sum));
  }
}

// Stationary distribution of a row-stochastic matrix. Power iteration
// first (cheap and converges for everything aperiodic we care about);
// if it stalls, fall back to solving the balance equations directly with
// the normalization row substituted in.
inline Vec stationary_distribution(const Mat& p) {
  validate_transition_matrix(p);
  const std::size_t n = p.rows;
  Vec pi(n, 1.0 / static_cast<double>(n));
  double delta = kInf;
  for (std::size_t iter = 0; iter < 100000; ++iter) {
    Vec next(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) next[j] += pi[i] * p(i, j);
    double total = 0.0;
    delta = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      delta = std::max(delta, std::fabs(next[j] - pi[j]));
      total += next[j];
    }
    for (double& v : next) v /= total;
    pi = std::move(next);
    if (delta < 1e-15) return pi;
  }
  if (n > 64) {
    if (delta < 1e-12) return pi;  // good enough when a direct solve is off the table
    throw numeric_error("stationary_distribution: no convergence and chain too large for direct solve");
  }
  // Solve pi (P - I) = 0 with the last column replaced by the
  // normalization constraint; transposed so solve_linear applies.
  Mat a(n, n);
  Vec b(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a(i, j) = p(j, i) - (i == j ? 1.0 : 0.0);
  }
  for (std::size_t j = 0; j < n; ++j) a(n - 1, j) = 1.0;
  b[n - 1] = 1.0;
  Vec sol = solve_linear(a, b);
  for (double v : sol)
    if (v < -1e-9) throw numeric_error("stationary_distribution: negative mass in direct solve");
  double total = 0.0;
  for (double& v : sol) {
    v = std::max(v, 0.0);
    total += v;
  }
  for (double& v : sol) v /= total;
  return sol;
}

// k-step transition probabilities. k = 0 is the identity by convention
// (staying put in zero steps).
inline Mat k_step_transition(const Mat& p, std::size_t k) {
  validate_transition_matrix(p);
  return mat_pow(p, k);
}

// Maximum-likelihood transition estimate from observed state sequences.
// Rows with no outgoing observations become uniform rather than NaN so
// downstream smoothing has something to work with.
inline Mat fit_transition_matrix(const std::vector<std::vector<int>>& seqs,
                                 std::size_t num_states) {
  if (seqs.empty()) throw validation_error("fit_transition_matrix: no sequences");
  if (num_states == 0) throw validation_error("fit_transition_matrix: zero states");
  Mat counts(num_states, num_states);
  for (const auto& s : seqs) {
    for (int v : s)
      if (v < 0 || static_cast<std::size_t>(v) >= num_states)
        throw validation_error("fit_transition_matrix: state id out of range");
    for (std::size_t t = 0; t + 1 < s.size(); ++t)
      counts(static_cast<std::size_t>(s[t]), static_cast<std::size_t>(s[t + 1])) += 1.0;
  }
  Mat out(num_states, num_states);
  for (std::size_t i = 0; i < num_states; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < num_states; ++j) row += counts(i, j);
    if (row == 0.0) {
      for (std::size_t j = 0; j < num_states; ++j)
        out(i, j) = 1.0 / static_cast<double>(num_states);
    } else {
      for (std::size_t j = 0; j < num_states; ++j) out(i, j) = counts(i, j) / row;
    }
  }
  return out;
}

// Replaces exact zeros with tau and rescales the nonzero entries of each
// row by (1 - z * tau), z being that row's zero count, so rows still sum
// to one. Keeps likelihood ratios finite without distorting the fit.
inline Mat smooth_transition_matrix(const Mat& p, double tau) {
  validate_transition_matrix(p);
  if (tau <= 0.0 || tau * static_cast<double>(p.cols) >= 1.0)
    throw validation_error("smooth_transition_matrix: tau out of range");
  Mat out(p.rows, p.cols);
  for (std::size_t i = 0; i < p.rows; ++i) {
    std::size_t zeros = 0;
    for (std::size_t j = 0; j < p.cols; ++j)
      if (p(i, j) == 0.0) ++zeros;
    const double scale = 1.0 - static_cast<double>(zeros) * tau;
    for (std::size_t j = 0; j < p.cols; ++j)
      out(i, j) = p(i, j) == 0.0 ? tau : p(i, j) * scale;
  }
  return out;
}

inline std::vector<int> sample_chain(const Mat& p, const Vec& initial,
                                     std::size_t length, std::mt19937_64& rng) {
  validate_transition_matrix(p);
  if (initial.size() != p.rows)
    throw validation_error("sample_chain: initial distribution size mismatch");
  if (length == 0) return {};
  auto draw = [&](const double* weights, std::size_t n) {
    const double u = uniform_open(rng);
    double acc = 0.0;
    for (std::size_t j = 0; j + 1 < n; ++j) {
      acc += weights[j];
      if (u < acc) return static_cast<int>(j);
    }
    return static_cast<int>(n - 1);
  };
  std::vector<int> out;
  out.reserve(length);
  out.push_back(draw(initial.data(), initial.size()));
  for (std::size_t t = 1; t < length; ++t) {
    const std::size_t prev = static_cast<std::size_t>(out.back());
    out.push_back(draw(&p.data[prev * p.cols], p.cols));
  }
  return out;
}

// Conditional law of one coordinate of a zero-mean multivariate normal
// given exact values of a subset of the others. Empty conditioning set
// returns the marginal.
inline std::pair<double, double> gaussian_conditional(
    const Mat& sigma, const std::vector<int>& cond_idx, const Vec& cond_vals,
    int target) {
  const std::size_t n = sigma.rows;
  if (sigma.cols != n) throw validation_error("gaussian_conditional: square covariance required");
  if (target < 0 || static_cast<std::size_t>(target) >= n)
    throw validation_error("gaussian_conditional: target index out of range");
  if (cond_idx.size() != cond_vals.size())
    throw validation_error("gaussian_conditional: index/value length mismatch");
  for (int q : cond_idx)
    if (q < 0 || static_cast<std::size_t>(q) >= n || q == target)
      throw validation_error("gaussian_conditional: bad conditioning index");
  const std::size_t m = cond_idx.size();
  const std::size_t ti = static_cast<std::size_t>(target);
  if (m == 0) return {0.0, sigma(ti, ti)};
  Mat s_ll(m, m);
  Vec s_tl(m);
  for (std::size_t a = 0; a < m; ++a) {
    const std::size_t ia = static_cast<std::size_t>(cond_idx[a]);
    s_tl[a] = sigma(ti, ia);
    for (std::size_t b = 0; b < m; ++b)
      s_ll(a, b) = sigma(ia, static_cast<std::size_t>(cond_idx[b]));
  }
  const Vec w_mu = solve_linear(s_ll, cond_vals);   // Sigma_LL^-1 x_L
  const Vec w_var = solve_linear(s_ll, s_tl);       // Sigma_LL^-1 Sigma_Lt
  double mu = 0.0, reduction = 0.0;
  for (std::size_t a = 0; a < m; ++a) {
    mu += s_tl[a] * w_mu[a];
    reduction += s_tl[a] * w_var[a];
  }
  return {mu, sigma(ti, ti) - reduction};
}

// Squared-exponential covariance over integer sites: cov(j, k) =
// exp(-(j-k)^2 / lengthscale).
inline Mat gaussian_covariance(std::size_t n, double lengthscale) {
  if (n == 0 || n > 512)
    throw validation_error("gaussian_covariance: 1..512 sites supported");
  if (lengthscale <= 0.0)
    throw validation_error("gaussian_covariance: lengthscale must be positive");
  Mat s(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      const double d = static_cast<double>(j) - static_cast<double>(k);
      s(j, k) = std::exp(-d * d / lengthscale);
    }
  return s;
}

struct MarkovPrior {
  Mat transition;
  std::size_t length = 0;
};

struct GaussianPrior {
  std::size_t n = 0;
  double lengthscale = 1.0;
};

inline nlohmann::json markov_prior_to_json(const MarkovPrior& prior) {
  validate_transition_matrix(prior.transition);
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < prior.transition.rows; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < prior.transition.cols; ++j)
      row.push_back(prior.transition(i, j));
    rows.push_back(std::move(row));
  }
  return {{"kind", "markov"},
          {"states", prior.transition.rows},
          {"rows", std::move(rows)},
          {"length", prior.length}};
}

inline MarkovPrior markov_prior_from_json(const nlohmann::json& j) {
  if (j.value("kind", "") != "markov")
    throw validation_error("markov_prior_from_json: kind mismatch");
  const std::size_t k = j.at("states").get<std::size_t>();
  const auto& rows = j.at("rows");
  if (rows.size() != k) throw validation_error("markov_prior_from_json: row count mismatch");
  MarkovPrior prior;
  prior.transition = Mat(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    if (rows[i].size() != k)
      throw validation_error("markov_prior_from_json: column count mismatch");
    for (std::size_t c = 0; c < k; ++c)
      prior.transition(i, c) = rows[i][c].get<double>();
  }
  prior.length = j.at("length").get<std::size_t>();
  validate_transition_matrix(prior.transition);
  return prior;
}

inline nlohmann::json gaussian_prior_to_json(const GaussianPrior& prior) {
  return {{"kind", "gaussian"}, {"n", prior.n}, {"lengthscale", prior.lengthscale}};
}

inline GaussianPrior gaussian_prior_from_json(const nlohmann::json& j) {
  if (j.value("kind", "") != "gaussian")
    throw validation_error("gaussian_prior_from_json: kind mismatch");
  GaussianPrior prior;
  prior.n = j.at("n").get<std::size_t>();
  prior.lengthscale = j.at("lengthscale").get<double>();
  if (prior.n == 0 || prior.n > 512 || prior.lengthscale <= 0.0)
    throw validation_error("gaussian_prior_from_json: bad parameters");
  return prior;
}

inline void save_sequences_csv(const std::string& path,
                               const std::vector<std::vector<int>>& seqs) {
  std::ofstream out(path);
  if (!out) throw validation_error("save_sequences_csv: cannot open " + path);
  for (const auto& s : seqs) {
    for (std::size_t t = 0; t < s.size(); ++t) {
      if (t > 0) out << ',';
      out << s[t];
    }
    out << '\n';
  }
}

inline std::vector<std::vector<int>> load_sequences_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("load_sequences_csv: cannot open " + path);
  std::vector<std::vector<int>> seqs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<int> seq;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ','))
      seq.push_back(std::stoi(cell));
    seqs.push_back(std::move(seq));
  }
  return seqs;
}

}  // namespace pufferkit
