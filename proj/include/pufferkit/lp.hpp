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
#include <vector>

#include "pufferkit/common.hpp"
#include "pufferkit/linalg.hpp"

namespace pufferkit {

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  double objective = 0.0;
  Vec x;  // structural variables only, empty unless optimal
};

namespace detail {

// Dense simplex tableau. Basis columns are kept explicitly; reduced costs
// are recomputed from the basis cost vector every iteration, which is
// plenty fast at the problem sizes this library targets (<= 512 vars).
struct SimplexTableau {
  std::size_t num_rows = 0;
  std::size_t num_cols = 0;        // structural + slack + artificial
  std::vector<double> body;        // row-major, num_cols + 1 wide (rhs last)
  std::vector<std::size_t> basis;  // column index basic in each row

  double& at(std::size_t i, std::size_t j) { return body[i * (num_cols + 1) + j]; }
  double at(std::size_t i, std::size_t j) const { return body[i * (num_cols + 1) + j]; }
  double& rhs(std::size_t i) { return body[i * (num_cols + 1) + num_cols]; }
  double rhs(std::size_t i) const { return body[i * (num_cols + 1) + num_cols]; }

  void pivot(std::size_t prow, std::size_t pcol) {
    const double p = at(prow, pcol);
    for (std::size_t j = 0; j <= num_cols; ++j) body[prow * (num_cols + 1) + j] /= p;
    for (std::size_t i = 0; i < num_rows; ++i) {
      if (i == prow) continue;
      const double f = at(i, pcol);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= num_cols; ++j)
        body[i * (num_cols + 1) + j] -= f * body[prow * (num_cols + 1) + j];
    }
    basis[prow] = pcol;
  }
};

// One simplex phase with Bland's anti-cycling rule, maximizing cost over
// the columns allowed to enter. Returns false when unbounded.
inline bool simplex_phase(SimplexTableau& t, const Vec& cost,
                          const std::vector<bool>& may_enter) {
  constexpr double kTol = 1e-9;
  constexpr std::size_t kMaxIter = 100000;
  for (std::size_t iter = 0; iter < kMaxIter; ++iter) {
    // Reduced costs from scratch: rc_j = c_j - c_B . T(:,j).
    std::size_t enter = t.num_cols;
    for (std::size_t j = 0; j < t.num_cols; ++j) {
      if (!may_enter[j]) continue;
      double z = 0.0;
      for (std::size_t i = 0; i < t.num_rows; ++i) {
        const double cb = cost[t.basis[i]];
        if (cb != 0.0) z += cb * t.at(i, j);
      }
      if (cost[j] - z > kTol) {
        enter = j;  // Bland: first improving index
        break;
      }
    }
    if (enter == t.num_cols) return true;  // optimal

    std::size_t leave = t.num_rows;
    double best_ratio = 0.0;
    for (std::size_t i = 0; i < t.num_rows; ++i) {
      const double a = t.at(i, enter);
      if (a <= kTol) continue;
      const double ratio = t.rhs(i) / a;
      if (leave == t.num_rows || ratio < best_ratio - kTol ||
          (std::fabs(ratio - best_ratio) <= kTol && t.basis[i] < t.basis[leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave == t.num_rows) return false;  // unbounded direction
    t.pivot(leave, enter);
  }
  throw numeric_error("lp_solve: simplex iteration limit hit");
}

}  // namespace detail

// Maximizes c . x subject to a_ub x <= b_ub, a_eq x = b_eq, x >= 0, via a
// two-phase dense simplex. Either constraint block may be empty (pass 0-row
// matrices). Free variables are the caller's job to split.
inline LpResult lp_solve(const Vec& c, const Mat& a_ub, const Vec& b_ub,
                         const Mat& a_eq, const Vec& b_eq) {
  constexpr double kTol = 1e-9;
  const std::size_t n = c.size();
  if (n == 0 || n > 512) throw validation_error("lp_solve: 1..512 variables supported");
  if (a_ub.rows != b_ub.size() || (a_ub.rows > 0 && a_ub.cols != n))
    throw validation_error("lp_solve: inequality block shape mismatch");
  if (a_eq.rows != b_eq.size() || (a_eq.rows > 0 && a_eq.cols != n))
    throw validation_error("lp_solve: equality block shape mismatch");

  const std::size_t m_ub = a_ub.rows;
  const std::size_t m = m_ub + a_eq.rows;

  // Row staging: flip rows with negative rhs so the rhs column is
  // nonnegative; a flipped inequality gets a -1 slack and needs an
  // artificial, as does every equality.
  struct Row {
    Vec coef;
    double rhs;
    double slack_sign;  // 0 for equalities
  };
  std::vector<Row> rows;
  rows.reserve(m);
  for (std::size_t i = 0; i < m_ub; ++i) {
    Row r{Vec(n), b_ub[i], 1.0};
    for (std::size_t j = 0; j < n; ++j) r.coef[j] = a_ub(i, j);
    if (r.rhs < 0.0) {
      for (double& v : r.coef) v = -v;
      r.rhs = -r.rhs;
      r.slack_sign = -1.0;
    }
    rows.push_back(std::move(r));
  }
  for (std::size_t i = 0; i < a_eq.rows; ++i) {
    Row r{Vec(n), b_eq[i], 0.0};
    for (std::size_t j = 0; j < n; ++j) r.coef[j] = a_eq(i, j);
    if (r.rhs < 0.0) {
      for (double& v : r.coef) v = -v;
      r.rhs = -r.rhs;
    }
    rows.push_back(std::move(r));
  }

  std::size_t num_art = 0;
  for (const Row& r : rows)
    if (r.slack_sign <= 0.0) ++num_art;

  detail::SimplexTableau t;
  t.num_rows = m;
  t.num_cols = n + m_ub + num_art;
  t.body.assign(m * (t.num_cols + 1), 0.0);
  t.basis.assign(m, 0);

  const std::size_t art_base = n + m_ub;
  std::vector<bool> is_art(t.num_cols, false);
  for (std::size_t j = art_base; j < t.num_cols; ++j) is_art[j] = true;

  std::size_t next_art = art_base;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) t.at(i, j) = rows[i].coef[j];
    if (i < m_ub) t.at(i, n + i) = rows[i].slack_sign;
    t.rhs(i) = rows[i].rhs;
    if (i < m_ub && rows[i].slack_sign > 0.0) {
      t.basis[i] = n + i;
    } else {
      t.at(i, next_art) = 1.0;
      t.basis[i] = next_art++;
    }
  }

  if (num_art > 0) {
    Vec phase1_cost(t.num_cols, 0.0);
    for (std::size_t j = art_base; j < t.num_cols; ++j) phase1_cost[j] = -1.0;
    std::vector<bool> enter_all(t.num_cols, true);
    if (!detail::simplex_phase(t, phase1_cost, enter_all))
      throw numeric_error("lp_solve: phase 1 unbounded (internal)");
    double art_sum = 0.0;
    for (std::size_t i = 0; i < t.num_rows; ++i)
      if (is_art[t.basis[i]]) art_sum += t.rhs(i);
    if (art_sum > 1e-8) return {LpStatus::infeasible, 0.0, {}};

    // Drive leftover zero-level artificials out of the basis; rows where
    // that is impossible are redundant and get dropped.
    for (std::size_t i = 0; i < t.num_rows;) {
      if (!is_art[t.basis[i]]) {
        ++i;
        continue;
      }
      std::size_t pcol = t.num_cols;
      for (std::size_t j = 0; j < art_base; ++j) {
        if (std::fabs(t.at(i, j)) > kTol) {
          pcol = j;
          break;
        }
      }
      if (pcol < t.num_cols) {
        t.pivot(i, pcol);
        ++i;
      } else {
        const std::size_t last = t.num_rows - 1;
        if (i != last) {
          for (std::size_t j = 0; j <= t.num_cols; ++j)
            t.body[i * (t.num_cols + 1) + j] = t.body[last * (t.num_cols + 1) + j];
          t.basis[i] = t.basis[last];
        }
        t.body.resize(last * (t.num_cols + 1));
        t.basis.resize(last);
        t.num_rows = last;
      }
    }
  }

  Vec phase2_cost(t.num_cols, 0.0);
  for (std::size_t j = 0; j < n; ++j) phase2_cost[j] = c[j];
  std::vector<bool> may_enter(t.num_cols, true);
  for (std::size_t j = art_base; j < t.num_cols; ++j) may_enter[j] = false;
  if (!detail::simplex_phase(t, phase2_cost, may_enter))
    return {LpStatus::unbounded, 0.0, {}};

  LpResult out;
  out.status = LpStatus::optimal;
  out.x.assign(n, 0.0);
  for (std::size_t i = 0; i < t.num_rows; ++i)
    if (t.basis[i] < n) out.x[t.basis[i]] = t.rhs(i);
  out.objective = 0.0;
  for (std::size_t j = 0; j < n; ++j) out.objective += c[j] * out.x[j];
  return out;
}

}  // namespace pufferkit
