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
#include <string>
#include <vector>

#include "pufferkit/common.hpp"

namespace pufferkit {

using Vec = std::vector<double>;

// Dense row-major matrix. Small sizes only; everything in this library is
// desk scale, so no blocking or views.
struct Mat {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Mat() = default;
  Mat(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

inline Mat identity(std::size_t n) {
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

inline Mat mat_mul(const Mat& a, const Mat& b) {
  if (a.cols != b.rows) throw validation_error("mat_mul: shape mismatch");
  Mat out(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t k = 0; k < a.cols; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols; ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

inline Mat mat_pow(const Mat& a, std::size_t k) {
  if (a.rows != a.cols) throw validation_error("mat_pow: square matrix required");
  Mat result = identity(a.rows);
  Mat base = a;
  while (k > 0) {
    if (k & 1u) result = mat_mul(result, base);
    base = mat_mul(base, base);
    k >>= 1u;
  }
  return result;
}

inline Vec mat_vec(const Mat& a, const Vec& x) {
  if (a.cols != x.size()) throw validation_error("mat_vec: shape mismatch");
  Vec out(a.rows, 0.0);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) out[i] += a(i, j) * x[j];
  return out;
}

// Solves a x = b with partial-pivot Gaussian elimination. Throws
// numeric_error when a pivot collapses, reporting the pivot spread so the
// caller can tell "singular" from "wildly ill conditioned input".
inline Vec solve_linear(Mat a, Vec b) {
  const std::size_t n = a.rows;
  if (a.cols != n || b.size() != n)
    throw validation_error("solve_linear: shape mismatch");
  double max_piv = 0.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(a(r, col)) > std::fabs(a(piv, col))) piv = r;
    const double pval = std::fabs(a(piv, col));
    max_piv = std::max(max_piv, pval);
    if (pval < 1e-13 * std::max(1.0, max_piv)) {
      throw numeric_error(
          "solve_linear: singular or near-singular system (pivot " +
          std::to_string(pval) + " vs largest " + std::to_string(max_piv) + ")");
    }
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(col, j), a(piv, j));
      std::swap(b[col], b[piv]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a(r, col) / a(col, col);
      if (f == 0.0) continue;
      for (std::size_t j = col; j < n; ++j) a(r, j) -= f * a(col, j);
      b[r] -= f * b[col];
    }
  }
  Vec x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
    x[i] = s / a(i, i);
  }
  return x;
}

}  // namespace pufferkit
