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
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "pufferkit/common.hpp"

namespace pufferkit {

// Standard normal CDF via the Hastings rational approximation
// (Abramowitz & Stegun 26.2.17). Absolute error below 7.5e-8, which is
// enough for the likelihood grids used here and keeps the dependency
// surface flat. Symmetric by construction: Phi(-x) = 1 - Phi(x).
inline double normal_cdf(double x) {
  const double ax = std::fabs(x);
  const double t = 1.0 / (1.0 + 0.2316419 * ax);
  const double poly =
      t * (0.319381530 +
           t * (-0.356563782 +
                t * (1.781477937 + t * (-1.821255978 + t * 1.330274429))));
  const double pdf = std::exp(-0.5 * ax * ax) / std::sqrt(2.0 * M_PI);
  const double upper = pdf * poly;  // P(Z > ax)
  return x >= 0.0 ? 1.0 - upper : upper;
}

// Uniform draw strictly inside (0, 1): 53 random mantissa bits centered
// away from both endpoints, so log() and inverse-CDF transforms are safe.
inline double uniform_open(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

// Deterministic per-trial generator. Trials must not share streams, and
// reruns with the same (seed, trial) must reproduce bit-for-bit.
inline std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial),
                    static_cast<std::uint32_t>(trial >> 32)};
  return std::mt19937_64(seq);
}

// Sample mean and standard error of the mean.
inline std::pair<double, double> mean_stderr(const std::vector<double>& xs) {
  if (xs.empty()) throw validation_error("mean_stderr: empty sample");
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / static_cast<double>(xs.size());
  if (xs.size() == 1) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double var = ss / static_cast<double>(xs.size() - 1);
  return {mean, std::sqrt(var / static_cast<double>(xs.size()))};
}

}  // namespace pufferkit
