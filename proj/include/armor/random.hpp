// Copyright 2026 The ARMOR-Tabular Authors.
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

#include <cstddef>
#include <cmath>
#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace armor {

// Thin wrapper around std::mt19937_64. The integer-to-real and categorical
// transforms are written out here rather than using the <random>
// distributions, whose output sequences differ across standard libraries;
// that keeps datasets and traces reproducible byte-for-byte.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform on {0, ..., n-1}; n must be positive.
  std::size_t index(std::size_t n) {
    auto i = static_cast<std::size_t>(uniform() * static_cast<double>(n));
    return i < n ? i : n - 1;
  }

  // Samples an index proportionally to the (nonnegative) entries of `probs`.
  template <typename Derived>
  Eigen::Index categorical(const Eigen::DenseBase<Derived>& probs) {
    const double u = uniform() * static_cast<double>(probs.sum());
    double acc = 0.0;
    Eigen::Index last_positive = 0;
    for (Eigen::Index i = 0; i < probs.size(); ++i) {
      const double p = static_cast<double>(probs(i));
      if (p <= 0.0) continue;
      acc += p;
      last_positive = i;
      if (u < acc) return i;
    }
    return last_positive;
  }

  // Standard exponential draw; normalised exponentials give Dirichlet(1).
  double exponential() { return -std::log1p(-uniform()); }

 private:
  std::mt19937_64 engine_;
};

// SplitMix64 finaliser, used to derive independent per-trial seeds from a
// base seed and a stream index.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace armor
