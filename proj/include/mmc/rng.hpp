/*
 * Copyright 2026 The MMC Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <vector>

#include "mmc/types.hpp"

namespace mmc {

/// SplitMix64 finalizer: a bijective 64-bit mixing function.
std::uint64_t splitmix64(std::uint64_t x);

/// Derives an independent stream seed from a master seed and a stream id.
/// Used to give every partitioning, trial and generator component its own
/// reproducible seed regardless of evaluation order.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

/// Counter-based SplitMix64 generator.
///
/// Output i is `splitmix64(key + (i + 1) * 0x9E3779B97F4A7C15)`, so a value
/// depends only on (seed, position). All derived variates (uniform reals,
/// bounded integers, normals) are computed here rather than through
/// `<random>` distributions, whose algorithms are implementation-defined.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : key_(splitmix64(seed)) {}

  std::uint64_t next();

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, bound); bound must be positive. Rejection
  /// sampling keeps the result unbiased.
  std::uint64_t below(std::uint64_t bound);

  /// Standard normal variate (Box-Muller, both halves used).
  double normal();

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

/// Draws `count` distinct values from [0, population) uniformly without
/// replacement, in uniformly random order. Runs in O(count) expected time
/// (Floyd's algorithm followed by a shuffle), independent of population.
std::vector<Index> sample_without_replacement(Index population, Index count,
                                              CounterRng& rng);

}  // namespace mmc
