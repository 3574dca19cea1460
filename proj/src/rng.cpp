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

#include "mmc/rng.hpp"

#include <cmath>
#include <numbers>
#include <unordered_set>
#include <utility>

#include "mmc/error.hpp"

namespace mmc {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return splitmix64(splitmix64(master + kGolden) ^ (stream * kGolden + 1));
}

std::uint64_t CounterRng::next() {
  ++counter_;
  return splitmix64(key_ + counter_ * kGolden);
}

double CounterRng::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::uint64_t CounterRng::below(std::uint64_t bound) {
  if (bound == 0) throw ConfigError("CounterRng::below: bound must be > 0");
  // Reject the final partial copy of [0, bound) in the 64-bit range.
  const std::uint64_t limit = -bound % bound;  // == 2^64 mod bound
  for (;;) {
    const std::uint64_t r = next();
    if (r >= limit) return r % bound;
  }
}

double CounterRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_normal_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::vector<Index> sample_without_replacement(Index population, Index count,
                                              CounterRng& rng) {
  if (count < 0 || count > population) {
    throw ConfigError("sample size " + std::to_string(count) +
                      " exceeds population " + std::to_string(population));
  }
  std::vector<Index> out;
  out.reserve(static_cast<std::size_t>(count));
  if (count * 2 >= population) {
    // Dense case: partial Fisher-Yates over the full index range.
    std::vector<Index> all(static_cast<std::size_t>(population));
    for (Index i = 0; i < population; ++i) all[i] = i;
    for (Index i = 0; i < count; ++i) {
      const Index j =
          i + static_cast<Index>(rng.below(static_cast<std::uint64_t>(population - i)));
      std::swap(all[i], all[j]);
      out.push_back(all[i]);
    }
    return out;
  }
  // Sparse case: Floyd's algorithm, then shuffle to randomize order.
  std::unordered_set<Index> chosen;
  chosen.reserve(static_cast<std::size_t>(count) * 2);
  for (Index j = population - count; j < population; ++j) {
    const Index r = static_cast<Index>(rng.below(static_cast<std::uint64_t>(j + 1)));
    const Index pick = chosen.contains(r) ? j : r;
    chosen.insert(pick);
    out.push_back(pick);
  }
  for (Index i = count - 1; i > 0; --i) {
    const Index j = static_cast<Index>(rng.below(static_cast<std::uint64_t>(i + 1)));
    std::swap(out[i], out[j]);
  }
  return out;
}

}  // namespace mmc
