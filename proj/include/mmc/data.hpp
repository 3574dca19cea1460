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
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mmc/types.hpp"

namespace mmc::data {

/// n points in d dimensions, optionally labeled.
struct Dataset {
  PointMatrix points;
  std::optional<std::vector<int>> labels;
  std::string name;

  Index size() const { return points.rows(); }
  Index dim() const { return points.cols(); }
  bool has_labels() const { return labels.has_value(); }
  auto point(Index i) const { return points.row(i); }

  /// Throws DataError when n == 0, d == 0 or labels have the wrong length.
  void validate() const;
};

/// Indices of a uniform sample without replacement.
struct SampleSet {
  std::vector<Index> indices;
  std::uint64_t seed = 0;

  Index size() const { return static_cast<Index>(indices.size()); }
};

/// Reads a comma-separated file. A first row containing any non-numeric
/// cell is treated as a header. `label_column` names a header column, or
/// gives a 0-based column number when the file has no header. Integer
/// label cells keep their value; otherwise labels are numbered by first
/// appearance.
Dataset load_csv(const std::string& path,
                 const std::optional<std::string>& label_column = std::nullopt);
Dataset read_csv(std::istream& in, const std::optional<std::string>& label_column,
                 std::string name = "stdin");

/// Writes `x0..x{d-1}` columns plus a trailing integer `label` column when
/// labels are present. Values use the shortest round-trip representation.
void write_csv(std::ostream& out, const Dataset& data);

/// Rescales each column to [0,1]; constant columns become 0.
Dataset normalize_minmax(Dataset data);

/// Uniform sample of s distinct indices; deterministic given seed.
SampleSet subsample(Index n, Index s, std::uint64_t seed);
inline SampleSet subsample(const Dataset& data, Index s, std::uint64_t seed) {
  return subsample(data.size(), s, seed);
}

/// 64-bit FNV-1a over the shape, coordinates and labels.
std::uint64_t dataset_hash(const Dataset& data);

// ---------------------------------------------------------------------------
// Synthetic benchmark families.

enum class Family {
  two_gaussians_varied_density,  // one dense and one sparse Gaussian, touching
  three_gaussians_3G,            // two adjacent dense Gaussians + distant sparse one
  ring_gaussians_RingG,          // two dense Gaussians + two sparse rings
  subspace_gaussian,             // two clusters Gaussian in disjoint subspaces
  scaleup_arc_mix,               // two Gaussians and an arc
};

struct SyntheticSpec {
  Family family = Family::three_gaussians_3G;
  int d_noise = 10;  // subspace_gaussian only: dims per subspace
};

std::string_view family_name(Family family);
std::optional<Family> parse_family(std::string_view name);
int family_cluster_count(Family family);

/// Generates a labeled, min-max normalized dataset of n points. Cluster
/// sizes follow fixed proportions per family; deterministic per
/// (spec, n, seed). Throws ConfigError when n is below the cluster count.
Dataset generate_synthetic(const SyntheticSpec& spec, Index n, std::uint64_t seed);

}  // namespace mmc::data
