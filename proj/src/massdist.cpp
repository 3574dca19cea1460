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

#include "mmc/massdist.hpp"

#include <algorithm>

#include "mmc/feature_space.hpp"

namespace mmc::massdist {

IKMeanMap::IKMeanMap(int t, int psi)
    : t_(t), psi_(psi), counts_(static_cast<std::size_t>(t) * psi, 0) {
  if (t < 1 || psi < 1) throw ConfigError("IKMeanMap: t and psi must be >= 1");
}

void IKMeanMap::add(const kernels::FeatureVector& f) {
  if (f.t() != t_ || f.psi != psi_) throw ConfigError("IKMeanMap::add: feature shape mismatch");
  add_blocks(f.blocks, +1);
}

void IKMeanMap::remove(const kernels::FeatureVector& f) {
  if (f.t() != t_ || f.psi != psi_) throw ConfigError("IKMeanMap::remove: feature shape mismatch");
  if (size_ < 1) throw ConfigError("IKMeanMap::remove: mean map is empty");
  add_blocks(f.blocks, -1);
}

std::int64_t IKMeanMap::matched_count(const kernels::FeatureVector& f) const {
  if (f.t() != t_ || f.psi != psi_) throw ConfigError("mass: feature shape mismatch");
  std::int64_t total = 0;
  for (int i = 0; i < t_; ++i) {
    if (f.blocks[i] != kernels::kNoBlock) total += count(i, f.blocks[i]);
  }
  return total;
}

Eigen::VectorXd IKMeanMap::mean_features() const {
  Eigen::VectorXd out(feature_dim());
  for (Index j = 0; j < feature_dim(); ++j) {
    out(j) = static_cast<double>(counts_[j]) / static_cast<double>(size_);
  }
  return out;
}

double IKMeanMap::block_sum(int partitioning) const {
  std::int64_t total = 0;
  for (int b = 0; b < psi_; ++b) total += count(partitioning, b);
  return static_cast<double>(total) / static_cast<double>(size_);
}

IKMeanMap mean_map(const kernels::IKModel& model, const data::Dataset& data,
                   std::span<const Index> members) {
  if (members.empty()) throw ConfigError("mean_map: empty member set");
  IKMeanMap cmm(model.t, model.psi);
  for (Index r : members) cmm.add(kernels::embed_ik(model, data.points.row(r)));
  return cmm;
}

DenseMeanMap mean_map(const kernels::NystromModel& model, const data::Dataset& data,
                      std::span<const Index> members) {
  if (members.empty()) throw ConfigError("mean_map: empty member set");
  DenseMeanMap cmm(model.feature_dim());
  for (Index r : members) cmm.add(kernels::embed_nystrom(model, data.points.row(r)));
  return cmm;
}

double mass(const kernels::FeatureVector& fx, const IKMeanMap& cmm) {
  if (cmm.size() < 1) throw ConfigError("mass: empty mean map");
  return static_cast<double>(cmm.matched_count(fx)) /
         (static_cast<double>(cmm.t()) * static_cast<double>(cmm.size()));
}

int cluster_count(std::span<const int> labels) {
  if (labels.empty()) throw ConfigError("assignment is empty");
  int k = 0;
  for (int l : labels) {
    if (l < 0) throw ConfigError("assignment has a negative label");
    k = std::max(k, l + 1);
  }
  std::vector<Index> sizes(static_cast<std::size_t>(k), 0);
  for (int l : labels) ++sizes[l];
  for (int c = 0; c < k; ++c) {
    if (sizes[c] == 0) throw ConfigError("cluster " + std::to_string(c) + " is empty");
  }
  return k;
}

Objective total_objective(const kernels::IKModel& model, const data::Dataset& data,
                          std::span<const int> labels) {
  if (static_cast<Index>(labels.size()) != data.size()) {
    throw ConfigError("total_objective: label count does not match dataset size");
  }
  const int k = cluster_count(labels);
  IKFeatureSpace space(model, data);
  return objective_from_masses(space.cluster_masses(labels, k), labels);
}

Objective total_objective(const kernels::NystromModel& model, const data::Dataset& data,
                          std::span<const int> labels) {
  if (static_cast<Index>(labels.size()) != data.size()) {
    throw ConfigError("total_objective: label count does not match dataset size");
  }
  const int k = cluster_count(labels);
  DenseFeatureSpace space(model, data);
  return objective_from_masses(space.cluster_masses(labels, k), labels);
}

}  // namespace mmc::massdist
