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

#include <span>
#include <vector>

#include "mmc/data.hpp"
#include "mmc/kernels.hpp"

namespace mmc::massdist {

/// Kernel mean embedding of a point set under an Isolation Kernel.
///
/// Stores, per partitioning and partition, how many members fall in it; the
/// mean feature vector is counts / size, and each partitioning's block of
/// the mean is the empirical probability mass of its partitions. Keeping
/// integer counts makes masses exact rationals count / (t * size).
class IKMeanMap {
 public:
  IKMeanMap(int t, int psi);

  void add(const kernels::FeatureVector& f);
  void remove(const kernels::FeatureVector& f);
  template <typename Row>
  void add_blocks(const Row& blocks, int delta);

  int t() const { return t_; }
  int psi() const { return psi_; }
  Index size() const { return size_; }
  Index feature_dim() const { return static_cast<Index>(t_) * psi_; }
  std::int64_t count(int partitioning, int block) const {
    return counts_[static_cast<std::size_t>(partitioning) * psi_ + block];
  }
  /// Sum over members of shared partitions with `f` (an integer).
  std::int64_t matched_count(const kernels::FeatureVector& f) const;
  Eigen::VectorXd mean_features() const;
  /// Sum of partitioning i's block of the mean: 1 for Voronoi, <= 1 for
  /// hyperspheres.
  double block_sum(int partitioning) const;

 private:
  int t_;
  int psi_;
  Index size_ = 0;
  std::vector<std::int64_t> counts_;
};

template <typename Row>
void IKMeanMap::add_blocks(const Row& blocks, int delta) {
  for (int i = 0; i < t_; ++i) {
    const auto b = blocks[i];
    if (b != kernels::kNoBlock) counts_[static_cast<std::size_t>(i) * psi_ + b] += delta;
  }
  size_ += delta;
}

/// Kernel mean embedding with dense features (Nystrom / any explicit map).
class DenseMeanMap {
 public:
  explicit DenseMeanMap(Index feature_dim) : sum_(Eigen::VectorXd::Zero(feature_dim)) {}

  void add(const Eigen::Ref<const Eigen::VectorXd>& f) { sum_ += f; ++size_; }
  void remove(const Eigen::Ref<const Eigen::VectorXd>& f) { sum_ -= f; --size_; }

  Index size() const { return size_; }
  Index feature_dim() const { return sum_.size(); }
  Eigen::VectorXd mean_features() const { return sum_ / static_cast<double>(size_); }

 private:
  Eigen::VectorXd sum_;
  Index size_ = 0;
};

/// Phi(C): the mean of phi over the member rows. Throws ConfigError when
/// members is empty.
IKMeanMap mean_map(const kernels::IKModel& model, const data::Dataset& data,
                   std::span<const Index> members);
DenseMeanMap mean_map(const kernels::NystromModel& model, const data::Dataset& data,
                      std::span<const Index> members);

/// m(x|C) = <phi(x), Phi(C)> / t, the average IK similarity of x to C.
double mass(const kernels::FeatureVector& fx, const IKMeanMap& cmm);

template <typename Derived>
double mass(const kernels::IKModel& model, const Eigen::MatrixBase<Derived>& x,
            const IKMeanMap& cmm) {
  if (cmm.t() != model.t || cmm.psi() != model.psi) {
    throw ConfigError("mass: mean map was built from a different model");
  }
  return mass(kernels::embed_ik(model, x), cmm);
}

/// f(x|C) = <phi(x), Phi(C)> under the Nystrom map: the average Gaussian
/// kernel value between x and the members of C.
template <typename Derived>
double density(const kernels::NystromModel& model, const Eigen::MatrixBase<Derived>& x,
               const DenseMeanMap& cmm) {
  if (cmm.feature_dim() != model.feature_dim()) {
    throw ConfigError("density: mean map was built from a different model");
  }
  if (cmm.size() < 1) throw ConfigError("density: empty mean map");
  return kernels::embed_nystrom(model, x).dot(cmm.mean_features());
}

struct MassChoice {
  Index index = 0;
  double value = 0;
};

/// max_j m(x|C_j) and the lowest j attaining it.
template <typename Derived>
MassChoice mass_distribution(const kernels::IKModel& model, const Eigen::MatrixBase<Derived>& x,
                             std::span<const IKMeanMap> cmms) {
  if (cmms.empty()) throw ConfigError("mass_distribution: no clusters");
  const auto fx = kernels::embed_ik(model, x);
  MassChoice best{0, mass(fx, cmms[0])};
  for (std::size_t j = 1; j < cmms.size(); ++j) {
    const double v = mass(fx, cmms[j]);
    if (v > best.value) best = {static_cast<Index>(j), v};
  }
  return best;
}

template <typename Derived>
MassChoice mass_distribution(const kernels::NystromModel& model,
                             const Eigen::MatrixBase<Derived>& x,
                             std::span<const DenseMeanMap> cmms) {
  if (cmms.empty()) throw ConfigError("mass_distribution: no clusters");
  const Eigen::VectorXd fx = kernels::embed_nystrom(model, x);
  MassChoice best{0, fx.dot(cmms[0].mean_features())};
  for (std::size_t j = 1; j < cmms.size(); ++j) {
    const double v = fx.dot(cmms[j].mean_features());
    if (v > best.value) best = {static_cast<Index>(j), v};
  }
  return best;
}

/// Total-mass objective M(D) for a given assignment.
struct Objective {
  double raw = 0;         // sum over clusters and members of m(x|own cluster)
  double normalized = 0;  // raw / n
};

/// `labels` holds one 0-based cluster index per data row. Throws
/// ConfigError when some cluster in [0, max label] is empty or a label is
/// negative.
Objective total_objective(const kernels::IKModel& model, const data::Dataset& data,
                          std::span<const int> labels);
Objective total_objective(const kernels::NystromModel& model, const data::Dataset& data,
                          std::span<const int> labels);

/// Number of clusters implied by labels (max + 1); validates that every
/// label is non-negative and every cluster is non-empty.
int cluster_count(std::span<const int> labels);

}  // namespace mmc::massdist
