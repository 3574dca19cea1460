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

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mmc/data.hpp"
#include "mmc/error.hpp"
#include "mmc/types.hpp"

namespace mmc::kernels {

// ---------------------------------------------------------------------------
// Isolation Kernel

enum class Mechanism { voronoi, hypersphere };

std::string_view mechanism_name(Mechanism m);
std::optional<Mechanism> parse_mechanism(std::string_view name);

/// Partition index inside one partitioning. `kNoBlock` marks a point that
/// falls in no hypersphere.
using BlockIndex = std::uint16_t;
inline constexpr BlockIndex kNoBlock = std::numeric_limits<BlockIndex>::max();
inline constexpr int kMaxPsi = kNoBlock - 1;

/// A fitted Isolation Kernel: t partitionings, each induced by psi points
/// sampled without replacement from the fit data.
struct IKModel {
  Mechanism mechanism = Mechanism::voronoi;
  int t = 0;
  int psi = 0;
  std::uint64_t seed = 0;
  /// Row i * psi + j is center j of partitioning i.
  PointMatrix centers;
  /// Data row each center was drawn from.
  std::vector<Index> center_rows;
  /// Hypersphere only: squared radius of each center, i.e. the squared
  /// distance to its nearest other center in the same partitioning.
  Eigen::VectorXd radii_sq;

  Index dim() const { return centers.cols(); }
  Index feature_dim() const { return static_cast<Index>(t) * psi; }
};

/// phi(x) stored as one partition index per partitioning. The equivalent
/// binary vector has length t * psi with a one at i * psi + blocks[i].
struct FeatureVector {
  std::vector<BlockIndex> blocks;
  int psi = 0;

  int t() const { return static_cast<int>(blocks.size()); }
  /// Number of set bits; equals t for Voronoi.
  int set_count() const;
  Eigen::VectorXd to_dense() const;
};

/// Fits t partitionings of psi points each. Partitioning i draws its sample
/// from its own sub-seed, so the model does not depend on evaluation order.
IKModel fit_ik(const data::Dataset& data, int psi, int t, Mechanism mechanism,
               std::uint64_t seed);

/// Index of the partition containing x in partitioning `i`, or kNoBlock.
/// Voronoi: nearest center, lowest index on ties. Hypersphere: nearest
/// center among those whose closed ball contains x.
template <typename Derived>
BlockIndex partition_of(const IKModel& model, int i, const Eigen::MatrixBase<Derived>& x) {
  const Index base = static_cast<Index>(i) * model.psi;
  double best = std::numeric_limits<double>::infinity();
  BlockIndex best_j = kNoBlock;
  const bool sphere = model.mechanism == Mechanism::hypersphere;
  for (int j = 0; j < model.psi; ++j) {
    const double dist = squared_distance(model.centers.row(base + j), x);
    if (sphere && !(dist <= model.radii_sq(base + j))) continue;
    if (dist < best) {
      best = dist;
      best_j = static_cast<BlockIndex>(j);
    }
  }
  return best_j;
}

template <typename Derived>
FeatureVector embed_ik(const IKModel& model, const Eigen::MatrixBase<Derived>& x) {
  if (x.size() != model.dim()) {
    throw ConfigError("embed_ik: point has dimension " + std::to_string(x.size()) +
                      ", model expects " + std::to_string(model.dim()));
  }
  FeatureVector out;
  out.psi = model.psi;
  out.blocks.resize(static_cast<std::size_t>(model.t));
  for (int i = 0; i < model.t; ++i) out.blocks[i] = partition_of(model, i, x);
  return out;
}

/// Block indices for every row of `points`: an n x t row-major matrix.
using BlockMatrix =
    Eigen::Matrix<BlockIndex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
BlockMatrix embed_ik_all(const IKModel& model, const PointMatrix& points);

/// Count of partitionings where both land in the same (non-empty) partition.
int shared_partitions(const FeatureVector& a, const FeatureVector& b);

template <typename DerivedA, typename DerivedB>
double ik_similarity(const IKModel& model, const Eigen::MatrixBase<DerivedA>& x,
                     const Eigen::MatrixBase<DerivedB>& y) {
  const auto fx = embed_ik(model, x);
  const auto fy = embed_ik(model, y);
  return static_cast<double>(shared_partitions(fx, fy)) / model.t;
}

// ---------------------------------------------------------------------------
// Gaussian kernel

/// exp(-|x - y|^2 / (2 sigma^2)).
template <typename DerivedA, typename DerivedB>
double gaussian_kernel(const Eigen::MatrixBase<DerivedA>& x,
                       const Eigen::MatrixBase<DerivedB>& y, double sigma) {
  return std::exp(-squared_distance(x, y) / (2.0 * sigma * sigma));
}

inline constexpr double kNystromEigenFloor = 1e-10;

/// Nystrom approximation of the Gaussian kernel from m landmark points.
struct NystromModel {
  double sigma = 1.0;
  std::uint64_t seed = 0;
  PointMatrix landmarks;
  std::vector<Index> landmark_rows;
  /// Symmetric W^(-1/2) of the landmark Gram matrix W, with eigenvalues
  /// clamped to kNystromEigenFloor before inversion.
  Eigen::MatrixXd whitening;

  Index dim() const { return landmarks.cols(); }
  Index feature_dim() const { return landmarks.rows(); }
};

NystromModel fit_nystrom(const data::Dataset& data, Index landmarks, double sigma,
                         std::uint64_t seed);

/// Builds the model from explicit landmarks (no sampling).
NystromModel nystrom_from_landmarks(PointMatrix landmarks, double sigma,
                                    std::uint64_t seed = 0);

template <typename Derived>
Eigen::VectorXd embed_nystrom(const NystromModel& model, const Eigen::MatrixBase<Derived>& x) {
  if (x.size() != model.dim()) {
    throw ConfigError("embed_nystrom: point has dimension " + std::to_string(x.size()) +
                      ", model expects " + std::to_string(model.dim()));
  }
  const Index m = model.landmarks.rows();
  Eigen::VectorXd k(m);
  for (Index l = 0; l < m; ++l) k(l) = gaussian_kernel(model.landmarks.row(l), x, model.sigma);
  return model.whitening * k;
}

/// n x m feature matrix, one embedded point per row.
Eigen::MatrixXd embed_nystrom_all(const NystromModel& model, const PointMatrix& points);

template <typename DerivedA, typename DerivedB>
double nystrom_similarity(const NystromModel& model, const Eigen::MatrixBase<DerivedA>& x,
                          const Eigen::MatrixBase<DerivedB>& y) {
  return embed_nystrom(model, x).dot(embed_nystrom(model, y));
}

}  // namespace mmc::kernels
