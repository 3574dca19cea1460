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

#include "mmc/kernels.hpp"

#include <Eigen/Eigenvalues>

#include "mmc/parallel.hpp"
#include "mmc/rng.hpp"

namespace mmc::kernels {

std::string_view mechanism_name(Mechanism m) {
  return m == Mechanism::voronoi ? "voronoi" : "hypersphere";
}

std::optional<Mechanism> parse_mechanism(std::string_view name) {
  if (name == "voronoi") return Mechanism::voronoi;
  if (name == "hypersphere") return Mechanism::hypersphere;
  return std::nullopt;
}

int FeatureVector::set_count() const {
  int count = 0;
  for (BlockIndex b : blocks) count += b != kNoBlock;
  return count;
}

Eigen::VectorXd FeatureVector::to_dense() const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Index>(blocks.size()) * psi);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i] != kNoBlock) out(static_cast<Index>(i) * psi + blocks[i]) = 1.0;
  }
  return out;
}

IKModel fit_ik(const data::Dataset& data, int psi, int t, Mechanism mechanism,
               std::uint64_t seed) {
  const Index n = data.size();
  if (psi < 1 || t < 1) throw ConfigError("fit_ik: psi and t must be >= 1");
  if (psi > kMaxPsi) throw ConfigError("fit_ik: psi exceeds " + std::to_string(kMaxPsi));
  if (psi > n) {
    throw ConfigError("fit_ik: psi=" + std::to_string(psi) + " exceeds n=" + std::to_string(n));
  }
  IKModel model;
  model.mechanism = mechanism;
  model.t = t;
  model.psi = psi;
  model.seed = seed;
  model.centers.resize(model.feature_dim(), data.dim());
  model.center_rows.resize(static_cast<std::size_t>(model.feature_dim()));
  for (int i = 0; i < t; ++i) {
    CounterRng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    const auto rows = sample_without_replacement(n, psi, rng);
    for (int j = 0; j < psi; ++j) {
      const Index r = static_cast<Index>(i) * psi + j;
      model.center_rows[r] = rows[j];
      model.centers.row(r) = data.points.row(rows[j]);
    }
  }
  if (mechanism == Mechanism::hypersphere) {
    model.radii_sq.resize(model.feature_dim());
    for (int i = 0; i < t; ++i) {
      const Index base = static_cast<Index>(i) * psi;
      for (int j = 0; j < psi; ++j) {
        // A lone center has no neighbor; its ball covers the whole space.
        double nearest = std::numeric_limits<double>::infinity();
        for (int q = 0; q < psi; ++q) {
          if (q == j) continue;
          nearest = std::min(nearest, squared_distance(model.centers.row(base + j),
                                                       model.centers.row(base + q)));
        }
        model.radii_sq(base + j) = nearest;
      }
    }
  }
  return model;
}

BlockMatrix embed_ik_all(const IKModel& model, const PointMatrix& points) {
  if (points.cols() != model.dim()) {
    throw ConfigError("embed_ik_all: points have dimension " + std::to_string(points.cols()) +
                      ", model expects " + std::to_string(model.dim()));
  }
  const Index n = points.rows();
  const Index d = model.dim();
  const Index width = model.feature_dim();
  // Column-major copy: distances to all centers accumulate one coordinate at
  // a time, in the same order as squared_distance, so results match the
  // single-point path bit for bit.
  const Eigen::MatrixXd centers = model.centers;
  const bool sphere = model.mechanism == Mechanism::hypersphere;
  BlockMatrix out(n, model.t);
  parallel_for(n, [&](Index begin, Index end) {
    Eigen::ArrayXd dist(width);
    for (Index p = begin; p < end; ++p) {
      dist.setZero();
      for (Index j = 0; j < d; ++j) {
        dist += (centers.col(j).array() - points(p, j)).square();
      }
      for (int i = 0; i < model.t; ++i) {
        const Index base = static_cast<Index>(i) * model.psi;
        double best = std::numeric_limits<double>::infinity();
        BlockIndex best_j = kNoBlock;
        for (int j = 0; j < model.psi; ++j) {
          const double v = dist(base + j);
          if (sphere && !(v <= model.radii_sq(base + j))) continue;
          if (v < best) {
            best = v;
            best_j = static_cast<BlockIndex>(j);
          }
        }
        out(p, i) = best_j;
      }
    }
  }, 256);
  return out;
}

int shared_partitions(const FeatureVector& a, const FeatureVector& b) {
  if (a.blocks.size() != b.blocks.size()) {
    throw ConfigError("shared_partitions: feature vectors from different models");
  }
  int count = 0;
  for (std::size_t i = 0; i < a.blocks.size(); ++i) {
    count += a.blocks[i] != kNoBlock && a.blocks[i] == b.blocks[i];
  }
  return count;
}

NystromModel nystrom_from_landmarks(PointMatrix landmarks, double sigma, std::uint64_t seed) {
  if (!(sigma > 0)) throw ConfigError("nystrom: sigma must be > 0");
  const Index m = landmarks.rows();
  if (m < 1) throw ConfigError("nystrom: need at least one landmark");
  NystromModel model;
  model.sigma = sigma;
  model.seed = seed;
  model.landmarks = std::move(landmarks);
  Eigen::MatrixXd gram(m, m);
  for (Index a = 0; a < m; ++a) {
    gram(a, a) = 1.0;
    for (Index b = a + 1; b < m; ++b) {
      gram(a, b) = gram(b, a) =
          gaussian_kernel(model.landmarks.row(a), model.landmarks.row(b), sigma);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  const Eigen::VectorXd inv_sqrt =
      eig.eigenvalues().cwiseMax(kNystromEigenFloor).cwiseSqrt().cwiseInverse();
  const auto& v = eig.eigenvectors();
  model.whitening = v * inv_sqrt.asDiagonal() * v.transpose();
  // Exact symmetry regardless of rounding in the product.
  model.whitening = 0.5 * (model.whitening + model.whitening.transpose()).eval();
  return model;
}

NystromModel fit_nystrom(const data::Dataset& data, Index landmarks, double sigma,
                         std::uint64_t seed) {
  if (landmarks < 1 || landmarks > data.size()) {
    throw ConfigError("fit_nystrom: landmarks=" + std::to_string(landmarks) +
                      " must be in [1, n=" + std::to_string(data.size()) + "]");
  }
  if (!(sigma > 0)) throw ConfigError("fit_nystrom: sigma must be > 0");
  CounterRng rng(seed);
  const auto rows = sample_without_replacement(data.size(), landmarks, rng);
  PointMatrix lm(landmarks, data.dim());
  for (Index l = 0; l < landmarks; ++l) lm.row(l) = data.points.row(rows[l]);
  auto model = nystrom_from_landmarks(std::move(lm), sigma, seed);
  model.landmark_rows = rows;
  return model;
}

Eigen::MatrixXd embed_nystrom_all(const NystromModel& model, const PointMatrix& points) {
  if (points.cols() != model.dim()) {
    throw ConfigError("embed_nystrom_all: points have dimension " +
                      std::to_string(points.cols()) + ", model expects " +
                      std::to_string(model.dim()));
  }
  const Index n = points.rows();
  const Index m = model.landmarks.rows();
  const Index d = model.dim();
  const double scale = -1.0 / (2.0 * model.sigma * model.sigma);
  const Eigen::MatrixXd lm = model.landmarks;  // column-major for per-coordinate sweeps
  Eigen::MatrixXd out(n, m);
  parallel_for(n, [&](Index begin, Index end) {
    constexpr Index kChunk = 512;
    Eigen::MatrixXd k(kChunk, m);
    Eigen::ArrayXd dist(m);
    for (Index c = begin; c < end; c += kChunk) {
      const Index rows = std::min(kChunk, end - c);
      for (Index r = 0; r < rows; ++r) {
        dist.setZero();
        for (Index j = 0; j < d; ++j) dist += (lm.col(j).array() - points(c + r, j)).square();
        k.row(r) = (dist * scale).exp().matrix().transpose();
      }
      out.middleRows(c, rows).noalias() = k.topRows(rows) * model.whitening;
    }
  }, 512);
  return out;
}

}  // namespace mmc::kernels
