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

#include "mmc/feature_space.hpp"

#include "mmc/parallel.hpp"

namespace mmc::massdist {

namespace {

std::vector<Index> cluster_sizes(std::span<const int> labels, int k, Index n) {
  if (static_cast<Index>(labels.size()) != n) {
    throw ConfigError("cluster_masses: label count does not match feature rows");
  }
  if (k < 1) throw ConfigError("cluster_masses: k must be >= 1");
  std::vector<Index> sizes(static_cast<std::size_t>(k), 0);
  for (int l : labels) {
    if (l >= k) throw ConfigError("cluster_masses: label out of range");
    if (l >= 0) ++sizes[l];
  }
  for (int c = 0; c < k; ++c) {
    if (sizes[c] == 0) throw ConfigError("cluster_masses: cluster " + std::to_string(c) + " is empty");
  }
  return sizes;
}

}  // namespace

IKFeatureSpace::IKFeatureSpace(kernels::BlockMatrix blocks, int psi)
    : blocks_(std::move(blocks)), psi_(psi) {}

IKFeatureSpace::IKFeatureSpace(const kernels::IKModel& model, const data::Dataset& data)
    : blocks_(kernels::embed_ik_all(model, data.points)), psi_(model.psi) {}

Eigen::MatrixXd IKFeatureSpace::similarity(std::span<const Index> rows) const {
  const Index s = static_cast<Index>(rows.size());
  const int t = this->t();
  // Gather the sampled rows contiguously.
  kernels::BlockMatrix sub(s, t);
  for (Index a = 0; a < s; ++a) sub.row(a) = blocks_.row(rows[a]);
  Eigen::MatrixXd out(s, s);
  parallel_for(s, [&](Index begin, Index end) {
    for (Index a = begin; a < end; ++a) {
      const kernels::BlockIndex* ra = sub.row(a).data();
      int self = 0;
      for (int i = 0; i < t; ++i) self += ra[i] != kernels::kNoBlock;
      out(a, a) = static_cast<double>(self) / t;
      for (Index b = a + 1; b < s; ++b) {
        const kernels::BlockIndex* rb = sub.row(b).data();
        int shared = 0;
        for (int i = 0; i < t; ++i) shared += (ra[i] == rb[i]) & (ra[i] != kernels::kNoBlock);
        out(a, b) = static_cast<double>(shared) / t;
      }
    }
  }, 16);
  out.triangularView<Eigen::StrictlyLower>() = out.transpose();
  return out;
}

Eigen::MatrixXd IKFeatureSpace::cluster_masses(std::span<const int> labels, int k) const {
  const Index n = size();
  const auto sizes = cluster_sizes(labels, k, n);
  const int t = this->t();
  const std::size_t width = static_cast<std::size_t>(t) * psi_;
  // counts[c * width + i * psi + b]: members of c in partition b of partitioning i.
  std::vector<std::int32_t> counts(width * static_cast<std::size_t>(k), 0);
  for (Index p = 0; p < n; ++p) {
    const int c = labels[p];
    if (c < 0) continue;
    std::int32_t* base = counts.data() + width * static_cast<std::size_t>(c);
    const kernels::BlockIndex* row = blocks_.row(p).data();
    for (int i = 0; i < t; ++i) {
      if (row[i] != kernels::kNoBlock) ++base[static_cast<std::size_t>(i) * psi_ + row[i]];
    }
  }
  std::vector<double> denom(static_cast<std::size_t>(k));
  for (int c = 0; c < k; ++c) denom[c] = static_cast<double>(t) * static_cast<double>(sizes[c]);

  Eigen::MatrixXd out(n, k);
  parallel_for(n, [&](Index begin, Index end) {
    std::vector<std::int64_t> acc(static_cast<std::size_t>(k));
    for (Index p = begin; p < end; ++p) {
      std::fill(acc.begin(), acc.end(), 0);
      const kernels::BlockIndex* row = blocks_.row(p).data();
      for (int i = 0; i < t; ++i) {
        if (row[i] == kernels::kNoBlock) continue;
        const std::size_t off = static_cast<std::size_t>(i) * psi_ + row[i];
        for (int c = 0; c < k; ++c) acc[c] += counts[width * static_cast<std::size_t>(c) + off];
      }
      for (int c = 0; c < k; ++c) out(p, c) = static_cast<double>(acc[c]) / denom[c];
    }
  });
  return out;
}

DenseFeatureSpace::DenseFeatureSpace(Eigen::MatrixXd features) : features_(std::move(features)) {}

DenseFeatureSpace::DenseFeatureSpace(const kernels::NystromModel& model, const data::Dataset& data)
    : features_(kernels::embed_nystrom_all(model, data.points)) {}

Eigen::MatrixXd DenseFeatureSpace::similarity(std::span<const Index> rows) const {
  const Index s = static_cast<Index>(rows.size());
  Eigen::MatrixXd sub(s, features_.cols());
  for (Index a = 0; a < s; ++a) sub.row(a) = features_.row(rows[a]);
  Eigen::MatrixXd out(s, s);
  out.noalias() = sub * sub.transpose();
  // Symmetrize so pairwise decisions (kappa > tau) never depend on order.
  out.triangularView<Eigen::StrictlyLower>() = out.transpose();
  return out;
}

Eigen::MatrixXd DenseFeatureSpace::cluster_masses(std::span<const int> labels, int k) const {
  const Index n = size();
  const auto sizes = cluster_sizes(labels, k, n);
  Eigen::MatrixXd means = Eigen::MatrixXd::Zero(features_.cols(), k);
  for (Index p = 0; p < n; ++p) {
    if (labels[p] >= 0) means.col(labels[p]) += features_.row(p).transpose();
  }
  for (int c = 0; c < k; ++c) means.col(c) /= static_cast<double>(sizes[c]);
  Eigen::MatrixXd out(n, k);
  out.noalias() = features_ * means;
  return out;
}

Objective objective_from_masses(const Eigen::MatrixXd& masses, std::span<const int> labels) {
  Objective obj;
  for (Index p = 0; p < masses.rows(); ++p) obj.raw += masses(p, labels[p]);
  obj.normalized = masses.rows() > 0 ? obj.raw / static_cast<double>(masses.rows()) : 0.0;
  return obj;
}

}  // namespace mmc::massdist
