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
#include <string_view>

#include "mmc/kernels.hpp"
#include "mmc/massdist.hpp"

namespace mmc::massdist {

/// A whole dataset mapped through a fitted kernel. This is the only view of
/// the kernel the clustering pipeline has, which is what makes MMC and DMC
/// literally the same procedure.
class FeatureSpace {
 public:
  virtual ~FeatureSpace() = default;

  virtual Index size() const = 0;
  virtual std::string_view kind() const = 0;

  /// Kernel values between every pair of the given rows.
  virtual Eigen::MatrixXd similarity(std::span<const Index> rows) const = 0;

  /// masses(p, c): mean kernel value between row p and the rows labelled c,
  /// i.e. m(x_p | C_c) (or f(x_p | C_c) for density kernels). Rows with a
  /// negative label belong to no cluster. Every cluster in [0, k) must be
  /// non-empty.
  virtual Eigen::MatrixXd cluster_masses(std::span<const int> labels, int k) const = 0;
};

/// Isolation Kernel features as block indices (n x t).
class IKFeatureSpace final : public FeatureSpace {
 public:
  IKFeatureSpace(kernels::BlockMatrix blocks, int psi);
  IKFeatureSpace(const kernels::IKModel& model, const data::Dataset& data);

  Index size() const override { return blocks_.rows(); }
  std::string_view kind() const override { return "isolation"; }
  Eigen::MatrixXd similarity(std::span<const Index> rows) const override;
  Eigen::MatrixXd cluster_masses(std::span<const int> labels, int k) const override;

  const kernels::BlockMatrix& blocks() const { return blocks_; }
  int t() const { return static_cast<int>(blocks_.cols()); }
  int psi() const { return psi_; }

 private:
  kernels::BlockMatrix blocks_;
  int psi_;
};

/// Explicit dense features (n x m), e.g. the Nystrom map of a Gaussian kernel.
class DenseFeatureSpace final : public FeatureSpace {
 public:
  explicit DenseFeatureSpace(Eigen::MatrixXd features);
  DenseFeatureSpace(const kernels::NystromModel& model, const data::Dataset& data);

  Index size() const override { return features_.rows(); }
  std::string_view kind() const override { return "dense"; }
  Eigen::MatrixXd similarity(std::span<const Index> rows) const override;
  Eigen::MatrixXd cluster_masses(std::span<const int> labels, int k) const override;

  const Eigen::MatrixXd& features() const { return features_; }

 private:
  Eigen::MatrixXd features_;
};

/// sum_p masses(p, labels[p]) over a full assignment.
Objective objective_from_masses(const Eigen::MatrixXd& masses, std::span<const int> labels);

}  // namespace mmc::massdist
