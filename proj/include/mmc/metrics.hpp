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

#include <Eigen/Dense>

#include "mmc/types.hpp"

namespace mmc::metrics {

/// Co-occurrence counts between predicted clusters (rows) and true classes
/// (columns). Labels are compacted to 0..r-1 and 0..c-1 in order of first
/// appearance, so any integer labelling is accepted.
struct ContingencyTable {
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> counts;
  std::vector<std::int64_t> row_sums;
  std::vector<std::int64_t> col_sums;
  std::int64_t n = 0;

  Index rows() const { return counts.rows(); }
  Index cols() const { return counts.cols(); }
};

/// Throws ConfigError on length mismatch or empty input.
ContingencyTable contingency(std::span<const int> pred, std::span<const int> truth);

/// Maximum-weight one-to-one matching on a rectangular weight matrix.
/// Returns, for each row, the matched column or -1.
std::vector<int> hungarian_max(const Eigen::MatrixXd& weights);

/// F1 after the one-to-one cluster/class matching that maximizes the
/// number of matched points. TP, FP and FN are pooled over matched pairs:
/// a matched cluster's other points are FP, a matched class's missed points
/// are FN.
double f1_score(std::span<const int> pred, std::span<const int> truth);

/// Adjusted mutual information with natural logs, max normalization and the
/// hypergeometric expected MI. Two single-block partitions score 1.
double ami_score(std::span<const int> pred, std::span<const int> truth);

double mutual_information(const ContingencyTable& table);
double entropy(std::span<const std::int64_t> marginals, std::int64_t n);
double expected_mutual_information(const ContingencyTable& table);

}  // namespace mmc::metrics
