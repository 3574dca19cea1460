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

#include <Eigen/Dense>

namespace mmc {

using Index = Eigen::Index;

// Points are stored one per row; row-major keeps each point contiguous.
template <typename Scalar>
using PointMatrixT =
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using PointMatrix = PointMatrixT<double>;

// Squared Euclidean distance between two points given as any Eigen
// expression (rows, columns, blocks, maps).
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar squared_distance(
    const Eigen::MatrixBase<DerivedA>& a,
    const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  Scalar acc = 0;
  const Index d = a.size();
  for (Index j = 0; j < d; ++j) {
    const Scalar diff = a.derived().coeff(j) - b.derived().coeff(j);
    acc += diff * diff;
  }
  return acc;
}

}  // namespace mmc
