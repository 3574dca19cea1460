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

#include <optional>
#include <span>
#include <vector>

#include "mmc/clustering.hpp"
#include "mmc/data.hpp"
#include "mmc/feature_space.hpp"

namespace mmc::analysis {

/// Pairwise analyses are O(n^2) in memory and time.
inline constexpr Index kMaxPairwisePoints = 5000;

/// Full n x n kernel matrices.
Eigen::MatrixXd kernel_matrix(const massdist::FeatureSpace& space);
Eigen::MatrixXd gaussian_kernel_matrix(const PointMatrix& points, double sigma);

// ---------------------------------------------------------------------------
// Cohesiveness

struct ComponentStats {
  Index size = 0;
  /// Mean pairwise similarity; NaN for singletons.
  double cohesiveness = 0;
  /// Members per class (when labels are given), indexed by compacted class.
  std::vector<Index> class_counts;
  /// Some member pair has similarity above tau (always true for size >= 2).
  bool has_pair_above_tau = false;
};

struct CohesivenessRecord {
  double tau = 0;
  /// Components sorted by size, largest first.
  std::vector<ComponentStats> components;

  int component_count() const { return static_cast<int>(components.size()); }
};

struct CohesivenessCurve {
  std::vector<CohesivenessRecord> records;
  /// Class ids in compacted order (empty without labels).
  std::vector<int> classes;
  std::vector<Index> class_sizes;
};

/// Components of the graph with an edge iff similarity > tau, for each tau,
/// with their mean within-component similarity. `similarity` must be at
/// most kMaxPairwisePoints square; `tau_grid` ascending and non-empty.
CohesivenessCurve cohesiveness_curve(const Eigen::MatrixXd& similarity,
                                     std::span<const double> tau_grid,
                                     const std::vector<int>* labels = nullptr);

/// The component representing class `cls` at one tau: the largest
/// component whose majority class is `cls`, provided it has >= 2 members
/// and holds at least `min_fraction` of the class. Smaller pieces are
/// tail fragments, not the cluster: a handful of nearby points can be more
/// cohesive than any real cluster.
inline constexpr double kDefaultMinFraction = 0.3;
std::optional<ComponentStats> class_component(const CohesivenessCurve& curve, std::size_t record,
                                              int cls, double min_fraction = kDefaultMinFraction);

/// Cohesiveness of a dense and a sparse class at the taus where both have
/// a component.
struct CohesivenessComparison {
  std::vector<double> taus;
  std::vector<double> dense;
  std::vector<double> sparse;

  bool dense_always_higher() const;
  /// |dense - sparse| / max(dense, sparse) per tau.
  std::vector<double> relative_gaps() const;
};

CohesivenessComparison compare_classes(const CohesivenessCurve& curve, int dense_class,
                                       int sparse_class,
                                       double min_fraction = kDefaultMinFraction);

/// Mean Euclidean distance from each member of class `cls` to its nearest
/// other member. Smaller means denser.
double mean_nn_distance(const data::Dataset& data, int cls);

/// Class ids ordered from densest to sparsest by mean_nn_distance.
std::vector<int> classes_by_density(const data::Dataset& data);

// ---------------------------------------------------------------------------
// Failure conditions of density-based seeding

struct ConditionOne {
  int sparse_class = -1;
  int dense_class_a = -1;
  int dense_class_b = -1;
  Index sparse_peak = -1;
  Index dense_peak_a = -1;
  Index dense_peak_b = -1;
  /// Largest similarity of another sparse member to the sparse peak.
  double sparse_peak_similarity = 0;
  /// Best over chains linking the dense peaks of the weakest link.
  double bottleneck = 0;
  /// sparse_peak_similarity < bottleneck: no tau separates the dense pair
  /// while keeping the sparse cluster.
  bool triggered = false;
};

/// Requires exactly three classes; the sparsest (largest mean_nn_distance)
/// plays the sparse role. Throws ConfigError otherwise.
ConditionOne check_condition_one(const Eigen::MatrixXd& similarity, const data::Dataset& data);

/// Max over paths from `from` to `to` of the minimum edge similarity,
/// computed on the maximum spanning tree.
double bottleneck_similarity(const Eigen::MatrixXd& similarity, Index from, Index to);

inline constexpr double kConditionTwoRatio = 4.0;

struct ConditionTwo {
  int dense_class = -1;
  int sparse_class = -1;
  /// min over members of the similarity to their most similar co-member.
  double dense_min = 0;
  double sparse_min = 0;
  /// dense_min / sparse_min (infinite when sparse_min is 0 and dense_min > 0).
  double ratio = 0;
  bool holds = false;  // ratio >= threshold
};

/// Requires exactly two classes of >= 2 points each.
ConditionTwo check_condition_two(const Eigen::MatrixXd& similarity, const data::Dataset& data,
                                 double threshold = kConditionTwoRatio);

// ---------------------------------------------------------------------------
// Objective as a proxy for agreement with the truth

struct CorrectionPoint {
  Index corrected = 0;
  double objective = 0;  // normalized M(D)
  double ami = 0;
};

/// Starts from uniformly random labels and fixes `batch` points at a time
/// (in random order) to their true class, recording M(D) and AMI after
/// each batch, until every point is corrected. Clusters left empty by the
/// random start are skipped in M(D).
std::vector<CorrectionPoint> correction_curve(const massdist::FeatureSpace& space,
                                              const data::Dataset& data, Index batch,
                                              std::uint64_t seed);

/// Rank correlation with average ranks for ties.
double spearman(std::span<const double> x, std::span<const double> y);

// ---------------------------------------------------------------------------
// Scaling

struct ScalePoint {
  Index n = 0;
  double total_seconds = 0;
  double fit_seconds = 0;
  double seed_seconds = 0;
  double assign_seconds = 0;
  double refine_seconds = 0;
  int refine_iters = 0;
  double initial_objective = 0;  // normalized M(D) before refinement
  double objective = 0;          // and after
  /// Timing was under the clock-resolution floor and is not fitted.
  bool below_resolution = false;
};

struct ScaleReport {
  std::vector<ScalePoint> points;
  double slope = 0;
  double intercept = 0;
  std::size_t fitted_points = 0;
};

struct ScaleOptions {
  data::SyntheticSpec family{data::Family::scaleup_arc_mix};
  std::vector<Index> sizes{1500, 15000, 150000, 1500000};
  clustering::ClusterParams params;
  std::uint64_t data_seed = 0;
  /// Timings shorter than this are flagged.
  double resolution_seconds = 1e-3;
  bool warmup = true;
};

/// Least-squares slope of log(seconds) on log(n) over the upper half of the
/// unflagged points (at least two).
ScaleReport fit_scaling(std::vector<ScalePoint> points);

/// Times generate-free fit+cluster runs at each size. Sizes must be
/// strictly increasing, at least three, spanning two decades.
ScaleReport scaleup(const ScaleOptions& options);

}  // namespace mmc::analysis
