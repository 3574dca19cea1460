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

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mmc/data.hpp"
#include "mmc/feature_space.hpp"
#include "mmc/kernels.hpp"

namespace mmc::clustering {

enum class KernelKind { ik_voronoi, ik_hypersphere, gaussian_nystrom };

std::string_view kernel_kind_name(KernelKind kind);
std::optional<KernelKind> parse_kernel_kind(std::string_view name);
inline bool is_isolation(KernelKind kind) { return kind != KernelKind::gaussian_nystrom; }

inline constexpr int kDefaultT = 200;
inline constexpr Index kDefaultSampleSize = 1000;
inline constexpr Index kDefaultLandmarks = 500;
inline constexpr int kDefaultRefineIters = 100;

struct ClusterParams {
  int k = 2;
  Index s = kDefaultSampleSize;  // clamped to n
  double tau = 0.5;
  KernelKind kernel = KernelKind::ik_hypersphere;
  int psi = 16;        // isolation kernels
  double sigma = 0.0;  // gaussian_nystrom
  int t = kDefaultT;
  Index landmarks = kDefaultLandmarks;  // gaussian_nystrom, clamped to n
  std::uint64_t seed = 0;
  int max_refine_iters = kDefaultRefineIters;

  /// Throws ConfigError on out-of-range values. `n` (when known) bounds psi
  /// and k.
  void validate(std::optional<Index> n = std::nullopt) const;
};

/// Seeds for the kernel fit and the sample are derived from params.seed so
/// that runs sharing (seed, kernel parameter) share both, whatever tau is.
std::uint64_t kernel_seed(std::uint64_t seed);
std::uint64_t sample_seed(std::uint64_t seed);

/// The k largest tau-connected components of the sample graph.
struct SeedClusters {
  /// Data row indices of each seed Q_j; j = 0 is the largest component.
  std::vector<std::vector<Index>> seeds;
  /// Sizes of every component found, descending.
  std::vector<Index> component_sizes;

  int k() const { return static_cast<int>(seeds.size()); }
};

/// Components of the graph on `sample` with an edge iff similarity > tau.
/// `similarity` is the |sample| x |sample| kernel matrix. Components are
/// ranked by size, ties going to the component with the smallest data row
/// index. Throws AlgorithmError when fewer than k components exist.
SeedClusters seed_components_from_similarity(const Eigen::MatrixXd& similarity,
                                             const data::SampleSet& sample, double tau, int k);
SeedClusters seed_components(const massdist::FeatureSpace& space, const data::SampleSet& sample,
                             double tau, int k);

/// Component label (0-based, ordered by first sample position) for every
/// sample position, via union-find over the thresholded graph.
std::vector<int> threshold_components(const Eigen::MatrixXd& similarity, double tau);

/// Labels each row with the seed of highest mass (lowest index on ties).
/// Rows whose mass is zero for every seed take the label of their nearest
/// (Euclidean) seed member; `fallback_count`, when given, receives how many.
std::vector<int> assign_by_mass(const massdist::FeatureSpace& space, const data::Dataset& data,
                                const SeedClusters& seeds, Index* fallback_count = nullptr);

struct ClusterAssignment {
  /// 0-based cluster index per data row.
  std::vector<int> labels;
  massdist::Objective objective;          // after refinement
  massdist::Objective initial_objective;  // before refinement
  int refine_iters_used = 0;
  std::vector<Index> cluster_sizes;
  std::vector<Index> component_sizes;  // from seeding, when run end-to-end
  Index zero_mass_fallbacks = 0;
  // Wall-clock seconds per stage (end-to-end runs).
  double fit_seconds = 0;
  double seed_seconds = 0;
  double assign_seconds = 0;
  double refine_seconds = 0;
};

/// Synchronous reassignment to the argmax-mass cluster until the labels stop
/// changing, the objective would decrease (the step is reverted) or
/// max_iters iterations have run. A cluster that would become empty keeps
/// its highest-mass member. The returned objective is never below the
/// initial one.
ClusterAssignment refine(const massdist::FeatureSpace& space, std::vector<int> labels, int k,
                         int max_iters);

/// Builds the feature space for a kernel: the single point where MMC and
/// DMC differ. Replaceable for testing.
using KernelBackend = std::function<std::unique_ptr<massdist::FeatureSpace>(
    const data::Dataset&, const ClusterParams&)>;
std::unique_ptr<massdist::FeatureSpace> default_backend(const data::Dataset& data,
                                                        const ClusterParams& params);

/// Steps 1-3 given an already-embedded dataset and sample similarity.
ClusterAssignment cluster_prepared(const massdist::FeatureSpace& space, const data::Dataset& data,
                                   const data::SampleSet& sample,
                                   const Eigen::MatrixXd& sample_similarity,
                                   const ClusterParams& params);

/// End-to-end: fit the kernel on the full data, draw the sample, seed,
/// assign and refine. MMC uses an isolation kernel, DMC gaussian_nystrom.
ClusterAssignment run_mmc(const data::Dataset& data, const ClusterParams& params,
                          const KernelBackend& backend = default_backend);

// ---------------------------------------------------------------------------
// Parameter search

enum class Algorithm { mmc, dmc };
std::string_view algorithm_name(Algorithm a);
std::optional<Algorithm> parse_algorithm(std::string_view name);

struct ParamGrid {
  /// psi values (isolation) or sigma values (gaussian).
  std::vector<double> kernel_values;
  std::vector<double> taus;
};

/// psi in {2,4,6,8,16,24,32,64,128,256}, tau in 0.05..0.95 step 0.05.
ParamGrid default_mmc_grid();
/// sigma = 2^i for i in -5..5, tau in 0.05..0.95 step 0.05.
ParamGrid default_dmc_grid();
std::vector<double> default_tau_grid();

struct GridRow {
  double kernel_value = 0;
  double tau = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string failure;
  double f1 = 0;
  double ami = 0;
  double objective = 0;  // normalized M(D)
  double initial_objective = 0;
  int refine_iters = 0;
  Index components = 0;
};

struct GridCell {
  double kernel_value = 0;
  double tau = 0;
  int successes = 0;
  double mean_score = 0;  // mean F1 (labels) or normalized M(D); failed trials count as 0
  double mean_f1 = 0;
  double mean_ami = 0;
};

struct GridResult {
  std::vector<GridRow> rows;
  std::vector<GridCell> cells;
  std::size_t best_cell = 0;
  ClusterParams best_params;
  ClusterAssignment best_assignment;  // best-scoring trial of the best cell
  bool scored_by_f1 = false;
};

/// Raised when no grid cell produced a clustering; carries every row and
/// its failure message.
class GridSearchError : public AlgorithmError {
 public:
  GridSearchError(const std::string& what, std::vector<GridRow> rows)
      : AlgorithmError(what), rows_(std::move(rows)) {}
  const std::vector<GridRow>& rows() const { return rows_; }

 private:
  std::vector<GridRow> rows_;
};

struct GridOptions {
  int trials = 5;
  std::uint64_t base_seed = 0;
  ClusterParams base;  // k, s, t, landmarks, kernel kind, max_refine_iters
  /// Seed for trial `i` is derive_seed(base_seed, i) unless this is set.
  std::function<std::uint64_t(int)> trial_seed;
};

/// Evaluates every (kernel value, tau) cell over `trials` seeds. The kernel
/// fit, embedding and sample similarity are shared across tau. Throws
/// GridSearchError if no run succeeds.
GridResult grid_search(const data::Dataset& data, Algorithm algorithm, const ParamGrid& grid,
                       const GridOptions& options,
                       const KernelBackend& backend = default_backend);

std::uint64_t trial_seed(const GridOptions& options, int trial);

}  // namespace mmc::clustering
