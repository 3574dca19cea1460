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

#include "mmc/clustering.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <numeric>

#include "mmc/parallel.hpp"
#include "mmc/rng.hpp"

namespace mmc::clustering {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

class DisjointSet {
 public:
  explicit DisjointSet(Index n) : parent_(static_cast<std::size_t>(n)), rank_(parent_.size(), 0) {
    std::iota(parent_.begin(), parent_.end(), Index{0});
  }

  Index find(Index x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(Index a, Index b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
  }

 private:
  std::vector<Index> parent_;
  std::vector<int> rank_;
};

std::vector<Index> sizes_of(std::span<const int> labels, int k) {
  std::vector<Index> sizes(static_cast<std::size_t>(k), 0);
  for (int l : labels) ++sizes[l];
  return sizes;
}

// Lowest column attaining the row maximum.
int argmax_row(const Eigen::MatrixXd& m, Index row) {
  int best = 0;
  for (Index c = 1; c < m.cols(); ++c) {
    if (m(row, c) > m(row, best)) best = static_cast<int>(c);
  }
  return best;
}

}  // namespace

std::string_view kernel_kind_name(KernelKind kind) {
  switch (kind) {
    case KernelKind::ik_voronoi: return "ik_voronoi";
    case KernelKind::ik_hypersphere: return "ik_hypersphere";
    case KernelKind::gaussian_nystrom: return "gaussian_nystrom";
  }
  return "unknown";
}

std::optional<KernelKind> parse_kernel_kind(std::string_view name) {
  if (name == "ik_voronoi" || name == "voronoi") return KernelKind::ik_voronoi;
  if (name == "ik_hypersphere" || name == "hypersphere") return KernelKind::ik_hypersphere;
  if (name == "gaussian_nystrom" || name == "gaussian") return KernelKind::gaussian_nystrom;
  return std::nullopt;
}

void ClusterParams::validate(std::optional<Index> n) const {
  if (k < 1) throw ConfigError("k must be >= 1 (got " + std::to_string(k) + ")");
  if (!(tau >= 0.0 && tau < 1.0)) throw ConfigError("tau must lie in [0, 1) (got " + std::to_string(tau) + ")");
  if (s < k) throw ConfigError("sample size s must be >= k");
  if (t < 1) throw ConfigError("t must be >= 1");
  if (max_refine_iters < 0) throw ConfigError("max_refine_iters must be >= 0");
  if (is_isolation(kernel)) {
    if (psi < 1 || psi > kernels::kMaxPsi) throw ConfigError("psi must lie in [1, 65534]");
  } else {
    if (!(sigma > 0.0)) throw ConfigError("sigma must be > 0 for the gaussian kernel");
    if (landmarks < 1) throw ConfigError("landmark count must be >= 1");
  }
  if (n) {
    if (*n < k) throw ConfigError("k exceeds the number of points");
    if (is_isolation(kernel) && psi > *n) {
      throw ConfigError("psi (" + std::to_string(psi) + ") exceeds the number of points (" +
                        std::to_string(*n) + ")");
    }
  }
}

std::uint64_t kernel_seed(std::uint64_t seed) { return derive_seed(seed, 1); }
std::uint64_t sample_seed(std::uint64_t seed) { return derive_seed(seed, 2); }

std::vector<int> threshold_components(const Eigen::MatrixXd& similarity, double tau) {
  const Index s = similarity.rows();
  if (similarity.cols() != s) throw ConfigError("similarity matrix must be square");
  DisjointSet sets(s);
  for (Index a = 0; a < s; ++a) {
    for (Index b = a + 1; b < s; ++b) {
      if (similarity(a, b) > tau) sets.unite(a, b);
    }
  }
  std::vector<int> label(static_cast<std::size_t>(s), -1);
  std::vector<int> root_label(static_cast<std::size_t>(s), -1);
  int next = 0;
  for (Index a = 0; a < s; ++a) {
    const Index r = sets.find(a);
    if (root_label[r] < 0) root_label[r] = next++;
    label[a] = root_label[r];
  }
  return label;
}

SeedClusters seed_components_from_similarity(const Eigen::MatrixXd& similarity,
                                             const data::SampleSet& sample, double tau, int k) {
  if (similarity.rows() != sample.size()) {
    throw ConfigError("similarity matrix does not match the sample size");
  }
  if (k < 1) throw ConfigError("k must be >= 1");
  if (sample.size() < k) throw ConfigError("sample size must be >= k");
  const auto comp = threshold_components(similarity, tau);
  const int count = comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
  if (count < k) {
    throw AlgorithmError("seeding found " + std::to_string(count) + " component(s) at tau=" +
                         std::to_string(tau) + ", need k=" + std::to_string(k) +
                         "; try a higher tau");
  }
  std::vector<std::vector<Index>> members(static_cast<std::size_t>(count));
  for (Index a = 0; a < sample.size(); ++a) members[comp[a]].push_back(sample.indices[a]);
  std::vector<Index> min_row(static_cast<std::size_t>(count));
  for (int c = 0; c < count; ++c) min_row[c] = *std::min_element(members[c].begin(), members[c].end());
  std::vector<int> order(static_cast<std::size_t>(count));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (members[a].size() != members[b].size()) return members[a].size() > members[b].size();
    return min_row[a] < min_row[b];
  });
  SeedClusters out;
  out.component_sizes.reserve(count);
  for (int c : order) out.component_sizes.push_back(static_cast<Index>(members[c].size()));
  for (int j = 0; j < k; ++j) out.seeds.push_back(std::move(members[order[j]]));
  return out;
}

SeedClusters seed_components(const massdist::FeatureSpace& space, const data::SampleSet& sample,
                             double tau, int k) {
  return seed_components_from_similarity(space.similarity(sample.indices), sample, tau, k);
}

std::vector<int> assign_by_mass(const massdist::FeatureSpace& space, const data::Dataset& data,
                                const SeedClusters& seeds, Index* fallback_count) {
  const Index n = space.size();
  const int k = seeds.k();
  if (k < 1) throw ConfigError("assign_by_mass: no seeds");
  std::vector<int> seed_labels(static_cast<std::size_t>(n), -1);
  std::vector<Index> seed_rows;
  for (int j = 0; j < k; ++j) {
    for (Index r : seeds.seeds[j]) {
      if (r < 0 || r >= n) throw ConfigError("assign_by_mass: seed row out of range");
      if (seed_labels[r] >= 0) throw ConfigError("assign_by_mass: seeds overlap");
      seed_labels[r] = j;
      seed_rows.push_back(r);
    }
  }
  const Eigen::MatrixXd masses = space.cluster_masses(seed_labels, k);
  std::vector<int> labels(static_cast<std::size_t>(n));
  std::vector<Index> orphans;
  for (Index p = 0; p < n; ++p) {
    labels[p] = argmax_row(masses, p);
    if (masses.row(p).maxCoeff() <= 0.0) orphans.push_back(p);
  }
  if (!orphans.empty() && data.size() != n) {
    throw ConfigError("assign_by_mass: dataset does not match the feature space");
  }
  // No seed carries any mass at these points: use the nearest seed member.
  parallel_for(static_cast<Index>(orphans.size()), [&](Index begin, Index end) {
    for (Index o = begin; o < end; ++o) {
      const Index p = orphans[o];
      double best = std::numeric_limits<double>::infinity();
      int label = 0;
      for (Index r : seed_rows) {
        const double d = squared_distance(data.points.row(p), data.points.row(r));
        if (d < best) {
          best = d;
          label = seed_labels[r];
        }
      }
      labels[p] = label;
    }
  }, 64);
  if (fallback_count) *fallback_count = static_cast<Index>(orphans.size());
  return labels;
}

ClusterAssignment refine(const massdist::FeatureSpace& space, std::vector<int> labels, int k,
                         int max_iters) {
  if (static_cast<Index>(labels.size()) != space.size()) {
    throw ConfigError("refine: label count does not match the feature space");
  }
  if (max_iters < 0) throw ConfigError("refine: max_iters must be >= 0");
  Eigen::MatrixXd masses = space.cluster_masses(labels, k);
  massdist::Objective objective = massdist::objective_from_masses(masses, labels);

  ClusterAssignment out;
  out.initial_objective = objective;
  const Index n = space.size();
  std::vector<int> next(labels.size());
  for (int iter = 0; iter < max_iters; ++iter) {
    for (Index p = 0; p < n; ++p) next[p] = argmax_row(masses, p);
    // Keep every cluster alive by pinning its highest-mass current member.
    for (bool pinned = true; pinned;) {
      pinned = false;
      const auto sizes = sizes_of(next, k);
      for (int c = 0; c < k; ++c) {
        if (sizes[c] > 0) continue;
        Index keep = -1;
        for (Index p = 0; p < n; ++p) {
          if (labels[p] == c && (keep < 0 || masses(p, c) > masses(keep, c))) keep = p;
        }
        next[keep] = c;
        pinned = true;
        break;
      }
    }
    if (next == labels) break;
    Eigen::MatrixXd next_masses = space.cluster_masses(next, k);
    const auto next_objective = massdist::objective_from_masses(next_masses, next);
    if (next_objective.raw < objective.raw) break;
    labels.swap(next);
    masses = std::move(next_masses);
    objective = next_objective;
    ++out.refine_iters_used;
  }
  out.objective = objective;
  out.cluster_sizes = sizes_of(labels, k);
  out.labels = std::move(labels);
  return out;
}

std::unique_ptr<massdist::FeatureSpace> default_backend(const data::Dataset& data,
                                                        const ClusterParams& params) {
  const std::uint64_t seed = kernel_seed(params.seed);
  switch (params.kernel) {
    case KernelKind::ik_voronoi:
    case KernelKind::ik_hypersphere: {
      const auto mech = params.kernel == KernelKind::ik_voronoi ? kernels::Mechanism::voronoi
                                                               : kernels::Mechanism::hypersphere;
      const auto model = kernels::fit_ik(data, params.psi, params.t, mech, seed);
      return std::make_unique<massdist::IKFeatureSpace>(model, data);
    }
    case KernelKind::gaussian_nystrom: {
      const auto model = kernels::fit_nystrom(data, std::min(params.landmarks, data.size()),
                                              params.sigma, seed);
      return std::make_unique<massdist::DenseFeatureSpace>(model, data);
    }
  }
  throw ConfigError("unknown kernel kind");
}

ClusterAssignment cluster_prepared(const massdist::FeatureSpace& space, const data::Dataset& data,
                                   const data::SampleSet& sample,
                                   const Eigen::MatrixXd& sample_similarity,
                                   const ClusterParams& params) {
  auto start = Clock::now();
  const auto seeds = seed_components_from_similarity(sample_similarity, sample, params.tau, params.k);
  const double seed_seconds = seconds_since(start);

  start = Clock::now();
  Index fallbacks = 0;
  auto labels = assign_by_mass(space, data, seeds, &fallbacks);
  const double assign_seconds = seconds_since(start);

  start = Clock::now();
  auto out = refine(space, std::move(labels), params.k, params.max_refine_iters);
  out.refine_seconds = seconds_since(start);
  out.seed_seconds = seed_seconds;
  out.assign_seconds = assign_seconds;
  out.component_sizes = seeds.component_sizes;
  out.zero_mass_fallbacks = fallbacks;
  return out;
}

ClusterAssignment run_mmc(const data::Dataset& data, const ClusterParams& params,
                          const KernelBackend& backend) {
  data.validate();
  params.validate(data.size());
  auto start = Clock::now();
  const auto space = backend(data, params);
  if (!space || space->size() != data.size()) {
    throw ConfigError("kernel backend returned a feature space of the wrong size");
  }
  const double fit_seconds = seconds_since(start);

  start = Clock::now();
  const auto sample = data::subsample(data, std::min(params.s, data.size()), sample_seed(params.seed));
  const Eigen::MatrixXd similarity = space->similarity(sample.indices);
  const double similarity_seconds = seconds_since(start);

  auto out = cluster_prepared(*space, data, sample, similarity, params);
  out.fit_seconds = fit_seconds;
  out.seed_seconds += similarity_seconds;
  return out;
}

}  // namespace mmc::clustering
