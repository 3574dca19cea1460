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

#include "mmc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mmc/metrics.hpp"
#include "mmc/parallel.hpp"
#include "mmc/rng.hpp"

namespace mmc::analysis {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_pairwise_size(Index n) {
  if (n > kMaxPairwisePoints) {
    throw ConfigError("pairwise analysis is limited to " + std::to_string(kMaxPairwisePoints) +
                      " points (got " + std::to_string(n) + ")");
  }
}

std::vector<int> sorted_classes(const std::vector<int>& labels) {
  std::vector<int> classes(labels);
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  return classes;
}

int class_index(const std::vector<int>& classes, int cls) {
  const auto it = std::lower_bound(classes.begin(), classes.end(), cls);
  if (it == classes.end() || *it != cls) throw ConfigError("class " + std::to_string(cls) + " not present");
  return static_cast<int>(it - classes.begin());
}

const std::vector<int>& require_labels(const data::Dataset& data) {
  if (!data.has_labels()) throw ConfigError("analysis requires a labeled dataset");
  return *data.labels;
}

std::vector<Index> members_of(const std::vector<int>& labels, int cls) {
  std::vector<Index> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == cls) out.push_back(static_cast<Index>(i));
  }
  return out;
}

// Row with the largest similarity sum to the other rows of the same set.
Index peak_of(const Eigen::MatrixXd& similarity, const std::vector<Index>& members) {
  Index best = members.front();
  double best_sum = -1;
  for (Index a : members) {
    double sum = 0;
    for (Index b : members) sum += similarity(a, b);
    if (sum > best_sum) {
      best_sum = sum;
      best = a;
    }
  }
  return best;
}

}  // namespace

Eigen::MatrixXd kernel_matrix(const massdist::FeatureSpace& space) {
  check_pairwise_size(space.size());
  std::vector<Index> rows(static_cast<std::size_t>(space.size()));
  std::iota(rows.begin(), rows.end(), Index{0});
  return space.similarity(rows);
}

Eigen::MatrixXd gaussian_kernel_matrix(const PointMatrix& points, double sigma) {
  if (!(sigma > 0)) throw ConfigError("sigma must be > 0");
  const Index n = points.rows();
  check_pairwise_size(n);
  Eigen::MatrixXd out(n, n);
  parallel_for(n, [&](Index begin, Index end) {
    for (Index a = begin; a < end; ++a) {
      out(a, a) = 1.0;
      for (Index b = a + 1; b < n; ++b) {
        out(a, b) = kernels::gaussian_kernel(points.row(a), points.row(b), sigma);
      }
    }
  }, 16);
  out.triangularView<Eigen::StrictlyLower>() = out.transpose();
  return out;
}

CohesivenessCurve cohesiveness_curve(const Eigen::MatrixXd& similarity,
                                     std::span<const double> tau_grid,
                                     const std::vector<int>* labels) {
  if (tau_grid.empty()) throw ConfigError("tau grid is empty");
  if (!std::is_sorted(tau_grid.begin(), tau_grid.end())) throw ConfigError("tau grid must be ascending");
  const Index n = similarity.rows();
  check_pairwise_size(n);
  if (labels && static_cast<Index>(labels->size()) != n) throw ConfigError("label count does not match");

  CohesivenessCurve curve;
  std::vector<int> cls_of;
  if (labels) {
    curve.classes = sorted_classes(*labels);
    curve.class_sizes.assign(curve.classes.size(), 0);
    for (int l : *labels) {
      cls_of.push_back(class_index(curve.classes, l));
      ++curve.class_sizes[cls_of.back()];
    }
  }
  for (double tau : tau_grid) {
    const auto comp = clustering::threshold_components(similarity, tau);
    const int count = *std::max_element(comp.begin(), comp.end()) + 1;
    std::vector<ComponentStats> stats(static_cast<std::size_t>(count));
    std::vector<double> sums(static_cast<std::size_t>(count), 0.0);
    for (auto& s : stats) s.class_counts.assign(curve.classes.size(), 0);
    for (Index a = 0; a < n; ++a) {
      auto& s = stats[comp[a]];
      ++s.size;
      if (labels) ++s.class_counts[cls_of[a]];
      for (Index b = a + 1; b < n; ++b) {
        if (comp[b] != comp[a]) continue;
        sums[comp[a]] += similarity(a, b);
        if (similarity(a, b) > tau) s.has_pair_above_tau = true;
      }
    }
    for (int c = 0; c < count; ++c) {
      const double size = static_cast<double>(stats[c].size);
      stats[c].cohesiveness = stats[c].size >= 2 ? 2.0 * sums[c] / (size * (size - 1.0)) : kNaN;
    }
    std::stable_sort(stats.begin(), stats.end(),
                     [](const ComponentStats& a, const ComponentStats& b) { return a.size > b.size; });
    curve.records.push_back({tau, std::move(stats)});
  }
  return curve;
}

std::optional<ComponentStats> class_component(const CohesivenessCurve& curve, std::size_t record,
                                              int cls, double min_fraction) {
  const int ci = class_index(curve.classes, cls);
  const double need = min_fraction * static_cast<double>(curve.class_sizes[ci]);
  for (const auto& comp : curve.records.at(record).components) {
    if (comp.size < 2) break;
    const auto majority = std::max_element(comp.class_counts.begin(), comp.class_counts.end()) -
                          comp.class_counts.begin();
    if (majority == ci && static_cast<double>(comp.class_counts[ci]) >= need) return comp;
  }
  return std::nullopt;
}

bool CohesivenessComparison::dense_always_higher() const {
  for (std::size_t i = 0; i < taus.size(); ++i) {
    if (!(dense[i] > sparse[i])) return false;
  }
  return true;
}

std::vector<double> CohesivenessComparison::relative_gaps() const {
  std::vector<double> gaps;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    gaps.push_back(std::abs(dense[i] - sparse[i]) / std::max(dense[i], sparse[i]));
  }
  return gaps;
}

CohesivenessComparison compare_classes(const CohesivenessCurve& curve, int dense_class,
                                       int sparse_class, double min_fraction) {
  CohesivenessComparison out;
  for (std::size_t r = 0; r < curve.records.size(); ++r) {
    const auto d = class_component(curve, r, dense_class, min_fraction);
    const auto s = class_component(curve, r, sparse_class, min_fraction);
    if (!d || !s) continue;
    out.taus.push_back(curve.records[r].tau);
    out.dense.push_back(d->cohesiveness);
    out.sparse.push_back(s->cohesiveness);
  }
  return out;
}

double mean_nn_distance(const data::Dataset& data, int cls) {
  const auto members = members_of(require_labels(data), cls);
  if (members.size() < 2) throw ConfigError("class " + std::to_string(cls) + " has fewer than 2 points");
  std::vector<double> nn(members.size());
  parallel_for(static_cast<Index>(members.size()), [&](Index begin, Index end) {
    for (Index i = begin; i < end; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < members.size(); ++j) {
        if (static_cast<Index>(j) == i) continue;
        best = std::min(best, squared_distance(data.points.row(members[i]), data.points.row(members[j])));
      }
      nn[i] = std::sqrt(best);
    }
  }, 64);
  return std::accumulate(nn.begin(), nn.end(), 0.0) / static_cast<double>(nn.size());
}

std::vector<int> classes_by_density(const data::Dataset& data) {
  auto classes = sorted_classes(require_labels(data));
  std::vector<double> spread;
  for (int c : classes) spread.push_back(mean_nn_distance(data, c));
  std::vector<std::size_t> order(classes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return spread[a] < spread[b]; });
  std::vector<int> out;
  for (auto i : order) out.push_back(classes[i]);
  return out;
}

double bottleneck_similarity(const Eigen::MatrixXd& similarity, Index from, Index to) {
  const Index n = similarity.rows();
  if (from < 0 || from >= n || to < 0 || to >= n) throw ConfigError("bottleneck: row out of range");
  if (from == to) return similarity(from, from);
  // Prim's algorithm for the maximum spanning tree, rooted at `from`.
  std::vector<double> best(static_cast<std::size_t>(n), -std::numeric_limits<double>::infinity());
  std::vector<Index> parent(static_cast<std::size_t>(n), -1);
  std::vector<char> in_tree(static_cast<std::size_t>(n), 0);
  best[from] = std::numeric_limits<double>::infinity();
  for (Index step = 0; step < n; ++step) {
    Index u = -1;
    for (Index v = 0; v < n; ++v) {
      if (!in_tree[v] && (u < 0 || best[v] > best[u])) u = v;
    }
    in_tree[u] = 1;
    if (u == to) break;
    for (Index v = 0; v < n; ++v) {
      if (!in_tree[v] && similarity(u, v) > best[v]) {
        best[v] = similarity(u, v);
        parent[v] = u;
      }
    }
  }
  double bottleneck = std::numeric_limits<double>::infinity();
  for (Index v = to; v != from; v = parent[v]) bottleneck = std::min(bottleneck, best[v]);
  return bottleneck;
}

ConditionOne check_condition_one(const Eigen::MatrixXd& similarity, const data::Dataset& data) {
  const auto& labels = require_labels(data);
  if (similarity.rows() != data.size()) throw ConfigError("similarity matrix does not match the dataset");
  const auto order = classes_by_density(data);
  if (order.size() != 3) throw ConfigError("condition one needs exactly three classes");
  ConditionOne out;
  out.dense_class_a = order[0];
  out.dense_class_b = order[1];
  out.sparse_class = order[2];
  const auto sparse = members_of(labels, out.sparse_class);
  out.sparse_peak = peak_of(similarity, sparse);
  out.dense_peak_a = peak_of(similarity, members_of(labels, out.dense_class_a));
  out.dense_peak_b = peak_of(similarity, members_of(labels, out.dense_class_b));
  for (Index x : sparse) {
    if (x != out.sparse_peak) {
      out.sparse_peak_similarity = std::max(out.sparse_peak_similarity, similarity(x, out.sparse_peak));
    }
  }
  out.bottleneck = bottleneck_similarity(similarity, out.dense_peak_a, out.dense_peak_b);
  out.triggered = out.sparse_peak_similarity < out.bottleneck;
  return out;
}

ConditionTwo check_condition_two(const Eigen::MatrixXd& similarity, const data::Dataset& data,
                                 double threshold) {
  const auto& labels = require_labels(data);
  if (similarity.rows() != data.size()) throw ConfigError("similarity matrix does not match the dataset");
  const auto order = classes_by_density(data);
  if (order.size() != 2) throw ConfigError("condition two needs exactly two classes");
  auto min_nearest = [&](int cls) {
    const auto members = members_of(labels, cls);
    double lowest = std::numeric_limits<double>::infinity();
    for (Index a : members) {
      double nearest = -std::numeric_limits<double>::infinity();
      for (Index b : members) {
        if (b != a) nearest = std::max(nearest, similarity(a, b));
      }
      lowest = std::min(lowest, nearest);
    }
    return lowest;
  };
  ConditionTwo out;
  out.dense_class = order[0];
  out.sparse_class = order[1];
  out.dense_min = min_nearest(out.dense_class);
  out.sparse_min = min_nearest(out.sparse_class);
  if (out.sparse_min > 0) {
    out.ratio = out.dense_min / out.sparse_min;
  } else {
    out.ratio = out.dense_min > 0 ? std::numeric_limits<double>::infinity() : kNaN;
  }
  out.holds = out.ratio >= threshold;
  return out;
}

std::vector<CorrectionPoint> correction_curve(const massdist::FeatureSpace& space,
                                              const data::Dataset& data, Index batch,
                                              std::uint64_t seed) {
  const auto& truth = require_labels(data);
  const Index n = data.size();
  if (space.size() != n) throw ConfigError("feature space does not match the dataset");
  if (batch < 1) throw ConfigError("batch must be >= 1");
  const auto classes = sorted_classes(truth);
  std::vector<int> target(static_cast<std::size_t>(n));
  for (Index p = 0; p < n; ++p) target[p] = class_index(classes, truth[p]);

  CounterRng rng(derive_seed(seed, 0));
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (auto& l : labels) l = static_cast<int>(rng.below(classes.size()));
  const auto order = sample_without_replacement(n, n, rng);

  auto record = [&](Index corrected) {
    // Drop empty clusters by renumbering the occupied ones.
    std::vector<int> remap(classes.size(), -1);
    int k = 0;
    std::vector<int> dense(labels.size());
    for (std::size_t p = 0; p < labels.size(); ++p) {
      if (remap[labels[p]] < 0) remap[labels[p]] = k++;
      dense[p] = remap[labels[p]];
    }
    const auto obj = massdist::objective_from_masses(space.cluster_masses(dense, k), dense);
    return CorrectionPoint{corrected, obj.normalized, metrics::ami_score(labels, target)};
  };

  std::vector<CorrectionPoint> series{record(0)};
  for (Index done = 0; done < n;) {
    const Index stop = std::min(n, done + batch);
    for (; done < stop; ++done) labels[order[done]] = target[order[done]];
    series.push_back(record(done));
  }
  return series;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ConfigError("spearman needs two equal series of >= 2 values");
  auto ranks = [](std::span<const double> v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
      std::size_t j = i;
      while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
      const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
      for (std::size_t m = i; m <= j; ++m) r[idx[m]] = avg;
      i = j + 1;
    }
    return r;
  };
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const Eigen::Map<const Eigen::VectorXd> a(rx.data(), static_cast<Index>(rx.size()));
  const Eigen::Map<const Eigen::VectorXd> b(ry.data(), static_cast<Index>(ry.size()));
  const Eigen::VectorXd ca = a.array() - a.mean();
  const Eigen::VectorXd cb = b.array() - b.mean();
  const double denom = std::sqrt(ca.squaredNorm() * cb.squaredNorm());
  return denom > 0 ? ca.dot(cb) / denom : kNaN;
}

}  // namespace mmc::analysis
