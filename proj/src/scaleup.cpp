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

#include <algorithm>
#include <chrono>
#include <cmath>

#include "mmc/analysis.hpp"

namespace mmc::analysis {

ScaleReport fit_scaling(std::vector<ScalePoint> points) {
  std::sort(points.begin(), points.end(), [](const auto& a, const auto& b) { return a.n < b.n; });
  std::vector<const ScalePoint*> usable;
  for (const auto& p : points) {
    if (!p.below_resolution && p.total_seconds > 0) usable.push_back(&p);
  }
  if (usable.size() < 2) throw AlgorithmError("fewer than two timings above clock resolution");
  // Upper half of the ladder, where the linear term dominates fixed costs.
  std::size_t first = usable.size() / 2;
  if (usable.size() - first < 2) first = usable.size() - 2;
  const std::size_t m = usable.size() - first;
  Eigen::VectorXd lx(static_cast<Index>(m)), ly(static_cast<Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    lx(static_cast<Index>(i)) = std::log(static_cast<double>(usable[first + i]->n));
    ly(static_cast<Index>(i)) = std::log(usable[first + i]->total_seconds);
  }
  const double mx = lx.mean(), my = ly.mean();
  const Eigen::VectorXd dx = lx.array() - mx;
  ScaleReport report;
  report.slope = dx.dot((ly.array() - my).matrix()) / dx.squaredNorm();
  report.intercept = my - report.slope * mx;
  report.fitted_points = m;
  report.points = std::move(points);
  return report;
}

ScaleReport scaleup(const ScaleOptions& options) {
  const auto& sizes = options.sizes;
  if (sizes.size() < 3) throw ConfigError("scaleup needs at least three sizes");
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    if (sizes[i] <= sizes[i - 1]) throw ConfigError("scaleup sizes must be strictly increasing");
  }
  if (static_cast<double>(sizes.back()) < 100.0 * static_cast<double>(sizes.front())) {
    throw ConfigError("scaleup sizes must span at least two decades");
  }
  using Clock = std::chrono::steady_clock;
  auto run = [&](Index n) {
    const auto data = data::generate_synthetic(options.family, n, options.data_seed);
    const auto start = Clock::now();
    const auto a = clustering::run_mmc(data, options.params);
    ScalePoint p;
    p.n = n;
    p.total_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    p.fit_seconds = a.fit_seconds;
    p.seed_seconds = a.seed_seconds;
    p.assign_seconds = a.assign_seconds;
    p.refine_seconds = a.refine_seconds;
    p.refine_iters = a.refine_iters_used;
    p.initial_objective = a.initial_objective.normalized;
    p.objective = a.objective.normalized;
    p.below_resolution = p.total_seconds < options.resolution_seconds;
    return p;
  };
  if (options.warmup) run(sizes.front());
  std::vector<ScalePoint> points;
  for (Index n : sizes) points.push_back(run(n));
  return fit_scaling(std::move(points));
}

}  // namespace mmc::analysis
