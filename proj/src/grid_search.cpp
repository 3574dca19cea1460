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

#include <cmath>
#include <sstream>

#include "mmc/clustering.hpp"
#include "mmc/metrics.hpp"
#include "mmc/rng.hpp"

namespace mmc::clustering {

std::string_view algorithm_name(Algorithm a) { return a == Algorithm::mmc ? "mmc" : "dmc"; }

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  if (name == "mmc") return Algorithm::mmc;
  if (name == "dmc") return Algorithm::dmc;
  return std::nullopt;
}

std::vector<double> default_tau_grid() {
  std::vector<double> taus;
  for (int i = 1; i <= 19; ++i) taus.push_back(i * 0.05);
  return taus;
}

ParamGrid default_mmc_grid() {
  return {{2, 4, 6, 8, 16, 24, 32, 64, 128, 256}, default_tau_grid()};
}

ParamGrid default_dmc_grid() {
  ParamGrid grid;
  for (int i = -5; i <= 5; ++i) grid.kernel_values.push_back(std::ldexp(1.0, i));
  grid.taus = default_tau_grid();
  return grid;
}

std::uint64_t trial_seed(const GridOptions& options, int trial) {
  return options.trial_seed ? options.trial_seed(trial) : derive_seed(options.base_seed, trial);
}

namespace {

ClusterParams cell_params(const GridOptions& options, Algorithm algorithm, double kernel_value,
                          double tau, std::uint64_t seed) {
  ClusterParams p = options.base;
  if (algorithm == Algorithm::dmc) {
    p.kernel = KernelKind::gaussian_nystrom;
    p.sigma = kernel_value;
  } else {
    if (!is_isolation(p.kernel)) p.kernel = KernelKind::ik_hypersphere;
    p.psi = static_cast<int>(kernel_value);
  }
  p.tau = tau;
  p.seed = seed;
  return p;
}

}  // namespace

GridResult grid_search(const data::Dataset& data, Algorithm algorithm, const ParamGrid& grid,
                       const GridOptions& options, const KernelBackend& backend) {
  data.validate();
  if (grid.kernel_values.empty() || grid.taus.empty()) throw ConfigError("parameter grid is empty");
  if (options.trials < 1) throw ConfigError("trials must be >= 1");

  GridResult result;
  result.scored_by_f1 = data.has_labels();
  const std::size_t n_tau = grid.taus.size();
  result.cells.resize(grid.kernel_values.size() * n_tau);

  for (std::size_t kv = 0; kv < grid.kernel_values.size(); ++kv) {
    const double value = grid.kernel_values[kv];
    for (std::size_t ti = 0; ti < n_tau; ++ti) {
      result.cells[kv * n_tau + ti].kernel_value = value;
      result.cells[kv * n_tau + ti].tau = grid.taus[ti];
    }
    for (int trial = 0; trial < options.trials; ++trial) {
      const std::uint64_t seed = trial_seed(options, trial);
      // Kernel fit and sample similarity depend on (value, seed) only.
      std::unique_ptr<massdist::FeatureSpace> space;
      data::SampleSet sample;
      Eigen::MatrixXd similarity;
      std::string setup_failure;
      try {
        const auto base = cell_params(options, algorithm, value, grid.taus.front(), seed);
        base.validate(data.size());
        space = backend(data, base);
        sample = data::subsample(data, std::min(base.s, data.size()), sample_seed(seed));
        similarity = space->similarity(sample.indices);
      } catch (const Error& e) {
        setup_failure = e.what();
      }
      for (std::size_t ti = 0; ti < n_tau; ++ti) {
        GridRow row;
        row.kernel_value = value;
        row.tau = grid.taus[ti];
        row.trial = trial;
        row.seed = seed;
        if (!setup_failure.empty()) {
          row.failure = setup_failure;
          result.rows.push_back(std::move(row));
          continue;
        }
        try {
          const auto params = cell_params(options, algorithm, value, grid.taus[ti], seed);
          params.validate(data.size());
          const auto a = cluster_prepared(*space, data, sample, similarity, params);
          row.ok = true;
          row.objective = a.objective.normalized;
          row.initial_objective = a.initial_objective.normalized;
          row.refine_iters = a.refine_iters_used;
          row.components = static_cast<Index>(a.component_sizes.size());
          if (data.has_labels()) {
            row.f1 = metrics::f1_score(a.labels, *data.labels);
            row.ami = metrics::ami_score(a.labels, *data.labels);
          }
        } catch (const Error& e) {
          row.failure = e.what();
        }
        result.rows.push_back(std::move(row));
      }
    }
  }

  for (const auto& row : result.rows) {
    std::size_t kv = 0;
    while (grid.kernel_values[kv] != row.kernel_value) ++kv;
    std::size_t ti = 0;
    while (grid.taus[ti] != row.tau) ++ti;
    auto& cell = result.cells[kv * n_tau + ti];
    if (!row.ok) continue;
    ++cell.successes;
    cell.mean_f1 += row.f1;
    cell.mean_ami += row.ami;
    cell.mean_score += result.scored_by_f1 ? row.f1 : row.objective;
  }
  bool any = false;
  for (std::size_t c = 0; c < result.cells.size(); ++c) {
    auto& cell = result.cells[c];
    cell.mean_f1 /= options.trials;
    cell.mean_ami /= options.trials;
    cell.mean_score /= options.trials;
    if (cell.successes == 0) continue;
    if (!any || cell.mean_score > result.cells[result.best_cell].mean_score) result.best_cell = c;
    any = true;
  }
  if (!any) {
    std::ostringstream log;
    log << "every grid cell failed for " << algorithm_name(algorithm) << ":";
    for (const auto& row : result.rows) {
      log << "\n  value=" << row.kernel_value << " tau=" << row.tau << " trial=" << row.trial
          << ": " << row.failure;
    }
    throw GridSearchError(log.str(), std::move(result.rows));
  }

  // Re-run the best trial of the best cell end to end.
  const auto& best = result.cells[result.best_cell];
  const GridRow* best_row = nullptr;
  for (const auto& row : result.rows) {
    if (!row.ok || row.kernel_value != best.kernel_value || row.tau != best.tau) continue;
    const double score = result.scored_by_f1 ? row.f1 : row.objective;
    const double best_score = best_row ? (result.scored_by_f1 ? best_row->f1 : best_row->objective) : 0;
    if (!best_row || score > best_score) best_row = &row;
  }
  result.best_params = cell_params(options, algorithm, best.kernel_value, best.tau, best_row->seed);
  result.best_assignment = run_mmc(data, result.best_params, backend);
  return result;
}

}  // namespace mmc::clustering
