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

#include "mmc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "mmc/error.hpp"

namespace mmc::metrics {

namespace {

std::vector<int> compact(std::span<const int> labels, int& count) {
  std::unordered_map<int, int> ids;
  std::vector<int> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, inserted] = ids.try_emplace(labels[i], static_cast<int>(ids.size()));
    out[i] = it->second;
  }
  count = static_cast<int>(ids.size());
  return out;
}

}  // namespace

ContingencyTable contingency(std::span<const int> pred, std::span<const int> truth) {
  if (pred.size() != truth.size()) {
    throw ConfigError("label vectors differ in length (" + std::to_string(pred.size()) + " vs " +
                      std::to_string(truth.size()) + ")");
  }
  if (pred.empty()) throw ConfigError("label vectors are empty");
  int r = 0, c = 0;
  const auto p = compact(pred, r);
  const auto q = compact(truth, c);
  ContingencyTable table;
  table.counts.setZero(r, c);
  for (std::size_t i = 0; i < p.size(); ++i) ++table.counts(p[i], q[i]);
  table.row_sums.assign(r, 0);
  table.col_sums.assign(c, 0);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < c; ++j) {
      table.row_sums[i] += table.counts(i, j);
      table.col_sums[j] += table.counts(i, j);
    }
  }
  table.n = static_cast<std::int64_t>(p.size());
  return table;
}

std::vector<int> hungarian_max(const Eigen::MatrixXd& weights) {
  const Index rows = weights.rows();
  const Index cols = weights.cols();
  std::vector<int> match(static_cast<std::size_t>(rows), -1);
  if (rows == 0 || cols == 0) return match;
  // Shortest augmenting paths on costs = -weights; needs rows <= cols.
  const bool flip = rows > cols;
  const Eigen::MatrixXd cost = flip ? Eigen::MatrixXd(-weights.transpose()) : Eigen::MatrixXd(-weights);
  const Index n = cost.rows(), m = cost.cols();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0), v(m + 1, 0);
  std::vector<Index> p(m + 1, 0), way(m + 1, 0);
  for (Index i = 1; i <= n; ++i) {
    p[0] = i;
    Index j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const Index i0 = p[j0];
      double delta = inf;
      Index j1 = 0;
      for (Index j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (Index j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const Index j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  for (Index j = 1; j <= m; ++j) {
    if (p[j] == 0) continue;
    if (flip) {
      match[j - 1] = static_cast<int>(p[j] - 1);
    } else {
      match[p[j] - 1] = static_cast<int>(j - 1);
    }
  }
  return match;
}

double f1_score(std::span<const int> pred, std::span<const int> truth) {
  const auto table = contingency(pred, truth);
  const auto match = hungarian_max(table.counts.cast<double>());
  std::int64_t tp = 0, fp = 0, fn = 0;
  for (Index i = 0; i < table.rows(); ++i) {
    const int j = match[i];
    if (j < 0) continue;
    const std::int64_t hit = table.counts(i, j);
    tp += hit;
    fp += table.row_sums[i] - hit;
    fn += table.col_sums[j] - hit;
  }
  if (tp == 0) return 0.0;
  const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  const double recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  return 2.0 * precision * recall / (precision + recall);
}

double entropy(std::span<const std::int64_t> marginals, std::int64_t n) {
  double h = 0;
  const double dn = static_cast<double>(n);
  for (std::int64_t a : marginals) {
    if (a > 0) {
      const double p = static_cast<double>(a) / dn;
      h -= p * std::log(p);
    }
  }
  return h;
}

double mutual_information(const ContingencyTable& table) {
  const double n = static_cast<double>(table.n);
  double mi = 0;
  for (Index i = 0; i < table.rows(); ++i) {
    for (Index j = 0; j < table.cols(); ++j) {
      const auto nij = table.counts(i, j);
      if (nij == 0) continue;
      const double v = static_cast<double>(nij);
      mi += v / n *
            std::log(n * v / (static_cast<double>(table.row_sums[i]) * static_cast<double>(table.col_sums[j])));
    }
  }
  return mi;
}

double expected_mutual_information(const ContingencyTable& table) {
  const std::int64_t n = table.n;
  const double dn = static_cast<double>(n);
  const double lg_n = std::lgamma(dn + 1);
  double emi = 0;
  for (std::int64_t a : table.row_sums) {
    for (std::int64_t b : table.col_sums) {
      const double da = static_cast<double>(a), db = static_cast<double>(b);
      // Terms independent of nij.
      const double base = std::lgamma(da + 1) + std::lgamma(db + 1) + std::lgamma(dn - da + 1) +
                          std::lgamma(dn - db + 1) - lg_n;
      const std::int64_t lo = std::max<std::int64_t>(1, a + b - n);
      const std::int64_t hi = std::min(a, b);
      for (std::int64_t nij = lo; nij <= hi; ++nij) {
        const double v = static_cast<double>(nij);
        const double log_p = base - std::lgamma(v + 1) - std::lgamma(da - v + 1) -
                             std::lgamma(db - v + 1) - std::lgamma(dn - da - db + v + 1);
        emi += v / dn * std::log(dn * v / (da * db)) * std::exp(log_p);
      }
    }
  }
  return emi;
}

double ami_score(std::span<const int> pred, std::span<const int> truth) {
  const auto table = contingency(pred, truth);
  if (table.rows() == 1 && table.cols() == 1) return 1.0;
  // Every point its own cluster in both labelings is also identical.
  if (table.rows() == table.n && table.cols() == table.n) return 1.0;
  const double mi = mutual_information(table);
  const double emi = expected_mutual_information(table);
  const double h = std::max(entropy(table.row_sums, table.n), entropy(table.col_sums, table.n));
  const double denom = h - emi;
  if (std::abs(denom) < std::numeric_limits<double>::epsilon()) return 0.0;
  return (mi - emi) / denom;
}

}  // namespace mmc::metrics
