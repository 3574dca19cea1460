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

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "mmc/analysis.hpp"
#include "mmc/clustering.hpp"
#include "mmc/metrics.hpp"
#include "oracles.hpp"

namespace {

using mmc::Index;
namespace an = mmc::analysis;
namespace cl = mmc::clustering;
namespace md = mmc::massdist;

const std::vector<double> kTaus = cl::default_tau_grid();

mmc::data::Dataset two_density(Index per_class, std::uint64_t seed) {
  // Dense blob sd 0.02, sparse blob sd 0.06: 9:1 in 2-d density.
  return oracle::blobs({{0.3, 0.5, 0.02}, {0.7, 0.5, 0.06}}, per_class, seed);
}

Eigen::MatrixXd ik_matrix(const mmc::data::Dataset& d, int psi, mmc::kernels::Mechanism mech,
                          std::uint64_t seed = 1, int t = 200) {
  const auto m = mmc::kernels::fit_ik(d, psi, t, mech, seed);
  return an::kernel_matrix(md::IKFeatureSpace(m, d));
}

TEST(Cohesiveness, LowThresholdGivesOneComponent) {
  const auto d = two_density(30, 1);
  const auto sim = an::gaussian_kernel_matrix(d.points, 1.0);
  const std::vector<double> taus{0.0};
  const auto curve = an::cohesiveness_curve(sim, taus, &*d.labels);
  ASSERT_EQ(curve.records[0].component_count(), 1);
  EXPECT_EQ(curve.records[0].components[0].size, 60);
  EXPECT_EQ(curve.class_sizes, (std::vector<Index>{30, 30}));
}

TEST(Cohesiveness, MatchesReferenceAndIsMonotone) {
  const auto d = two_density(40, 2);
  const auto sim = ik_matrix(d, 8, mmc::kernels::Mechanism::voronoi);
  const auto curve = an::cohesiveness_curve(sim, kTaus, nullptr);
  int previous = 0;
  for (std::size_t r = 0; r < kTaus.size(); ++r) {
    const auto& rec = curve.records[r];
    EXPECT_GE(rec.component_count(), previous);
    previous = rec.component_count();
    auto comps = oracle::flood_fill(sim, kTaus[r]);
    std::sort(comps.begin(), comps.end(), [](const auto& a, const auto& b) {
      return a.size() != b.size() ? a.size() > b.size() : a.front() < b.front();
    });
    ASSERT_EQ(static_cast<std::size_t>(rec.component_count()), comps.size());
    for (std::size_t c = 0; c < comps.size(); ++c) {
      const auto& stats = rec.components[c];
      ASSERT_EQ(stats.size, static_cast<Index>(comps[c].size()));
      if (stats.size < 2) {
        EXPECT_TRUE(std::isnan(stats.cohesiveness));
        continue;
      }
      EXPECT_TRUE(stats.has_pair_above_tau);
      double sum = 0;
      for (std::size_t a = 0; a < comps[c].size(); ++a) {
        for (std::size_t b = a + 1; b < comps[c].size(); ++b) sum += sim(comps[c][a], comps[c][b]);
      }
      const double n = static_cast<double>(comps[c].size());
      EXPECT_NEAR(stats.cohesiveness, 2 * sum / (n * (n - 1)), 1e-12);
    }
  }
}

TEST(Cohesiveness, RejectsBadGrid) {
  const Eigen::MatrixXd sim = Eigen::MatrixXd::Identity(3, 3);
  EXPECT_THROW(an::cohesiveness_curve(sim, std::vector<double>{}), mmc::ConfigError);
  EXPECT_THROW(an::cohesiveness_curve(sim, std::vector<double>{0.5, 0.2}), mmc::ConfigError);
}

// Under the Gaussian kernel the dense cluster is always the more cohesive.
TEST(Cohesiveness, GaussianFavoursDenseCluster) {
  const auto d = two_density(150, 3);
  for (double sigma : {0.03125, 0.0625, 0.125}) {
    const auto curve = an::cohesiveness_curve(an::gaussian_kernel_matrix(d.points, sigma), kTaus, &*d.labels);
    const auto cmp = an::compare_classes(curve, 0, 1);
    ASSERT_FALSE(cmp.taus.empty()) << sigma;
    EXPECT_TRUE(cmp.dense_always_higher()) << sigma;
  }
}

// Some isolation setting makes the two clusters about equally cohesive.
TEST(Cohesiveness, IsolationEqualizesForSomePsi) {
  const auto d = two_density(150, 3);
  bool found = false;
  for (double psi : cl::default_mmc_grid().kernel_values) {
    const auto sim = ik_matrix(d, static_cast<int>(psi), mmc::kernels::Mechanism::hypersphere);
    const auto cmp = an::compare_classes(an::cohesiveness_curve(sim, kTaus, &*d.labels), 0, 1);
    for (double gap : cmp.relative_gaps()) found |= gap <= 0.15;
  }
  EXPECT_TRUE(found);
}

TEST(Density, ClassOrdering) {
  const auto d = two_density(100, 4);
  EXPECT_LT(an::mean_nn_distance(d, 0), an::mean_nn_distance(d, 1));
  EXPECT_EQ(an::classes_by_density(d), (std::vector<int>{0, 1}));
}

// Reference: the largest v such that `from` and `to` are connected using
// only edges with similarity >= v.
double bottleneck_reference(const Eigen::MatrixXd& s, Index from, Index to) {
  std::vector<double> values(s.data(), s.data() + s.size());
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  double best = 0;
  for (double v : values) {
    // Flood fill keeps edges strictly above its threshold; nudge v down.
    const auto comps = oracle::flood_fill(s, std::nextafter(v, -1.0));
    for (const auto& c : comps) {
      const bool f = std::binary_search(c.begin(), c.end(), from);
      const bool t = std::binary_search(c.begin(), c.end(), to);
      if (f && t) best = std::max(best, v);
    }
  }
  return best;
}

TEST(ConditionOne, BottleneckMatchesReference) {
  const auto d = oracle::uniform_points(40, 2, 5);
  const auto sim = an::gaussian_kernel_matrix(d.points, 0.1);
  for (Index to : {1, 7, 25, 39}) EXPECT_EQ(an::bottleneck_similarity(sim, 0, to), bottleneck_reference(sim, 0, to));
}

mmc::data::Dataset three_g_small() {
  return mmc::data::generate_synthetic({mmc::data::Family::three_gaussians_3G}, 300, 7);
}

TEST(ConditionOne, GaussianTriggersOnAdjacentDenseBlobs) {
  const auto d = three_g_small();
  const auto c = an::check_condition_one(an::gaussian_kernel_matrix(d.points, 0.0625), d);
  EXPECT_EQ(c.sparse_class, 2);
  EXPECT_TRUE(c.triggered) << c.sparse_peak_similarity << " vs " << c.bottleneck;
}

TEST(ConditionOne, IsolationAvoidsItForSomePsi) {
  const auto d = three_g_small();
  bool avoided = false;
  for (int psi : {4, 8, 16, 32, 64}) {
    const auto c = an::check_condition_one(ik_matrix(d, psi, mmc::kernels::Mechanism::hypersphere), d);
    avoided |= !c.triggered;
  }
  EXPECT_TRUE(avoided);
}

TEST(ConditionOne, SymmetricFarBlobsNeverTrigger) {
  const auto d = oracle::blobs({{0.1, 0.1, 0.02}, {0.9, 0.1, 0.02}, {0.5, 0.9, 0.02}}, 60, 8);
  EXPECT_FALSE(an::check_condition_one(an::gaussian_kernel_matrix(d.points, 0.05), d).triggered);
  EXPECT_FALSE(an::check_condition_one(ik_matrix(d, 16, mmc::kernels::Mechanism::hypersphere), d).triggered);
  EXPECT_THROW(an::check_condition_one(an::gaussian_kernel_matrix(d.points, 0.05), two_density(10, 1)),
               mmc::ConfigError);
}

mmc::data::Dataset overlapping_pair() {
  // Dense sd 0.03 inside the reach of sparse sd 0.06: 4:1 density ratio.
  return oracle::blobs({{0.45, 0.5, 0.03}, {0.55, 0.5, 0.06}}, 150, 9);
}

// Brute-force minimum over members of the best same-class similarity.
double min_best_neighbour(const Eigen::MatrixXd& s, const std::vector<int>& labels, int cls) {
  double lowest = 2;
  for (Index a = 0; a < s.rows(); ++a) {
    if (labels[a] != cls) continue;
    double best = -1;
    for (Index b = 0; b < s.rows(); ++b) {
      if (b != a && labels[b] == cls) best = std::max(best, s(a, b));
    }
    lowest = std::min(lowest, best);
  }
  return lowest;
}

TEST(ConditionTwo, GaussianRatioHolds) {
  const auto d = overlapping_pair();
  const auto sim = an::gaussian_kernel_matrix(d.points, 0.0078125);
  const auto c = an::check_condition_two(sim, d);
  EXPECT_EQ(c.dense_class, 0);
  EXPECT_EQ(c.dense_min, min_best_neighbour(sim, *d.labels, 0));
  EXPECT_EQ(c.sparse_min, min_best_neighbour(sim, *d.labels, 1));
  EXPECT_GE(c.ratio, 4.0);
  EXPECT_TRUE(c.holds);
}

TEST(ConditionTwo, IsolationRatioBelowThresholdForSomePsi) {
  const auto d = overlapping_pair();
  bool below = false;
  for (int psi : {4, 8, 16, 32, 64}) {
    below |= !an::check_condition_two(ik_matrix(d, psi, mmc::kernels::Mechanism::hypersphere), d).holds;
  }
  EXPECT_TRUE(below);
}

TEST(ConditionTwo, EqualDensitiesGiveRatioNearOne) {
  const auto d = oracle::blobs({{0.3, 0.5, 0.04}, {0.7, 0.5, 0.04}}, 150, 10);
  const auto c = an::check_condition_two(an::gaussian_kernel_matrix(d.points, 0.25), d);
  EXPECT_GT(c.ratio, 0.5);
  EXPECT_LT(c.ratio, 2.0);
  EXPECT_FALSE(c.holds);
}

TEST(Correction, EndpointsAndBatchSize) {
  const auto d = three_g_small();
  const auto m = mmc::kernels::fit_ik(d, 16, 100, mmc::kernels::Mechanism::hypersphere, 3);
  md::IKFeatureSpace space(m, d);
  const auto series = an::correction_curve(space, d, 50, 4);
  ASSERT_EQ(series.size(), 7u);
  EXPECT_EQ(series.front().corrected, 0);
  EXPECT_EQ(series.back().corrected, 300);
  EXPECT_DOUBLE_EQ(series.back().ami, 1.0);
  EXPECT_NEAR(series.back().objective, md::total_objective(m, d, *d.labels).normalized, 1e-12);
  EXPECT_EQ(an::correction_curve(space, d, 300, 4).size(), 2u);
}

TEST(Correction, ObjectiveRisesAsLabelsAreFixed) {
  const auto d = mmc::data::generate_synthetic({mmc::data::Family::three_gaussians_3G}, 1500, 2);
  const auto m = mmc::kernels::fit_ik(d, 16, 200, mmc::kernels::Mechanism::hypersphere, 3);
  const auto series = an::correction_curve(md::IKFeatureSpace(m, d), d, 50, 5);
  int rises = 0;
  for (std::size_t i = 1; i < series.size(); ++i) rises += series[i].objective >= series[i - 1].objective;
  EXPECT_GE(rises, 0.95 * static_cast<double>(series.size() - 1));
}

TEST(Spearman, KnownValues) {
  const std::vector<double> x{1, 2, 3, 4, 5}, up{2, 4, 5, 9, 10}, down{5, 4, 3, 2, 1};
  EXPECT_NEAR(an::spearman(x, up), 1.0, 1e-15);
  EXPECT_NEAR(an::spearman(x, down), -1.0, 1e-15);
  // Ties take average ranks: ranks (1, 2.5, 2.5, 4) vs (1, 2, 3, 4).
  const std::vector<double> a{1, 2, 2, 3}, b{1, 2, 3, 4};
  EXPECT_NEAR(an::spearman(a, b), 4.5 / std::sqrt(4.5 * 5.0), 1e-12);
}

TEST(Scaling, FitRecoversSlope) {
  std::vector<an::ScalePoint> pts;
  for (Index n : {1000, 10000, 100000, 1000000}) {
    an::ScalePoint p;
    p.n = n;
    p.total_seconds = 2e-6 * std::pow(static_cast<double>(n), 1.0);
    pts.push_back(p);
  }
  pts[0].below_resolution = true;
  const auto r = an::fit_scaling(pts);
  EXPECT_NEAR(r.slope, 1.0, 1e-9);
  EXPECT_EQ(r.fitted_points, 2u);
}

TEST(Scaling, RejectsShortLadders) {
  an::ScaleOptions opt;
  opt.sizes = {100, 1000};
  EXPECT_THROW(an::scaleup(opt), mmc::ConfigError);
  opt.sizes = {100, 200, 400};
  EXPECT_THROW(an::scaleup(opt), mmc::ConfigError);
  opt.sizes = {1000, 100, 100000};
  EXPECT_THROW(an::scaleup(opt), mmc::ConfigError);
}

TEST(Scaling, SmallLadderRuns) {
  an::ScaleOptions opt;
  opt.sizes = {300, 3000, 30000};
  opt.params.k = 3;
  opt.params.s = 200;
  opt.params.tau = 0.3;
  opt.params.psi = 16;
  opt.params.t = 50;
  const auto r = an::scaleup(opt);
  ASSERT_EQ(r.points.size(), 3u);
  for (const auto& p : r.points) EXPECT_GT(p.total_seconds, 0.0);
  EXPECT_TRUE(std::isfinite(r.slope));
}

}  // namespace
