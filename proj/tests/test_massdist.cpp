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

#include <numeric>

#include "mmc/feature_space.hpp"
#include "mmc/massdist.hpp"
#include "mmc/rng.hpp"
#include "oracles.hpp"

namespace {

using mmc::Index;
using mmc::kernels::Mechanism;
namespace md = mmc::massdist;

std::vector<Index> iota_rows(Index n) {
  std::vector<Index> r(static_cast<std::size_t>(n));
  std::iota(r.begin(), r.end(), 0);
  return r;
}

// Mass through the mean feature map equals the average kernel value to the
// members, on random datasets and member sets.
TEST(Mass, FeatureMapEqualsKernelMean) {
  mmc::CounterRng rng(101);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = 10 + static_cast<Index>(rng.below(60));
    const auto d = oracle::uniform_points(n, 2, rng.next());
    const auto mech = trial % 2 ? Mechanism::voronoi : Mechanism::hypersphere;
    const auto m = mmc::kernels::fit_ik(d, 1 + static_cast<int>(rng.below(8)),
                                        1 + static_cast<int>(rng.below(32)), mech, rng.next());
    const auto members = mmc::sample_without_replacement(n, 1 + static_cast<Index>(rng.below(n)), rng);
    const auto cmm = md::mean_map(m, d, members);
    for (Index p = 0; p < n; ++p) {
      double kernel_mean = 0;
      for (Index q : members) kernel_mean += oracle::ik_similarity(m, d.points.row(p).data(), d.points.row(q).data());
      kernel_mean /= static_cast<double>(members.size());
      const double via_map = md::mass(m, d.points.row(p), cmm);
      ASSERT_NEAR(via_map, kernel_mean, 1e-12);
      ASSERT_GE(via_map, 0.0);
      ASSERT_LE(via_map, 1.0);
    }
  }
}

TEST(Mass, DenseMeanMapMatchesFeatureSpace) {
  const auto d = oracle::uniform_points(40, 2, 7);
  const auto m = mmc::kernels::fit_nystrom(d, 40, 0.3, 2);
  std::vector<int> labels(40);
  for (int i = 0; i < 40; ++i) labels[i] = i % 3;
  md::DenseFeatureSpace space(m, d);
  const auto masses = space.cluster_masses(labels, 3);
  for (int c = 0; c < 3; ++c) {
    std::vector<Index> members;
    for (Index i = 0; i < 40; ++i) {
      if (labels[i] == c) members.push_back(i);
    }
    const auto cmm = md::mean_map(m, d, members);
    for (Index p = 0; p < 40; ++p) {
      double exact = 0;
      for (Index q : members) exact += oracle::gaussian(d.points.row(p).data(), d.points.row(q).data(), 2, 0.3);
      exact /= static_cast<double>(members.size());
      ASSERT_NEAR(md::density(m, d.points.row(p), cmm), masses(p, c), 1e-12);
      ASSERT_NEAR(masses(p, c), exact, 1e-6);
    }
  }
}

TEST(Mass, ClusterMassesMatchMeanMaps) {
  const auto d = oracle::uniform_points(80, 3, 8);
  const auto m = mmc::kernels::fit_ik(d, 8, 64, Mechanism::hypersphere, 1);
  std::vector<int> labels(80);
  for (int i = 0; i < 80; ++i) labels[i] = (i * 7) % 4;
  labels[5] = -1;  // unassigned rows still get masses but do not count
  md::IKFeatureSpace space(m, d);
  const auto masses = space.cluster_masses(labels, 4);
  for (int c = 0; c < 4; ++c) {
    std::vector<Index> members;
    for (Index i = 0; i < 80; ++i) {
      if (labels[i] == c) members.push_back(i);
    }
    const auto cmm = md::mean_map(m, d, members);
    for (Index p = 0; p < 80; ++p) ASSERT_EQ(masses(p, c), md::mass(m, d.points.row(p), cmm));
  }
}

TEST(MeanMap, BlockSums) {
  const auto d = oracle::uniform_points(50, 2, 9);
  const auto rows = iota_rows(50);
  const auto v = md::mean_map(mmc::kernels::fit_ik(d, 6, 20, Mechanism::voronoi, 1), d, rows);
  const auto h = md::mean_map(mmc::kernels::fit_ik(d, 6, 20, Mechanism::hypersphere, 1), d, rows);
  for (int i = 0; i < 20; ++i) {
    EXPECT_DOUBLE_EQ(v.block_sum(i), 1.0);
    EXPECT_LE(h.block_sum(i), 1.0);
  }
}

TEST(MeanMap, SingletonIsFeatureVector) {
  const auto d = oracle::uniform_points(20, 2, 10);
  const auto m = mmc::kernels::fit_ik(d, 4, 10, Mechanism::voronoi, 1);
  const std::vector<Index> one{3};
  const auto cmm = md::mean_map(m, d, one);
  EXPECT_EQ(cmm.mean_features(), mmc::kernels::embed_ik(m, d.points.row(3)).to_dense());
  EXPECT_DOUBLE_EQ(md::mass(m, d.points.row(3), cmm), 1.0);
  EXPECT_THROW(md::mean_map(m, d, std::vector<Index>{}), mmc::ConfigError);
}

TEST(MeanMap, IncrementalUpdatesMatchRecompute) {
  const auto d = oracle::uniform_points(60, 2, 11);
  const auto m = mmc::kernels::fit_ik(d, 8, 30, Mechanism::hypersphere, 2);
  mmc::massdist::IKMeanMap inc(m.t, m.psi);
  for (Index i = 0; i < 40; ++i) inc.add(mmc::kernels::embed_ik(m, d.points.row(i)));
  for (Index i = 0; i < 15; ++i) inc.remove(mmc::kernels::embed_ik(m, d.points.row(i)));
  std::vector<Index> rest(25);
  std::iota(rest.begin(), rest.end(), 15);
  const auto full = md::mean_map(m, d, rest);
  EXPECT_LE((inc.mean_features() - full.mean_features()).cwiseAbs().maxCoeff(), 1e-10);

  const auto nm = mmc::kernels::fit_nystrom(d, 20, 0.4, 1);
  md::DenseMeanMap dinc(nm.feature_dim());
  for (Index i = 0; i < 40; ++i) dinc.add(mmc::kernels::embed_nystrom(nm, d.points.row(i)));
  for (Index i = 0; i < 15; ++i) dinc.remove(mmc::kernels::embed_nystrom(nm, d.points.row(i)));
  EXPECT_LE((dinc.mean_features() - md::mean_map(nm, d, rest).mean_features()).cwiseAbs().maxCoeff(),
            1e-10);
}

TEST(Mass, OutsideEverySphereIsZero) {
  const auto d = oracle::uniform_points(20, 2, 12);
  const auto m = mmc::kernels::fit_ik(d, 4, 10, Mechanism::hypersphere, 1);
  const auto cmm = md::mean_map(m, d, iota_rows(20));
  EXPECT_EQ(md::mass(m, Eigen::Vector2d(40, 40), cmm), 0.0);
}

TEST(Density, SingletonAndFlatKernel) {
  const auto d = oracle::uniform_points(15, 2, 13);
  const auto m = mmc::kernels::fit_nystrom(d, 15, 0.3, 1);
  const auto cmm = md::mean_map(m, d, std::vector<Index>{4});
  EXPECT_NEAR(md::density(m, d.points.row(4), cmm), 1.0, 1e-6);

  const auto wide = mmc::kernels::fit_nystrom(d, 15, 1000.0, 1);
  const auto all = md::mean_map(wide, d, iota_rows(15));
  for (Index p = 0; p < 15; ++p) EXPECT_NEAR(md::density(wide, d.points.row(p), all), 1.0, 1e-5);
}

TEST(MassDistribution, ArgmaxAndTies) {
  const auto d = oracle::blobs({{0.2, 0.2, 0.02}, {0.8, 0.8, 0.02}}, 30, 5);
  const auto m = mmc::kernels::fit_ik(d, 8, 100, Mechanism::voronoi, 3);
  std::vector<Index> a(30), b(30);
  std::iota(a.begin(), a.end(), 0);
  std::iota(b.begin(), b.end(), 30);
  const std::vector<md::IKMeanMap> maps{md::mean_map(m, d, a), md::mean_map(m, d, b)};
  for (Index p = 0; p < 60; ++p) {
    double ka = 0, kb = 0;
    for (Index q : a) ka += oracle::ik_similarity(m, d.points.row(p).data(), d.points.row(q).data());
    for (Index q : b) kb += oracle::ik_similarity(m, d.points.row(p).data(), d.points.row(q).data());
    const auto choice = md::mass_distribution(m, d.points.row(p), std::span<const md::IKMeanMap>(maps));
    EXPECT_EQ(choice.index, ka >= kb ? 0 : 1);
    EXPECT_EQ(choice.index, p < 30 ? 0 : 1);
  }
  const std::vector<md::IKMeanMap> dup{maps[1], maps[1]};
  EXPECT_EQ(md::mass_distribution(m, d.points.row(40), std::span<const md::IKMeanMap>(dup)).index, 0);
  const std::vector<md::IKMeanMap> single{maps[1]};
  EXPECT_EQ(md::mass_distribution(m, d.points.row(0), std::span<const md::IKMeanMap>(single)).index, 0);
}

TEST(Objective, WholeDatasetAsOneCluster) {
  const auto d = oracle::uniform_points(30, 2, 14);
  const auto m = mmc::kernels::fit_ik(d, 4, 16, Mechanism::voronoi, 1);
  const auto cmm = md::mean_map(m, d, iota_rows(30));
  double sum = 0;
  for (Index p = 0; p < 30; ++p) sum += md::mass(m, d.points.row(p), cmm);
  const auto obj = md::total_objective(m, d, std::vector<int>(30, 0));
  EXPECT_NEAR(obj.raw, sum, 1e-12);
  EXPECT_NEAR(obj.normalized, sum / 30, 1e-12);
}

TEST(Objective, SingletonClustersScoreN) {
  const auto d = oracle::uniform_points(12, 2, 15);
  const auto m = mmc::kernels::fit_ik(d, 4, 16, Mechanism::voronoi, 1);
  std::vector<int> labels(12);
  std::iota(labels.begin(), labels.end(), 0);
  EXPECT_DOUBLE_EQ(md::total_objective(m, d, labels).raw, 12.0);
}

TEST(Objective, PerfectBeatsSwappedHalves) {
  const auto d = oracle::blobs({{0.2, 0.5, 0.05}, {0.8, 0.5, 0.05}}, 50, 16);
  const auto m = mmc::kernels::fit_ik(d, 16, 100, Mechanism::voronoi, 2);
  std::vector<int> perfect(100), swapped(100);
  for (int i = 0; i < 100; ++i) {
    perfect[i] = i < 50 ? 0 : 1;
    // Half of each blob trades places with half of the other.
    swapped[i] = (i % 50) < 25 ? perfect[i] : 1 - perfect[i];
  }
  EXPECT_GT(md::total_objective(m, d, perfect).raw, md::total_objective(m, d, swapped).raw);
}

TEST(Objective, RejectsEmptyOrNegative) {
  const auto d = oracle::uniform_points(4, 2, 17);
  const auto m = mmc::kernels::fit_ik(d, 2, 4, Mechanism::voronoi, 1);
  EXPECT_THROW(md::total_objective(m, d, std::vector<int>{0, 0, 2, 2}), mmc::ConfigError);
  EXPECT_THROW(md::total_objective(m, d, std::vector<int>{0, -1, 0, 0}), mmc::ConfigError);
  EXPECT_THROW(md::total_objective(m, d, std::vector<int>{0, 0}), mmc::ConfigError);
}

}  // namespace
