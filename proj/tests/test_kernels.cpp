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
#include <set>
#include <sstream>

#include "mmc/feature_space.hpp"
#include "mmc/kernels.hpp"
#include "mmc/model_io.hpp"
#include "mmc/rng.hpp"
#include "oracles.hpp"

namespace {

using mmc::Index;
using mmc::kernels::IKModel;
using mmc::kernels::Mechanism;
using mmc::kernels::kNoBlock;

mmc::data::Dataset line_points(std::vector<double> xs) {
  mmc::data::Dataset d;
  d.points.resize(static_cast<Index>(xs.size()), 1);
  for (std::size_t i = 0; i < xs.size(); ++i) d.points(static_cast<Index>(i), 0) = xs[i];
  return d;
}

TEST(FitIK, PsiEqualsNUsesWholeDataset) {
  const auto d = oracle::uniform_points(12, 2, 1);
  const auto m = mmc::kernels::fit_ik(d, 12, 5, Mechanism::voronoi, 3);
  for (int i = 0; i < m.t; ++i) {
    std::set<Index> rows(m.center_rows.begin() + i * 12, m.center_rows.begin() + (i + 1) * 12);
    EXPECT_EQ(rows.size(), 12u);
  }
}

TEST(FitIK, DeterministicPerSeed) {
  const auto d = oracle::uniform_points(40, 3, 2);
  const auto a = mmc::kernels::fit_ik(d, 8, 20, Mechanism::hypersphere, 9);
  const auto b = mmc::kernels::fit_ik(d, 8, 20, Mechanism::hypersphere, 9);
  EXPECT_EQ(a.center_rows, b.center_rows);
  EXPECT_EQ(a.radii_sq, b.radii_sq);
  const auto c = mmc::kernels::fit_ik(d, 8, 20, Mechanism::hypersphere, 10);
  EXPECT_NE(a.center_rows, c.center_rows);
}

TEST(FitIK, RadiiPositiveForDistinctPoints) {
  const auto d = oracle::uniform_points(30, 2, 4);
  const auto m = mmc::kernels::fit_ik(d, 6, 50, Mechanism::hypersphere, 1);
  EXPECT_GT(m.radii_sq.minCoeff(), 0.0);
}

TEST(FitIK, RejectsBadParameters) {
  const auto d = oracle::uniform_points(5, 2, 4);
  EXPECT_THROW(mmc::kernels::fit_ik(d, 6, 1, Mechanism::voronoi, 0), mmc::ConfigError);
  EXPECT_THROW(mmc::kernels::fit_ik(d, 0, 1, Mechanism::voronoi, 0), mmc::ConfigError);
  EXPECT_THROW(mmc::kernels::fit_ik(d, 2, 0, Mechanism::voronoi, 0), mmc::ConfigError);
}

TEST(EmbedIK, TwoPointBisector) {
  const auto d = line_points({0.0, 1.0});
  const auto m = mmc::kernels::fit_ik(d, 2, 1, Mechanism::voronoi, 0);
  Eigen::VectorXd x(1);
  x << 0.4;
  const auto f = mmc::kernels::embed_ik(m, x);
  const Index zero_center = m.center_rows[0] == 0 ? 0 : 1;
  EXPECT_EQ(f.blocks[0], zero_center);
  x << 0.7;
  EXPECT_EQ(mmc::kernels::embed_ik(m, x).blocks[0], 1 - zero_center);
}

TEST(EmbedIK, CenterMapsToItself) {
  const auto d = oracle::uniform_points(20, 2, 5);
  const auto m = mmc::kernels::fit_ik(d, 5, 10, Mechanism::voronoi, 2);
  for (int i = 0; i < m.t; ++i) {
    for (int j = 0; j < m.psi; ++j) {
      EXPECT_EQ(mmc::kernels::partition_of(m, i, m.centers.row(i * m.psi + j)), j);
    }
  }
}

TEST(EmbedIK, FarPointMissesEverySphere) {
  const auto d = oracle::uniform_points(20, 2, 6);
  const auto m = mmc::kernels::fit_ik(d, 4, 30, Mechanism::hypersphere, 1);
  Eigen::Vector2d far(50.0, -50.0);
  const auto f = mmc::kernels::embed_ik(m, far);
  EXPECT_EQ(f.set_count(), 0);
  EXPECT_DOUBLE_EQ(f.to_dense().squaredNorm(), 0.0);
}

TEST(EmbedIK, SingleCenterSphereCoversSpace) {
  const auto d = oracle::uniform_points(5, 2, 6);
  const auto m = mmc::kernels::fit_ik(d, 1, 4, Mechanism::hypersphere, 1);
  EXPECT_EQ(mmc::kernels::embed_ik(m, Eigen::Vector2d(80.0, 80.0)).set_count(), 4);
}

TEST(EmbedIK, DimensionMismatch) {
  const auto d = oracle::uniform_points(5, 2, 6);
  const auto m = mmc::kernels::fit_ik(d, 2, 4, Mechanism::voronoi, 1);
  EXPECT_THROW(mmc::kernels::embed_ik(m, Eigen::Vector3d::Zero()), mmc::ConfigError);
}

TEST(EmbedIK, BatchMatchesSinglePoint) {
  const auto d = oracle::uniform_points(60, 4, 8);
  for (auto mech : {Mechanism::voronoi, Mechanism::hypersphere}) {
    const auto m = mmc::kernels::fit_ik(d, 7, 25, mech, 3);
    const auto all = mmc::kernels::embed_ik_all(m, d.points);
    for (Index p = 0; p < d.size(); ++p) {
      const auto f = mmc::kernels::embed_ik(m, d.points.row(p));
      for (int i = 0; i < m.t; ++i) ASSERT_EQ(all(p, i), f.blocks[i]);
    }
  }
}

// Dot products over block indices agree exactly with the indicator sum over
// every partition of every partitioning.
TEST(IKSimilarity, MatchesIndicatorOracle) {
  mmc::CounterRng rng(77);
  for (int trial = 0; trial < 40; ++trial) {
    const Index n = 5 + static_cast<Index>(rng.below(30));
    const int psi = 1 + static_cast<int>(rng.below(8));
    const int t = 1 + static_cast<int>(rng.below(16));
    const auto mech = rng.below(2) ? Mechanism::voronoi : Mechanism::hypersphere;
    const auto d = oracle::uniform_points(n, 2, rng.next());
    const auto m = mmc::kernels::fit_ik(d, std::min<int>(psi, static_cast<int>(n)), t, mech, rng.next());
    mmc::massdist::IKFeatureSpace space(m, d);
    std::vector<Index> rows(static_cast<std::size_t>(n));
    std::iota(rows.begin(), rows.end(), 0);
    const auto sim = space.similarity(rows);
    for (Index a = 0; a < n; ++a) {
      for (Index b = 0; b < n; ++b) {
        const double want = oracle::ik_similarity(m, d.points.row(a).data(), d.points.row(b).data());
        ASSERT_EQ(mmc::kernels::ik_similarity(m, d.points.row(a), d.points.row(b)), want);
        ASSERT_EQ(sim(a, b), want);
      }
    }
  }
}

TEST(IKSimilarity, SymmetricAndBounded) {
  const auto d = oracle::uniform_points(50, 3, 12);
  for (auto mech : {Mechanism::voronoi, Mechanism::hypersphere}) {
    const auto m = mmc::kernels::fit_ik(d, 8, 40, mech, 5);
    mmc::massdist::IKFeatureSpace space(m, d);
    std::vector<Index> rows(50);
    std::iota(rows.begin(), rows.end(), 0);
    const auto s = space.similarity(rows);
    EXPECT_TRUE(s.isApprox(s.transpose(), 0.0));
    EXPECT_GE(s.minCoeff(), 0.0);
    EXPECT_LE(s.maxCoeff(), 1.0);
    if (mech == Mechanism::voronoi) {
      EXPECT_TRUE((s.diagonal().array() == 1.0).all());
    }
  }
}

TEST(IKFeatures, NormLaw) {
  const auto d = oracle::uniform_points(200, 3, 13);
  const auto queries = oracle::uniform_points(2000, 3, 14);
  for (auto mech : {Mechanism::voronoi, Mechanism::hypersphere}) {
    const auto m = mmc::kernels::fit_ik(d, 16, 32, mech, 6);
    const auto blocks = mmc::kernels::embed_ik_all(m, queries.points);
    for (Index p = 0; p < blocks.rows(); ++p) {
      int set = 0;
      for (int i = 0; i < m.t; ++i) set += blocks(p, i) != kNoBlock;
      if (mech == Mechanism::voronoi) {
        ASSERT_EQ(set, m.t);
      } else {
        ASSERT_LE(set, m.t);
      }
    }
  }
}

// Two points at the same distance are more similar under IK when they sit
// in a sparse region than in a dense one.
TEST(IKSimilarity, SparsePairsMoreSimilarThanDensePairs) {
  const auto d = oracle::blobs({{0.25, 0.5, 0.03}, {0.70, 0.5, 0.12}}, 500, 21);
  const auto m = mmc::kernels::fit_ik(d, 16, 200, Mechanism::voronoi, 4);
  const double target = 0.05, band = 0.01;
  mmc::CounterRng rng(5);
  double sums[2] = {0, 0};
  int counts[2] = {0, 0};
  for (int guard = 0; guard < 2000000 && (counts[0] < 200 || counts[1] < 200); ++guard) {
    const int cls = counts[0] < 200 ? 0 : 1;
    const Index a = cls * 500 + static_cast<Index>(rng.below(500));
    const Index b = cls * 500 + static_cast<Index>(rng.below(500));
    const double dist = (d.points.row(a) - d.points.row(b)).norm();
    if (std::abs(dist - target) > band) continue;
    sums[cls] += mmc::kernels::ik_similarity(m, d.points.row(a), d.points.row(b));
    ++counts[cls];
  }
  ASSERT_EQ(counts[0], 200);
  ASSERT_EQ(counts[1], 200);
  EXPECT_GT(sums[1] / 200, sums[0] / 200);
}

TEST(Nystrom, SingleLandmark) {
  mmc::PointMatrix l(1, 2);
  l << 0.3, 0.4;
  const auto m = mmc::kernels::nystrom_from_landmarks(l, 0.5);
  EXPECT_NEAR(m.whitening(0, 0), 1.0, 1e-12);
  const Eigen::Vector2d x(0.0, 0.0);
  EXPECT_NEAR(mmc::kernels::embed_nystrom(m, x)(0), std::exp(-0.25 / 0.5), 1e-12);
  EXPECT_NEAR(mmc::kernels::embed_nystrom(m, Eigen::Vector2d(0.3, 0.4))(0), 1.0, 1e-12);
}

TEST(Nystrom, FullRankMatchesExactKernel) {
  const auto d = oracle::uniform_points(10, 2, 31);
  for (double sigma : {0.25, 0.5}) {
    const auto m = mmc::kernels::fit_nystrom(d, 10, sigma, 1);
    EXPECT_EQ(m.feature_dim(), 10);
    EXPECT_TRUE(m.whitening.isApprox(m.whitening.transpose(), 1e-12));
    const auto f = mmc::kernels::embed_nystrom_all(m, d.points);
    for (Index a = 0; a < 10; ++a) {
      for (Index b = 0; b < 10; ++b) {
        const double exact = oracle::gaussian(d.points.row(a).data(), d.points.row(b).data(), 2, sigma);
        ASSERT_NEAR(f.row(a).dot(f.row(b)), exact, 1e-6);
      }
    }
  }
}

TEST(Nystrom, DuplicateLandmarksStayFinite) {
  mmc::PointMatrix l(3, 2);
  l << 0.1, 0.1, 0.1, 0.1, 0.8, 0.2;
  const auto m = mmc::kernels::nystrom_from_landmarks(l, 0.3);
  EXPECT_TRUE(m.whitening.allFinite());
  EXPECT_TRUE(mmc::kernels::embed_nystrom(m, Eigen::Vector2d(0.5, 0.5)).allFinite());
}

TEST(Nystrom, DistantPointsNearZero) {
  const auto d = oracle::uniform_points(20, 2, 3);
  const auto m = mmc::kernels::fit_nystrom(d, 20, 0.03125, 2);
  EXPECT_NEAR(mmc::kernels::nystrom_similarity(m, Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 1)), 0.0,
              1e-6);
}

// Gaussian similarities do not depend on where the rest of the data lies;
// isolation similarities do.
TEST(Nystrom, DataIndependentUnlikeIK) {
  const auto base = oracle::uniform_points(60, 2, 41);
  mmc::data::Dataset dense = base;
  dense.points.conservativeResize(260, 2);
  mmc::CounterRng rng(3);
  for (Index i = 60; i < 260; ++i) {
    dense.points(i, 0) = 0.5 + 0.01 * rng.normal();
    dense.points(i, 1) = 0.5 + 0.01 * rng.normal();
  }
  const mmc::PointMatrix landmarks = base.points.topRows(30);
  const auto m1 = mmc::kernels::nystrom_from_landmarks(landmarks, 0.2);
  const auto m2 = mmc::kernels::nystrom_from_landmarks(landmarks, 0.2);
  mmc::massdist::DenseFeatureSpace s1(m1, base), s2(m2, dense);
  std::vector<Index> rows(60);
  std::iota(rows.begin(), rows.end(), 0);
  EXPECT_EQ(s1.similarity(rows), s2.similarity(rows));

  const auto ik1 = mmc::kernels::fit_ik(base, 16, 100, Mechanism::voronoi, 1);
  const auto ik2 = mmc::kernels::fit_ik(dense, 16, 100, Mechanism::voronoi, 1);
  mmc::massdist::IKFeatureSpace i1(ik1, base), i2(ik2, dense);
  EXPECT_NE(i1.similarity(rows), i2.similarity(rows));
}

TEST(ModelIO, RoundTripIsExact) {
  const auto d = oracle::uniform_points(30, 3, 51);
  for (auto mech : {Mechanism::voronoi, Mechanism::hypersphere}) {
    const auto m = mmc::kernels::fit_ik(d, 6, 12, mech, 8);
    std::stringstream io;
    mmc::kernels::save_model(io, m);
    const auto back = std::get<IKModel>(mmc::kernels::load_model(io));
    EXPECT_EQ(back.mechanism, m.mechanism);
    EXPECT_EQ(back.t, m.t);
    EXPECT_EQ(back.psi, m.psi);
    EXPECT_EQ(back.seed, m.seed);
    EXPECT_EQ(back.centers, m.centers);
    EXPECT_EQ(back.center_rows, m.center_rows);
    EXPECT_EQ(back.radii_sq, m.radii_sq);
  }
  const auto n = mmc::kernels::fit_nystrom(d, 12, 0.5, 4);
  std::stringstream io;
  mmc::kernels::save_model(io, n);
  const auto back = std::get<mmc::kernels::NystromModel>(mmc::kernels::load_model(io));
  EXPECT_EQ(back.sigma, n.sigma);
  EXPECT_EQ(back.landmarks, n.landmarks);
  EXPECT_EQ(back.whitening, n.whitening);
}

TEST(ModelIO, RejectsGarbage) {
  std::stringstream io("not a model\n");
  EXPECT_ANY_THROW(mmc::kernels::load_model(io));
}

}  // namespace
