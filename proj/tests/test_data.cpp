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

#include <set>
#include <sstream>

#include "mmc/data.hpp"
#include "mmc/error.hpp"
#include "mmc/rng.hpp"

namespace {

using mmc::data::Dataset;
using mmc::data::Family;

Dataset parse(const std::string& text, std::optional<std::string> label = std::nullopt) {
  std::istringstream in(text);
  return mmc::data::read_csv(in, label, "test");
}

TEST(Csv, HeaderWithLabelColumn) {
  const auto d = parse("a,b,y\n1,2,0\n3,4,1\n5,6,0\n", "y");
  EXPECT_EQ(d.size(), 3);
  EXPECT_EQ(d.dim(), 2);
  ASSERT_TRUE(d.has_labels());
  EXPECT_EQ(*d.labels, (std::vector<int>{0, 1, 0}));
  EXPECT_DOUBLE_EQ(d.points(2, 1), 6.0);
}

TEST(Csv, LabelColumnOptional) {
  const auto d = parse("a,b,y\n1,2,0\n3,4,1\n5,6,0\n");
  EXPECT_FALSE(d.has_labels());
  EXPECT_EQ(d.dim(), 3);
}

TEST(Csv, NoHeaderNumericLabelIndex) {
  const auto d = parse("1,2,7\n3,4,9\n", "2");
  ASSERT_TRUE(d.has_labels());
  EXPECT_EQ(*d.labels, (std::vector<int>{7, 9}));
  EXPECT_EQ(d.dim(), 2);
}

TEST(Csv, StringLabelsNumberedByFirstAppearance) {
  const auto d = parse("x,cls\n0.1,cat\n0.2,dog\n0.3,cat\n", "cls");
  EXPECT_EQ(*d.labels, (std::vector<int>{0, 1, 0}));
}

TEST(Csv, RaggedRowNamesLine) {
  try {
    parse("a,b\n1,2\n3,4,5\n6,7\n");
    FAIL() << "expected DataError";
  } catch (const mmc::DataError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(Csv, RejectsBadInput) {
  EXPECT_THROW(parse(""), mmc::DataError);
  EXPECT_THROW(parse("a,b\n"), mmc::DataError);
  EXPECT_THROW(parse("a,b\n1,x\n"), mmc::DataError);
  EXPECT_THROW(parse("a,b\n1,2\n", "zz"), mmc::DataError);
  EXPECT_THROW(mmc::data::load_csv("/nonexistent/file.csv"), mmc::DataError);
}

TEST(Csv, WriteReadRoundTrip) {
  auto d = mmc::data::generate_synthetic({Family::two_gaussians_varied_density}, 50, 3);
  std::ostringstream out;
  mmc::data::write_csv(out, d);
  const auto back = parse(out.str(), "label");
  EXPECT_EQ(back.points, d.points);
  EXPECT_EQ(*back.labels, *d.labels);
  EXPECT_EQ(mmc::data::dataset_hash(back), mmc::data::dataset_hash(d));
}

TEST(Normalize, AffineAndConstantColumns) {
  Dataset d;
  d.points.resize(3, 2);
  d.points << 2, 5, 4, 5, 6, 5;
  const auto n = mmc::data::normalize_minmax(d);
  EXPECT_DOUBLE_EQ(n.points(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(n.points(1, 0), 0.5);
  EXPECT_DOUBLE_EQ(n.points(2, 0), 1.0);
  EXPECT_DOUBLE_EQ(n.points(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(n.points(2, 1), 0.0);
}

TEST(Subsample, Boundaries) {
  const auto all = mmc::data::subsample(40, 40, 5);
  std::set<mmc::Index> seen(all.indices.begin(), all.indices.end());
  EXPECT_EQ(seen.size(), 40u);
  EXPECT_EQ(*seen.begin(), 0);
  EXPECT_EQ(*seen.rbegin(), 39);

  const auto one = mmc::data::subsample(40, 1, 5);
  ASSERT_EQ(one.size(), 1);
  EXPECT_GE(one.indices[0], 0);
  EXPECT_LT(one.indices[0], 40);

  EXPECT_EQ(mmc::data::subsample(1000, 30, 9).indices, mmc::data::subsample(1000, 30, 9).indices);
  EXPECT_NE(mmc::data::subsample(1000, 30, 9).indices, mmc::data::subsample(1000, 30, 10).indices);
}

TEST(Rng, CounterStreamsAreReproducible) {
  mmc::CounterRng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
  mmc::CounterRng c(42);
  double sum = 0;
  for (int i = 0; i < 20000; ++i) {
    const double u = c.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 20000, 0.5, 0.01);
  EXPECT_NE(mmc::derive_seed(1, 1), mmc::derive_seed(1, 2));
}

struct FamilyCase {
  Family family;
  mmc::Index n;
  int clusters;
  mmc::Index dim;
};

class SyntheticFamilies : public ::testing::TestWithParam<FamilyCase> {};

TEST_P(SyntheticFamilies, ShapeLabelsAndRange) {
  const auto& c = GetParam();
  const auto d = mmc::data::generate_synthetic({c.family, 10}, c.n, 11);
  EXPECT_EQ(d.size(), c.n);
  EXPECT_EQ(d.dim(), c.dim);
  ASSERT_TRUE(d.has_labels());
  std::set<int> classes(d.labels->begin(), d.labels->end());
  EXPECT_EQ(static_cast<int>(classes.size()), c.clusters);
  EXPECT_EQ(mmc::data::family_cluster_count(c.family), c.clusters);
  EXPECT_GE(d.points.minCoeff(), 0.0);
  EXPECT_LE(d.points.maxCoeff(), 1.0);
  const auto again = mmc::data::generate_synthetic({c.family, 10}, c.n, 11);
  EXPECT_EQ(mmc::data::dataset_hash(d), mmc::data::dataset_hash(again));
}

INSTANTIATE_TEST_SUITE_P(
    All, SyntheticFamilies,
    ::testing::Values(FamilyCase{Family::two_gaussians_varied_density, 1000, 2, 2},
                      FamilyCase{Family::three_gaussians_3G, 1500, 3, 2},
                      FamilyCase{Family::ring_gaussians_RingG, 1536, 4, 2},
                      FamilyCase{Family::subspace_gaussian, 2000, 2, 20},
                      FamilyCase{Family::scaleup_arc_mix, 1500, 3, 2}));

double class_nn_distance(const Dataset& d, int cls) {
  double total = 0;
  int count = 0;
  for (mmc::Index i = 0; i < d.size(); ++i) {
    if ((*d.labels)[i] != cls) continue;
    double best = 1e300;
    for (mmc::Index j = 0; j < d.size(); ++j) {
      if (j != i && (*d.labels)[j] == cls) best = std::min(best, (d.points.row(i) - d.points.row(j)).norm());
    }
    total += best;
    ++count;
  }
  return total / count;
}

// Dense and sparse clusters differ in density by at least 4:1 (in 2-d the
// nearest-neighbour distance scales with the inverse square root of density).
TEST(Synthetic, DensityRatios) {
  const auto two = mmc::data::generate_synthetic({Family::two_gaussians_varied_density}, 1000, 1);
  const double r2 = class_nn_distance(two, 1) / class_nn_distance(two, 0);
  EXPECT_GE(r2 * r2, 4.0);
  const auto g3 = mmc::data::generate_synthetic({Family::three_gaussians_3G}, 1500, 1);
  const double r3 = class_nn_distance(g3, 2) / class_nn_distance(g3, 0);
  EXPECT_GE(r3 * r3, 4.0);
}

TEST(Synthetic, RejectsTooFewPoints) {
  EXPECT_THROW(mmc::data::generate_synthetic({Family::ring_gaussians_RingG}, 3, 0), mmc::ConfigError);
  EXPECT_FALSE(mmc::data::parse_family("nope").has_value());
  EXPECT_EQ(mmc::data::parse_family(mmc::data::family_name(Family::three_gaussians_3G)),
            Family::three_gaussians_3G);
}

}  // namespace
