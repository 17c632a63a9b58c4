#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "sepph/error.hpp"
#include "sepph/geometry.hpp"
#include "test_util.hpp"

using namespace sepph;
using sepph::testing::cloud;
using sepph::testing::random_cloud;

TEST(PairwiseDistances, ThreeFourFive) {
  const auto dm = pairwise_distances(cloud({{0, 0}, {3, 4}}));
  EXPECT_EQ(dm(0, 1), 5.0);
  EXPECT_EQ(dm(1, 0), 5.0);
  EXPECT_EQ(dm(0, 0), 0.0);
  EXPECT_EQ(diameter(dm), 5.0);
}

TEST(PairwiseDistances, DuplicatePointGivesZero) {
  const auto dm = pairwise_distances(cloud({{1.5, -2}, {1.5, -2}}));
  EXPECT_EQ(dm.entries(), Eigen::MatrixXd::Zero(2, 2));
}

TEST(PairwiseDistances, Collinear) {
  const auto dm = pairwise_distances(cloud({{0}, {1}, {3}}));
  EXPECT_EQ(dm(0, 1), 1.0);
  EXPECT_EQ(dm(1, 2), 2.0);
  EXPECT_EQ(dm(0, 2), 3.0);
  EXPECT_EQ(diameter(dm), 3.0);
}

TEST(PairwiseDistances, EmptyInput) {
  EXPECT_THROW(pairwise_distances(PointCloud()), InvalidArgument);
  try {
    pairwise_distances(PointCloud());
  } catch (const InvalidArgument& e) {
    EXPECT_STREQ(e.what(), "empty input");
  }
}

TEST(Diameter, SinglePoint) { EXPECT_EQ(diameter(pairwise_distances(cloud({{4, 2}}))), 0.0); }

TEST(PointCloud, RejectsInvalidData) {
  RowMatrix nan_pts(1, 2);
  nan_pts << 0.0, std::nan("");
  EXPECT_THROW(PointCloud{nan_pts}, InvalidArgument);
  RowMatrix pts = RowMatrix::Zero(3, 2);
  EXPECT_THROW(PointCloud(pts, std::vector<int>{0, 1}), InvalidArgument);
  EXPECT_THROW(PointCloud(pts, std::vector<int>{0, -1, 1}), InvalidArgument);
  EXPECT_THROW(PointCloud(pts).labels(), MissingLabels);
  EXPECT_EQ(PointCloud(pts, std::vector<int>{0, 2, 1}).num_classes(), 3);
}

TEST(DistanceMatrix, ValidatesInvariants) {
  Eigen::MatrixXd m(2, 2);
  m << 0, 1, 2, 0;
  EXPECT_THROW(DistanceMatrix{m}, InvalidArgument);
  m << 1, 1, 1, 0;
  EXPECT_THROW(DistanceMatrix{m}, InvalidArgument);
  m << 0, -1, -1, 0;
  EXPECT_THROW(DistanceMatrix{m}, InvalidArgument);
  m << 0, 1, 1, 0;
  EXPECT_NO_THROW(DistanceMatrix{m});
}

TEST(PairwiseDistancesProperty, TriangleInequality) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto pc = random_cloud(25, 1 + seed % 7, seed);
    const auto dm = pairwise_distances(pc);
    CounterRng rng(seed + 100);
    for (int t = 0; t < 200; ++t) {
      const auto i = rng.below(25), j = rng.below(25), k = rng.below(25);
      EXPECT_LE(dm(i, k), dm(i, j) + dm(j, k) + 1e-9);
    }
  }
}

TEST(PairwiseDistancesProperty, ScalesLinearly) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto pc = random_cloud(20, 4, seed);
    for (double c : {0.01, 3.0, 250.0}) {
      const auto a = pairwise_distances(pc).entries();
      const auto b = pairwise_distances(pc.scaled(c)).entries();
      for (Eigen::Index i = 0; i < a.size(); ++i)
        EXPECT_NEAR(b.data()[i], c * a.data()[i], 1e-12 * std::max(1.0, c * a.data()[i]));
    }
  }
}

TEST(PairwiseDistancesProperty, PermutationConsistent) {
  const auto pc = random_cloud(30, 3, 11);
  std::vector<std::size_t> perm(30);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  CounterRng(5).shuffle(perm);
  const auto a = pairwise_distances(pc);
  const auto b = pairwise_distances(pc.subset(perm));
  for (std::size_t i = 0; i < 30; ++i)
    for (std::size_t j = 0; j < 30; ++j) EXPECT_EQ(b(i, j), a(perm[i], perm[j]));
}
