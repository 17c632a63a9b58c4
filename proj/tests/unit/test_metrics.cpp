#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "sepph/error.hpp"
#include "sepph/metrics.hpp"
#include "test_util.hpp"

using namespace sepph;
using sepph::testing::cloud;
using sepph::testing::random_cloud;

namespace {

// Double loop with an explicit sort per point; shares nothing with the
// library's neighbor search.
double thornton_oracle(const PointCloud& pc, std::size_t k) {
  const auto& x = pc.points();
  const auto& y = pc.labels();
  const std::size_t n = pc.size();
  double agree = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::pair<double, std::size_t>> d;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) d.emplace_back((x.row(i) - x.row(j)).norm(), j);
    std::sort(d.begin(), d.end());
    for (std::size_t m = 0; m < k; ++m) agree += y[i] == y[d[m].second] ? 1.0 : 0.0;
  }
  return agree / static_cast<double>(n * k);
}

PointCloud blobs(std::size_t per_blob, std::size_t count, double spread, std::uint64_t seed) {
  CounterRng rng(seed);
  RowMatrix pts(static_cast<Eigen::Index>(per_blob * count), 2);
  std::vector<int> labels(per_blob * count);
  for (std::size_t b = 0; b < count; ++b) {
    for (std::size_t i = 0; i < per_blob; ++i) {
      const auto r = static_cast<Eigen::Index>(b * per_blob + i);
      pts(r, 0) = spread * static_cast<double>(b) + rng.normal();
      pts(r, 1) = spread * static_cast<double>(b % 2) + rng.normal();
      labels[r] = static_cast<int>(b % 2);
    }
  }
  return PointCloud(std::move(pts), std::move(labels));
}

RowMatrix rotate2d(const RowMatrix& x, double angle, double tx, double ty) {
  Eigen::Matrix2d r;
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  RowMatrix out = x * r.transpose();
  out.col(0).array() += tx;
  out.col(1).array() += ty;
  return out;
}

}  // namespace

// ---------------------------------------------------------------- Thornton

TEST(Thornton, Examples) {
  const auto single = random_cloud(30, 3, 1);
  EXPECT_EQ(thornton_index(single.with_labels(std::vector<int>(30, 0))), 1.0);
  const auto alt = cloud({{0}, {1}, {2}, {3}}, std::vector<int>{0, 1, 0, 1});
  EXPECT_EQ(thornton_index(alt, 1), 0.0);
}

TEST(Thornton, MatchesBruteForce) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto pc = random_cloud(80, 3, seed, 2 + static_cast<int>(seed % 3));
    for (std::size_t k : {1u, 3u, 5u, 10u}) EXPECT_NEAR(thornton_index(pc, k), thornton_oracle(pc, k), 1e-12);
  }
  const auto far = blobs(15, 2, 100.0, 7);
  EXPECT_EQ(thornton_index(far, 5), thornton_oracle(far, 5));
  EXPECT_EQ(thornton_index(far, 5), 1.0);
}

TEST(Thornton, AllAgreeVariant) {
  // Point 1 has neighbors {0, 2}: mixed. Others see only their own label.
  const auto pc = cloud({{0}, {1}, {2}, {10}, {11}}, std::vector<int>{0, 0, 1, 1, 1});
  const double all = thornton_index(pc, 1, ThorntonVariant::AllAgree);
  EXPECT_GE(all, 0.0);
  EXPECT_LE(all, thornton_index(pc, 1));
  const auto far = blobs(10, 2, 100.0, 1);
  EXPECT_EQ(thornton_index(far, 5, ThorntonVariant::AllAgree), 1.0);
  EXPECT_EQ(thornton_index(cloud({{0}, {1}, {2}, {3}}, std::vector<int>{0, 1, 0, 1}), 1,
                           ThorntonVariant::AllAgree), 0.0);
}

TEST(Thornton, RangeAndOneIffPure) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto pc = random_cloud(50, 2, seed, 2);
    const double v = thornton_index(pc);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
    EXPECT_EQ(v == 1.0, thornton_index(pc, 5, ThorntonVariant::AllAgree) == 1.0);
  }
}

TEST(Thornton, ScaleAndRigidMotionInvariance) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto pc = random_cloud(60, 2, seed, 2);
    const double base = thornton_index(pc);
    EXPECT_EQ(thornton_index(pc.scaled(37.0)), base);
    const PointCloud moved(rotate2d(pc.points(), 0.7, 3.0, -2.0), pc.labels());
    EXPECT_EQ(thornton_index(moved), base);
  }
}

TEST(Thornton, Errors) {
  EXPECT_THROW(thornton_index(random_cloud(10, 2, 0)), MissingLabels);
  EXPECT_THROW(thornton_index(random_cloud(5, 2, 0, 2), 5), InvalidArgument);
}

// ---------------------------------------------------------------- CH

TEST(CalinskiHarabasz, HandComputedValue) {
  const auto pc = cloud({{0, 0}, {0, 1}, {10, 0}, {10, 1}});
  const auto ch = calinski_harabasz(pc, 2, 0);
  EXPECT_FALSE(ch.infinite);
  EXPECT_NEAR(ch.value, 200.0, 1e-9);
  EXPECT_NEAR(calinski_harabasz_of(pc, {0, 0, 1, 1}, 2).value, 200.0, 1e-9);
}

TEST(CalinskiHarabasz, IdenticalPointsAreInfinite) {
  const auto pc = cloud({{1, 1}, {1, 1}, {1, 1}, {1, 1}, {1, 1}});
  EXPECT_TRUE(calinski_harabasz(pc, 2, 0).infinite);
}

TEST(CalinskiHarabasz, OneBlobBelowFiveBlobs) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto one = blobs(200, 1, 0.0, seed);
    const auto five = blobs(40, 5, 20.0, seed);
    const auto a = calinski_harabasz(one.without_labels(), 5, seed);
    const auto b = calinski_harabasz(five.without_labels(), 5, seed);
    ASSERT_FALSE(a.infinite);
    ASSERT_FALSE(b.infinite);
    EXPECT_LT(a.value, b.value);
  }
}

TEST(CalinskiHarabasz, ScaleAndRigidMotionInvariance) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto pc = blobs(30, 4, 6.0, seed);
    const auto base = calinski_harabasz(pc, 4, seed);
    for (double c : {0.01, 3.0, 100.0}) {
      const auto s = calinski_harabasz(pc.scaled(c), 4, seed);
      EXPECT_NEAR(s.value, base.value, 1e-9 * base.value);
    }
    const PointCloud moved(rotate2d(pc.points(), -1.1, 50.0, 4.0));
    const auto m = calinski_harabasz(moved, 4, seed);
    EXPECT_NEAR(m.value, base.value, 1e-9 * base.value);
  }
}

TEST(CalinskiHarabasz, Errors) {
  EXPECT_THROW(calinski_harabasz(random_cloud(3, 2, 0), 3, 0), InvalidArgument);
  EXPECT_THROW(calinski_harabasz(random_cloud(10, 2, 0), 1, 0), InvalidArgument);
}

// ---------------------------------------------------------------- ROC-AUC-n

TEST(RocAucN, SeparableBlobs) {
  const auto pc = blobs(50, 2, 30.0, 3);
  const auto r = roc_auc_n(pc, 5, 0);
  EXPECT_EQ(r.name, "roc_auc_5");
  EXPECT_EQ(r.value, 1.0);
  ASSERT_TRUE(r.ci_low && r.ci_high);
  EXPECT_EQ(*r.ci_high - *r.ci_low, 0.0);
}

TEST(RocAucN, PermutationNull) {
  const auto pc = random_cloud(2000, 5, 11, 2);
  const auto r = roc_auc_n(pc, 5, 0);
  EXPECT_NEAR(r.value, 0.5, 0.06);
  EXPECT_LE(*r.ci_low, r.value);
  EXPECT_GE(*r.ci_high, r.value);
}

TEST(RocAucN, SplitCountStability) {
  const auto pc = blobs(200, 2, 2.0, 5);
  const auto a = roc_auc_n(pc, 2, 0);
  const auto b = roc_auc_n(pc, 5, 0);
  EXPECT_NEAR(a.value, b.value, 0.05);
}

TEST(RocAucN, MultiClassAndDeterminism) {
  const auto pc = blobs(40, 5, 6.0, 2).with_labels([] {
    std::vector<int> y(200);
    for (int i = 0; i < 200; ++i) y[i] = i / 40 % 3;
    return y;
  }());
  const auto a = roc_auc_n(pc, 4, 9);
  const auto b = roc_auc_n(pc, 4, 9);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(*a.ci_low, *b.ci_low);
  EXPECT_GT(a.value, 0.5);
  EXPECT_LE(a.value, 1.0);
}

TEST(RocAucN, Errors) {
  const auto few = cloud({{0}, {1}, {2}, {3}, {4}}, std::vector<int>{0, 0, 0, 1, 1});
  try {
    roc_auc_n(few, 3, 0);
    FAIL();
  } catch (const InvalidArgument& e) {
    EXPECT_STREQ(e.what(), "cannot stratify");
  }
  EXPECT_THROW(roc_auc_n(random_cloud(10, 2, 0), 2, 0), MissingLabels);
  EXPECT_THROW(roc_auc_n(random_cloud(10, 2, 0, 2), 1, 0), InvalidArgument);
}

TEST(StratifiedFolds, BalancedPerClass) {
  std::vector<int> y;
  for (int i = 0; i < 103; ++i) y.push_back(i % 3 == 0 ? 1 : 0);
  const auto f = stratified_folds(y, 5, 4);
  for (int c = 0; c < 2; ++c) {
    std::vector<int> count(5, 0);
    for (std::size_t i = 0; i < y.size(); ++i)
      if (y[i] == c) ++count[f[i]];
    EXPECT_LE(*std::max_element(count.begin(), count.end()) - *std::min_element(count.begin(), count.end()), 1);
  }
  EXPECT_EQ(f, stratified_folds(y, 5, 4));
}

// ---------------------------------------------------------------- normalization

TEST(NormalizeSeries, Examples) {
  EXPECT_EQ(normalize_series({50, 100, 200}), (std::vector<double>{0.25, 0.5, 1.0}));
  EXPECT_EQ(normalize_series({0.3, 0.3, 0.3}), (std::vector<double>{1, 1, 1}));
  try {
    normalize_series({0, 0});
    FAIL();
  } catch (const InvalidArgument& e) {
    EXPECT_STREQ(e.what(), "cannot normalize");
  }
}

TEST(NormalizeSeries, MaxIsOneAndRatiosKept) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    CounterRng rng(seed);
    std::vector<double> v(1 + rng.below(20));
    for (auto& x : v) x = rng.uniform(0.0, 1000.0);
    const auto out = normalize_series(v);
    EXPECT_EQ(*std::max_element(out.begin(), out.end()), 1.0);
    EXPECT_EQ(std::max_element(out.begin(), out.end()) - out.begin(),
              std::max_element(v.begin(), v.end()) - v.begin());
    for (std::size_t i = 1; i < v.size(); ++i) EXPECT_NEAR(out[i] / out[0], v[i] / v[0], 1e-12 * v[i] / v[0]);
  }
}

TEST(Spearman, Basics) {
  EXPECT_DOUBLE_EQ(spearman({1, 2, 3, 4}, {10, 20, 30, 40}), 1.0);
  EXPECT_DOUBLE_EQ(spearman({1, 2, 3, 4}, {4, 3, 2, 1}), -1.0);
  EXPECT_NEAR(spearman({1, 2, 2, 3}, {1, 2, 3, 4}), 0.9486832980505138, 1e-12);
}
