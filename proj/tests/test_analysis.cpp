#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "rfdeauth/analysis.hpp"

using namespace rfdeauth;

namespace {

std::vector<double> gaussian(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> x(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& e : v) e = x(rng);
  return v;
}

std::vector<int> cyclic_labels(std::size_t n, int k) {
  std::vector<int> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<int>(i % static_cast<std::size_t>(k));
  return v;
}

}  // namespace

TEST(Pearson, PerfectAndIndependent) {
  const std::vector<double> x{1, 2, 3, 4, 5};
  const std::vector<double> up{3, 5, 7, 9, 11};
  const std::vector<double> down{10, 8, 6, 4, 2};
  EXPECT_DOUBLE_EQ(pearson(x, up), 1.0);
  EXPECT_DOUBLE_EQ(pearson(x, down), -1.0);
  const auto a = gaussian(10000, 1), b = gaussian(10000, 2);
  EXPECT_LT(std::abs(pearson(a, b)), 0.05);
}

TEST(Rmi, LabelDeterminedFeatureIsOne) {
  const auto labels = cyclic_labels(300, 3);
  std::vector<double> x(labels.begin(), labels.end());
  EXPECT_EQ(rmi(x, labels, 256), 1.0);
}

TEST(Rmi, IndependentFeatureIsNearZero) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> lab(0, 2);
  std::vector<int> labels(20000);
  for (auto& l : labels) l = lab(rng);
  EXPECT_LT(rmi(gaussian(20000, 4), labels, 16), 0.05);
}

TEST(Rmi, ConstantFeatureIsZero) {
  const std::vector<double> x(50, 2.0);
  EXPECT_EQ(rmi(x, cyclic_labels(50, 2), 256), 0.0);
}

TEST(Rmi, InvariantUnderJointPermutation) {
  auto x = gaussian(500, 5);
  auto labels = cyclic_labels(500, 3);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += labels[i];
  const double before = rmi(x, labels, 32);
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), std::mt19937_64(6));
  std::vector<double> px;
  std::vector<int> pl;
  for (auto i : order) px.push_back(x[i]), pl.push_back(labels[i]);
  EXPECT_NEAR(rmi(px, pl, 32), before, 1e-12);
}

TEST(Correlation, SymmetricUnitDiagonalPsd) {
  std::vector<Sample> samples;
  const auto a = gaussian(200, 7), b = gaussian(200, 8);
  for (std::size_t i = 0; i < 200; ++i) {
    Sample s;
    s.features = {a[i], b[i], a[i] + 0.5 * b[i], 4.0};
    s.label = Label{1};
    samples.push_back(s);
  }
  const auto m = correlation_matrix(samples);
  ASSERT_EQ(m.features, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(m.excluded, (std::vector<std::size_t>{3}));
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(m.at(i, i), 1.0, 1e-12);
    for (std::size_t j = 0; j < 3; ++j) EXPECT_DOUBLE_EQ(m.at(i, j), m.at(j, i));
  }
  // Quadratic forms on a few directions stay non-negative.
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    const double v[3] = {n(rng), n(rng), n(rng)};
    double q = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) q += v[i] * m.at(i, j) * v[j];
    }
    EXPECT_GE(q, -1e-9);
  }
}

TEST(Ranking, NoiseOnlyFeaturesAreDropped) {
  std::vector<Sample> samples;
  const auto a = gaussian(3000, 10), b = gaussian(3000, 11);
  for (std::size_t i = 0; i < a.size(); ++i) {
    Sample s;
    s.features = {a[i], b[i]};
    s.label = Label{static_cast<int>(i % 3) + 1};
    samples.push_back(s);
  }
  const std::vector<std::string> names{"f0", "f1"};
  RankingOptions opt;
  opt.bins = 8;
  opt.min_rmi = 0.05;
  EXPECT_TRUE(rank_features(samples, names, opt).empty());
}

TEST(Ranking, CorrelatedDuplicateIsDropped) {
  std::vector<Sample> samples;
  const auto noise = gaussian(600, 12);
  for (std::size_t i = 0; i < noise.size(); ++i) {
    const int c = static_cast<int>(i % 3) + 1;
    Sample s;
    s.features = {c + 0.1 * noise[i], 2.0 * (c + 0.1 * noise[i]) + 1.0, 0.3 * c + noise[i]};
    s.label = Label{c};
    samples.push_back(s);
  }
  const std::vector<std::string> names{"a", "a2", "b"};
  RankingOptions opt;
  opt.bins = 16;
  const auto r = rank_features(samples, names, opt);
  ASSERT_FALSE(r.empty());
  EXPECT_EQ(r.front().name, "a");
  for (const auto& f : r) EXPECT_NE(f.name, "a2");
  for (std::size_t i = 1; i < r.size(); ++i) EXPECT_GE(r[i - 1].rmi, r[i].rmi);
}

TEST(Importance, CsvHeaders) {
  std::ostringstream out;
  write_ranking(out, std::vector<RankedFeature>{{0, "d1-d2-var", 0.5}});
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "rank,feature,rmi");
}
