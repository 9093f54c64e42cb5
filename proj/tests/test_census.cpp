#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace gergm;

namespace {

GraphletCounts counts(std::initializer_list<std::pair<int, std::int64_t>> entries) {
  GraphletCounts c{};
  for (auto [g, v] : entries) c[g] = v;
  return c;
}

}  // namespace

TEST(Census, K5) {
  EXPECT_EQ(full_census(oracle::complete(5)).counts, counts({{0, 10}, {2, 10}, {8, 5}, {29, 1}}));
}

TEST(Census, Path3) {
  Graph g = oracle::from_edges(3, {{0, 1}, {1, 2}});
  const auto c = full_census(g);
  EXPECT_EQ(c.counts, counts({{0, 2}, {1, 1}}));
  EXPECT_EQ(c.gdv(1, 2), 1);
  EXPECT_EQ(c.gdv(0, 1), 1);
  EXPECT_EQ(c.gdv(2, 1), 1);
}

TEST(Census, StarK14) {
  Graph g = oracle::from_edges(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
  const auto c = full_census(g);
  const auto brute = oracle::subset_census(g);
  EXPECT_EQ(c.counts, brute.counts);
  EXPECT_EQ(c.counts[0], 4);
  EXPECT_EQ(c.counts[1], 6);
  EXPECT_EQ(c.counts[4], 4);
  int five_node_classes = 0;
  for (int k = 9; k < kGraphlets; ++k)
    if (c.counts[k] != 0) {
      ++five_node_classes;
      EXPECT_EQ(c.counts[k], 1);
      EXPECT_EQ(k, 11);  // the 5-node star
    }
  EXPECT_EQ(five_node_classes, 1);
  std::int64_t total = 0;
  for (auto x : c.counts) total += x;
  EXPECT_EQ(total, 4 + 6 + 4 + 1);
}

TEST(Census, EmptyGraph) {
  const auto c = full_census(Graph(7));
  EXPECT_EQ(c.counts, GraphletCounts{});
  for (node_t v = 0; v < 7; ++v)
    for (int o = 0; o < kOrbits; ++o) EXPECT_EQ(c.gdv(v, o), 0);
}

TEST(Census, MatchesSubsetScanOnRandomGraphs) {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const std::size_t n = 6 + seed % 6;
    const double p = 0.15 + 0.07 * static_cast<double>(seed % 8);
    Graph g = oracle::random_graph(n, p, seed);
    const auto c = full_census(g);
    const auto brute = oracle::subset_census(g);
    EXPECT_EQ(c.counts, brute.counts) << "seed " << seed;
    EXPECT_TRUE(c.gdv == brute.gdv) << "seed " << seed;
  }
}

TEST(Census, OrbitSumIdentity) {
  const Catalog& cat = Catalog::instance();
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    Graph g = oracle::random_graph(18, 0.1 + 0.08 * static_cast<double>(seed), 100 + seed);
    const auto c = full_census(g);
    for (node_t v = 0; v < g.node_count(); ++v) EXPECT_EQ(c.gdv(v, 0), static_cast<std::int64_t>(g.degree(v)));
    for (int k = 0; k < kGraphlets; ++k) {
      std::int64_t s = 0;
      for (int o : cat.orbits_of(k)) s += c.gdv.column_sum(o);
      EXPECT_EQ(s, cat.graphlet_size(k) * c.counts[k]) << "G" << k;
    }
  }
}

TEST(Census, SizeLimit) {
  Graph g = oracle::complete(5);
  const auto c4 = full_census(g, 4);
  EXPECT_EQ(c4.counts[8], 5);
  EXPECT_EQ(c4.counts[29], 0);
  EXPECT_THROW(full_census(g, 6), SizeError);
  EXPECT_THROW(full_census(g, 1), SizeError);
}

TEST(CountStatistic, K3Examples) {
  Graph g = oracle::complete(3);
  AttributeSet attrs;
  attrs.add(NumericAttribute{"one", {1.0, 1.0, 1.0}});
  EXPECT_EQ(count_statistic(g, parse_term("grorbitCov(one, 3)"), attrs), std::vector<double>{3.0});
  EXPECT_EQ(count_statistic(g, parse_term("grorbitDist(3, d=1)")), std::vector<double>{3.0});
  EXPECT_EQ(count_statistic(g, parse_term("graphletCount(1)")), std::vector<double>{0.0});
  EXPECT_THROW(count_statistic(g, parse_term("grorbitCov(missing, 3)"), attrs), NameError);
}

TEST(CountStatistic, CovLinearAndFactorSumsToAllOnes) {
  Graph g = oracle::random_graph(16, 0.3, 77);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  NumericAttribute x{"x", {}}, x2{"x2", {}}, one{"one", {}};
  std::vector<std::string> labels;
  for (node_t v = 0; v < 16; ++v) {
    x.values.push_back(normal(rng));
    x2.values.push_back(2.0 * x.values.back());
    one.values.push_back(1.0);
    labels.push_back(std::string(1, static_cast<char>('a' + rng() % 3)));
  }
  AttributeSet attrs;
  attrs.add(x);
  attrs.add(x2);
  attrs.add(one);
  attrs.add(CategoricalAttribute::from_labels("c", labels));
  const auto a = count_statistic(g, parse_term("grorbitCov(x)"), attrs);
  const auto b = count_statistic(g, parse_term("grorbitCov(x2)"), attrs);
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_DOUBLE_EQ(b[k], 2.0 * a[k]);

  const auto ones = count_statistic(g, parse_term("grorbitCov(one)"), attrs);
  const auto factor = count_statistic(g, parse_term("grorbitFactor(c, base=0)"), attrs);
  const std::size_t ncat = attrs.categorical("c").categories.size();
  ASSERT_EQ(factor.size(), ones.size() * ncat);
  for (std::size_t o = 0; o < ones.size(); ++o) {
    double s = 0.0;
    for (std::size_t c = 0; c < ncat; ++c) s += factor[o * ncat + c];
    EXPECT_EQ(s, ones[o]);
  }
}
