#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace gergm;

namespace {

SamplerConfig config(std::uint64_t burnin, std::uint64_t interval, std::uint64_t size, std::uint64_t seed) {
  SamplerConfig c;
  c.burnin = burnin;
  c.interval = interval;
  c.sample_size = size;
  c.seed = seed;
  return c;
}

// Empirical frequency of every graph on four nodes against exact ERGM
// probabilities; returns the total variation distance.
double total_variation(double tie_probability, std::uint64_t seed) {
  Model m(parse_terms("edges + graphletCount(2)"), {}, 4);
  const std::vector<double> theta{-0.3, 0.8};
  m.set_theta(theta);
  oracle::Enumeration e(4, m);
  const double lz = e.log_partition(theta);
  auto cfg = config(1000, 3, 60000, seed);
  cfg.tie_probability = tie_probability;
  const auto sim = simulate(Graph(4), m, cfg, true);
  std::vector<double> freq(64, 0.0);
  for (const auto& g : sim.graphs) freq[e.mask_of(g)] += 1.0 / static_cast<double>(sim.graphs.size());
  double tv = 0.0;
  for (std::uint32_t mask = 0; mask < 64; ++mask) tv += std::abs(freq[mask] - std::exp(e.log_weight(mask, theta) - lz));
  return tv / 2.0;
}

}  // namespace

TEST(Sampler, ZeroThetaAcceptsEverything) {
  Model m(parse_terms("edges + graphletCount(2)"), {}, 10);
  m.set_theta({0.0, 0.0});
  const auto sim = simulate(Graph(10), m, config(500, 10, 50, 1));
  EXPECT_EQ(sim.proposals, 500u + 500u);
  EXPECT_EQ(sim.acceptance_rate(), 1.0);
}

TEST(Sampler, EdgesOnlyBinomialMean) {
  Model m(parse_terms("edges"), {}, 10);
  m.set_theta({std::log(0.3 / 0.7)});
  const auto sim = simulate(Graph(10), m, config(2000, 200, 600, 7));
  ASSERT_EQ(sim.statistics.size(), 600u);
  double mean = 0.0;
  for (const auto& row : sim.statistics) mean += row[0] / 600.0;
  const double se = std::sqrt(45 * 0.3 * 0.7 / 600.0);
  EXPECT_LT(std::abs(mean - 13.5), 3.0 * se);
}

TEST(Sampler, EmptySample) {
  Model m(parse_terms("edges"), {}, 5);
  m.set_theta({0.0});
  const auto sim = simulate(Graph(5), m, config(10, 1, 0, 1), true);
  EXPECT_TRUE(sim.statistics.empty());
  EXPECT_TRUE(sim.graphs.empty());
}

TEST(Sampler, Reproducible) {
  AttributeSet attrs;
  attrs.add(NumericAttribute{"x", {0.5, -1, 2, 0, 1, 1, -0.5, 0.25}});
  Model m(parse_terms("edges + graphletCount(2) + grorbitCov(x, 0:3) + grorbitDist(0, d=0:4)"), attrs, 8);
  m.set_theta({-1.0, 0.3, 0.1, 0.0, -0.1, 0.2, 0.1, -0.2, 0.0, 0.1, 0.0});
  for (unsigned chains : {1u, 3u}) {
    auto cfg = config(100, 20, 30, 99);
    cfg.chains = chains;
    cfg.tie_probability = 0.3;
    const auto a = simulate(Graph(8), m, cfg, true);
    const auto b = simulate(Graph(8), m, cfg, true);
    EXPECT_EQ(a.statistics, b.statistics);
    EXPECT_EQ(a.graphs, b.graphs);
    EXPECT_EQ(a.statistics.size(), 30u);
    cfg.seed = 100;
    EXPECT_NE(simulate(Graph(8), m, cfg).statistics, a.statistics);
  }
}

TEST(Sampler, AccumulatedStatisticsMatchRecount) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  NumericAttribute x{"x", {}};
  std::vector<std::string> labels;
  for (int v = 0; v < 12; ++v) {
    x.values.push_back(normal(rng));
    labels.push_back(v % 3 ? "p" : "q");
  }
  AttributeSet attrs;
  attrs.add(x);
  attrs.add(CategoricalAttribute::from_labels("c", labels));
  Model m(parse_terms("edges + graphletCount() + grorbitCov(x, 0:20) + grorbitFactor(c, 5:9) + "
                      "grorbitDist(0:14, d=0:5)"),
          attrs, 12);
  std::vector<double> theta(m.size(), 0.0);
  theta[0] = -0.5;
  m.set_theta(theta);
  auto cfg = config(0, 1, 1, 5);
  cfg.debug_check_every = 25;
  Chain chain(m, oracle::random_graph(12, 0.3, 1), cfg, 5);
  for (int t = 0; t < 600; ++t) chain.step();
  EXPECT_NO_THROW(chain.verify());
  const auto fresh = m.observed_statistics(chain.graph());
  for (std::size_t k = 0; k < fresh.size(); ++k)
    EXPECT_NEAR(chain.statistics()[k], fresh[k], 1e-9 * std::max(1.0, std::abs(fresh[k]))) << m.names()[k];
}

TEST(Sampler, NegativeTriangleCoefficientEmptiesTriangles) {
  Model m(parse_terms("graphletCount(2)"), {}, 5);
  m.set_theta({-5.0});
  Chain chain(m, oracle::complete(5), config(0, 1, 1, 1), 17);
  const double start = chain.statistics()[0];
  for (int t = 0; t < 2000; ++t) chain.step();
  EXPECT_EQ(start, 10.0);
  EXPECT_LT(chain.statistics()[0], 2.0);
}

TEST(Sampler, ZeroThetaDyadMarginals) {
  Model m(parse_terms("edges"), {}, 6);
  m.set_theta({0.0});
  const auto sim = simulate(Graph(6), m, config(100, 15, 4000, 3), true);
  for (node_t i = 0; i < 6; ++i)
    for (node_t j = i + 1; j < 6; ++j) {
      double f = 0.0;
      for (const auto& g : sim.graphs) f += g.has_edge(i, j) ? 1.0 : 0.0;
      f /= static_cast<double>(sim.graphs.size());
      EXPECT_NEAR(f, 0.5, 4.0 * std::sqrt(0.25 / 4000.0));
    }
}

TEST(Sampler, StationaryDistributionUniformProposal) { EXPECT_LT(total_variation(0.0, 11), 0.03); }

TEST(Sampler, StationaryDistributionTieProposal) { EXPECT_LT(total_variation(0.5, 12), 0.03); }

TEST(Sampler, SeedSplitting) {
  EXPECT_EQ(chain_seed(42, 0), splitmix64(42 + 0x9E3779B97F4A7C15ull));
  EXPECT_NE(chain_seed(42, 0), chain_seed(42, 1));
}

TEST(Sampler, Errors) {
  Model m(parse_terms("edges"), {}, 5);
  EXPECT_THROW(simulate(Graph(5), m, config(1, 1, 1, 1)), StateError);
  m.set_theta({0.0});
  EXPECT_THROW(simulate(Graph(5), m, config(1, 0, 1, 1)), ValueError);
  EXPECT_THROW(simulate(Graph(6), m, config(1, 1, 1, 1)), SizeError);
  auto cfg = config(1, 1, 1, 1);
  cfg.tie_probability = 1.5;
  EXPECT_THROW(simulate(Graph(5), m, cfg), ValueError);
}
