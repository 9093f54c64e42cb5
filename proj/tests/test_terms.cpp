#include <gtest/gtest.h>

#include <set>

#include "oracles.hpp"

using namespace gergm;

namespace {

struct CaptureWarnings {
  std::vector<std::string> messages;
  std::function<void(std::string_view)> saved = warning_sink();
  CaptureWarnings() {
    warning_sink() = [this](std::string_view m) { messages.emplace_back(m); };
  }
  ~CaptureWarnings() { warning_sink() = saved; }
};

std::set<std::vector<node_t>> affected(const Graph& g, node_t i, node_t j) {
  std::set<std::vector<node_t>> out;
  for_each_affected_set(g, i, j, 5, [&](std::span<const node_t> nodes, std::uint32_t) {
    std::vector<node_t> s(nodes.begin(), nodes.end());
    std::sort(s.begin(), s.end());
    EXPECT_TRUE(out.insert(s).second) << "set reported twice";
  });
  return out;
}

AttributeSet random_attrs(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  NumericAttribute x{"x", {}};
  std::vector<std::string> labels;
  for (std::size_t v = 0; v < n; ++v) {
    x.values.push_back(normal(rng));
    labels.push_back(std::string(1, static_cast<char>('a' + rng() % 3)));
  }
  AttributeSet attrs;
  attrs.add(x);
  attrs.add(CategoricalAttribute::from_labels("c", labels));
  return attrs;
}

const char* kAllFamilies =
    "edges + graphletCount() + grorbitCov(x) + grorbitFactor(c, base=0) + grorbitDist(0:14, d=0:10)";

}  // namespace

TEST(TermParse, Forms) {
  auto t = parse_term("graphletCount(g=0,2,8)");
  EXPECT_EQ(t.family, Family::graphlet_count);
  EXPECT_EQ(t.graphlets, (std::vector<int>{0, 2, 8}));
  t = parse_term("grorbitCov(attr=score, orbits=9:11)");
  EXPECT_EQ(t.attr, "score");
  EXPECT_EQ(t.orbits, (std::vector<int>{9, 10, 11}));
  t = parse_term("grorbitFactor(attr=loc, orbits=9:11, base=1)");
  EXPECT_EQ(t.base, std::vector<int>{1});
  t = parse_term("grorbitFactor(\"loc\", 11)");
  EXPECT_EQ(t.attr, "loc");
  EXPECT_EQ(t.orbits, std::vector<int>{11});
  EXPECT_EQ(t.base, std::vector<int>{1});
  t = parse_term("grorbitDist(orbits=0:14, d=0:10)");
  EXPECT_EQ(t.orbits.size(), 15u);
  EXPECT_EQ(t.degrees.size(), 11u);
  t = parse_term("grorbitDist(grorbit=3, d=1,2)");
  EXPECT_EQ(t.orbits, std::vector<int>{3});
  EXPECT_EQ(t.degrees, (std::vector<int>{1, 2}));
  EXPECT_EQ(parse_term("edges").family, Family::edges);
  EXPECT_EQ(parse_term("graphletCount()").graphlets.size(), 30u);
  EXPECT_EQ(parse_terms("edges + graphletCount(2) + grorbitCov(x, 0:1)").size(), 3u);
}

TEST(TermParse, Errors) {
  EXPECT_THROW(parse_term("triangles"), ValueError);
  EXPECT_THROW(parse_term("graphletCount(2"), ValueError);
  EXPECT_THROW(parse_term("graphletCount(q=2)"), ValueError);
  EXPECT_THROW(parse_term("grorbitCov(orbits=2)"), ValueError);
  EXPECT_THROW(parse_term("grorbitDist(3)"), ValueError);
  EXPECT_THROW(parse_term("grorbitDist(3, d=-1)"), ValueError);
}

TEST(TermParse, OutOfRangeIdsDroppedWithWarning) {
  CaptureWarnings w;
  auto t = parse_term("grorbitDist(orbits=13:16, d=1)");
  EXPECT_EQ(t.orbits, (std::vector<int>{13, 14}));
  auto g = parse_term("graphletCount(g=29,30)");
  EXPECT_EQ(g.graphlets, std::vector<int>{29});
  EXPECT_GE(w.messages.size(), 2u);
}

TEST(TermParse, JsonRoundTrip) {
  for (const char* text : {"edges", "graphletCount(0,2,8)", "grorbitCov(x, 9:11)", "grorbitFactor(c, 11, base=0)",
                           "grorbitDist(0:14, d=0:10)"}) {
    const TermSpec t = parse_term(text);
    EXPECT_EQ(term_from_json(to_json(t)), t) << text;
    EXPECT_EQ(term_from_json(nlohmann::json(text)), t) << text;
    EXPECT_EQ(parse_term(to_string(t)), t) << text;
  }
}

TEST(TermNames, Layout) {
  AttributeSet attrs;
  attrs.add(CategoricalAttribute::from_labels("loc", {"L", "NL", "NL", "X"}));
  attrs.add(NumericAttribute{"score", {1, 2, 3, 4}});
  Model m(parse_terms("edges + graphletCount(3) + grorbitCov(score, 9) + grorbitFactor(loc, 11:12) + "
                      "grorbitDist(0, d=1,3)"),
          attrs, 4);
  EXPECT_EQ(m.names(), (std::vector<std::string>{
                           "edges", "graphlet.3.Count", "grorbitCov.orb_9.score", "grorbitFactor.orb_11.attr_NL",
                           "grorbitFactor.orb_11.attr_X", "grorbitFactor.orb_12.attr_NL", "grorbitFactor.orb_12.attr_X",
                           "grorbitDist.orb_0.deg_1", "grorbitDist.orb_0.deg_3"}));
  Model all(parse_terms("grorbitFactor(loc, 11, base=0)"), attrs, 4);
  EXPECT_EQ(all.size(), 3u);
  Model drop2(parse_terms("grorbitFactor(loc, 11, base=1,3)"), attrs, 4);
  EXPECT_EQ(drop2.names(), std::vector<std::string>{"grorbitFactor.orb_11.attr_NL"});
}

TEST(AffectedSets, PathToggleEnds) {
  Graph g = oracle::from_edges(3, {{0, 1}, {1, 2}});
  EXPECT_EQ(affected(g, 0, 2), (std::set<std::vector<node_t>>{{0, 2}, {0, 1, 2}}));
}

TEST(AffectedSets, K4MinusEdge) {
  Graph g = oracle::complete(4);
  g.remove_edge(0, 1);
  EXPECT_EQ(affected(g, 0, 1), (std::set<std::vector<node_t>>{{0, 1}, {0, 1, 2}, {0, 1, 3}, {0, 1, 2, 3}}));
}

TEST(AffectedSets, IsolatedPair) {
  Graph g = oracle::random_graph(30, 0.3, 2);
  for (node_t v = 0; v < 30; ++v) {
    g.remove_edge(0, v == 0 ? 1 : v);
    g.remove_edge(1, v == 1 ? 0 : v);
  }
  EXPECT_EQ(affected(g, 0, 1), (std::set<std::vector<node_t>>{{0, 1}}));
}

TEST(AffectedSets, MatchesSubsetBruteForce) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    Graph g = oracle::random_graph(9, 0.35, 40 + seed);
    const node_t i = static_cast<node_t>(seed % 9), j = static_cast<node_t>((seed * 5 + 3) % 9);
    if (i == j) continue;
    Graph plus = g;
    plus.add_edge(i, j);
    std::set<std::vector<node_t>> expected;
    for (std::size_t k = 2; k <= 5; ++k)
      oracle::for_each_subset(9, k, [&](const std::vector<node_t>& s) {
        if (std::find(s.begin(), s.end(), i) != s.end() && std::find(s.begin(), s.end(), j) != s.end() &&
            oracle::connected_subset(plus, s))
          expected.insert(s);
      });
    EXPECT_EQ(affected(g, i, j), expected) << "seed " << seed;
  }
}

TEST(AffectedSets, LoopRejected) {
  Graph g(3);
  EXPECT_THROW(affected(g, 1, 1), LoopError);
}

TEST(ChangeScores, PathClosingTriangle) {
  Graph g = oracle::from_edges(3, {{0, 1}, {1, 2}});
  Model m(parse_terms("graphletCount(1,2)"), {}, g);
  ChangeStatistics cs(m);
  auto d = cs.evaluate(g, 0, 2, true);
  EXPECT_EQ(std::vector<double>(d.begin(), d.end()), (std::vector<double>{-1.0, 1.0}));
}

TEST(ChangeScores, Antisymmetry) {
  Graph g = oracle::random_graph(14, 0.3, 8);
  AttributeSet attrs = random_attrs(14, 3);
  Model m(parse_terms(kAllFamilies), attrs, g);
  ChangeStatistics cs(m);
  GdvCache cache(g, 4);
  std::mt19937_64 rng(6);
  for (int t = 0; t < 30; ++t) {
    node_t i = rng() % 14, j = rng() % 14;
    if (i == j) continue;
    const bool add = !g.has_edge(i, j);
    auto first = cs.evaluate(g, i, j, add, &cache);
    std::vector<double> forward(first.begin(), first.end());
    cs.commit(g, &cache);
    auto second = cs.evaluate(g, i, j, !add, &cache);
    for (std::size_t k = 0; k < forward.size(); ++k) EXPECT_EQ(second[k], -forward[k]) << m.names()[k];
    auto delta = cs.delta(g, i, j, &cache);
    for (std::size_t k = 0; k < forward.size(); ++k) EXPECT_EQ(delta[k], add ? forward[k] : -forward[k]);
  }
}

TEST(ChangeScores, ExactAgainstRecount) {
  std::mt19937_64 rng(11);
  for (std::size_t n : {8, 15, 23, 30})
    for (double p : {0.05, 0.3, 0.7}) {
      Graph g = oracle::random_graph(n, p, n * 100 + static_cast<std::uint64_t>(p * 100));
      AttributeSet attrs = random_attrs(n, n);
      Model m(parse_terms(kAllFamilies), attrs, g);
      ChangeStatistics cs(m);
      GdvCache cache(g, 4);
      auto before = m.observed_statistics(g);
      for (int t = 0; t < 15; ++t) {
        node_t i = rng() % n, j = rng() % n;
        if (i == j) continue;
        auto d = cs.evaluate(g, i, j, &cache);
        std::vector<double> change(d.begin(), d.end());
        cs.commit(g, &cache);
        const auto after = m.observed_statistics(g);
        for (std::size_t k = 0; k < change.size(); ++k) {
          const double expected = after[k] - before[k];
          if (m.names()[k].rfind("grorbitCov", 0) == 0)
            EXPECT_LE(std::abs(change[k] - expected), 1e-12 * std::max(1.0, std::abs(after[k]) + std::abs(before[k])))
                << m.names()[k];
          else
            EXPECT_EQ(change[k], expected) << m.names()[k];
        }
        before = after;
      }
    }
}

TEST(ChangeScores, Locality) {
  // Two components: nodes 0..9 and 10..19.
  Graph g(20);
  Graph a = oracle::random_graph(10, 0.4, 1), b = oracle::random_graph(10, 0.4, 2);
  for (auto [i, j] : a.edges()) g.add_edge(i, j);
  for (auto [i, j] : b.edges()) g.add_edge(i + 10, j + 10);
  Model m(parse_terms("graphletCount()"), {}, g);
  ChangeStatistics cs(m);
  cs.evaluate(g, 2, 5, nullptr);
  for (node_t v : cs.toggle_delta().touched) EXPECT_LT(v, 10u);
  Graph right(10);
  for (auto [i, j] : b.edges()) right.add_edge(i, j);
  const auto before = full_census(right).counts;
  cs.commit(g);
  Graph right_after(10);
  for (auto [i, j] : g.edges())
    if (i >= 10) right_after.add_edge(i - 10, j - 10);
  EXPECT_EQ(full_census(right_after).counts, before);
}

TEST(ChangeScores, Errors) {
  Graph g = oracle::from_edges(4, {{0, 1}});
  Model plain(parse_terms("edges + graphletCount(2)"), {}, g);
  ChangeStatistics cs(plain);
  EXPECT_THROW(cs.evaluate(g, 0, 1, true), StateError);
  EXPECT_THROW(cs.evaluate(g, 2, 3, false), StateError);
  EXPECT_THROW(cs.evaluate(g, 1, 1, true), LoopError);
  EXPECT_THROW(cs.evaluate(g, 1, 9, true), IndexError);
  EXPECT_THROW(cs.commit(g), StateError);

  Model dist(parse_terms("grorbitDist(0, d=1)"), {}, g);
  ChangeStatistics ds(dist);
  EXPECT_THROW(ds.evaluate(g, 2, 3, true), StateError);
  GdvCache cache(g, 4);
  g.toggle(2, 3);
  EXPECT_THROW(ds.evaluate(g, 0, 2, true, &cache), StateError);

  Graph other(5);
  EXPECT_THROW(cs.evaluate(other, 0, 1, true), SizeError);
  EXPECT_THROW(Model(parse_terms("grorbitCov(x, 0)"), {}, g), NameError);
}

TEST(Commit, FirstEdge) {
  Graph g(3);
  Model m(parse_terms("grorbitDist(0, d=0:2)"), {}, g);
  ChangeStatistics cs(m);
  GdvCache cache(g, 4);
  auto d = cs.evaluate(g, 0, 1, true, &cache);
  EXPECT_EQ(std::vector<double>(d.begin(), d.end()), (std::vector<double>{-2.0, 2.0, 0.0}));
  cs.commit(g, &cache);
  EXPECT_EQ(cache.gd(0, 0), 1);
  EXPECT_EQ(cache.gd(1, 0), 1);
  EXPECT_EQ(cache.gd(2, 0), 0);
}

TEST(Commit, InvolutionRestoresCache) {
  Graph g = oracle::random_graph(12, 0.3, 5);
  Model m(parse_terms("grorbitDist(0:14, d=0:3)"), {}, g);
  ChangeStatistics cs(m);
  GdvCache cache(g, 5);
  const auto initial = cache.gd;
  cs.evaluate(g, 3, 7, &cache);
  cs.commit(g, &cache);
  cs.evaluate(g, 3, 7, &cache);
  cs.commit(g, &cache);
  EXPECT_TRUE(cache.gd == initial);
}

TEST(Commit, CacheTracksRandomToggles) {
  for (int tracked : {4, 5}) {
    Graph g = oracle::random_graph(10, 0.3, 21);
    Model m(parse_terms("grorbitDist(0:14, d=0:3)"), {}, g);
    ChangeStatistics cs(m);
    GdvCache cache(g, tracked);
    std::mt19937_64 rng(tracked);
    for (int t = 0; t < 50;) {
      node_t i = rng() % 10, j = rng() % 10;
      if (i == j) continue;
      cs.evaluate(g, i, j, &cache);
      cs.commit(g, &cache);
      ++t;
    }
    EXPECT_TRUE(cache.gd == full_census(g, tracked).gdv) << tracked;
  }
}
