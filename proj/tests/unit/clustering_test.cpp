#include <gtest/gtest.h>

#include <random>
#include <set>

#include "forge/clustering.hpp"

namespace forge {
namespace {

MatchGraph graph(const std::vector<std::string>& nodes, const std::vector<std::pair<std::string, std::string>>& edges) {
  MatchGraph g(nodes);
  for (const auto& [a, b] : edges) g.add_edge(a, b);
  return g;
}

std::vector<std::vector<std::string>> members(const std::vector<Cluster>& clusters) {
  std::vector<std::vector<std::string>> out;
  for (const auto& c : clusters) out.push_back(c.member_ids);
  return out;
}

using Groups = std::vector<std::vector<std::string>>;

TEST(ClusterGreedy, HalfMatchJoins) {
  const auto g = graph({"A", "B", "C"}, {{"A", "B"}, {"B", "C"}});
  EXPECT_EQ(members(cluster_greedy({"A", "B", "C"}, g)), (Groups{{"A", "B", "C"}}));
}

TEST(ClusterGreedy, BelowHalfStartsNewCluster) {
  const auto g = graph({"A", "B", "C", "D"}, {{"A", "B"}, {"B", "C"}, {"C", "D"}});
  EXPECT_EQ(members(cluster_greedy({"A", "B", "C", "D"}, g)), (Groups{{"A", "B", "C"}, {"D"}}));
}

TEST(ClusterGreedy, NoEdgesGivesSingletons) {
  const auto g = graph({"A", "B", "C"}, {});
  EXPECT_EQ(members(cluster_greedy({"A", "B", "C"}, g)), (Groups{{"A"}, {"B"}, {"C"}}));
}

TEST(ClusterGreedy, TiesGoToEarlierCluster) {
  // X matches one member of each of two singleton clusters.
  const auto g = graph({"A", "B", "X"}, {{"A", "X"}, {"B", "X"}});
  EXPECT_EQ(members(cluster_greedy({"A", "B", "X"}, g)), (Groups{{"A", "X"}, {"B"}}));
}

TEST(ClusterGreedy, PrefersMostMatches) {
  const auto g = graph({"A", "B", "C", "D", "X"}, {{"A", "B"}, {"C", "X"}, {"D", "X"}, {"A", "X"}, {"C", "D"}});
  // Clusters before X: {A,B}, {C,D}. X matches 1 of {A,B} and 2 of {C,D}.
  EXPECT_EQ(members(cluster_greedy({"A", "B", "C", "D", "X"}, g)), (Groups{{"A", "B"}, {"C", "D", "X"}}));
}

TEST(ClusterTransitive, ConnectedComponents) {
  EXPECT_EQ(members(cluster_transitive(graph({"A", "B", "C"}, {{"A", "B"}, {"B", "C"}}))), (Groups{{"A", "B", "C"}}));
  EXPECT_EQ(members(cluster_transitive(graph({"A", "B"}, {}))), (Groups{{"A"}, {"B"}}));
}

TEST(ClusterTransitive, ChainCollapsesWhereGreedySplits) {
  std::vector<std::string> nodes;
  for (int i = 0; i < 10; ++i) nodes.push_back("n" + std::to_string(i));
  MatchGraph g(nodes);
  for (int i = 0; i + 1 < 10; ++i) g.add_edge(nodes[i], nodes[i + 1]);
  EXPECT_EQ(cluster_transitive(g).size(), 1u);
  EXPECT_GT(cluster_greedy(nodes, g).size(), 1u);
}

TEST(MatchGraph, RejectsUnknownNodesIgnoresSelfLoops) {
  MatchGraph g({"A", "B"});
  EXPECT_ANY_THROW(g.add_edge("A", "Z"));
  g.add_edge("A", "A");
  g.add_edge("A", "B");
  g.add_edge("B", "A");
  EXPECT_EQ(g.edge_count(), 1u);
  EXPECT_TRUE(g.has_edge("B", "A"));
}

TEST(ClusterProperties, PartitionAndInsertionInvariantOnRandomGraphs) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 30;
    std::vector<std::string> nodes;
    for (std::size_t i = 0; i < n; ++i) nodes.push_back("v" + std::to_string(i));
    MatchGraph g(nodes);
    const double density = static_cast<double>(rng() % 100) / 100.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (static_cast<double>(rng() % 1000) / 1000.0 < density) g.add_edge(nodes[i], nodes[j]);
      }
    }
    for (const auto& clusters : {cluster_greedy(nodes, g), cluster_transitive(g)}) {
      std::multiset<std::string> seen;
      for (const auto& c : clusters) seen.insert(c.member_ids.begin(), c.member_ids.end());
      ASSERT_EQ(seen, std::multiset<std::string>(nodes.begin(), nodes.end()));
    }
    for (const auto& c : cluster_greedy(nodes, g)) {
      for (std::size_t k = 1; k < c.member_ids.size(); ++k) {
        std::size_t matches = 0;
        for (std::size_t p = 0; p < k; ++p) matches += g.has_edge(c.member_ids[k], c.member_ids[p]);
        ASSERT_GE(2 * matches, k);
      }
    }
  }
}

}  // namespace
}  // namespace forge
