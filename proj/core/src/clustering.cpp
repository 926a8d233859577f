#include "forge/clustering.hpp"

#include <numeric>
#include <optional>
#include <unordered_map>

#include "forge/error.hpp"

namespace forge {

MatchGraph::MatchGraph(std::vector<std::string> nodes) {
  for (auto& n : nodes) add_node(n);
}

void MatchGraph::add_node(const std::string& id) {
  if (adjacency_.emplace(id, std::set<std::string>{}).second) nodes_.push_back(id);
}

void MatchGraph::add_edge(const std::string& a, const std::string& b) {
  if (a == b) return;
  auto ia = adjacency_.find(a);
  auto ib = adjacency_.find(b);
  if (ia == adjacency_.end() || ib == adjacency_.end()) {
    throw Error(ErrorCode::kInvalidRequest, "edge (" + a + ", " + b + ") references an unknown node");
  }
  if (ia->second.insert(b).second) {
    ib->second.insert(a);
    ++edge_count_;
  }
}

bool MatchGraph::has_edge(const std::string& a, const std::string& b) const {
  const auto it = adjacency_.find(a);
  return it != adjacency_.end() && it->second.count(b) > 0;
}

const std::set<std::string>& MatchGraph::neighbors(const std::string& id) const {
  static const std::set<std::string> kEmpty;
  const auto it = adjacency_.find(id);
  return it == adjacency_.end() ? kEmpty : it->second;
}

std::vector<Cluster> cluster_greedy(const std::vector<std::string>& order, const MatchGraph& graph) {
  std::vector<Cluster> clusters;
  std::unordered_map<std::string, std::size_t> cluster_of;

  for (const auto& node : order) {
    if (cluster_of.count(node)) continue;  // repeated id in order

    // Matches per already-formed cluster.
    std::unordered_map<std::size_t, std::size_t> matches;
    for (const auto& neighbor : graph.neighbors(node)) {
      if (const auto it = cluster_of.find(neighbor); it != cluster_of.end()) ++matches[it->second];
    }

    std::optional<std::size_t> best;
    std::size_t best_matches = 0;
    for (const auto& [cluster, count] : matches) {
      if (2 * count < clusters[cluster].member_ids.size()) continue;  // below half
      if (!best || count > best_matches || (count == best_matches && cluster < *best)) {
        best = cluster;
        best_matches = count;
      }
    }

    if (best) {
      clusters[*best].member_ids.push_back(node);
      cluster_of[node] = *best;
    } else {
      cluster_of[node] = clusters.size();
      clusters.push_back(Cluster{{node}, {}});
    }
  }
  return clusters;
}

std::vector<Cluster> cluster_transitive(const MatchGraph& graph) {
  const auto& nodes = graph.nodes();
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < nodes.size(); ++i) index.emplace(nodes[i], i);

  std::vector<std::size_t> parent(nodes.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (const auto& neighbor : graph.neighbors(nodes[i])) {
      std::size_t a = find(i);
      std::size_t b = find(index.at(neighbor));
      if (a == b) continue;
      // Keep the earliest node as root so component order follows node order.
      if (b < a) std::swap(a, b);
      parent[b] = a;
    }
  }

  std::vector<Cluster> clusters;
  std::unordered_map<std::size_t, std::size_t> cluster_of_root;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::size_t root = find(i);
    auto [it, inserted] = cluster_of_root.emplace(root, clusters.size());
    if (inserted) clusters.emplace_back();
    clusters[it->second].member_ids.push_back(nodes[i]);
  }
  return clusters;
}

}  // namespace forge
