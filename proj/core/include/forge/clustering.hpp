#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace forge {

/// Undirected duplicate graph over challenge ids.
class MatchGraph {
 public:
  MatchGraph() = default;
  explicit MatchGraph(std::vector<std::string> nodes);

  void add_node(const std::string& id);
  /// Both ends must be nodes; self-loops are ignored.
  void add_edge(const std::string& a, const std::string& b);

  bool has_edge(const std::string& a, const std::string& b) const;
  const std::vector<std::string>& nodes() const noexcept { return nodes_; }
  const std::set<std::string>& neighbors(const std::string& id) const;
  std::size_t edge_count() const noexcept { return edge_count_; }

 private:
  std::vector<std::string> nodes_;
  std::map<std::string, std::set<std::string>> adjacency_;
  std::size_t edge_count_ = 0;
};

struct Cluster {
  std::vector<std::string> member_ids;  // insertion order
  std::string representative_id;        // filled by pick_representatives

  bool operator==(const Cluster&) const = default;
};

/// Sequential majority-join pass. Each node, in the given order, joins the
/// existing cluster with the most of its neighbors among those clusters it
/// matches at least half of (2 * matches >= size); ties go to the earlier
/// cluster. Nodes matching no cluster that well start a new one.
std::vector<Cluster> cluster_greedy(const std::vector<std::string>& order, const MatchGraph& graph);

/// Connected components, ordered by first member in node order.
std::vector<Cluster> cluster_transitive(const MatchGraph& graph);

}  // namespace forge
