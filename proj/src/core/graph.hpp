#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "core/model.hpp"

namespace deplogic {

// Simple undirected graph on vertices 0..n-1 without self-loops.
class Graph {
 public:
  explicit Graph(std::size_t vertices) : adjacency_(vertices) {}

  std::size_t vertex_count() const noexcept { return adjacency_.size(); }
  std::size_t edge_count() const noexcept { return edges_; }

  void add_edge(std::size_t u, std::size_t v);
  bool has_edge(std::size_t u, std::size_t v) const;
  const std::vector<std::size_t>& neighbours(std::size_t v) const {
    return adjacency_.at(v);
  }
  // Edges as (u, v) with u < v, sorted.
  std::vector<std::pair<std::size_t, std::size_t>> edges() const;

 private:
  std::vector<std::vector<std::size_t>> adjacency_;  // sorted
  std::size_t edges_ = 0;
};

struct GaifmanOptions {
  // Treat each k-ary function as the (k+1)-ary relation of its graph.
  bool include_functions = false;
};

// Vertex i is universe element i; {u, v} is an edge iff u != v occur together
// in some relation tuple.
Graph gaifman(const Structure& structure, const GaifmanOptions& options = {});

struct TreeDecomposition {
  std::vector<std::vector<std::size_t>> bags;  // each bag sorted
  std::vector<std::pair<std::size_t, std::size_t>> tree_edges;

  // Largest bag size minus one; 0 for a decomposition without bags.
  std::size_t width() const;
};

struct TreewidthResult {
  std::size_t width = 0;
  TreeDecomposition decomposition;
};

inline constexpr std::size_t kDefaultExactLimit = 20;

// Exact treewidth by branch-and-bound over elimination orderings, memoised
// on eliminated vertex sets and seeded with the min-fill upper bound. Throws
// Error(kLimit) when the graph has more than `limit` vertices (limit <= 64).
TreewidthResult treewidth_exact(const Graph& graph,
                                std::size_t limit = kDefaultExactLimit);

// Min-fill elimination (ties: fewer neighbours, then lower index).
TreewidthResult treewidth_greedy(const Graph& graph);

// Decomposition induced by eliminating vertices in `order`.
TreeDecomposition decomposition_from_order(const Graph& graph,
                                           const std::vector<std::size_t>& order);

enum class DecompositionViolation {
  kNone,
  kBadVertex,        // bag mentions a vertex outside the graph
  kNotATree,         // tree edges do not form a spanning tree on the bags
  kVertexUncovered,
  kEdgeUncovered,
  kDisconnectedTrace,
};

struct ValidationReport {
  bool valid = true;
  DecompositionViolation violation = DecompositionViolation::kNone;
  std::vector<std::size_t> witness;  // offending vertices or bag ids
  std::string message;
};

ValidationReport validate_decomposition(const Graph& graph,
                                        const TreeDecomposition& decomposition);

// "bag <id>: v1 v2 ..." lines followed by "edge <id> <id>" lines, with
// vertices written as universe element names.
std::string write_decomposition(const TreeDecomposition& decomposition,
                                const Structure& structure);
TreeDecomposition parse_decomposition(std::string_view text,
                                      const Structure& structure);

}  // namespace deplogic
