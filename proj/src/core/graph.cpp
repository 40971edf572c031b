#include "core/graph.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include "core/error.hpp"

namespace deplogic {

namespace {

using Mask = std::uint64_t;

std::size_t popcount(Mask m) { return static_cast<std::size_t>(std::popcount(m)); }

class ExactSearch {
 public:
  ExactSearch(const Graph& graph, std::size_t upper, std::vector<std::size_t> order)
      : n_(graph.vertex_count()), best_(upper), best_order_(std::move(order)) {
    adj_.assign(n_, 0);
    for (auto [u, v] : graph.edges()) {
      adj_[u] |= Mask{1} << v;
      adj_[v] |= Mask{1} << u;
    }
  }

  void run() {
    const Mask all = n_ == 64 ? ~Mask{0} : (Mask{1} << n_) - 1;
    std::vector<std::size_t> prefix;
    search(adj_, all, 0, 0, prefix);
  }

  std::size_t width() const { return best_; }
  const std::vector<std::size_t>& order() const { return best_order_; }

 private:
  // Degeneracy of the remaining graph, a lower bound on its treewidth.
  static std::size_t degeneracy(const std::vector<Mask>& adj, Mask remaining) {
    std::size_t bound = 0;
    while (remaining) {
      std::size_t best_v = 0;
      std::size_t best_d = SIZE_MAX;
      for (Mask m = remaining; m; m &= m - 1) {
        const std::size_t v = static_cast<std::size_t>(std::countr_zero(m));
        const std::size_t d = popcount(adj[v] & remaining);
        if (d < best_d) {
          best_d = d;
          best_v = v;
        }
      }
      bound = std::max(bound, best_d);
      remaining &= ~(Mask{1} << best_v);
    }
    return bound;
  }

  static bool simplicial(const std::vector<Mask>& adj, Mask remaining, std::size_t v) {
    const Mask nb = adj[v] & remaining;
    for (Mask m = nb; m; m &= m - 1) {
      const std::size_t u = static_cast<std::size_t>(std::countr_zero(m));
      if ((nb & ~(Mask{1} << u) & ~adj[u]) != 0) return false;
    }
    return true;
  }

  void search(const std::vector<Mask>& adj, Mask remaining, Mask eliminated,
              std::size_t cost, std::vector<std::size_t>& prefix) {
    const std::size_t left = popcount(remaining);
    if (left == 0 || left - 1 <= cost) {
      // Any order of the rest keeps the width at `cost`.
      if (cost < best_) {
        best_ = cost;
        best_order_ = prefix;
        for (Mask m = remaining; m; m &= m - 1) {
          best_order_.push_back(static_cast<std::size_t>(std::countr_zero(m)));
        }
      }
      return;
    }
    if (std::max(cost, degeneracy(adj, remaining)) >= best_) return;
    if (auto it = seen_.find(eliminated); it != seen_.end() && it->second <= cost) return;
    seen_[eliminated] = cost;

    std::vector<std::size_t> candidates;
    for (Mask m = remaining; m; m &= m - 1) {
      const std::size_t v = static_cast<std::size_t>(std::countr_zero(m));
      if (simplicial(adj, remaining, v)) {
        candidates.assign(1, v);
        break;
      }
      candidates.push_back(v);
    }

    for (std::size_t v : candidates) {
      const Mask nb = adj[v] & remaining;
      const std::size_t next_cost = std::max(cost, popcount(nb));
      if (next_cost >= best_) continue;
      std::vector<Mask> next = adj;
      for (Mask m = nb; m; m &= m - 1) {
        const std::size_t u = static_cast<std::size_t>(std::countr_zero(m));
        next[u] |= nb & ~(Mask{1} << u);
      }
      const Mask bit = Mask{1} << v;
      prefix.push_back(v);
      search(next, remaining & ~bit, eliminated | bit, next_cost, prefix);
      prefix.pop_back();
    }
  }

  std::size_t n_;
  std::vector<Mask> adj_;
  std::size_t best_;
  std::vector<std::size_t> best_order_;
  std::unordered_map<Mask, std::size_t> seen_;
};

std::vector<std::size_t> min_fill_order(const Graph& graph) {
  const std::size_t n = graph.vertex_count();
  std::vector<std::set<std::size_t>> adj(n);
  for (auto [u, v] : graph.edges()) {
    adj[u].insert(v);
    adj[v].insert(u);
  }
  std::vector<bool> done(n, false);
  std::vector<std::size_t> order;
  order.reserve(n);
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t best = n;
    std::size_t best_fill = SIZE_MAX;
    std::size_t best_deg = SIZE_MAX;
    for (std::size_t v = 0; v < n; ++v) {
      if (done[v]) continue;
      std::size_t fill = 0;
      for (auto a = adj[v].begin(); a != adj[v].end(); ++a) {
        for (auto b = std::next(a); b != adj[v].end(); ++b) {
          if (!adj[*a].contains(*b)) ++fill;
        }
      }
      const std::size_t deg = adj[v].size();
      if (fill < best_fill || (fill == best_fill && deg < best_deg)) {
        best = v;
        best_fill = fill;
        best_deg = deg;
      }
    }
    for (std::size_t a : adj[best]) {
      for (std::size_t b : adj[best]) {
        if (a != b) adj[a].insert(b);
      }
      adj[a].erase(best);
    }
    adj[best].clear();
    done[best] = true;
    order.push_back(best);
  }
  return order;
}

}  // namespace

void Graph::add_edge(std::size_t u, std::size_t v) {
  if (u >= vertex_count() || v >= vertex_count()) {
    throw Error(ErrorCode::kInvalid, "edge endpoint outside the graph");
  }
  if (u == v) return;
  auto& nu = adjacency_[u];
  auto pos = std::lower_bound(nu.begin(), nu.end(), v);
  if (pos != nu.end() && *pos == v) return;
  nu.insert(pos, v);
  auto& nv = adjacency_[v];
  nv.insert(std::lower_bound(nv.begin(), nv.end(), u), u);
  ++edges_;
}

bool Graph::has_edge(std::size_t u, std::size_t v) const {
  const auto& nu = adjacency_.at(u);
  return std::binary_search(nu.begin(), nu.end(), v);
}

std::vector<std::pair<std::size_t, std::size_t>> Graph::edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  out.reserve(edges_);
  for (std::size_t u = 0; u < adjacency_.size(); ++u) {
    for (std::size_t v : adjacency_[u]) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

Graph gaifman(const Structure& structure, const GaifmanOptions& options) {
  Graph g(structure.size());
  auto connect = [&](const Tuple& t) {
    for (std::size_t i = 0; i < t.size(); ++i) {
      for (std::size_t j = i + 1; j < t.size(); ++j) g.add_edge(t[i], t[j]);
    }
  };
  for (const auto& [_, rel] : structure.relations()) {
    for (const Tuple& t : rel.tuples) connect(t);
  }
  if (options.include_functions) {
    for (const auto& [_, fn] : structure.functions()) {
      Tuple args(fn.arity, 0);
      for (Element value : fn.table) {
        Tuple t = args;
        t.push_back(value);
        connect(t);
        for (std::size_t i = args.size(); i-- > 0;) {
          if (++args[i] < structure.size()) break;
          args[i] = 0;
        }
      }
    }
  }
  return g;
}

std::size_t TreeDecomposition::width() const {
  std::size_t largest = 0;
  for (const auto& b : bags) largest = std::max(largest, b.size());
  return largest == 0 ? 0 : largest - 1;
}

TreeDecomposition decomposition_from_order(const Graph& graph,
                                           const std::vector<std::size_t>& order) {
  const std::size_t n = graph.vertex_count();
  if (order.size() != n) throw Error(ErrorCode::kInvalid, "order must list every vertex");
  std::vector<std::size_t> position(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (order[i] >= n || position[order[i]] != n) {
      throw Error(ErrorCode::kInvalid, "order is not a permutation");
    }
    position[order[i]] = i;
  }
  std::vector<std::set<std::size_t>> adj(n);
  for (auto [u, v] : graph.edges()) {
    adj[u].insert(v);
    adj[v].insert(u);
  }

  TreeDecomposition d;
  d.bags.resize(n);
  std::vector<std::size_t> parent(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t v = order[i];
    d.bags[i].push_back(v);
    std::size_t next = n;
    for (std::size_t u : adj[v]) {
      d.bags[i].push_back(u);
      next = std::min(next, position[u]);
      for (std::size_t w : adj[v]) {
        if (w != u) adj[u].insert(w);
      }
      adj[u].erase(v);
    }
    std::sort(d.bags[i].begin(), d.bags[i].end());
    parent[i] = next;
  }
  std::size_t previous_root = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (parent[i] != n) {
      d.tree_edges.emplace_back(i, parent[i]);
    } else {
      if (previous_root != n) d.tree_edges.emplace_back(previous_root, i);
      previous_root = i;
    }
  }
  return d;
}

TreewidthResult treewidth_greedy(const Graph& graph) {
  TreewidthResult r;
  r.decomposition = decomposition_from_order(graph, min_fill_order(graph));
  r.width = r.decomposition.width();
  return r;
}

TreewidthResult treewidth_exact(const Graph& graph, std::size_t limit) {
  if (graph.vertex_count() > std::min<std::size_t>(limit, 64)) {
    throw Error(ErrorCode::kLimit, "exact treewidth limited to " +
                                       std::to_string(std::min<std::size_t>(limit, 64)) +
                                       " vertices, graph has " +
                                       std::to_string(graph.vertex_count()));
  }
  const std::vector<std::size_t> seed = min_fill_order(graph);
  const TreeDecomposition greedy = decomposition_from_order(graph, seed);
  ExactSearch search(graph, greedy.width(), seed);
  search.run();
  TreewidthResult r;
  r.decomposition = decomposition_from_order(graph, search.order());
  r.width = r.decomposition.width();
  return r;
}

ValidationReport validate_decomposition(const Graph& graph,
                                        const TreeDecomposition& decomposition) {
  const std::size_t n = graph.vertex_count();
  const auto& bags = decomposition.bags;
  auto fail = [](DecompositionViolation kind, std::vector<std::size_t> witness,
                 std::string message) {
    return ValidationReport{false, kind, std::move(witness), std::move(message)};
  };

  for (std::size_t b = 0; b < bags.size(); ++b) {
    for (std::size_t v : bags[b]) {
      if (v >= n) {
        return fail(DecompositionViolation::kBadVertex, {b, v},
                    "bag " + std::to_string(b) + " mentions unknown vertex " +
                        std::to_string(v));
      }
    }
  }

  // Union-find over bags: a tree has |B|-1 edges and no cycle.
  std::vector<std::size_t> root(bags.size());
  std::iota(root.begin(), root.end(), 0);
  auto find = [&](std::size_t x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  for (auto [a, b] : decomposition.tree_edges) {
    if (a >= bags.size() || b >= bags.size() || a == b) {
      return fail(DecompositionViolation::kNotATree, {a, b},
                  "tree edge " + std::to_string(a) + "-" + std::to_string(b) +
                      " is malformed");
    }
    const std::size_t ra = find(a), rb = find(b);
    if (ra == rb) {
      return fail(DecompositionViolation::kNotATree, {a, b},
                  "tree edge " + std::to_string(a) + "-" + std::to_string(b) +
                      " closes a cycle");
    }
    root[ra] = rb;
  }
  if (!bags.empty() && decomposition.tree_edges.size() != bags.size() - 1) {
    return fail(DecompositionViolation::kNotATree, {},
                "bags do not form a connected tree");
  }

  std::vector<std::vector<std::size_t>> holding(n);
  for (std::size_t b = 0; b < bags.size(); ++b) {
    for (std::size_t v : bags[b]) holding[v].push_back(b);
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (holding[v].empty()) {
      return fail(DecompositionViolation::kVertexUncovered, {v},
                  "vertex " + std::to_string(v) + " is in no bag");
    }
  }

  std::vector<std::set<std::size_t>> bag_sets;
  bag_sets.reserve(bags.size());
  for (const auto& b : bags) bag_sets.emplace_back(b.begin(), b.end());
  for (auto [u, v] : graph.edges()) {
    const bool covered = std::any_of(holding[u].begin(), holding[u].end(),
                                     [&](std::size_t b) { return bag_sets[b].contains(v); });
    if (!covered) {
      return fail(DecompositionViolation::kEdgeUncovered, {u, v},
                  "edge " + std::to_string(u) + "-" + std::to_string(v) +
                      " is in no bag");
    }
  }

  // In a tree, the bags holding v are connected iff they span |bags|-1 edges.
  for (std::size_t v = 0; v < n; ++v) {
    std::size_t inside = 0;
    for (auto [a, b] : decomposition.tree_edges) {
      if (bag_sets[a].contains(v) && bag_sets[b].contains(v)) ++inside;
    }
    if (inside + 1 != holding[v].size()) {
      return fail(DecompositionViolation::kDisconnectedTrace, {v},
                  "bags containing vertex " + std::to_string(v) +
                      " are not connected");
    }
  }
  return {};
}

std::string write_decomposition(const TreeDecomposition& decomposition,
                                const Structure& structure) {
  std::string out;
  for (std::size_t b = 0; b < decomposition.bags.size(); ++b) {
    out += "bag " + std::to_string(b) + ":";
    for (std::size_t v : decomposition.bags[b]) out += " " + structure.name(static_cast<Element>(v));
    out += '\n';
  }
  for (auto [a, b] : decomposition.tree_edges) {
    out += "edge " + std::to_string(a) + " " + std::to_string(b) + "\n";
  }
  return out;
}

TreeDecomposition parse_decomposition(std::string_view text, const Structure& structure) {
  TreeDecomposition d;
  std::map<std::string, std::size_t> ids;
  std::vector<std::pair<std::string, std::string>> raw_edges;
  std::vector<std::size_t> edge_lines;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string keyword;
    if (!(fields >> keyword)) continue;
    if (keyword == "bag") {
      std::string id;
      if (!(fields >> id) || id.back() != ':') {
        throw SyntaxError(number, 1, "expected 'bag <id>: vertices'");
      }
      id.pop_back();
      if (!ids.emplace(id, d.bags.size()).second) {
        throw SyntaxError(number, 1, "bag '" + id + "' declared twice");
      }
      std::vector<std::size_t> bag;
      std::string name;
      while (fields >> name) {
        auto e = structure.find(name);
        if (!e) throw SyntaxError(number, 1, "unknown element '" + name + "'");
        bag.push_back(*e);
      }
      std::sort(bag.begin(), bag.end());
      bag.erase(std::unique(bag.begin(), bag.end()), bag.end());
      d.bags.push_back(std::move(bag));
    } else if (keyword == "edge") {
      std::string a, b, extra;
      if (!(fields >> a >> b) || (fields >> extra)) {
        throw SyntaxError(number, 1, "expected 'edge <id> <id>'");
      }
      raw_edges.emplace_back(a, b);
      edge_lines.push_back(number);
    } else {
      throw SyntaxError(number, 1, "unknown line '" + keyword + "'");
    }
  }
  for (std::size_t i = 0; i < raw_edges.size(); ++i) {
    auto a = ids.find(raw_edges[i].first);
    auto b = ids.find(raw_edges[i].second);
    if (a == ids.end() || b == ids.end()) {
      throw SyntaxError(edge_lines[i], 1, "edge refers to an undeclared bag");
    }
    d.tree_edges.emplace_back(a->second, b->second);
  }
  return d;
}

}  // namespace deplogic
