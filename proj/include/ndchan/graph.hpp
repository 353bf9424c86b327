#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace ndchan {

// Unordered vertex pair, stored with u < v.
struct Edge {
  int u = 0;
  int v = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct WeightedEdge {
  int u = 0;
  int v = 0;
  int weight = 1;

  friend bool operator==(const WeightedEdge&, const WeightedEdge&) = default;
};

// Simple undirected graph on vertices [0, n). Immutable once constructed.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int vertex_count);
  // Throws InputError on self-loops, duplicate edges or out-of-range ids.
  Graph(int vertex_count, std::span<const Edge> edges);

  int vertex_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  bool adjacent(int u, int v) const { return u != v && matrix_[index(u, v)] != 0; }
  const std::vector<int>& neighbors(int v) const { return adj_[static_cast<std::size_t>(v)]; }
  int degree(int v) const { return static_cast<int>(neighbors(v).size()); }
  // Sorted lexicographically, u < v in every entry.
  const std::vector<Edge>& edges() const { return edges_; }

  // Vertex sets of the connected components, each ascending, ordered by smallest member.
  std::vector<std::vector<int>> connected_components() const;
  // Subgraph induced by `vertices`; vertex i of the result is vertices[i].
  Graph induced(std::span<const int> vertices) const;

 private:
  std::size_t index(int u, int v) const {
    return static_cast<std::size_t>(u) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(v);
  }

  int n_ = 0;
  std::vector<std::vector<int>> adj_;
  std::vector<std::uint8_t> matrix_;
  std::vector<Edge> edges_;
};

// Channel Assignment input: a graph with a positive integer weight per edge.
class WeightedGraph {
 public:
  WeightedGraph() = default;
  // Throws InputError on invalid edges or weights below 1.
  WeightedGraph(int vertex_count, std::span<const WeightedEdge> edges);
  // Every edge of `graph` receives `uniform_weight`.
  WeightedGraph(Graph graph, int uniform_weight);

  const Graph& graph() const { return graph_; }
  int vertex_count() const { return graph_.vertex_count(); }
  // 0 when u and v are not adjacent.
  int weight(int u, int v) const {
    return u == v ? 0 : weights_[static_cast<std::size_t>(u) * static_cast<std::size_t>(vertex_count()) +
                                 static_cast<std::size_t>(v)];
  }
  // Largest edge weight; 1 for edgeless graphs.
  int max_weight() const { return max_weight_; }
  std::vector<WeightedEdge> edges() const;

  WeightedGraph induced(std::span<const int> vertices) const;
  WeightedGraph scaled(int factor) const;

 private:
  Graph graph_;
  std::vector<int> weights_;
  int max_weight_ = 1;
};

// A span-bounded labeling: labels[v] must lie in [0, lambda].
struct Labeling {
  std::vector<std::int64_t> labels;
  std::int64_t lambda = 0;
};

inline constexpr int kUnreachable = std::numeric_limits<int>::max();

// Dense hop-distance matrix; kUnreachable between components.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(int n) : n_(n), d_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), kUnreachable) {}

  int size() const { return n_; }
  int operator()(int u, int v) const { return d_[static_cast<std::size_t>(u) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(v)]; }
  int& at(int u, int v) { return d_[static_cast<std::size_t>(u) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(v)]; }

 private:
  int n_ = 0;
  std::vector<int> d_;
};

DistanceMatrix all_pairs_distance(const Graph& g);

// Joins every pair at distance 1..k. Throws InputError for k < 1.
Graph power_graph(const Graph& g, int k);

struct Verdict {
  bool ok = true;
  std::vector<Edge> violated_edges;
  std::vector<int> out_of_range;

  explicit operator bool() const { return ok; }
};

// Checks the range [0, lambda] and |l(u) - l(v)| >= w(u, v) on every edge.
// Throws InputError if the labeling does not cover exactly the vertex set.
Verdict verify_assignment(const WeightedGraph& wg, const Labeling& labeling);

// (n - 1) * wmax: labeling vertex i with i * wmax is always feasible.
std::int64_t trivial_upper_bound(const WeightedGraph& wg);

}  // namespace ndchan
