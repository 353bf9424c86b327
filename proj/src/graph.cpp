#include "ndchan/graph.hpp"

#include <algorithm>
#include <cstdlib>
#include <queue>
#include <string>

#include "ndchan/errors.hpp"

namespace ndchan {

namespace {

void check_vertex(int v, int n) {
  if (v < 0 || v >= n) {
    throw InputError("vertex id " + std::to_string(v) + " out of range [0, " + std::to_string(n) + ")");
  }
}

}  // namespace

Graph::Graph(int vertex_count) : Graph(vertex_count, std::span<const Edge>{}) {}

Graph::Graph(int vertex_count, std::span<const Edge> edges) : n_(vertex_count) {
  if (vertex_count < 0) throw InputError("negative vertex count");
  adj_.resize(static_cast<std::size_t>(n_));
  matrix_.assign(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_), 0);
  edges_.reserve(edges.size());
  for (const Edge& e : edges) {
    check_vertex(e.u, n_);
    check_vertex(e.v, n_);
    if (e.u == e.v) throw InputError("self-loop at vertex " + std::to_string(e.u));
    if (matrix_[index(e.u, e.v)] != 0) {
      throw InputError("duplicate edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) + ")");
    }
    matrix_[index(e.u, e.v)] = matrix_[index(e.v, e.u)] = 1;
    adj_[static_cast<std::size_t>(e.u)].push_back(e.v);
    adj_[static_cast<std::size_t>(e.v)].push_back(e.u);
    edges_.push_back({std::min(e.u, e.v), std::max(e.u, e.v)});
  }
  for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
  std::sort(edges_.begin(), edges_.end());
}

std::vector<std::vector<int>> Graph::connected_components() const {
  std::vector<int> comp(static_cast<std::size_t>(n_), -1);
  std::vector<std::vector<int>> result;
  for (int s = 0; s < n_; ++s) {
    if (comp[static_cast<std::size_t>(s)] >= 0) continue;
    const int id = static_cast<int>(result.size());
    result.emplace_back();
    std::vector<int> stack{s};
    comp[static_cast<std::size_t>(s)] = id;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      result.back().push_back(v);
      for (int u : neighbors(v)) {
        if (comp[static_cast<std::size_t>(u)] < 0) {
          comp[static_cast<std::size_t>(u)] = id;
          stack.push_back(u);
        }
      }
    }
    std::sort(result.back().begin(), result.back().end());
  }
  return result;
}

Graph Graph::induced(std::span<const int> vertices) const {
  std::vector<int> local(static_cast<std::size_t>(n_), -1);
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    check_vertex(vertices[i], n_);
    local[static_cast<std::size_t>(vertices[i])] = static_cast<int>(i);
  }
  std::vector<Edge> sub;
  for (const Edge& e : edges_) {
    const int a = local[static_cast<std::size_t>(e.u)];
    const int b = local[static_cast<std::size_t>(e.v)];
    if (a >= 0 && b >= 0) sub.push_back({a, b});
  }
  return Graph(static_cast<int>(vertices.size()), sub);
}

WeightedGraph::WeightedGraph(int vertex_count, std::span<const WeightedEdge> edges) {
  std::vector<Edge> plain;
  plain.reserve(edges.size());
  for (const auto& e : edges) plain.push_back({e.u, e.v});
  graph_ = Graph(vertex_count, plain);
  weights_.assign(static_cast<std::size_t>(vertex_count) * static_cast<std::size_t>(vertex_count), 0);
  for (const auto& e : edges) {
    if (e.weight < 1) {
      throw InputError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) + ") has weight " +
                       std::to_string(e.weight) + " < 1");
    }
    const auto n = static_cast<std::size_t>(vertex_count);
    weights_[static_cast<std::size_t>(e.u) * n + static_cast<std::size_t>(e.v)] = e.weight;
    weights_[static_cast<std::size_t>(e.v) * n + static_cast<std::size_t>(e.u)] = e.weight;
    max_weight_ = std::max(max_weight_, e.weight);
  }
}

WeightedGraph::WeightedGraph(Graph graph, int uniform_weight) {
  if (uniform_weight < 1) throw InputError("edge weight must be at least 1");
  std::vector<WeightedEdge> edges;
  for (const Edge& e : graph.edges()) edges.push_back({e.u, e.v, uniform_weight});
  *this = WeightedGraph(graph.vertex_count(), edges);
}

std::vector<WeightedEdge> WeightedGraph::edges() const {
  std::vector<WeightedEdge> out;
  out.reserve(graph_.edge_count());
  for (const Edge& e : graph_.edges()) out.push_back({e.u, e.v, weight(e.u, e.v)});
  return out;
}

WeightedGraph WeightedGraph::induced(std::span<const int> vertices) const {
  std::vector<int> local(static_cast<std::size_t>(vertex_count()), -1);
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    check_vertex(vertices[i], vertex_count());
    local[static_cast<std::size_t>(vertices[i])] = static_cast<int>(i);
  }
  std::vector<WeightedEdge> sub;
  for (const Edge& e : graph_.edges()) {
    const int a = local[static_cast<std::size_t>(e.u)];
    const int b = local[static_cast<std::size_t>(e.v)];
    if (a >= 0 && b >= 0) sub.push_back({a, b, weight(e.u, e.v)});
  }
  return WeightedGraph(static_cast<int>(vertices.size()), sub);
}

WeightedGraph WeightedGraph::scaled(int factor) const {
  if (factor < 1) throw InputError("scale factor must be positive");
  auto e = edges();
  for (auto& x : e) x.weight *= factor;
  return WeightedGraph(vertex_count(), e);
}

DistanceMatrix all_pairs_distance(const Graph& g) {
  const int n = g.vertex_count();
  DistanceMatrix d(n);
  std::vector<int> queue;
  for (int s = 0; s < n; ++s) {
    queue.assign(1, s);
    d.at(s, s) = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const int v = queue[head];
      for (int u : g.neighbors(v)) {
        if (d(s, u) == kUnreachable) {
          d.at(s, u) = d(s, v) + 1;
          queue.push_back(u);
        }
      }
    }
  }
  return d;
}

Graph power_graph(const Graph& g, int k) {
  if (k < 1) throw InputError("graph power requires k >= 1, got " + std::to_string(k));
  if (k == 1) return g;
  const DistanceMatrix d = all_pairs_distance(g);
  std::vector<Edge> edges;
  for (int u = 0; u < g.vertex_count(); ++u) {
    for (int v = u + 1; v < g.vertex_count(); ++v) {
      if (d(u, v) <= k) edges.push_back({u, v});
    }
  }
  return Graph(g.vertex_count(), edges);
}

Verdict verify_assignment(const WeightedGraph& wg, const Labeling& labeling) {
  if (static_cast<int>(labeling.labels.size()) != wg.vertex_count()) {
    throw InputError("labeling has " + std::to_string(labeling.labels.size()) + " entries for " +
                     std::to_string(wg.vertex_count()) + " vertices");
  }
  Verdict verdict;
  for (int v = 0; v < wg.vertex_count(); ++v) {
    const auto l = labeling.labels[static_cast<std::size_t>(v)];
    if (l < 0 || l > labeling.lambda) verdict.out_of_range.push_back(v);
  }
  for (const auto& e : wg.edges()) {
    const auto a = labeling.labels[static_cast<std::size_t>(e.u)];
    const auto b = labeling.labels[static_cast<std::size_t>(e.v)];
    if (std::llabs(a - b) < e.weight) verdict.violated_edges.push_back({e.u, e.v});
  }
  verdict.ok = verdict.violated_edges.empty() && verdict.out_of_range.empty();
  return verdict;
}

std::int64_t trivial_upper_bound(const WeightedGraph& wg) {
  if (wg.vertex_count() == 0) return 0;
  return static_cast<std::int64_t>(wg.vertex_count() - 1) * wg.max_weight();
}

}  // namespace ndchan
