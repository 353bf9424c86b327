#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "ndchan/graph.hpp"

namespace fixtures {

using ndchan::Edge;
using ndchan::Graph;
using ndchan::WeightedEdge;
using ndchan::WeightedGraph;

inline Graph path(int n) {
  std::vector<Edge> e;
  for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
  return Graph(n, e);
}

inline Graph cycle(int n) {
  std::vector<Edge> e;
  for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
  e.push_back({0, n - 1});
  return Graph(n, e);
}

// center 0, leaves 1..k
inline Graph star(int k) {
  std::vector<Edge> e;
  for (int i = 1; i <= k; ++i) e.push_back({0, i});
  return Graph(k + 1, e);
}

inline Graph clique(int n) {
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) e.push_back({i, j});
  }
  return Graph(n, e);
}

// parts [0, a) and [a, a + b)
inline Graph complete_bipartite(int a, int b) {
  std::vector<Edge> e;
  for (int i = 0; i < a; ++i) {
    for (int j = a; j < a + b; ++j) e.push_back({i, j});
  }
  return Graph(a + b, e);
}

inline WeightedGraph weighted(int n, std::vector<WeightedEdge> edges) { return WeightedGraph(n, edges); }

inline Graph random_graph(std::mt19937_64& rng, int n, double density) {
  std::bernoulli_distribution coin(density);
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (coin(rng)) e.push_back({i, j});
    }
  }
  return Graph(n, e);
}

inline WeightedGraph random_weights(std::mt19937_64& rng, const Graph& g, int wmax) {
  std::uniform_int_distribution<int> w(1, wmax);
  std::vector<WeightedEdge> e;
  for (const Edge& x : g.edges()) e.push_back({x.u, x.v, w(rng)});
  return WeightedGraph(g.vertex_count(), e);
}

}  // namespace fixtures
