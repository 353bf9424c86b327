#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ndchan/graph.hpp"

namespace ndchan {

enum class ClassKind { clique, independent };

// Partition of V into cliques and independent sets with all-or-none joins between classes.
struct NdPartition {
  std::vector<std::vector<int>> classes;
  std::vector<ClassKind> kinds;

  int size() const { return static_cast<int>(classes.size()); }
  // class index per vertex; -1 for vertices not covered.
  std::vector<int> class_of(int vertex_count) const;
};

// Condensation of a graph under a decomposition. Node t stands for class t with s(t) = sizes[t].
// Weights, when installed, are total on adjacency and loops; weight(t, t) is the loop weight.
class TypeGraph {
 public:
  TypeGraph() = default;
  explicit TypeGraph(int type_count);

  int type_count() const { return tau_; }
  int size(int t) const { return sizes_[static_cast<std::size_t>(t)]; }
  const std::vector<int>& sizes() const { return sizes_; }
  bool has_loop(int t) const { return at(adj_, t, t) != 0; }
  // For t == r this is the loop flag.
  bool adjacent(int t, int r) const { return at(adj_, t, r) != 0; }
  bool weighted() const { return weighted_; }
  // 0 where there is no edge or no weights installed.
  int weight(int t, int r) const { return weighted_ ? at(w_, t, r) : 0; }
  // Largest installed weight, 1 if none.
  int max_weight() const;
  bool reflexive() const;

  void set_size(int t, int s) { sizes_[static_cast<std::size_t>(t)] = s; }
  // weight 0 means "unweighted"; any positive weight switches the graph to weighted mode.
  void set_loop(int t, int weight = 0);
  void set_edge(int t, int r, int weight = 0);

 private:
  std::size_t cell(int t, int r) const {
    return static_cast<std::size_t>(t) * static_cast<std::size_t>(tau_) + static_cast<std::size_t>(r);
  }
  int at(const std::vector<int>& m, int t, int r) const { return m[cell(t, r)]; }

  int tau_ = 0;
  bool weighted_ = false;
  std::vector<int> sizes_;
  std::vector<int> adj_;
  std::vector<int> w_;
};

struct VertexCover {
  std::vector<int> vertices;  // ascending
};

// True iff `p` partitions V and satisfies both decomposition axioms on `g`.
bool is_decomposition(const Graph& g, const NdPartition& p);

// Minimum decomposition: classes of u ~ v <=> N(u) \ {v} == N(v) \ {u}, ordered by smallest member.
NdPartition nd_partition(const Graph& g);

// Same classes, kinds recomputed against `g` (a class of G can turn into a clique of G^k).
NdPartition reclassify(const Graph& g, NdPartition p);

// Throws InputError if `p` is not a decomposition of `g`.
TypeGraph type_graph(const Graph& g, const NdPartition& p);

// Weighted type graph if every class pair (and every clique class) carries a single weight.
std::optional<TypeGraph> check_uniform(const WeightedGraph& wg, const NdPartition& p);

// Exact minimum vertex cover by bounded search.
VertexCover min_vertex_cover(const Graph& g);

bool is_vertex_cover(const Graph& g, std::span<const int> vertices);

// Cover vertices as singletons plus the classes I_X = {v not in U : N(v) = X}.
// Throws InputError if `cover` misses an edge.
NdPartition vc_partition(const Graph& g, const VertexCover& cover);

// Splits every class by the tuple of weights towards its neighbours so that the weights
// become uniform. Clique classes that cannot be kept whole fall apart into singletons.
NdPartition refine_uniform(const WeightedGraph& wg, const NdPartition& p);

}  // namespace ndchan
