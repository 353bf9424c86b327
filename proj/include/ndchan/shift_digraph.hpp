#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "ndchan/decomposition.hpp"

namespace ndchan {

// Set of type-graph nodes, bit t for type t.
using TypeMask = std::uint32_t;

// A window (T_1, ..., T_z) packed into tau * z bits: T_{i+1} occupies bits [i * tau, (i + 1) * tau).
using WindowCode = std::uint64_t;

WindowCode encode_window(std::span<const TypeMask> sets, int type_count);
std::vector<TypeMask> decode_window(WindowCode code, int type_count, int length);

// Pairwise separation check over a run of consecutive label slots: for every type-graph
// edge (t, r) with t in sets[i], r in sets[j] require |i - j| >= w(t, r). Loops are only
// checked for i != j. Requires a weighted type graph.
bool window_is_valid(const TypeGraph& tg, std::span<const TypeMask> sets);

struct DigraphLimits {
  std::size_t max_nodes = 1u << 20;
  std::size_t max_edges = 1u << 23;
};

struct DigraphEdge {
  int source = 0;
  int target = 0;
};

// Shift-register digraph over all valid windows of a fixed length. Immutable after build.
class ShiftDigraph {
 public:
  int type_count() const { return tau_; }
  int window_length() const { return z_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  // Ascending window codes.
  const std::vector<WindowCode>& nodes() const { return nodes_; }
  const std::vector<DigraphEdge>& edges() const { return edges_; }
  const std::vector<int>& out_edges(int node) const { return out_[static_cast<std::size_t>(node)]; }
  const std::vector<int>& in_edges(int node) const { return in_[static_cast<std::size_t>(node)]; }

  // Index of the all-empty window; always present.
  int empty_node() const { return 0; }
  // -1 if `code` is not a valid window.
  int find(WindowCode code) const;
  TypeMask slot(int node, int position) const {
    return static_cast<TypeMask>((nodes_[static_cast<std::size_t>(node)] >> (position * tau_)) & slot_mask());
  }
  TypeMask first_slot(int node) const { return slot(node, 0); }

 private:
  friend ShiftDigraph build_shift_digraph(const TypeGraph& tg, int z, const DigraphLimits& limits);
  WindowCode slot_mask() const { return (WindowCode{1} << tau_) - 1; }

  int tau_ = 0;
  int z_ = 0;
  std::vector<WindowCode> nodes_;
  std::vector<DigraphEdge> edges_;
  std::vector<std::vector<int>> out_;
  std::vector<std::vector<int>> in_;
};

// Nodes: all valid windows of length z. Edges: (W, W') with W'_i = W_{i+1} whose joined
// (z + 1)-slot run is valid. Throws InputError for non-reflexive or unweighted type graphs
// and ResourceLimitExceeded when the digraph would exceed `limits`.
ShiftDigraph build_shift_digraph(const TypeGraph& tg, int z, const DigraphLimits& limits);
ShiftDigraph build_shift_digraph(const TypeGraph& tg, int z);

// Text edge list, one "source target" pair of hex window codes per line.
void write_edge_list(const ShiftDigraph& d, std::ostream& out);

}  // namespace ndchan
