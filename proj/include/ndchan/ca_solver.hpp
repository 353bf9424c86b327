#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "ndchan/decomposition.hpp"
#include "ndchan/errors.hpp"
#include "ndchan/graph.hpp"
#include "ndchan/ilp.hpp"
#include "ndchan/reduction.hpp"
#include "ndchan/shift_digraph.hpp"

namespace ndchan {

// Lazy-cut loop ran past its iteration cap.
class IterationCapExceeded : public InternalError {
 public:
  using InternalError::InternalError;
};

// How a reduced type expands back to the vertices of its class.
struct TypeExpansion {
  int original_class = 0;
  std::vector<int> members;  // ascending; members[0] is the kept vertex
  bool replicate = false;    // loopless class: every member copies the kept vertex's label
};

// Reflexive version of a weighted type graph. Type indices are preserved.
struct ReflexiveReduction {
  TypeGraph reduced;
  std::vector<TypeExpansion> expansion;
};

// Loopless types shrink to one vertex and get a loop of weight max(1, wmax). A type that
// occurs once can never repeat inside a window, so no valid labeling is excluded.
ReflexiveReduction preprocess_reflexive(const TypeGraph& tg, const NdPartition& p);

// Flow variables, one per shift-digraph edge (same index).
struct FlowModel {
  IlpModel model;
  std::int64_t walk_length = 0;  // lambda + z + 1
};

// Bounds, Kirchhoff balance, per-type occurrence and total length. No connectivity rows.
FlowModel build_flow_model(const ShiftDigraph& d, const TypeGraph& reduced, std::int64_t lambda);

// If the support of `values` is not one weak component containing the empty window, returns
// alpha_(W,U) - big_m * sum_{e in C} alpha_e <= 0 for a support edge (W, U) of a stray
// component K and the boundary C of K.
std::optional<LinearConstraint> connectivity_violation(std::span<const std::int64_t> values, const ShiftDigraph& d,
                                                       std::int64_t big_m);

struct EdgeMultiset {
  std::vector<std::int64_t> multiplicity;  // per shift-digraph edge
};

struct FlowOptions {
  // 0 selects 10 * |E_D|.
  std::uint64_t iteration_cap = 0;
  // Unset branch_hint and prune select the walk-growing brancher and the walk pruner.
  IlpOptions ilp;
  std::ostream* dump_ilp = nullptr;
};

struct FlowOutcome {
  std::optional<EdgeMultiset> multiset;
  int cuts_added = 0;
  int iterations = 0;
  std::uint64_t iteration_cap = 0;  // effective cap of this solve
  std::uint64_t ilp_nodes = 0;
};

// Edges no closed walk of the right length can use are fixed at zero before the search.
FlowOutcome solve_flow(const ShiftDigraph& d, const TypeGraph& reduced, std::int64_t lambda,
                       const FlowOptions& options = {});

// Node indices of a closed walk in the shift digraph: front() == back() == empty window.
struct Walk {
  std::vector<int> nodes;
};

// Hierholzer's algorithm from the empty window. Throws InternalError on unbalanced or
// disconnected input.
Walk euler_walk(const EdgeMultiset& ms, const ShiftDigraph& d);

// Label i goes to the types in the first slot of walk node z + i. Throws InternalError if a
// type occurs a different number of times than its reduced size.
Labeling walk_to_labeling(const Walk& walk, const ShiftDigraph& d, const ReflexiveReduction& rr, int vertex_count,
                          std::int64_t lambda);

// Per connected component record of a successful solve.
struct ComponentTrace {
  std::vector<int> vertices;  // component vertices in the input graph
  TypeGraph reduced;
  int window_length = 0;
  std::int64_t lambda = 0;
  std::vector<WindowCode> walk;  // window codes of the walk nodes
};

struct SolveStats {
  int nd = 0;
  int types = 0;
  std::size_t digraph_nodes = 0;
  std::size_t digraph_edges = 0;
  int cuts_added = 0;
  int flow_iterations = 0;
  // smallest iteration_cap - iterations over all flow solves; unset before the first one
  std::optional<std::int64_t> min_cap_slack;
  std::uint64_t ilp_nodes = 0;
  int probes = 0;
};

struct SolverOptions {
  FlowOptions flow;
  DigraphLimits digraph;
  std::ostream* dump_digraph = nullptr;
};

struct CaResult {
  std::optional<Labeling> labeling;
  SolveStats stats;
  std::vector<ComponentTrace> traces;
};

// Channel Assignment on weights uniform w.r.t. `p`, one connected component at a time.
// Throws InputError if the weights are not uniform.
CaResult solve_ca_uniform(const WeightedGraph& wg, const NdPartition& p, std::int64_t lambda,
                          const SolverOptions& options = {});

// Vertex-cover route: exact cover, I_X classes, weight refinement, then the uniform solver.
CaResult solve_ca_vc(const WeightedGraph& wg, std::int64_t lambda, const SolverOptions& options = {});

NdPartition vc_refined_partition(const WeightedGraph& wg);

enum class Route { uniform, vc, automatic };

struct SpanResult {
  std::int64_t lambda_min = 0;
  Labeling labeling;
  SolveStats stats;
  std::vector<ComponentTrace> traces;
};

// Least feasible span by binary search per component. For Route::uniform `partition` is used
// when given, nd_partition otherwise; Route::automatic prefers nd_partition when uniform.
SpanResult minimize_span(const WeightedGraph& wg, Route route, const std::optional<NdPartition>& partition = {},
                         const SolverOptions& options = {});

// The decomposition handed to the uniform solver for a reduced L(p) instance: the reduced
// graph's nd_partition when uniform, else nd_partition of the original graph.
NdPartition labeling_partition(const Graph& g, const WeightedGraph& reduced);

CaResult solve_labeling(const Graph& g, const DistanceConstraints& p, std::int64_t lambda,
                        const SolverOptions& options = {});
SpanResult minimize_labeling_span(const Graph& g, const DistanceConstraints& p, const SolverOptions& options = {});

}  // namespace ndchan
