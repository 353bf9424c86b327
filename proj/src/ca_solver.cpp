#include "ndchan/ca_solver.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

namespace ndchan {

ReflexiveReduction preprocess_reflexive(const TypeGraph& tg, const NdPartition& p) {
  if (p.size() != tg.type_count()) throw InputError("partition and type graph disagree on the number of types");
  const int placeholder = std::max(1, tg.max_weight());
  ReflexiveReduction rr;
  rr.reduced = tg;
  for (int t = 0; t < tg.type_count(); ++t) {
    TypeExpansion ex;
    ex.original_class = t;
    ex.members = p.classes[static_cast<std::size_t>(t)];
    std::sort(ex.members.begin(), ex.members.end());
    if (!tg.has_loop(t)) {
      ex.replicate = true;
      rr.reduced.set_size(t, 1);
      rr.reduced.set_loop(t, placeholder);
    } else if (tg.weight(t, t) < 1) {
      throw InputError("loop of type " + std::to_string(t) + " carries no weight");
    }
    rr.expansion.push_back(std::move(ex));
  }
  return rr;
}

FlowModel build_flow_model(const ShiftDigraph& d, const TypeGraph& reduced, std::int64_t lambda) {
  if (lambda < 0) throw InputError("span must be nonnegative");
  if (reduced.type_count() != d.type_count()) throw InputError("type graph does not match the shift digraph");
  FlowModel fm;
  fm.walk_length = lambda + d.window_length() + 1;
  const int m = static_cast<int>(d.edge_count());
  fm.model = IlpModel(m, fm.walk_length);

  for (int node = 0; node < static_cast<int>(d.node_count()); ++node) {
    LinearConstraint balance;
    balance.relation = Relation::equal;
    for (int e : d.out_edges(node)) balance.terms.push_back({e, 1});
    for (int e : d.in_edges(node)) balance.terms.push_back({e, -1});
    fm.model.add_constraint(std::move(balance));
  }
  for (int t = 0; t < reduced.type_count(); ++t) {
    LinearConstraint occurrence;
    occurrence.relation = Relation::equal;
    occurrence.rhs = reduced.size(t);
    for (int e = 0; e < m; ++e) {
      if ((d.first_slot(d.edges()[static_cast<std::size_t>(e)].source) >> t & 1u) != 0) occurrence.terms.push_back({e, 1});
    }
    fm.model.add_constraint(std::move(occurrence));
  }
  LinearConstraint length;
  length.relation = Relation::equal;
  length.rhs = fm.walk_length;
  for (int e = 0; e < m; ++e) length.terms.push_back({e, 1});
  fm.model.add_constraint(std::move(length));
  return fm;
}

namespace {

struct UnionFind {
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
  std::vector<int> parent;
};

}  // namespace

namespace {

// Components of the edges with ub > 0; an edge with lb > 0 outside the empty window's
// component yields alpha_e - big_m * sum(boundary) <= 0, which the whole box violates.
std::optional<LinearConstraint> stray_component_cut(std::span<const std::int64_t> lb, std::span<const std::int64_t> ub,
                                                   const ShiftDigraph& d, std::int64_t big_m) {
  UnionFind uf(d.node_count());
  for (std::size_t e = 0; e < ub.size(); ++e) {
    if (ub[e] > 0) uf.unite(d.edges()[e].source, d.edges()[e].target);
  }
  const int root = uf.find(d.empty_node());
  for (std::size_t e = 0; e < lb.size(); ++e) {
    if (lb[e] <= 0) continue;
    const int comp = uf.find(d.edges()[e].source);
    if (comp == root) continue;
    LinearConstraint cut;
    cut.relation = Relation::less_equal;
    cut.rhs = 0;
    cut.terms.push_back({static_cast<int>(e), 1});
    for (std::size_t f = 0; f < d.edge_count(); ++f) {
      const bool src_in = uf.find(d.edges()[f].source) == comp;
      const bool dst_in = uf.find(d.edges()[f].target) == comp;
      if (src_in != dst_in) cut.terms.push_back({static_cast<int>(f), -big_m});
    }
    return cut;
  }
  return std::nullopt;
}

}  // namespace

std::optional<LinearConstraint> connectivity_violation(std::span<const std::int64_t> values, const ShiftDigraph& d,
                                                       std::int64_t big_m) {
  if (values.size() != d.edge_count()) throw InputError("solution size does not match the shift digraph");
  return stray_component_cut(values, values, d, big_m);
}

namespace {

// Every label appears once in each slot position of the walk's windows, so the occurrence
// count of the first slot holds for the later slots too. Implied by balance, but interval
// propagation cannot see it.
void add_slot_occurrence_rows(IlpModel& model, const ShiftDigraph& d, const TypeGraph& reduced) {
  for (int pos = 1; pos < d.window_length(); ++pos) {
    for (int t = 0; t < reduced.type_count(); ++t) {
      LinearConstraint row;
      row.relation = Relation::equal;
      row.rhs = reduced.size(t);
      for (int e = 0; e < static_cast<int>(d.edge_count()); ++e) {
        if ((d.slot(d.edges()[static_cast<std::size_t>(e)].source, pos) >> t & 1u) != 0) row.terms.push_back({e, 1});
      }
      model.add_constraint(std::move(row));
    }
  }
}

// BFS hop counts from the empty window along the edges, or against them when reverse is set.
std::vector<std::int64_t> hops_from_empty(const ShiftDigraph& d, bool reverse) {
  std::vector<std::int64_t> dist(d.node_count(), -1);
  std::deque<int> queue{d.empty_node()};
  dist[static_cast<std::size_t>(d.empty_node())] = 0;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int e : reverse ? d.in_edges(v) : d.out_edges(v)) {
      const auto& edge = d.edges()[static_cast<std::size_t>(e)];
      const int w = reverse ? edge.source : edge.target;
      if (dist[static_cast<std::size_t>(w)] < 0) {
        dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(v)] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

// Fixes at zero the edges no solution can use: a closed walk of the given length through the
// empty window cannot reach an edge whose shortest detour from and back to the empty window is
// longer, and a joined run naming a type in more slots than the type has vertices would place
// one of its vertices twice.
void fix_dead_edges(IlpModel& model, const ShiftDigraph& d, const TypeGraph& reduced, std::int64_t walk_length) {
  const auto from = hops_from_empty(d, false);
  const auto to = hops_from_empty(d, true);
  const int z = d.window_length();
  std::vector<int> uses(static_cast<std::size_t>(reduced.type_count()));
  for (int e = 0; e < static_cast<int>(d.edge_count()); ++e) {
    const auto& edge = d.edges()[static_cast<std::size_t>(e)];
    const std::int64_t a = from[static_cast<std::size_t>(edge.source)];
    const std::int64_t b = to[static_cast<std::size_t>(edge.target)];
    bool dead = a < 0 || b < 0 || a + 1 + b > walk_length;
    std::fill(uses.begin(), uses.end(), 0);
    for (int pos = 0; pos <= z && !dead; ++pos) {
      const TypeMask set = pos < z ? d.slot(edge.source, pos) : d.slot(edge.target, z - 1);
      for (int t = 0; t < reduced.type_count(); ++t) {
        if ((set >> t & 1u) != 0 && ++uses[static_cast<std::size_t>(t)] > reduced.size(t)) dead = true;
      }
    }
    if (dead) model.set_bounds(e, 0, 0);
  }
}

// Grows the walk from the empty window: extend a node of the fixed support around it whose
// balance is short, else open a new detour there. Disconnected circulations are left to the
// cuts.
class WalkBrancher {
 public:
  explicit WalkBrancher(const ShiftDigraph& d) : d_(d), in_(d.node_count()), out_(d.node_count()), seen_(d.node_count()) {}

  std::optional<BranchChoice> operator()(std::span<const std::int64_t> lb, std::span<const std::int64_t> ub) {
    std::fill(in_.begin(), in_.end(), 0);
    std::fill(out_.begin(), out_.end(), 0);
    for (std::size_t e = 0; e < lb.size(); ++e) {
      out_[static_cast<std::size_t>(d_.edges()[e].source)] += lb[e];
      in_[static_cast<std::size_t>(d_.edges()[e].target)] += lb[e];
    }
    std::fill(seen_.begin(), seen_.end(), 0);
    order_.assign(1, d_.empty_node());
    seen_[static_cast<std::size_t>(d_.empty_node())] = 1;
    for (std::size_t i = 0; i < order_.size(); ++i) {
      const int v = order_[i];
      auto visit = [&](int e, int w) {
        if (lb[static_cast<std::size_t>(e)] > 0 && seen_[static_cast<std::size_t>(w)] == 0) {
          seen_[static_cast<std::size_t>(w)] = 1;
          order_.push_back(w);
        }
      };
      for (int e : d_.out_edges(v)) visit(e, d_.edges()[static_cast<std::size_t>(e)].target);
      for (int e : d_.in_edges(v)) visit(e, d_.edges()[static_cast<std::size_t>(e)].source);
    }
    auto free_edge = [&](const std::vector<int>& edges) {
      for (int e : edges) {
        if (ub[static_cast<std::size_t>(e)] > lb[static_cast<std::size_t>(e)]) return e;
      }
      return -1;
    };
    for (int v : order_) {
      const auto k = static_cast<std::size_t>(v);
      if (out_[k] < in_[k]) {
        if (const int e = free_edge(d_.out_edges(v)); e >= 0) return BranchChoice{e, ValueOrder::low_last};
      }
    }
    for (int v : order_) {
      const auto k = static_cast<std::size_t>(v);
      if (in_[k] < out_[k]) {
        if (const int e = free_edge(d_.in_edges(v)); e >= 0) return BranchChoice{e, ValueOrder::low_last};
      }
    }
    for (int v : order_) {
      if (const int e = free_edge(d_.out_edges(v)); e >= 0) return BranchChoice{e, ValueOrder::low_last};
    }
    // nothing left to attach: any other positive edge would be cut off from the empty window
    for (std::size_t e = 0; e < lb.size(); ++e) {
      if (lb[e] < ub[e]) return BranchChoice{-1, ValueOrder::ascending, true};
    }
    return std::nullopt;
  }

 private:
  const ShiftDigraph& d_;
  std::vector<std::int64_t> in_;
  std::vector<std::int64_t> out_;
  std::vector<char> seen_;
  std::vector<int> order_;
};

// Refutes a box once the unspent length cannot close the fixed support. Above the bounds the
// solution decomposes into paths from the nodes whose fixed in-flow exceeds their out-flow to
// nodes with the opposite imbalance, plus cycles, all on edges that still have room. When the
// fixed support is one open walk ending at v, every type still short of its count also needs
// an edge with room that places it, either on the closing path from v or on a detour hooked
// to the support, and the cheapest such edge must fit in the unspent length.
class WalkPruner {
 public:
  WalkPruner(const ShiftDigraph& d, const TypeGraph& reduced, std::int64_t walk_length)
      : d_(d),
        walk_length_(walk_length),
        excess_(d.node_count()),
        on_support_(d.node_count()),
        dist_(d.node_count(), -1),
        from_v_(d.node_count()),
        to_empty_(d.node_count()),
        from_support_(d.node_count()),
        to_support_(d.node_count()) {
    for (int t = 0; t < reduced.type_count(); ++t) sizes_.push_back(reduced.size(t));
  }

  bool operator()(std::span<const std::int64_t> lb, std::span<const std::int64_t> ub) {
    std::fill(excess_.begin(), excess_.end(), 0);
    std::fill(on_support_.begin(), on_support_.end(), 0);
    remaining_.assign(sizes_.begin(), sizes_.end());
    std::int64_t used = 0;
    for (std::size_t e = 0; e < lb.size(); ++e) {
      if (lb[e] == 0) continue;
      const auto& edge = d_.edges()[e];
      used += lb[e];
      excess_[static_cast<std::size_t>(edge.target)] += lb[e];
      excess_[static_cast<std::size_t>(edge.source)] -= lb[e];
      on_support_[static_cast<std::size_t>(edge.target)] = 1;
      on_support_[static_cast<std::size_t>(edge.source)] = 1;
      const TypeMask first = d_.first_slot(edge.source);
      for (std::size_t t = 0; t < remaining_.size(); ++t) {
        if ((first >> t & 1u) != 0) remaining_[t] -= lb[e];
      }
    }
    std::int64_t need = 0;
    int open_end = -1;
    int surplus_nodes = 0;
    for (int v = 0; v < static_cast<int>(d_.node_count()); ++v) {
      const std::int64_t surplus = excess_[static_cast<std::size_t>(v)];
      if (surplus <= 0) continue;
      ++surplus_nodes;
      open_end = surplus == 1 ? v : -1;
      const std::int64_t hops = hops_to_deficit(v, lb, ub);
      if (hops < 0) return true;
      need += surplus * hops;
      if (used + need > walk_length_) return true;
    }
    const int empty = d_.empty_node();
    if (surplus_nodes != 1 || open_end < 0 || excess_[static_cast<std::size_t>(empty)] != -1) return false;
    return types_out_of_reach(open_end, walk_length_ - used, lb, ub);
  }

 private:
  bool types_out_of_reach(int v, std::int64_t budget, std::span<const std::int64_t> lb,
                          std::span<const std::int64_t> ub) {
    const int empty = d_.empty_node();
    sources_.assign(1, v);
    bfs(from_v_, false, lb, ub);
    sources_.assign(1, empty);
    bfs(to_empty_, true, lb, ub);
    sources_.clear();
    for (int w = 0; w < static_cast<int>(d_.node_count()); ++w) {
      if (on_support_[static_cast<std::size_t>(w)] != 0) sources_.push_back(w);
    }
    bfs(from_support_, false, lb, ub);
    bfs(to_support_, true, lb, ub);
    const std::int64_t close = to_empty_[static_cast<std::size_t>(v)];
    constexpr std::int64_t unreachable = std::numeric_limits<std::int64_t>::max();
    cheapest_.assign(sizes_.size(), unreachable);
    for (std::size_t e = 0; e < lb.size(); ++e) {
      if (ub[e] == lb[e]) continue;
      const auto& edge = d_.edges()[e];
      const auto src = static_cast<std::size_t>(edge.source);
      const auto tgt = static_cast<std::size_t>(edge.target);
      std::int64_t cost = unreachable;
      if (from_v_[src] >= 0 && to_empty_[tgt] >= 0) cost = from_v_[src] + 1 + to_empty_[tgt];
      if (from_support_[src] >= 0 && to_support_[tgt] >= 0) {
        cost = std::min(cost, close + from_support_[src] + 1 + to_support_[tgt]);
      }
      if (cost == unreachable) continue;
      const TypeMask first = d_.first_slot(edge.source);
      for (std::size_t t = 0; t < sizes_.size(); ++t) {
        if ((first >> t & 1u) != 0) cheapest_[t] = std::min(cheapest_[t], cost);
      }
    }
    for (std::size_t t = 0; t < sizes_.size(); ++t) {
      if (remaining_[t] > 0 && cheapest_[t] > budget) return true;
    }
    return false;
  }

  // Hop counts from sources_ over edges with room, against the edges when reverse is set.
  void bfs(std::vector<std::int64_t>& dist, bool reverse, std::span<const std::int64_t> lb,
           std::span<const std::int64_t> ub) {
    std::fill(dist.begin(), dist.end(), -1);
    queue_.assign(sources_.begin(), sources_.end());
    for (int s : sources_) dist[static_cast<std::size_t>(s)] = 0;
    for (std::size_t i = 0; i < queue_.size(); ++i) {
      const int v = queue_[i];
      for (int e : reverse ? d_.in_edges(v) : d_.out_edges(v)) {
        if (ub[static_cast<std::size_t>(e)] == lb[static_cast<std::size_t>(e)]) continue;
        const auto& edge = d_.edges()[static_cast<std::size_t>(e)];
        const int w = reverse ? edge.source : edge.target;
        if (dist[static_cast<std::size_t>(w)] >= 0) continue;
        dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(v)] + 1;
        queue_.push_back(w);
      }
    }
  }

  std::int64_t hops_to_deficit(int start, std::span<const std::int64_t> lb, std::span<const std::int64_t> ub) {
    for (int v : touched_) dist_[static_cast<std::size_t>(v)] = -1;
    touched_.assign(1, start);
    dist_[static_cast<std::size_t>(start)] = 0;
    for (std::size_t i = 0; i < touched_.size(); ++i) {
      const int v = touched_[i];
      for (int e : d_.out_edges(v)) {
        if (ub[static_cast<std::size_t>(e)] == lb[static_cast<std::size_t>(e)]) continue;
        const int w = d_.edges()[static_cast<std::size_t>(e)].target;
        if (dist_[static_cast<std::size_t>(w)] >= 0) continue;
        dist_[static_cast<std::size_t>(w)] = dist_[static_cast<std::size_t>(v)] + 1;
        touched_.push_back(w);
        if (excess_[static_cast<std::size_t>(w)] < 0) return dist_[static_cast<std::size_t>(w)];
      }
    }
    return -1;
  }

  const ShiftDigraph& d_;
  std::int64_t walk_length_;
  std::vector<std::int64_t> sizes_;
  std::vector<std::int64_t> remaining_;
  std::vector<std::int64_t> cheapest_;
  std::vector<std::int64_t> excess_;
  std::vector<char> on_support_;
  std::vector<std::int64_t> dist_;
  std::vector<int> touched_;
  std::vector<int> sources_;
  std::vector<int> queue_;
  std::vector<std::int64_t> from_v_;
  std::vector<std::int64_t> to_empty_;
  std::vector<std::int64_t> from_support_;
  std::vector<std::int64_t> to_support_;
};

}  // namespace

FlowOutcome solve_flow(const ShiftDigraph& d, const TypeGraph& reduced, std::int64_t lambda,
                       const FlowOptions& options) {
  const FlowModel fm = build_flow_model(d, reduced, lambda);
  const std::uint64_t cap = options.iteration_cap != 0 ? options.iteration_cap : 10 * std::max<std::uint64_t>(1, d.edge_count());
  if (options.dump_ilp != nullptr) {
    *options.dump_ilp << "# flow model, lambda " << lambda << '\n' << fm.model.to_lp_text();
  }
  FlowOutcome out;
  out.iteration_cap = cap;
  auto record = [&](std::optional<LinearConstraint> cut) {
    if (!cut) return cut;
    // one solve per cut, so the iteration that would follow this cut is number cuts + 1
    if (static_cast<std::uint64_t>(++out.cuts_added) >= cap) {
      throw IterationCapExceeded("lazy connectivity cuts did not converge within " + std::to_string(cap) + " iterations");
    }
    if (options.dump_ilp != nullptr) {
      *options.dump_ilp << "# cut " << out.cuts_added << ", lambda " << lambda << '\n' << format_constraint(*cut) << '\n';
    }
    return cut;
  };
  LazySeparators separators;
  separators.at_leaf = [&](std::span<const std::int64_t> values) {
    return record(connectivity_violation(values, d, fm.walk_length));
  };
  // the same cuts, found as soon as a stray positive edge can no longer reach the empty window
  separators.at_node = [&](std::span<const std::int64_t> lb, std::span<const std::int64_t> ub) {
    return record(stray_component_cut(lb, ub, d, fm.walk_length));
  };
  IlpStats stats;
  IlpModel search_model = fm.model;
  add_slot_occurrence_rows(search_model, d, reduced);
  fix_dead_edges(search_model, d, reduced, fm.walk_length);
  IlpOptions ilp = options.ilp;
  if (!ilp.branch_hint) ilp.branch_hint = WalkBrancher(d);
  if (!ilp.prune) ilp.prune = WalkPruner(d, reduced, fm.walk_length);
  LazySolve solved = solve_with_lazy_constraints(search_model, separators, ilp, &stats);
  out.iterations = out.cuts_added + 1;
  out.ilp_nodes = stats.nodes;
  if (!solved.solution) return out;

  IlpModel full = fm.model;
  for (auto& c : solved.cuts) full.add_constraint(std::move(c));
  const auto& values = solved.solution->values;
  if (!full.is_satisfied_by(values)) throw InternalError("integer solver returned an infeasible point");
  if (connectivity_violation(values, d, fm.walk_length)) throw InternalError("accepted flow has disconnected support");
  out.multiset = EdgeMultiset{values};
  return out;
}

Walk euler_walk(const EdgeMultiset& ms, const ShiftDigraph& d) {
  if (ms.multiplicity.size() != d.edge_count()) throw InternalError("multiset does not match the shift digraph");
  std::vector<std::int64_t> balance(d.node_count(), 0);
  std::int64_t total = 0;
  for (std::size_t e = 0; e < d.edge_count(); ++e) {
    const auto a = ms.multiplicity[e];
    if (a < 0) throw InternalError("negative edge multiplicity");
    balance[static_cast<std::size_t>(d.edges()[e].source)] += a;
    balance[static_cast<std::size_t>(d.edges()[e].target)] -= a;
    total += a;
  }
  if (std::any_of(balance.begin(), balance.end(), [](std::int64_t b) { return b != 0; })) {
    throw InternalError("edge multiset violates Kirchhoff balance");
  }

  std::vector<std::int64_t> left = ms.multiplicity;
  std::vector<std::size_t> cursor(d.node_count(), 0);
  std::vector<int> stack{d.empty_node()};
  std::vector<int> circuit;
  while (!stack.empty()) {
    const int v = stack.back();
    const auto& outs = d.out_edges(v);
    auto& c = cursor[static_cast<std::size_t>(v)];
    while (c < outs.size() && left[static_cast<std::size_t>(outs[c])] == 0) ++c;
    if (c == outs.size()) {
      circuit.push_back(v);
      stack.pop_back();
    } else {
      const int e = outs[c];
      --left[static_cast<std::size_t>(e)];
      stack.push_back(d.edges()[static_cast<std::size_t>(e)].target);
    }
  }
  if (static_cast<std::int64_t>(circuit.size()) != total + 1) {
    throw InternalError("edge multiset support is not connected to the empty window");
  }
  std::reverse(circuit.begin(), circuit.end());
  return Walk{std::move(circuit)};
}

Labeling walk_to_labeling(const Walk& walk, const ShiftDigraph& d, const ReflexiveReduction& rr, int vertex_count,
                          std::int64_t lambda) {
  const int z = d.window_length();
  const auto expected_nodes = static_cast<std::size_t>(lambda + z + 2);
  if (walk.nodes.size() != expected_nodes) {
    throw InternalError("walk has " + std::to_string(walk.nodes.size()) + " nodes, expected " +
                        std::to_string(expected_nodes));
  }
  if (walk.nodes.front() != d.empty_node() || walk.nodes.back() != d.empty_node()) {
    throw InternalError("walk does not start and end at the empty window");
  }
  const int tau = rr.reduced.type_count();
  std::vector<std::vector<std::int64_t>> labels_of(static_cast<std::size_t>(tau));
  for (std::size_t j = 0; j < walk.nodes.size(); ++j) {
    const TypeMask first = d.first_slot(walk.nodes[j]);
    for (int t = 0; t < tau; ++t) {
      if ((first >> t & 1u) == 0) continue;
      const auto label = static_cast<std::int64_t>(j) - z;
      if (label < 0 || label > lambda) throw InternalError("type placed in the walk padding");
      labels_of[static_cast<std::size_t>(t)].push_back(label);
    }
  }

  Labeling out;
  out.lambda = lambda;
  out.labels.assign(static_cast<std::size_t>(vertex_count), -1);
  for (int t = 0; t < tau; ++t) {
    const auto& labels = labels_of[static_cast<std::size_t>(t)];
    if (static_cast<int>(labels.size()) != rr.reduced.size(t)) {
      throw InternalError("type " + std::to_string(t) + " occurs " + std::to_string(labels.size()) +
                          " times, expected " + std::to_string(rr.reduced.size(t)));
    }
    const auto& ex = rr.expansion[static_cast<std::size_t>(t)];
    for (std::size_t k = 0; k < ex.members.size(); ++k) {
      const auto label = ex.replicate ? labels.front() : labels[k];
      out.labels[static_cast<std::size_t>(ex.members[k])] = label;
    }
  }
  if (std::find(out.labels.begin(), out.labels.end(), -1) != out.labels.end()) {
    throw InternalError("decoded labeling leaves a vertex unlabeled");
  }
  return out;
}

namespace {

// Restriction of a decomposition to `vertices`, renumbered to component-local ids.
NdPartition restrict_partition(const NdPartition& p, std::span<const int> vertices, int vertex_count) {
  std::vector<int> local(static_cast<std::size_t>(vertex_count), -1);
  for (std::size_t i = 0; i < vertices.size(); ++i) local[static_cast<std::size_t>(vertices[i])] = static_cast<int>(i);
  NdPartition out;
  for (std::size_t c = 0; c < p.classes.size(); ++c) {
    std::vector<int> members;
    for (int v : p.classes[c]) {
      if (local[static_cast<std::size_t>(v)] >= 0) members.push_back(local[static_cast<std::size_t>(v)]);
    }
    if (members.empty()) continue;
    std::sort(members.begin(), members.end());
    out.kinds.push_back(members.size() >= 2 ? p.kinds[c] : ClassKind::independent);
    out.classes.push_back(std::move(members));
  }
  std::vector<std::size_t> order(out.classes.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return out.classes[a].front() < out.classes[b].front(); });
  NdPartition sorted;
  for (std::size_t i : order) {
    sorted.classes.push_back(std::move(out.classes[i]));
    sorted.kinds.push_back(out.kinds[i]);
  }
  return sorted;
}

// Pipeline state for one connected component; the shift digraph is shared by all span probes.
class ComponentSolver {
 public:
  ComponentSolver(const WeightedGraph& wg, const NdPartition& p, std::vector<int> vertices,
                  const SolverOptions& options)
      : vertices_(std::move(vertices)), options_(options) {
    local_ = wg.induced(vertices_);
    const NdPartition local_p = restrict_partition(p, vertices_, wg.vertex_count());
    auto tg = check_uniform(local_, local_p);
    if (!tg) throw InputError("edge weights are not uniform with respect to the decomposition");
    rr_ = preprocess_reflexive(*tg, local_p);
    window_ = std::max(1, rr_.reduced.max_weight());
    digraph_ = build_shift_digraph(rr_.reduced, window_, options.digraph);
    if (options.dump_digraph != nullptr) write_edge_list(digraph_, *options.dump_digraph);
  }

  const std::vector<int>& vertices() const { return vertices_; }
  const WeightedGraph& local() const { return local_; }

  void add_static_stats(SolveStats& stats) const {
    stats.types += rr_.reduced.type_count();
    stats.digraph_nodes += digraph_.node_count();
    stats.digraph_edges += digraph_.edge_count();
  }

  std::optional<Labeling> probe(std::int64_t lambda, SolveStats& stats, ComponentTrace* trace) const {
    ++stats.probes;
    FlowOutcome flow = solve_flow(digraph_, rr_.reduced, lambda, options_.flow);
    stats.cuts_added += flow.cuts_added;
    stats.flow_iterations += flow.iterations;
    const auto slack = static_cast<std::int64_t>(flow.iteration_cap) - flow.iterations;
    stats.min_cap_slack = std::min(stats.min_cap_slack.value_or(slack), slack);
    stats.ilp_nodes += flow.ilp_nodes;
    if (!flow.multiset) return std::nullopt;
    Walk walk = euler_walk(*flow.multiset, digraph_);
    Labeling labeling = walk_to_labeling(walk, digraph_, rr_, local_.vertex_count(), lambda);
    if (!verify_assignment(local_, labeling)) throw InternalError("decoded labeling violates the instance");
    if (trace != nullptr) {
      trace->vertices = vertices_;
      trace->reduced = rr_.reduced;
      trace->window_length = window_;
      trace->lambda = lambda;
      trace->walk.clear();
      for (int node : walk.nodes) trace->walk.push_back(digraph_.nodes()[static_cast<std::size_t>(node)]);
    }
    return labeling;
  }

 private:
  std::vector<int> vertices_;
  SolverOptions options_;
  WeightedGraph local_;
  ReflexiveReduction rr_;
  int window_ = 1;
  ShiftDigraph digraph_;
};

std::vector<ComponentSolver> component_solvers(const WeightedGraph& wg, const NdPartition& p,
                                               const SolverOptions& options) {
  if (!is_decomposition(wg.graph(), p)) throw InputError("partition violates the decomposition axioms");
  if (!check_uniform(wg, p)) throw InputError("edge weights are not uniform with respect to the decomposition");
  std::vector<ComponentSolver> solvers;
  for (auto& comp : wg.graph().connected_components()) solvers.emplace_back(wg, p, std::move(comp), options);
  return solvers;
}

void scatter(const ComponentSolver& cs, const Labeling& local, Labeling& global) {
  for (std::size_t i = 0; i < cs.vertices().size(); ++i) {
    global.labels[static_cast<std::size_t>(cs.vertices()[i])] = local.labels[i];
  }
}

}  // namespace

CaResult solve_ca_uniform(const WeightedGraph& wg, const NdPartition& p, std::int64_t lambda,
                          const SolverOptions& options) {
  if (lambda < 0) throw InputError("span must be nonnegative");
  CaResult result;
  result.stats.nd = p.size();
  const auto solvers = component_solvers(wg, p, options);
  Labeling merged;
  merged.lambda = lambda;
  merged.labels.assign(static_cast<std::size_t>(wg.vertex_count()), 0);
  for (const auto& cs : solvers) cs.add_static_stats(result.stats);
  for (const auto& cs : solvers) {
    ComponentTrace trace;
    auto local = cs.probe(lambda, result.stats, &trace);
    if (!local) {
      result.traces.clear();
      return result;
    }
    scatter(cs, *local, merged);
    result.traces.push_back(std::move(trace));
  }
  result.labeling = std::move(merged);
  return result;
}

NdPartition vc_refined_partition(const WeightedGraph& wg) {
  const VertexCover cover = min_vertex_cover(wg.graph());
  return refine_uniform(wg, vc_partition(wg.graph(), cover));
}

CaResult solve_ca_vc(const WeightedGraph& wg, std::int64_t lambda, const SolverOptions& options) {
  return solve_ca_uniform(wg, vc_refined_partition(wg), lambda, options);
}

SpanResult minimize_span(const WeightedGraph& wg, Route route, const std::optional<NdPartition>& partition,
                         const SolverOptions& options) {
  NdPartition p;
  switch (route) {
    case Route::uniform:
      p = partition ? *partition : nd_partition(wg.graph());
      break;
    case Route::vc:
      p = vc_refined_partition(wg);
      break;
    case Route::automatic: {
      p = partition ? *partition : nd_partition(wg.graph());
      if (!check_uniform(wg, p)) p = vc_refined_partition(wg);
      break;
    }
  }

  SpanResult result;
  result.stats.nd = p.size();
  result.labeling.labels.assign(static_cast<std::size_t>(wg.vertex_count()), 0);
  const auto solvers = component_solvers(wg, p, options);
  for (const auto& cs : solvers) cs.add_static_stats(result.stats);
  for (const auto& cs : solvers) {
    std::int64_t lo = cs.local().graph().edge_count() > 0 ? cs.local().max_weight() : 0;
    std::int64_t hi = trivial_upper_bound(cs.local());
    std::optional<Labeling> best;
    ComponentTrace best_trace;
    while (lo < hi) {
      const std::int64_t mid = lo + (hi - lo) / 2;
      ComponentTrace trace;
      auto found = cs.probe(mid, result.stats, &trace);
      if (found) {
        const auto used = *std::max_element(found->labels.begin(), found->labels.end());
        hi = used;
        found->lambda = used;
        trace.lambda = mid;
        best = std::move(found);
        best_trace = std::move(trace);
      } else {
        lo = mid + 1;
      }
    }
    if (!best || best->lambda != hi) {
      ComponentTrace trace;
      best = cs.probe(hi, result.stats, &trace);
      if (!best) throw InternalError("no labeling at the guaranteed upper bound " + std::to_string(hi));
      best_trace = std::move(trace);
    }
    result.lambda_min = std::max(result.lambda_min, hi);
    scatter(cs, *best, result.labeling);
    result.traces.push_back(std::move(best_trace));
  }
  result.labeling.lambda = result.lambda_min;
  return result;
}

NdPartition labeling_partition(const Graph& g, const WeightedGraph& reduced) {
  NdPartition p = nd_partition(reduced.graph());
  if (check_uniform(reduced, p)) return p;
  return reclassify(reduced.graph(), nd_partition(g));
}

CaResult solve_labeling(const Graph& g, const DistanceConstraints& p, std::int64_t lambda,
                        const SolverOptions& options) {
  const WeightedGraph reduced = labeling_to_ca(g, p);
  return solve_ca_uniform(reduced, labeling_partition(g, reduced), lambda, options);
}

SpanResult minimize_labeling_span(const Graph& g, const DistanceConstraints& p, const SolverOptions& options) {
  const WeightedGraph reduced = labeling_to_ca(g, p);
  return minimize_span(reduced, Route::uniform, labeling_partition(g, reduced), options);
}

}  // namespace ndchan
