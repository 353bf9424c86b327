#include "ndchan/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "ndchan/errors.hpp"

namespace ndchan::oracle {

namespace {

std::vector<int> smallest_last_order(const Graph& g) {
  const int n = g.vertex_count();
  std::vector<int> deg(static_cast<std::size_t>(n));
  std::vector<char> removed(static_cast<std::size_t>(n), 0);
  for (int v = 0; v < n; ++v) deg[static_cast<std::size_t>(v)] = g.degree(v);
  std::vector<int> removal;
  for (int step = 0; step < n; ++step) {
    int pick = -1;
    for (int v = 0; v < n; ++v) {
      if (removed[static_cast<std::size_t>(v)] == 0 && (pick < 0 || deg[static_cast<std::size_t>(v)] < deg[static_cast<std::size_t>(pick)])) {
        pick = v;
      }
    }
    removed[static_cast<std::size_t>(pick)] = 1;
    removal.push_back(pick);
    for (int u : g.neighbors(pick)) --deg[static_cast<std::size_t>(u)];
  }
  std::reverse(removal.begin(), removal.end());
  return removal;
}

class Backtrack {
 public:
  Backtrack(const WeightedGraph& wg, std::int64_t lambda)
      : wg_(wg), lambda_(lambda), order_(smallest_last_order(wg.graph())),
        label_(static_cast<std::size_t>(wg.vertex_count()), -1) {}

  bool run() { return place(0); }
  std::vector<std::int64_t> labels() const { return label_; }

 private:
  bool place(std::size_t depth) {
    if (depth == order_.size()) return true;
    const int v = order_[depth];
    for (std::int64_t l = 0; l <= lambda_; ++l) {
      bool ok = true;
      for (int u : wg_.graph().neighbors(v)) {
        const std::int64_t lu = label_[static_cast<std::size_t>(u)];
        if (lu >= 0 && (lu > l ? lu - l : l - lu) < wg_.weight(u, v)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      label_[static_cast<std::size_t>(v)] = l;
      if (place(depth + 1)) return true;
    }
    label_[static_cast<std::size_t>(v)] = -1;
    return false;
  }

  const WeightedGraph& wg_;
  std::int64_t lambda_;
  std::vector<int> order_;
  std::vector<std::int64_t> label_;
};

}  // namespace

std::optional<Labeling> brute_force_ca(const WeightedGraph& wg, std::int64_t lambda, const OracleLimits& limits) {
  if (lambda < 0) return std::nullopt;
  const double space = static_cast<double>(wg.vertex_count()) * std::log10(static_cast<double>(lambda) + 1.0);
  if (space > std::log10(limits.max_search_space)) {
    throw ResourceLimitExceeded("brute force search space (lambda + 1)^n = 10^" + std::to_string(space) +
                                " exceeds the guard");
  }
  Backtrack search(wg, lambda);
  if (!search.run()) return std::nullopt;
  return Labeling{search.labels(), lambda};
}

std::int64_t brute_force_min_span(const WeightedGraph& wg, const OracleLimits& limits) {
  for (std::int64_t lambda = 0;; ++lambda) {
    if (brute_force_ca(wg, lambda, limits)) return lambda;
  }
}

namespace {

class PartitionSearch {
 public:
  explicit PartitionSearch(const Graph& g) : g_(g), block_(static_cast<std::size_t>(g.vertex_count()), -1) {}

  int run() {
    best_ = g_.vertex_count();
    if (g_.vertex_count() > 0) assign(0, 0);
    return best_;
  }

 private:
  bool valid(int blocks) const {
    const int n = g_.vertex_count();
    // Inside a block: all pairs adjacent or all pairs non-adjacent.
    // Between blocks: adjacency decided by the block pair alone.
    std::vector<int> inner(static_cast<std::size_t>(blocks), -1);
    std::vector<int> cross(static_cast<std::size_t>(blocks * blocks), -1);
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) {
        const int a = block_[static_cast<std::size_t>(u)];
        const int b = block_[static_cast<std::size_t>(v)];
        const int adj = g_.adjacent(u, v) ? 1 : 0;
        int& slot = a == b ? inner[static_cast<std::size_t>(a)]
                           : cross[static_cast<std::size_t>(std::min(a, b) * blocks + std::max(a, b))];
        if (slot == -1) {
          slot = adj;
        } else if (slot != adj) {
          return false;
        }
      }
    }
    return true;
  }

  void assign(int v, int blocks) {
    if (blocks >= best_) return;
    if (v == g_.vertex_count()) {
      if (valid(blocks)) best_ = blocks;
      return;
    }
    for (int b = 0; b <= blocks; ++b) {
      block_[static_cast<std::size_t>(v)] = b;
      assign(v + 1, b == blocks ? blocks + 1 : blocks);
    }
    block_[static_cast<std::size_t>(v)] = -1;
  }

  const Graph& g_;
  std::vector<int> block_;
  int best_ = 0;
};

}  // namespace

int brute_force_nd(const Graph& g, const OracleLimits& limits) {
  if (g.vertex_count() > limits.max_nd_vertices) {
    throw ResourceLimitExceeded("brute force nd refuses graphs with more than " +
                                std::to_string(limits.max_nd_vertices) + " vertices");
  }
  return PartitionSearch(g).run();
}

}  // namespace ndchan::oracle
