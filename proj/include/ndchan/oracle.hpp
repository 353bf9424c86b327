#pragma once

#include <cstdint>
#include <optional>

#include "ndchan/graph.hpp"

namespace ndchan::oracle {

struct OracleLimits {
  // Refuse instances whose naive search space (lambda + 1)^n exceeds this.
  double max_search_space = 1e8;
  int max_nd_vertices = 10;
};

// Backtracking over vertices in smallest-last order. Throws ResourceLimitExceeded when
// the guard trips; nullopt means proven infeasible.
std::optional<Labeling> brute_force_ca(const WeightedGraph& wg, std::int64_t lambda, const OracleLimits& limits = {});

// Smallest lambda for which brute_force_ca succeeds.
std::int64_t brute_force_min_span(const WeightedGraph& wg, const OracleLimits& limits = {});

// Minimum class count over all set partitions satisfying the decomposition axioms.
int brute_force_nd(const Graph& g, const OracleLimits& limits = {});

}  // namespace ndchan::oracle
