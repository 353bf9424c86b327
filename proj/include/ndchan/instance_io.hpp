#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ndchan/ca_solver.hpp"
#include "ndchan/graph.hpp"
#include "ndchan/reduction.hpp"

namespace ndchan {

// On-disk instance. Vertex ids are 0-based here regardless of the source format.
struct InstanceFile {
  int n = 0;
  std::vector<WeightedEdge> edges;
  std::optional<std::int64_t> lambda;
  std::optional<std::vector<int>> p;

  WeightedGraph weighted_graph() const { return WeightedGraph(n, edges); }
  Graph graph() const;
  std::optional<DistanceConstraints> constraints() const;
};

// Accepts JSON ({"n": 3, "edges": [[0, 1, 2], [1, 2]], "lambda": 4, "p": [2, 1]}) or the
// DIMACS-like format ("p edge N M" then "e U V [W]" lines, 1-based ids, "c" comments).
// Throws InputError with a line or field reference.
InstanceFile parse_instance(std::string_view text);

// Canonical JSON: edges as [u, v, w] with u < v in ascending order.
std::string serialize_instance(const InstanceFile& instance);

struct ResultReport {
  bool feasible = false;
  std::int64_t lambda = 0;
  std::optional<std::vector<std::int64_t>> labels;
  SolveStats stats;
  std::int64_t solve_ms = 0;
  std::optional<std::int64_t> lambda_min;  // set in minimize mode
};

// {"feasible": bool, "lambda": int, "labels": [int] | null,
//  "stats": {"nd", "types", "digraph_nodes", "cuts_added", "solve_ms"}} (+ "lambda_min")
std::string emit_result(const ResultReport& report);

}  // namespace ndchan
