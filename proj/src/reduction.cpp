#include "ndchan/reduction.hpp"

#include <algorithm>
#include <string>

#include "ndchan/errors.hpp"

namespace ndchan {

DistanceConstraints::DistanceConstraints(std::vector<int> values) : p(std::move(values)) {
  if (p.empty()) throw InputError("distance constraints need at least one entry");
  for (int x : p) {
    if (x < 1) throw InputError("distance constraint " + std::to_string(x) + " is not positive");
  }
}

int DistanceConstraints::max() const { return p.empty() ? 0 : *std::max_element(p.begin(), p.end()); }

WeightedGraph labeling_to_ca(const Graph& g, const DistanceConstraints& p) {
  if (p.p.empty()) throw InputError("distance constraints need at least one entry");
  const DistanceMatrix d = all_pairs_distance(g);
  std::vector<WeightedEdge> edges;
  for (int u = 0; u < g.vertex_count(); ++u) {
    for (int v = u + 1; v < g.vertex_count(); ++v) {
      const int dist = d(u, v);
      if (dist <= p.k()) edges.push_back({u, v, p.p[static_cast<std::size_t>(dist - 1)]});
    }
  }
  return WeightedGraph(g.vertex_count(), edges);
}

ScaledConstraints scale_constraints(const DistanceConstraints& p, std::int64_t lambda, int c) {
  if (c < 1) throw InputError("scale factor must be positive, got " + std::to_string(c));
  std::vector<int> scaled;
  scaled.reserve(p.p.size());
  for (int x : p.p) scaled.push_back(x * c);
  return {DistanceConstraints(std::move(scaled)), lambda * c};
}

}  // namespace ndchan
