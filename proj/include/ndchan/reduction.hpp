#pragma once

#include <cstdint>
#include <vector>

#include "ndchan/graph.hpp"

namespace ndchan {

// Separations p[i-1] required between vertices at distance i, for i = 1..k.
struct DistanceConstraints {
  std::vector<int> p;

  DistanceConstraints() = default;
  // Throws InputError unless the tuple is nonempty and positive.
  explicit DistanceConstraints(std::vector<int> values);

  int k() const { return static_cast<int>(p.size()); }
  int max() const;
};

// Channel Assignment instance on G^k with w(u, v) = p[dist(u, v) - 1].
WeightedGraph labeling_to_ca(const Graph& g, const DistanceConstraints& p);

struct ScaledConstraints {
  DistanceConstraints p;
  std::int64_t lambda = 0;
};

// ((c p_1, ..., c p_k), c lambda). Throws InputError for c < 1.
ScaledConstraints scale_constraints(const DistanceConstraints& p, std::int64_t lambda, int c);

}  // namespace ndchan
