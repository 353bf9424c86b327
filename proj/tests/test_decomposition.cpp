#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "ndchan/decomposition.hpp"
#include "ndchan/errors.hpp"
#include "ndchan/reduction.hpp"

using namespace ndchan;
using fixtures::clique;
using fixtures::cycle;
using fixtures::path;
using fixtures::star;

namespace {

using Classes = std::vector<std::vector<int>>;

}  // namespace

TEST_CASE("nd_partition on small graphs") {
  const NdPartition k5 = nd_partition(clique(5));
  REQUIRE(k5.size() == 1);
  CHECK(k5.kinds[0] == ClassKind::clique);

  const NdPartition c4 = nd_partition(cycle(4));
  CHECK(c4.classes == Classes{{0, 2}, {1, 3}});
  CHECK(c4.kinds == std::vector<ClassKind>{ClassKind::independent, ClassKind::independent});

  const NdPartition p4 = nd_partition(path(4));
  CHECK(p4.classes == Classes{{0}, {1}, {2}, {3}});

  CHECK(nd_partition(Graph(3)).classes == Classes{{0, 1, 2}});
  CHECK(nd_partition(Graph(0)).size() == 0);
}

TEST_CASE("type graph") {
  SUBCASE("clique") {
    const TypeGraph tg = type_graph(clique(3), nd_partition(clique(3)));
    CHECK(tg.type_count() == 1);
    CHECK(tg.size(0) == 3);
    CHECK(tg.has_loop(0));
  }
  SUBCASE("four-cycle") {
    const TypeGraph tg = type_graph(cycle(4), nd_partition(cycle(4)));
    CHECK(tg.type_count() == 2);
    CHECK(tg.sizes() == std::vector<int>{2, 2});
    CHECK_FALSE(tg.has_loop(0));
    CHECK_FALSE(tg.has_loop(1));
    CHECK(tg.adjacent(0, 1));
  }
  SUBCASE("star") {
    const TypeGraph tg = type_graph(star(3), nd_partition(star(3)));
    CHECK(tg.sizes() == std::vector<int>{1, 3});
    CHECK(tg.adjacent(0, 1));
    CHECK_FALSE(tg.has_loop(0));
    CHECK_FALSE(tg.has_loop(1));
  }
  SUBCASE("invalid partition rejected") {
    NdPartition bad;
    bad.classes = {{0, 1}, {2, 3}};
    bad.kinds = {ClassKind::independent, ClassKind::independent};
    CHECK_FALSE(is_decomposition(path(4), bad));
    CHECK_THROWS_AS(type_graph(path(4), bad), InputError);
  }
}

TEST_CASE("check_uniform") {
  const Graph c4 = cycle(4);
  CHECK(check_uniform(WeightedGraph(c4, 3), nd_partition(c4)).has_value());
  const auto tg = check_uniform(WeightedGraph(c4, 3), nd_partition(c4));
  CHECK(tg->weight(0, 1) == 3);
  CHECK(tg->max_weight() == 3);

  // 0 ~ 2 but w(0,1) = 1 and w(2,1) = 2
  const WeightedGraph mixed(4, std::vector<WeightedEdge>{{0, 1, 1}, {1, 2, 2}, {2, 3, 1}, {0, 3, 1}});
  CHECK_FALSE(check_uniform(mixed, nd_partition(c4)).has_value());

  // distance-derived weights are uniform on the decomposition of the base graph
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 40; ++rep) {
    const Graph g = fixtures::random_graph(rng, 7, 0.35);
    const WeightedGraph reduced = labeling_to_ca(g, DistanceConstraints({3, 2, 1}));
    const NdPartition p = reclassify(reduced.graph(), nd_partition(g));
    CHECK(is_decomposition(reduced.graph(), p));
    CHECK(check_uniform(reduced, p).has_value());
  }
}

TEST_CASE("minimum vertex cover") {
  CHECK(min_vertex_cover(path(3)).vertices == std::vector<int>{1});
  CHECK(min_vertex_cover(clique(4)).vertices.size() == 3);
  CHECK(min_vertex_cover(cycle(5)).vertices.size() == 3);
  CHECK(min_vertex_cover(Graph(3)).vertices.empty());

  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 40; ++rep) {
    const Graph g = fixtures::random_graph(rng, 8, 0.3);
    const VertexCover vc = min_vertex_cover(g);
    CHECK(is_vertex_cover(g, vc.vertices));
    // exhaustive minimum
    std::size_t best = 8;
    for (unsigned mask = 0; mask < 256; ++mask) {
      std::vector<int> s;
      for (int v = 0; v < 8; ++v) {
        if (mask >> v & 1u) s.push_back(v);
      }
      if (s.size() < best && is_vertex_cover(g, s)) best = s.size();
    }
    CHECK(vc.vertices.size() == best);
  }
}

TEST_CASE("vertex cover partition") {
  CHECK(vc_partition(star(3), VertexCover{{0}}).classes == Classes{{0}, {1, 2, 3}});
  CHECK(vc_partition(path(4), VertexCover{{1, 2}}).classes == Classes{{0}, {1}, {2}, {3}});
  CHECK(vc_partition(Graph(3), VertexCover{}).classes == Classes{{0, 1, 2}});
  CHECK_THROWS_AS(vc_partition(path(4), VertexCover{{1}}), InputError);

  std::mt19937_64 rng(9);
  for (int rep = 0; rep < 60; ++rep) {
    const Graph g = fixtures::random_graph(rng, 8, 0.3);
    const VertexCover vc = min_vertex_cover(g);
    const NdPartition p = vc_partition(g, vc);
    CHECK(is_decomposition(g, p));
    const auto k = static_cast<int>(vc.vertices.size());
    CHECK(p.size() <= (1 << k) + k);
  }
}

TEST_CASE("uniform refinement") {
  const WeightedGraph s3(4, std::vector<WeightedEdge>{{0, 1, 1}, {0, 2, 1}, {0, 3, 2}});
  const NdPartition refined = refine_uniform(s3, vc_partition(s3.graph(), VertexCover{{0}}));
  CHECK(refined.classes == Classes{{0}, {1, 2}, {3}});
  CHECK(check_uniform(s3, refined).has_value());

  const WeightedGraph flat(star(3), 2);
  const NdPartition base = vc_partition(flat.graph(), VertexCover{{0}});
  CHECK(refine_uniform(flat, base).classes == base.classes);

  // a clique class whose internal weights disagree falls apart
  const WeightedGraph k3(3, std::vector<WeightedEdge>{{0, 1, 1}, {0, 2, 1}, {1, 2, 2}});
  const NdPartition split = refine_uniform(k3, nd_partition(k3.graph()));
  CHECK(split.size() == 3);
  CHECK(check_uniform(k3, split).has_value());

  std::mt19937_64 rng(13);
  for (int rep = 0; rep < 60; ++rep) {
    const WeightedGraph wg = fixtures::random_weights(rng, fixtures::random_graph(rng, 8, 0.3), 3);
    const NdPartition p = refine_uniform(wg, vc_partition(wg.graph(), min_vertex_cover(wg.graph())));
    CHECK(is_decomposition(wg.graph(), p));
    CHECK(check_uniform(wg, p).has_value());
  }
}

TEST_CASE("reclassify turns twins at distance two into cliques of the square") {
  const Graph sq = power_graph(star(3), 2);
  const NdPartition p = reclassify(sq, nd_partition(star(3)));
  CHECK(p.kinds == std::vector<ClassKind>{ClassKind::independent, ClassKind::clique});
  CHECK(is_decomposition(sq, p));
}
