#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "ndchan/errors.hpp"
#include "ndchan/shift_digraph.hpp"

using namespace ndchan;

namespace {

TypeGraph single_type(int loop_weight, int size = 1) {
  TypeGraph tg(1);
  tg.set_size(0, size);
  tg.set_loop(0, loop_weight);
  return tg;
}

// Reference check written against the definition, independent of window_is_valid.
bool run_ok(const TypeGraph& tg, const std::vector<TypeMask>& sets) {
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t j = 0; j < sets.size(); ++j) {
      for (int t = 0; t < tg.type_count(); ++t) {
        for (int r = 0; r < tg.type_count(); ++r) {
          if (!(sets[i] >> t & 1u) || !(sets[j] >> r & 1u) || !tg.adjacent(t, r)) continue;
          if (t == r && i == j) continue;
          const auto gap = static_cast<int>(i > j ? i - j : j - i);
          if (gap < tg.weight(t, r)) return false;
        }
      }
    }
  }
  return true;
}

TypeGraph random_reflexive(std::mt19937_64& rng, int tau, int wmax) {
  std::uniform_int_distribution<int> w(1, wmax);
  std::bernoulli_distribution coin(0.5);
  TypeGraph tg(tau);
  for (int t = 0; t < tau; ++t) {
    tg.set_loop(t, w(rng));
    for (int r = t + 1; r < tau; ++r) {
      if (coin(rng)) tg.set_edge(t, r, w(rng));
    }
  }
  return tg;
}

}  // namespace

TEST_CASE("window encoding round trip") {
  const std::vector<TypeMask> sets{0b01, 0b10, 0b11};
  const WindowCode code = encode_window(sets, 2);
  CHECK(code == (0b01u | 0b10u << 2 | 0b11u << 4));
  CHECK(decode_window(code, 2, 3) == sets);
}

TEST_CASE("single type with loop weight 2, window length 2") {
  const ShiftDigraph d = build_shift_digraph(single_type(2), 2);
  std::set<std::vector<TypeMask>> nodes;
  for (WindowCode c : d.nodes()) nodes.insert(decode_window(c, 1, 2));
  CHECK(nodes == std::set<std::vector<TypeMask>>{{0, 0}, {0, 1}, {1, 0}});
  CHECK(d.find(encode_window(std::vector<TypeMask>{1, 1}, 1)) == -1);

  const int empty_then_t = d.find(encode_window(std::vector<TypeMask>{0, 1}, 1));
  const int t_then_empty = d.find(encode_window(std::vector<TypeMask>{1, 0}, 1));
  bool forward = false;
  bool back_to_empty = false;
  for (const auto& e : d.edges()) {
    if (e.source == empty_then_t && e.target == t_then_empty) forward = true;
    if (e.source == empty_then_t && e.target == d.empty_node()) back_to_empty = true;
  }
  CHECK(forward);
  CHECK_FALSE(back_to_empty);
}

TEST_CASE("adjacent types never share a slot") {
  TypeGraph tg(2);
  tg.set_loop(0, 1);
  tg.set_loop(1, 1);
  tg.set_edge(0, 1, 1);
  const ShiftDigraph d = build_shift_digraph(tg, 1);
  CHECK(d.nodes() == std::vector<WindowCode>{0b00, 0b01, 0b10});
}

TEST_CASE("empty window is node 0 with a self-loop") {
  const ShiftDigraph d = build_shift_digraph(single_type(3), 3);
  CHECK(d.nodes()[static_cast<std::size_t>(d.empty_node())] == 0);
  bool self_loop = false;
  for (int e : d.out_edges(d.empty_node())) {
    self_loop |= d.edges()[static_cast<std::size_t>(e)].target == d.empty_node();
  }
  CHECK(self_loop);
}

TEST_CASE("zero-type digraph is a single node with a self-loop") {
  const ShiftDigraph d = build_shift_digraph(TypeGraph(0), 1);
  CHECK(d.node_count() == 1);
  CHECK(d.edge_count() == 1);
}

TEST_CASE("preconditions") {
  CHECK_THROWS_AS(build_shift_digraph(TypeGraph(2), 2), InputError);
  TypeGraph half(2);
  half.set_loop(0, 2);
  CHECK_THROWS_AS(build_shift_digraph(half, 2), InputError);
  CHECK_THROWS_AS(build_shift_digraph(single_type(2), 0), InputError);
  DigraphLimits tight;
  tight.max_nodes = 2;
  CHECK_THROWS_AS(build_shift_digraph(single_type(1), 3, tight), ResourceLimitExceeded);
}

TEST_CASE("nodes and edges match exhaustive enumeration") {
  std::mt19937_64 rng(31);
  for (int rep = 0; rep < 30; ++rep) {
    const int tau = 1 + rep % 2;
    const TypeGraph tg = random_reflexive(rng, tau, 3);
    for (int z = 1; z <= 3; ++z) {
      const ShiftDigraph d = build_shift_digraph(tg, z);
      std::vector<WindowCode> expected_nodes;
      const WindowCode total = WindowCode{1} << (tau * z);
      for (WindowCode c = 0; c < total; ++c) {
        if (run_ok(tg, decode_window(c, tau, z))) expected_nodes.push_back(c);
      }
      CHECK(d.nodes() == expected_nodes);

      std::size_t expected_edges = 0;
      for (WindowCode a : expected_nodes) {
        for (WindowCode b : expected_nodes) {
          auto wa = decode_window(a, tau, z);
          const auto wb = decode_window(b, tau, z);
          if (!std::equal(wa.begin() + 1, wa.end(), wb.begin())) continue;
          wa.push_back(wb.back());
          if (run_ok(tg, wa)) ++expected_edges;
        }
      }
      CHECK(d.edge_count() == expected_edges);
      for (const auto& e : d.edges()) {
        const auto wa = decode_window(d.nodes()[static_cast<std::size_t>(e.source)], tau, z);
        const auto wb = decode_window(d.nodes()[static_cast<std::size_t>(e.target)], tau, z);
        CHECK(std::equal(wa.begin() + 1, wa.end(), wb.begin()));
      }
    }
  }
}

TEST_CASE("random closed walks from the empty window decode to valid sequences") {
  std::mt19937_64 rng(37);
  for (int rep = 0; rep < 40; ++rep) {
    const int tau = 1 + rep % 3;
    const TypeGraph tg = random_reflexive(rng, tau, 3);
    const int z = tg.max_weight();
    const ShiftDigraph d = build_shift_digraph(tg, z);
    // random walk of 12 steps, then z steps of empty sets lead back home
    std::vector<TypeMask> seq;
    int node = d.empty_node();
    for (int step = 0; step < 12; ++step) {
      const auto& outs = d.out_edges(node);
      std::uniform_int_distribution<std::size_t> pick(0, outs.size() - 1);
      node = d.edges()[static_cast<std::size_t>(outs[pick(rng)])].target;
      seq.push_back(d.slot(node, z - 1));
    }
    for (int step = 0; step < z; ++step) {
      int next = -1;
      for (int e : d.out_edges(node)) {
        const int target = d.edges()[static_cast<std::size_t>(e)].target;
        if (d.slot(target, z - 1) == 0) next = target;
      }
      REQUIRE(next >= 0);
      node = next;
    }
    CHECK(node == d.empty_node());
    CHECK(run_ok(tg, seq));
  }
}

TEST_CASE("edge list dump") {
  const ShiftDigraph d = build_shift_digraph(single_type(2), 2);
  std::ostringstream out;
  write_edge_list(d, out);
  std::istringstream lines(out.str());
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    if (!line.empty() && line[0] != '#') ++count;
  }
  CHECK(count == static_cast<int>(d.edge_count()));
}
