#include "ndchan/decomposition.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "ndchan/errors.hpp"

namespace ndchan {

std::vector<int> NdPartition::class_of(int vertex_count) const {
  std::vector<int> owner(static_cast<std::size_t>(vertex_count), -1);
  for (std::size_t c = 0; c < classes.size(); ++c) {
    for (int v : classes[c]) {
      if (v >= 0 && v < vertex_count) owner[static_cast<std::size_t>(v)] = static_cast<int>(c);
    }
  }
  return owner;
}

TypeGraph::TypeGraph(int type_count)
    : tau_(type_count),
      sizes_(static_cast<std::size_t>(type_count), 1),
      adj_(static_cast<std::size_t>(type_count) * static_cast<std::size_t>(type_count), 0),
      w_(adj_.size(), 0) {}

int TypeGraph::max_weight() const {
  int best = 1;
  if (weighted_) {
    for (int x : w_) best = std::max(best, x);
  }
  return best;
}

bool TypeGraph::reflexive() const {
  for (int t = 0; t < tau_; ++t) {
    if (!has_loop(t)) return false;
  }
  return true;
}

void TypeGraph::set_loop(int t, int weight) { set_edge(t, t, weight); }

void TypeGraph::set_edge(int t, int r, int weight) {
  if (t < 0 || r < 0 || t >= tau_ || r >= tau_) throw InputError("type index out of range");
  adj_[cell(t, r)] = adj_[cell(r, t)] = 1;
  if (weight > 0) {
    weighted_ = true;
    w_[cell(t, r)] = w_[cell(r, t)] = weight;
  }
}

bool is_decomposition(const Graph& g, const NdPartition& p) {
  const int n = g.vertex_count();
  if (p.kinds.size() != p.classes.size()) return false;
  std::vector<int> owner(static_cast<std::size_t>(n), -1);
  for (std::size_t c = 0; c < p.classes.size(); ++c) {
    if (p.classes[c].empty()) return false;
    for (int v : p.classes[c]) {
      if (v < 0 || v >= n || owner[static_cast<std::size_t>(v)] >= 0) return false;
      owner[static_cast<std::size_t>(v)] = static_cast<int>(c);
    }
  }
  if (std::find(owner.begin(), owner.end(), -1) != owner.end()) return false;

  for (std::size_t c = 0; c < p.classes.size(); ++c) {
    const auto& members = p.classes[c];
    const bool clique = p.kinds[c] == ClassKind::clique;
    if (clique && members.size() < 2) return false;
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        if (g.adjacent(members[i], members[j]) != clique) return false;
      }
    }
  }
  for (std::size_t a = 0; a < p.classes.size(); ++a) {
    for (std::size_t b = a + 1; b < p.classes.size(); ++b) {
      const bool joined = g.adjacent(p.classes[a].front(), p.classes[b].front());
      for (int u : p.classes[a]) {
        for (int v : p.classes[b]) {
          if (g.adjacent(u, v) != joined) return false;
        }
      }
    }
  }
  return true;
}

namespace {

// N(u) \ {v} == N(v) \ {u}
bool twins(const Graph& g, int u, int v) {
  for (int x = 0; x < g.vertex_count(); ++x) {
    if (x == u || x == v) continue;
    if (g.adjacent(u, x) != g.adjacent(v, x)) return false;
  }
  return true;
}

NdPartition sorted_partition(std::vector<std::vector<int>> classes, const Graph& g) {
  for (auto& c : classes) std::sort(c.begin(), c.end());
  std::sort(classes.begin(), classes.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  NdPartition p;
  p.kinds.reserve(classes.size());
  for (const auto& c : classes) {
    p.kinds.push_back(c.size() >= 2 && g.adjacent(c[0], c[1]) ? ClassKind::clique : ClassKind::independent);
  }
  p.classes = std::move(classes);
  return p;
}

}  // namespace

NdPartition nd_partition(const Graph& g) {
  std::vector<std::vector<int>> classes;
  for (int v = 0; v < g.vertex_count(); ++v) {
    auto it = std::find_if(classes.begin(), classes.end(),
                           [&](const std::vector<int>& c) { return twins(g, c.front(), v); });
    if (it == classes.end()) {
      classes.push_back({v});
    } else {
      it->push_back(v);
    }
  }
  return sorted_partition(std::move(classes), g);
}

NdPartition reclassify(const Graph& g, NdPartition p) {
  p.kinds.resize(p.classes.size());
  for (std::size_t c = 0; c < p.classes.size(); ++c) {
    const auto& m = p.classes[c];
    p.kinds[c] = m.size() >= 2 && g.adjacent(m[0], m[1]) ? ClassKind::clique : ClassKind::independent;
  }
  return p;
}

TypeGraph type_graph(const Graph& g, const NdPartition& p) {
  if (!is_decomposition(g, p)) throw InputError("partition violates the decomposition axioms");
  TypeGraph tg(p.size());
  for (int t = 0; t < p.size(); ++t) {
    tg.set_size(t, static_cast<int>(p.classes[static_cast<std::size_t>(t)].size()));
    if (p.kinds[static_cast<std::size_t>(t)] == ClassKind::clique) tg.set_loop(t);
    for (int r = t + 1; r < p.size(); ++r) {
      if (g.adjacent(p.classes[static_cast<std::size_t>(t)].front(), p.classes[static_cast<std::size_t>(r)].front())) {
        tg.set_edge(t, r);
      }
    }
  }
  return tg;
}

std::optional<TypeGraph> check_uniform(const WeightedGraph& wg, const NdPartition& p) {
  const Graph& g = wg.graph();
  TypeGraph tg = type_graph(g, p);
  const int tau = p.size();
  for (int t = 0; t < tau; ++t) {
    for (int r = t; r < tau; ++r) {
      if (!tg.adjacent(t, r)) continue;
      int common = 0;
      for (int u : p.classes[static_cast<std::size_t>(t)]) {
        for (int v : p.classes[static_cast<std::size_t>(r)]) {
          if (u == v) continue;
          const int w = wg.weight(u, v);
          if (common == 0) {
            common = w;
          } else if (w != common) {
            return std::nullopt;
          }
        }
      }
      tg.set_edge(t, r, common);
    }
  }
  return tg;
}

bool is_vertex_cover(const Graph& g, std::span<const int> vertices) {
  std::vector<char> in(static_cast<std::size_t>(g.vertex_count()), 0);
  for (int v : vertices) {
    if (v < 0 || v >= g.vertex_count()) return false;
    in[static_cast<std::size_t>(v)] = 1;
  }
  return std::all_of(g.edges().begin(), g.edges().end(), [&](const Edge& e) {
    return in[static_cast<std::size_t>(e.u)] != 0 || in[static_cast<std::size_t>(e.v)] != 0;
  });
}

namespace {

class CoverSearch {
 public:
  explicit CoverSearch(const Graph& g) : g_(g), in_(static_cast<std::size_t>(g.vertex_count()), 0) {}

  std::vector<int> run() {
    best_ = greedy_matching_cover();
    std::vector<int> current;
    branch(current);
    std::sort(best_.begin(), best_.end());
    return best_;
  }

 private:
  // Both endpoints of a maximal matching: a cover at most twice the optimum.
  std::vector<int> greedy_matching_cover() const {
    std::vector<char> used(static_cast<std::size_t>(g_.vertex_count()), 0);
    std::vector<int> cover;
    for (const Edge& e : g_.edges()) {
      if (used[static_cast<std::size_t>(e.u)] == 0 && used[static_cast<std::size_t>(e.v)] == 0) {
        used[static_cast<std::size_t>(e.u)] = used[static_cast<std::size_t>(e.v)] = 1;
        cover.push_back(e.u);
        cover.push_back(e.v);
      }
    }
    return cover;
  }

  void branch(std::vector<int>& current) {
    if (current.size() >= best_.size()) return;
    const Edge* open = nullptr;
    for (const Edge& e : g_.edges()) {
      if (in_[static_cast<std::size_t>(e.u)] == 0 && in_[static_cast<std::size_t>(e.v)] == 0) {
        open = &e;
        break;
      }
    }
    if (open == nullptr) {
      best_ = current;
      return;
    }
    for (int v : {open->u, open->v}) {
      in_[static_cast<std::size_t>(v)] = 1;
      current.push_back(v);
      branch(current);
      current.pop_back();
      in_[static_cast<std::size_t>(v)] = 0;
    }
  }

  const Graph& g_;
  std::vector<char> in_;
  std::vector<int> best_;
};

}  // namespace

VertexCover min_vertex_cover(const Graph& g) { return VertexCover{CoverSearch(g).run()}; }

NdPartition vc_partition(const Graph& g, const VertexCover& cover) {
  if (!is_vertex_cover(g, cover.vertices)) throw InputError("vertex set is not a vertex cover");
  std::vector<char> in(static_cast<std::size_t>(g.vertex_count()), 0);
  std::vector<std::vector<int>> classes;
  for (int u : cover.vertices) {
    if (in[static_cast<std::size_t>(u)] != 0) throw InputError("duplicate vertex in cover");
    in[static_cast<std::size_t>(u)] = 1;
    classes.push_back({u});
  }
  // Independent vertices have all their neighbours in the cover, so N(v) is exactly X.
  std::map<std::vector<int>, std::vector<int>> by_neighborhood;
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (in[static_cast<std::size_t>(v)] == 0) by_neighborhood[g.neighbors(v)].push_back(v);
  }
  for (auto& [x, members] : by_neighborhood) classes.push_back(std::move(members));

  NdPartition p;
  std::sort(classes.begin(), classes.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  p.kinds.assign(classes.size(), ClassKind::independent);
  p.classes = std::move(classes);
  return p;
}

NdPartition refine_uniform(const WeightedGraph& wg, const NdPartition& p) {
  const Graph& g = wg.graph();
  const auto owner = p.class_of(g.vertex_count());
  std::vector<std::vector<int>> out;
  std::vector<ClassKind> kinds;

  for (std::size_t c = 0; c < p.classes.size(); ++c) {
    const auto& members = p.classes[c];
    // signature: (neighbour outside the class, weight) in neighbour order
    std::map<std::vector<std::pair<int, int>>, std::vector<int>> groups;
    for (int v : members) {
      std::vector<std::pair<int, int>> sig;
      for (int x : g.neighbors(v)) {
        if (owner[static_cast<std::size_t>(x)] != static_cast<int>(c)) sig.emplace_back(x, wg.weight(v, x));
      }
      groups[sig].push_back(v);
    }

    if (p.kinds[c] == ClassKind::clique) {
      bool keep = groups.size() == 1;
      for (std::size_t i = 0; keep && i < members.size(); ++i) {
        for (std::size_t j = i + 1; j < members.size(); ++j) {
          if (wg.weight(members[i], members[j]) != wg.weight(members[0], members[1])) {
            keep = false;
            break;
          }
        }
      }
      if (keep) {
        out.push_back(members);
        kinds.push_back(ClassKind::clique);
      } else {
        for (int v : members) {
          out.push_back({v});
          kinds.push_back(ClassKind::independent);
        }
      }
      continue;
    }
    for (auto& [sig, group] : groups) {
      out.push_back(std::move(group));
      kinds.push_back(ClassKind::independent);
    }
  }

  std::vector<std::size_t> order(out.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (auto& c : out) std::sort(c.begin(), c.end());
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return out[a].front() < out[b].front(); });
  NdPartition refined;
  for (std::size_t i : order) {
    refined.classes.push_back(std::move(out[i]));
    refined.kinds.push_back(kinds[i]);
  }
  return refined;
}

}  // namespace ndchan
