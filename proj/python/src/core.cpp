#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <tuple>
#include <vector>

#include "ndchan/ca_solver.hpp"
#include "ndchan/decomposition.hpp"
#include "ndchan/errors.hpp"
#include "ndchan/instance_io.hpp"
#include "ndchan/oracle.hpp"
#include "ndchan/reduction.hpp"

namespace py = pybind11;
using namespace ndchan;

namespace {

Graph make_graph(int n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<Edge> e;
  e.reserve(edges.size());
  for (auto [u, v] : edges) e.push_back({u, v});
  return Graph(n, e);
}

WeightedGraph make_weighted(int n, const std::vector<std::tuple<int, int, int>>& edges) {
  std::vector<WeightedEdge> e;
  e.reserve(edges.size());
  for (auto [u, v, w] : edges) e.push_back({u, v, w});
  return WeightedGraph(n, e);
}

Route parse_route(const std::string& name) {
  if (name == "uniform") return Route::uniform;
  if (name == "vc") return Route::vc;
  if (name == "auto") return Route::automatic;
  throw InputError("route must be 'uniform', 'vc' or 'auto'");
}

SolverOptions options_with_cap(std::uint64_t cap) {
  SolverOptions o;
  o.flow.iteration_cap = cap;
  return o;
}

CaResult solve_routed(const WeightedGraph& wg, std::int64_t lambda, const std::string& route, std::uint64_t cap) {
  const SolverOptions o = options_with_cap(cap);
  switch (parse_route(route)) {
    case Route::uniform:
      return solve_ca_uniform(wg, nd_partition(wg.graph()), lambda, o);
    case Route::vc:
      return solve_ca_vc(wg, lambda, o);
    case Route::automatic:
      break;
  }
  const NdPartition p = nd_partition(wg.graph());
  if (check_uniform(wg, p)) return solve_ca_uniform(wg, p, lambda, o);
  return solve_ca_vc(wg, lambda, o);
}

py::dict stats_dict(const SolveStats& s) {
  py::dict d;
  d["nd"] = s.nd;
  d["types"] = s.types;
  d["digraph_nodes"] = s.digraph_nodes;
  d["digraph_edges"] = s.digraph_edges;
  d["cuts_added"] = s.cuts_added;
  d["flow_iterations"] = s.flow_iterations;
  d["ilp_nodes"] = s.ilp_nodes;
  d["probes"] = s.probes;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Channel assignment and L(p)-labeling on graphs of bounded neighbourhood diversity";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  auto resource = py::register_exception<ResourceLimitExceeded>(m, "ResourceLimitExceeded", PyExc_RuntimeError);
  // translators run newest first, so the subclass goes last
  py::register_exception<InternalError>(m, "InternalError", PyExc_RuntimeError);
  py::register_exception<IterationCapExceeded>(m, "IterationCapExceeded", resource.ptr());

  py::class_<Graph>(m, "Graph")
      .def(py::init(&make_graph), py::arg("n"), py::arg("edges") = std::vector<std::pair<int, int>>{})
      .def_property_readonly("n", &Graph::vertex_count)
      .def_property_readonly("edges",
                             [](const Graph& g) {
                               std::vector<std::pair<int, int>> out;
                               for (const Edge& e : g.edges()) out.emplace_back(e.u, e.v);
                               return out;
                             })
      .def("adjacent", &Graph::adjacent)
      .def("neighbors", &Graph::neighbors)
      .def("components", &Graph::connected_components)
      .def("power", [](const Graph& g, int k) { return power_graph(g, k); }, py::arg("k"))
      .def("__repr__", [](const Graph& g) {
        return "Graph(n=" + std::to_string(g.vertex_count()) + ", edges=" + std::to_string(g.edge_count()) + ")";
      });

  py::class_<WeightedGraph>(m, "WeightedGraph")
      .def(py::init(&make_weighted), py::arg("n"), py::arg("edges") = std::vector<std::tuple<int, int, int>>{})
      .def(py::init<Graph, int>(), py::arg("graph"), py::arg("weight"))
      .def_property_readonly("n", &WeightedGraph::vertex_count)
      .def_property_readonly("graph", &WeightedGraph::graph)
      .def_property_readonly("wmax", &WeightedGraph::max_weight)
      .def_property_readonly("edges",
                             [](const WeightedGraph& wg) {
                               std::vector<std::tuple<int, int, int>> out;
                               for (const auto& e : wg.edges()) out.emplace_back(e.u, e.v, e.weight);
                               return out;
                             })
      .def("weight", &WeightedGraph::weight)
      .def("__repr__", [](const WeightedGraph& wg) {
        return "WeightedGraph(n=" + std::to_string(wg.vertex_count()) +
               ", edges=" + std::to_string(wg.graph().edge_count()) + ", wmax=" + std::to_string(wg.max_weight()) +
               ")";
      });

  py::enum_<ClassKind>(m, "ClassKind").value("clique", ClassKind::clique).value("independent", ClassKind::independent);

  py::class_<NdPartition>(m, "NdPartition")
      .def_readonly("classes", &NdPartition::classes)
      .def_readonly("kinds", &NdPartition::kinds)
      .def("__len__", &NdPartition::size);

  m.def("nd_partition", &nd_partition, py::arg("graph"));
  m.def("vc_refined_partition", &vc_refined_partition, py::arg("wg"));
  m.def("min_vertex_cover", [](const Graph& g) { return min_vertex_cover(g).vertices; }, py::arg("graph"));
  m.def("is_uniform", [](const WeightedGraph& wg) { return check_uniform(wg, nd_partition(wg.graph())).has_value(); },
        py::arg("wg"), "True when the weights are uniform on the minimum neighbourhood decomposition.");

  m.def(
      "labeling_to_ca", [](const Graph& g, std::vector<int> p) { return labeling_to_ca(g, DistanceConstraints(std::move(p))); },
      py::arg("graph"), py::arg("p"));

  m.def(
      "verify",
      [](const WeightedGraph& wg, std::vector<std::int64_t> labels, std::int64_t lambda) {
        const Verdict v = verify_assignment(wg, Labeling{std::move(labels), lambda});
        std::vector<std::pair<int, int>> bad;
        for (const Edge& e : v.violated_edges) bad.emplace_back(e.u, e.v);
        py::dict d;
        d["ok"] = v.ok;
        d["violated_edges"] = bad;
        d["out_of_range"] = v.out_of_range;
        return d;
      },
      py::arg("wg"), py::arg("labels"), py::arg("lambda_"));

  m.def(
      "solve",
      [](const WeightedGraph& wg, std::int64_t lambda, const std::string& route, std::uint64_t cap) {
        CaResult r = solve_routed(wg, lambda, route, cap);
        py::dict d;
        d["feasible"] = r.labeling.has_value();
        d["labels"] = r.labeling ? py::cast(r.labeling->labels) : py::none();
        d["stats"] = stats_dict(r.stats);
        return d;
      },
      py::arg("wg"), py::arg("lambda_"), py::arg("route") = "auto", py::arg("iteration_cap") = 0,
      "Decides whether wg has a channel assignment of span at most lambda_.");

  m.def(
      "minimize",
      [](const WeightedGraph& wg, const std::string& route, std::uint64_t cap) {
        SpanResult r = minimize_span(wg, parse_route(route), std::nullopt, options_with_cap(cap));
        py::dict d;
        d["lambda_min"] = r.lambda_min;
        d["labels"] = r.labeling.labels;
        d["stats"] = stats_dict(r.stats);
        return d;
      },
      py::arg("wg"), py::arg("route") = "auto", py::arg("iteration_cap") = 0);

  m.def(
      "solve_labeling",
      [](const Graph& g, std::vector<int> p, std::int64_t lambda, std::uint64_t cap) {
        CaResult r = solve_labeling(g, DistanceConstraints(std::move(p)), lambda, options_with_cap(cap));
        py::dict d;
        d["feasible"] = r.labeling.has_value();
        d["labels"] = r.labeling ? py::cast(r.labeling->labels) : py::none();
        d["stats"] = stats_dict(r.stats);
        return d;
      },
      py::arg("graph"), py::arg("p"), py::arg("lambda_"), py::arg("iteration_cap") = 0);

  m.def(
      "minimize_labeling",
      [](const Graph& g, std::vector<int> p, std::uint64_t cap) {
        SpanResult r = minimize_labeling_span(g, DistanceConstraints(std::move(p)), options_with_cap(cap));
        py::dict d;
        d["lambda_min"] = r.lambda_min;
        d["labels"] = r.labeling.labels;
        d["stats"] = stats_dict(r.stats);
        return d;
      },
      py::arg("graph"), py::arg("p"), py::arg("iteration_cap") = 0);

  auto oracle = m.def_submodule("oracle", "Exhaustive reference solvers for small instances");
  oracle.def(
      "brute_force_ca",
      [](const WeightedGraph& wg, std::int64_t lambda, double max_space) -> std::optional<std::vector<std::int64_t>> {
        oracle::OracleLimits limits;
        limits.max_search_space = max_space;
        auto r = oracle::brute_force_ca(wg, lambda, limits);
        if (!r) return std::nullopt;
        return r->labels;
      },
      py::arg("wg"), py::arg("lambda_"), py::arg("max_space") = 1e8);
  oracle.def(
      "min_span",
      [](const WeightedGraph& wg, double max_space) {
        oracle::OracleLimits limits;
        limits.max_search_space = max_space;
        return oracle::brute_force_min_span(wg, limits);
      },
      py::arg("wg"), py::arg("max_space") = 1e8);
  oracle.def("nd", [](const Graph& g) { return oracle::brute_force_nd(g); }, py::arg("graph"));

  m.def(
      "parse_instance",
      [](const std::string& text) {
        const InstanceFile f = parse_instance(text);
        py::dict d;
        d["wg"] = f.weighted_graph();
        d["lambda"] = f.lambda ? py::cast(*f.lambda) : py::none();
        d["p"] = f.p ? py::cast(*f.p) : py::none();
        return d;
      },
      py::arg("text"), "Parses a JSON or DIMACS-like instance into {'wg', 'lambda', 'p'}.");
}
