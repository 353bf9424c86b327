#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ndchan/ca_solver.hpp"
#include "ndchan/decomposition.hpp"
#include "ndchan/errors.hpp"
#include "ndchan/instance_io.hpp"
#include "ndchan/oracle.hpp"
#include "ndchan/reduction.hpp"

namespace {

using namespace ndchan;

enum Exit : int { kFeasible = 0, kInfeasible = 1, kInputError = 2, kGuardTripped = 3, kInternal = 4 };

struct Args {
  std::string instance;
  std::optional<std::int64_t> lambda;
  bool minimize = false;
  std::string route = "auto";
  bool verify = false;
  std::string dump_digraph;
  std::string dump_ilp;
  std::string p;
  std::string labels;
  bool nd = false;
  double oracle_space = 1e8;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

InstanceFile load(const Args& a) {
  if (a.instance == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return parse_instance(buf.str());
  }
  return parse_instance(read_file(a.instance));
}

std::vector<std::int64_t> parse_int_list(const std::string& text, const std::string& what) {
  std::vector<std::int64_t> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoll(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw InputError(what + ": '" + item + "' is not an integer");
    }
  }
  if (out.empty()) throw InputError(what + ": empty list");
  return out;
}

std::optional<DistanceConstraints> constraints_of(const Args& a, const InstanceFile& inst) {
  if (!a.p.empty()) {
    std::vector<int> values;
    for (auto x : parse_int_list(a.p, "--p")) {
      if (x < 1 || x > 1'000'000'000) throw InputError("--p: entries must be positive");
      values.push_back(static_cast<int>(x));
    }
    return DistanceConstraints(std::move(values));
  }
  return inst.constraints();
}

std::uint64_t iteration_cap_from_env() {
  const char* raw = std::getenv("NDCHAN_ITER_CAP");
  if (raw == nullptr || *raw == '\0') return 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(raw, &end, 10);
  if (*end != '\0' || v == 0 || raw[0] == '-') throw InputError("NDCHAN_ITER_CAP must be a positive integer");
  return v;
}

class Dumps {
 public:
  explicit Dumps(const Args& a) {
    if (!a.dump_digraph.empty()) digraph_ = open(a.dump_digraph);
    if (!a.dump_ilp.empty()) ilp_ = open(a.dump_ilp);
  }

  SolverOptions options() const {
    SolverOptions o;
    o.flow.iteration_cap = iteration_cap_from_env();
    o.flow.dump_ilp = ilp_ ? ilp_.get() : nullptr;
    o.dump_digraph = digraph_ ? digraph_.get() : nullptr;
    return o;
  }

 private:
  static std::unique_ptr<std::ofstream> open(const std::string& path) {
    auto f = std::make_unique<std::ofstream>(path);
    if (!*f) throw InputError("cannot write " + path);
    return f;
  }

  std::unique_ptr<std::ofstream> digraph_;
  std::unique_ptr<std::ofstream> ilp_;
};

Route parse_route(const std::string& r) {
  if (r == "uniform") return Route::uniform;
  if (r == "vc") return Route::vc;
  return Route::automatic;
}

NdPartition partition_for(const WeightedGraph& wg, Route route) {
  switch (route) {
    case Route::uniform: {
      NdPartition p = nd_partition(wg.graph());
      if (!check_uniform(wg, p)) throw InputError("weights are not uniform on the neighborhood-diversity classes; try --route vc");
      return p;
    }
    case Route::vc:
      return vc_refined_partition(wg);
    case Route::automatic:
      break;
  }
  NdPartition p = nd_partition(wg.graph());
  return check_uniform(wg, p) ? p : vc_refined_partition(wg);
}

std::int64_t elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
}

void check_or_die(const WeightedGraph& wg, const Labeling& l) {
  const Verdict v = verify_assignment(wg, l);
  if (!v) {
    throw InternalError("--verify: emitted labeling violates " + std::to_string(v.violated_edges.size()) +
                        " edge(s) and " + std::to_string(v.out_of_range.size()) + " range bound(s)");
  }
}

int report_span(const WeightedGraph& wg, const SpanResult& r, bool verify, std::int64_t ms) {
  if (verify) check_or_die(wg, r.labeling);
  ResultReport rep;
  rep.feasible = true;
  rep.lambda = r.lambda_min;
  rep.lambda_min = r.lambda_min;
  rep.labels = r.labeling.labels;
  rep.stats = r.stats;
  rep.solve_ms = ms;
  std::cout << emit_result(rep) << '\n';
  return kFeasible;
}

int report_decision(const WeightedGraph& wg, const CaResult& r, std::int64_t lambda, bool verify, std::int64_t ms) {
  if (verify && r.labeling) check_or_die(wg, *r.labeling);
  ResultReport rep;
  rep.feasible = r.labeling.has_value();
  rep.lambda = lambda;
  if (r.labeling) rep.labels = r.labeling->labels;
  rep.stats = r.stats;
  rep.solve_ms = ms;
  std::cout << emit_result(rep) << '\n';
  return rep.feasible ? kFeasible : kInfeasible;
}

std::int64_t required_lambda(const Args& a, const InstanceFile& inst) {
  if (a.lambda) return *a.lambda;
  if (inst.lambda) return *inst.lambda;
  throw InputError("no span given: pass --lambda, set \"lambda\" in the instance, or use --minimize");
}

int cmd_solve(const Args& a) {
  const InstanceFile inst = load(a);
  const WeightedGraph wg = inst.weighted_graph();
  const Dumps dumps(a);
  const auto t0 = std::chrono::steady_clock::now();
  const Route route = parse_route(a.route);
  const NdPartition p = partition_for(wg, route);
  if (a.minimize) {
    const SpanResult r = minimize_span(wg, Route::uniform, p, dumps.options());
    return report_span(wg, r, a.verify, elapsed_ms(t0));
  }
  const std::int64_t lambda = required_lambda(a, inst);
  if (lambda < 0) throw InputError("--lambda must be nonnegative");
  const CaResult r = solve_ca_uniform(wg, p, lambda, dumps.options());
  return report_decision(wg, r, lambda, a.verify, elapsed_ms(t0));
}

int cmd_label(const Args& a) {
  const InstanceFile inst = load(a);
  const auto p = constraints_of(a, inst);
  if (!p) throw InputError("no distance constraints: pass --p or set \"p\" in the instance");
  const Graph g = inst.graph();
  const WeightedGraph reduced = labeling_to_ca(g, *p);
  const Dumps dumps(a);
  const auto t0 = std::chrono::steady_clock::now();
  if (a.minimize) {
    const SpanResult r = minimize_labeling_span(g, *p, dumps.options());
    return report_span(reduced, r, a.verify, elapsed_ms(t0));
  }
  const std::int64_t lambda = required_lambda(a, inst);
  if (lambda < 0) throw InputError("--lambda must be nonnegative");
  const CaResult r = solve_labeling(g, *p, lambda, dumps.options());
  return report_decision(reduced, r, lambda, a.verify, elapsed_ms(t0));
}

nlohmann::ordered_json partition_json(const NdPartition& p) {
  nlohmann::ordered_json out;
  out["nd"] = p.size();
  out["classes"] = p.classes;
  std::vector<std::string> kinds;
  for (auto k : p.kinds) kinds.emplace_back(k == ClassKind::clique ? "clique" : "independent");
  out["kinds"] = kinds;
  return out;
}

int cmd_nd(const Args& a) {
  const InstanceFile inst = load(a);
  const WeightedGraph wg = inst.weighted_graph();
  const NdPartition p = nd_partition(wg.graph());
  nlohmann::ordered_json out = partition_json(p);
  out["uniform"] = check_uniform(wg, p).has_value();
  const VertexCover vc = min_vertex_cover(wg.graph());
  out["vc"] = vc.vertices.size();
  out["refined_classes"] = refine_uniform(wg, vc_partition(wg.graph(), vc)).size();
  std::cout << out.dump() << '\n';
  return kFeasible;
}

int cmd_reduce(const Args& a) {
  const InstanceFile inst = load(a);
  const auto p = constraints_of(a, inst);
  if (!p) throw InputError("no distance constraints: pass --p or set \"p\" in the instance");
  const WeightedGraph reduced = labeling_to_ca(inst.graph(), *p);
  InstanceFile out;
  out.n = reduced.vertex_count();
  out.edges = reduced.edges();
  out.lambda = a.lambda ? a.lambda : inst.lambda;
  std::cout << serialize_instance(out) << '\n';
  return kFeasible;
}

int cmd_oracle(const Args& a) {
  const InstanceFile inst = load(a);
  oracle::OracleLimits limits;
  limits.max_search_space = a.oracle_space;
  if (a.nd) {
    nlohmann::ordered_json out;
    out["nd"] = oracle::brute_force_nd(inst.graph(), limits);
    std::cout << out.dump() << '\n';
    return kFeasible;
  }
  const auto p = constraints_of(a, inst);
  const WeightedGraph wg = p ? labeling_to_ca(inst.graph(), *p) : inst.weighted_graph();
  const auto t0 = std::chrono::steady_clock::now();
  ResultReport rep;
  if (a.minimize) {
    rep.lambda = oracle::brute_force_min_span(wg, limits);
    rep.lambda_min = rep.lambda;
  } else {
    rep.lambda = required_lambda(a, inst);
  }
  const auto found = oracle::brute_force_ca(wg, rep.lambda, limits);
  rep.feasible = found.has_value();
  if (found) rep.labels = found->labels;
  rep.stats.nd = nd_partition(wg.graph()).size();
  rep.solve_ms = elapsed_ms(t0);
  std::cout << emit_result(rep) << '\n';
  return rep.feasible ? kFeasible : kInfeasible;
}

int cmd_verify(const Args& a) {
  const InstanceFile inst = load(a);
  const auto p = constraints_of(a, inst);
  const WeightedGraph wg = p ? labeling_to_ca(inst.graph(), *p) : inst.weighted_graph();
  Labeling l;
  l.labels = parse_int_list(a.labels, "--labels");
  if (static_cast<int>(l.labels.size()) != inst.n) {
    throw InputError("--labels: expected " + std::to_string(inst.n) + " labels, got " + std::to_string(l.labels.size()));
  }
  // without an explicit span only the separations are checked
  l.lambda = a.lambda ? *a.lambda : inst.lambda ? *inst.lambda : *std::max_element(l.labels.begin(), l.labels.end());
  const Verdict v = verify_assignment(wg, l);
  nlohmann::ordered_json out;
  out["ok"] = v.ok;
  auto& bad = out["violated_edges"] = nlohmann::ordered_json::array();
  for (const Edge& e : v.violated_edges) bad.push_back({e.u, e.v});
  out["out_of_range"] = v.out_of_range;
  std::cout << out.dump() << '\n';
  return v.ok ? kFeasible : kInfeasible;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact channel assignment and L(p)-labeling on graphs of bounded neighborhood diversity"};
  app.require_subcommand(1);
  Args a;

  auto add_instance = [&](CLI::App* sub) {
    sub->add_option("--instance", a.instance, "Instance file (JSON or DIMACS-like), '-' for stdin")->required();
  };
  auto add_solve_flags = [&](CLI::App* sub) {
    sub->add_option("--lambda", a.lambda, "Span to decide (overrides the instance)");
    sub->add_flag("--minimize", a.minimize, "Find the least feasible span");
    sub->add_flag("--verify", a.verify, "Re-check the emitted labeling");
    sub->add_option("--dump-digraph", a.dump_digraph, "Write shift-digraph edge lists to this file");
    sub->add_option("--dump-ilp", a.dump_ilp, "Write flow models and cuts to this file");
  };

  auto* solve = app.add_subcommand("solve", "Channel Assignment on a weighted instance");
  add_instance(solve);
  add_solve_flags(solve);
  solve->add_option("--route", a.route, "Decomposition: uniform, vc or auto")
      ->check(CLI::IsMember({"uniform", "vc", "auto"}));

  auto* label = app.add_subcommand("label", "L(p1,...,pk)-labeling of an unweighted instance");
  add_instance(label);
  add_solve_flags(label);
  label->add_option("--p", a.p, "Distance constraints, e.g. 2,1");

  auto* nd = app.add_subcommand("nd", "Neighborhood-diversity decomposition and vertex cover summary");
  add_instance(nd);

  auto* reduce = app.add_subcommand("reduce", "Print the Channel Assignment instance of an L(p) problem");
  add_instance(reduce);
  reduce->add_option("--p", a.p, "Distance constraints, e.g. 2,1");
  reduce->add_option("--lambda", a.lambda, "Span recorded in the output");

  auto* orc = app.add_subcommand("oracle", "Brute-force reference answers");
  add_instance(orc);
  orc->add_option("--lambda", a.lambda, "Span to decide");
  orc->add_flag("--minimize", a.minimize, "Least feasible span");
  orc->add_option("--p", a.p, "Distance constraints; solve the reduced instance");
  orc->add_flag("--nd", a.nd, "Minimum decomposition size by partition enumeration");
  orc->add_option("--max-space", a.oracle_space, "Refuse when (lambda+1)^n exceeds this");

  auto* ver = app.add_subcommand("verify", "Check a labeling against an instance");
  add_instance(ver);
  ver->add_option("--labels", a.labels, "Comma-separated labels, vertex order")->required();
  ver->add_option("--lambda", a.lambda, "Span bound");
  ver->add_option("--p", a.p, "Distance constraints; check the L(p) condition");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  try {
    if (*solve) return cmd_solve(a);
    if (*label) return cmd_label(a);
    if (*nd) return cmd_nd(a);
    if (*reduce) return cmd_reduce(a);
    if (*orc) return cmd_oracle(a);
    if (*ver) return cmd_verify(a);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const ResourceLimitExceeded& e) {
    std::cerr << "resource guard: " << e.what() << '\n';
    return kGuardTripped;
  } catch (const IterationCapExceeded& e) {
    std::cerr << "resource guard: " << e.what() << '\n';
    return kGuardTripped;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kInputError;
}
