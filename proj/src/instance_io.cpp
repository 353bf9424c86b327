#include "ndchan/instance_io.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "json.hpp"
#include "ndchan/errors.hpp"

namespace ndchan {

using nlohmann::json;

Graph InstanceFile::graph() const {
  std::vector<Edge> plain;
  plain.reserve(edges.size());
  for (const auto& e : edges) plain.push_back({e.u, e.v});
  return Graph(n, plain);
}

std::optional<DistanceConstraints> InstanceFile::constraints() const {
  if (!p) return std::nullopt;
  return DistanceConstraints(*p);
}

namespace {

class EdgeChecker {
 public:
  explicit EdgeChecker(int n) : n_(n) {}

  // Returns an empty string when the edge is acceptable.
  std::string check(int u, int v, long long w) {
    if (u < 0 || u >= n_ || v < 0 || v >= n_) {
      return "vertex id out of range [0, " + std::to_string(n_) + ")";
    }
    if (u == v) return "self-loop at vertex " + std::to_string(u);
    if (w < 1) return "weight " + std::to_string(w) + " must be at least 1";
    if (!seen_.insert({std::min(u, v), std::max(u, v)}).second) {
      return "duplicate edge (" + std::to_string(u) + ", " + std::to_string(v) + ")";
    }
    return {};
  }

 private:
  int n_;
  std::set<std::pair<int, int>> seen_;
};

int line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

long long integer_field(const json& value, const std::string& where) {
  if (!value.is_number_integer()) throw InputError(where + ": expected an integer");
  return value.get<long long>();
}

InstanceFile parse_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw InputError("line " + std::to_string(line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1)) +
                     ": malformed JSON (" + e.what() + ")");
  }
  if (!doc.is_object()) throw InputError("instance: expected a JSON object");
  InstanceFile inst;
  if (!doc.contains("n")) throw InputError("n: missing field");
  const long long n = integer_field(doc["n"], "n");
  if (n < 0 || n > 1'000'000) throw InputError("n: vertex count out of range");
  inst.n = static_cast<int>(n);

  if (!doc.contains("edges")) throw InputError("edges: missing field");
  const json& edges = doc["edges"];
  if (!edges.is_array()) throw InputError("edges: expected an array");
  EdgeChecker checker(inst.n);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string where = "edges[" + std::to_string(i) + "]";
    const json& e = edges[i];
    if (!e.is_array() || (e.size() != 2 && e.size() != 3)) throw InputError(where + ": expected [u, v] or [u, v, w]");
    const long long u = integer_field(e[0], where + "[0]");
    const long long v = integer_field(e[1], where + "[1]");
    const long long w = e.size() == 3 ? integer_field(e[2], where + "[2]") : 1;
    if (u < 0 || v < 0 || u >= inst.n || v >= inst.n) throw InputError(where + ": vertex id out of range [0, " + std::to_string(inst.n) + ")");
    if (w > 1'000'000'000) throw InputError(where + ": weight too large");
    if (auto err = checker.check(static_cast<int>(u), static_cast<int>(v), w); !err.empty()) {
      throw InputError(where + ": " + err);
    }
    inst.edges.push_back({static_cast<int>(u), static_cast<int>(v), static_cast<int>(w)});
  }
  if (doc.contains("lambda") && !doc["lambda"].is_null()) {
    const long long lambda = integer_field(doc["lambda"], "lambda");
    if (lambda < 0) throw InputError("lambda: must be nonnegative");
    inst.lambda = lambda;
  }
  if (doc.contains("p") && !doc["p"].is_null()) {
    const json& p = doc["p"];
    if (!p.is_array() || p.empty()) throw InputError("p: expected a nonempty array");
    std::vector<int> values;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const long long x = integer_field(p[i], "p[" + std::to_string(i) + "]");
      if (x < 1 || x > 1'000'000'000) throw InputError("p[" + std::to_string(i) + "]: must be a positive integer");
      values.push_back(static_cast<int>(x));
    }
    inst.p = std::move(values);
  }
  return inst;
}

InstanceFile parse_dimacs(std::string_view text) {
  InstanceFile inst;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  bool header = false;
  std::optional<EdgeChecker> checker;
  auto fail = [&](const std::string& msg) { throw InputError("line " + std::to_string(line_no) + ": " + msg); };
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream tok(line);
    std::string kind;
    if (!(tok >> kind) || kind == "c") continue;
    if (kind == "p") {
      if (header) fail("duplicate problem line");
      std::string format;
      long long n = 0, m = 0;
      if (!(tok >> format >> n >> m)) fail("expected 'p edge N M'");
      if (n < 0 || n > 1'000'000) fail("vertex count out of range");
      inst.n = static_cast<int>(n);
      checker.emplace(inst.n);
      header = true;
    } else if (kind == "e") {
      if (!header) fail("edge before the problem line");
      long long u = 0, v = 0, w = 1;
      if (!(tok >> u >> v)) fail("expected 'e U V [W]'");
      if (!(tok >> w)) {
        if (!tok.eof()) fail("malformed weight");
        w = 1;
      }
      std::string extra;
      if (tok.clear(), tok >> extra) fail("unexpected token '" + extra + "'");
      if (u < 1 || v < 1 || u > inst.n || v > inst.n) fail("vertex id out of range [1, " + std::to_string(inst.n) + "]");
      if (w > 1'000'000'000) fail("weight too large");
      if (auto err = checker->check(static_cast<int>(u - 1), static_cast<int>(v - 1), w); !err.empty()) fail(err);
      inst.edges.push_back({static_cast<int>(u - 1), static_cast<int>(v - 1), static_cast<int>(w)});
    } else {
      fail("unknown line type '" + kind + "'");
    }
  }
  if (!header) throw InputError("line " + std::to_string(line_no) + ": missing 'p edge N M' line");
  return inst;
}

}  // namespace

InstanceFile parse_instance(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') return parse_json(text);
  return parse_dimacs(text);
}

std::string serialize_instance(const InstanceFile& instance) {
  std::vector<WeightedEdge> edges = instance.edges;
  for (auto& e : edges) {
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) { return std::pair(a.u, a.v) < std::pair(b.u, b.v); });
  nlohmann::ordered_json doc;
  doc["n"] = instance.n;
  doc["edges"] = nlohmann::ordered_json::array();
  for (const auto& e : edges) doc["edges"].push_back({e.u, e.v, e.weight});
  if (instance.lambda) doc["lambda"] = *instance.lambda;
  if (instance.p) doc["p"] = *instance.p;
  return doc.dump();
}

std::string emit_result(const ResultReport& report) {
  nlohmann::ordered_json doc;
  doc["feasible"] = report.feasible;
  doc["lambda"] = report.lambda;
  if (report.lambda_min) doc["lambda_min"] = *report.lambda_min;
  if (report.labels) {
    doc["labels"] = *report.labels;
  } else {
    doc["labels"] = nullptr;
  }
  doc["stats"] = {{"nd", report.stats.nd},
                  {"types", report.stats.types},
                  {"digraph_nodes", report.stats.digraph_nodes},
                  {"cuts_added", report.stats.cuts_added},
                  {"solve_ms", report.solve_ms}};
  return doc.dump();
}

}  // namespace ndchan
