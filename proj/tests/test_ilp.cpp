#include <random>

#include "doctest.h"
#include "ndchan/errors.hpp"
#include "ndchan/ilp.hpp"

using namespace ndchan;

namespace {

LinearConstraint row(std::vector<Term> terms, Relation rel, std::int64_t rhs) {
  LinearConstraint c;
  c.terms = std::move(terms);
  c.relation = rel;
  c.rhs = rhs;
  return c;
}

// Exhaustive scan of the bounding box.
bool box_feasible(const IlpModel& m) {
  const int n = m.var_count();
  std::vector<std::int64_t> x(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    if (m.lower_bound(j) > m.upper_bound(j)) return false;
    x[static_cast<std::size_t>(j)] = m.lower_bound(j);
  }
  for (;;) {
    if (m.is_satisfied_by(x)) return true;
    int j = 0;
    while (j < n && x[static_cast<std::size_t>(j)] == m.upper_bound(j)) {
      x[static_cast<std::size_t>(j)] = m.lower_bound(j);
      ++j;
    }
    if (j == n) return false;
    ++x[static_cast<std::size_t>(j)];
  }
}

IlpModel random_model(std::mt19937_64& rng, int max_vars, int max_bound, int max_rows) {
  std::uniform_int_distribution<int> nv(1, max_vars);
  std::uniform_int_distribution<int> ub(0, max_bound);
  std::uniform_int_distribution<int> nr(0, max_rows);
  std::uniform_int_distribution<int> coef(-3, 3);
  std::uniform_int_distribution<int> rhs(-4, 10);
  std::bernoulli_distribution eq(0.3);
  const int n = nv(rng);
  IlpModel m(n, max_bound);
  for (int j = 0; j < n; ++j) m.set_bounds(j, 0, ub(rng));
  const int rows = nr(rng);
  for (int r = 0; r < rows; ++r) {
    std::vector<std::int64_t> dense(static_cast<std::size_t>(n));
    for (auto& a : dense) a = coef(rng);
    m.add_constraint(LinearConstraint::dense(dense, eq(rng) ? Relation::equal : Relation::less_equal, rhs(rng)));
  }
  return m;
}

}  // namespace

TEST_CASE("small feasibility examples") {
  IlpModel m(2, 2);
  m.add_constraint(row({{0, 1}, {1, 1}}, Relation::equal, 2));
  m.add_constraint(row({{0, 1}}, Relation::less_equal, 1));
  const auto sol = solve_feasibility(m);
  REQUIRE(sol.has_value());
  CHECK(m.is_satisfied_by(sol->values));

  IlpModel x(1, 5);
  x.add_constraint(row({{0, 1}}, Relation::equal, 3));
  x.add_constraint(row({{0, 1}}, Relation::less_equal, 2));
  CHECK_FALSE(solve_feasibility(x).has_value());
}

TEST_CASE("add_constraint") {
  IlpModel m(1, 3);
  m.add_constraint(row({{0, 1}}, Relation::equal, 1));
  CHECK(solve_feasibility(m).has_value());
  CHECK_FALSE(solve_feasibility(m.with_constraint(row({{0, 1}}, Relation::less_equal, 0))).has_value());
  // 0 <= 1 leaves the solution set alone
  const IlpModel same = m.with_constraint(row({}, Relation::less_equal, 1));
  CHECK(solve_feasibility(same)->values == solve_feasibility(m)->values);
  CHECK(m.constraints().size() == 1);

  CHECK_THROWS_AS(m.add_constraint(row({{1, 1}}, Relation::less_equal, 0)), InputError);
  CHECK_THROWS_AS(m.add_constraint(row({{-1, 1}}, Relation::less_equal, 0)), InputError);
}

TEST_CASE("duplicate terms are merged") {
  IlpModel m(2, 4);
  m.add_constraint(row({{1, 2}, {0, 1}, {1, -2}}, Relation::equal, 3));
  REQUIRE(m.constraints()[0].terms.size() == 1);
  CHECK(m.constraints()[0].terms[0].var == 0);
  CHECK(solve_feasibility(m)->values[0] == 3);
}

TEST_CASE("contradictory bounds are infeasible, not an error") {
  IlpModel m(1, 3);
  m.set_bounds(0, 2, 1);
  CHECK_FALSE(solve_feasibility(m).has_value());
}

TEST_CASE("large coefficients stay exact") {
  IlpModel m(2, 1'000'000'000);
  const std::int64_t big = 4'000'000'000'000'000'000;
  m.add_constraint(row({{0, big}, {1, -big}}, Relation::equal, 0));
  m.add_constraint(row({{0, 1}, {1, 1}}, Relation::equal, 1'000'000'000));
  const auto sol = solve_feasibility(m);
  REQUIRE(sol.has_value());
  CHECK(sol->values[0] == 500'000'000);
}

TEST_CASE("LP text dump") {
  IlpModel m(3, 7);
  m.add_constraint(row({{0, 3}, {2, -1}}, Relation::less_equal, 7));
  const std::string text = m.to_lp_text();
  CHECK(text.rfind("3 x0 - 1 x2 <= 7\n", 0) == 0);
  CHECK(text.find("0 <= x1 <= 7") != std::string::npos);
  CHECK(format_constraint(row({{1, -2}}, Relation::equal, -4)) == "-2 x1 = -4");
}

TEST_CASE("agreement with exhaustive enumeration") {
  std::mt19937_64 rng(41);
  int feasible = 0;
  for (int rep = 0; rep < 400; ++rep) {
    const IlpModel m = random_model(rng, 6, 4, 6);
    IlpStats stats;
    const auto sol = solve_feasibility(m, {}, &stats);
    const bool expected = box_feasible(m);
    CHECK(sol.has_value() == expected);
    if (sol) {
      CHECK(m.is_satisfied_by(sol->values));
      ++feasible;
    }
  }
  // both outcomes exercised
  CHECK(feasible > 40);
  CHECK(feasible < 360);
}

TEST_CASE("deterministic") {
  std::mt19937_64 rng(43);
  for (int rep = 0; rep < 50; ++rep) {
    const IlpModel m = random_model(rng, 8, 5, 6);
    const auto a = solve_feasibility(m);
    const auto b = solve_feasibility(m);
    REQUIRE(a.has_value() == b.has_value());
    if (a) CHECK(a->values == b->values);
  }
}

TEST_CASE("adding a constraint never makes an infeasible model feasible") {
  std::mt19937_64 rng(47);
  for (int rep = 0; rep < 150; ++rep) {
    IlpModel m = random_model(rng, 5, 4, 5);
    if (solve_feasibility(m)) continue;
    const IlpModel extra = random_model(rng, m.var_count(), 4, 1);
    for (const auto& c : extra.constraints()) {
      LinearConstraint trimmed;
      trimmed.relation = c.relation;
      trimmed.rhs = c.rhs;
      for (const Term& t : c.terms) {
        if (t.var < m.var_count()) trimmed.terms.push_back(t);
      }
      CHECK_FALSE(solve_feasibility(m.with_constraint(trimmed)).has_value());
    }
  }
}

TEST_CASE("node limit") {
  // 2 (x0 + ... + x9) = 21: parity, invisible to interval bounds, so only search refutes it
  IlpModel m(10, 2);
  std::vector<Term> all;
  for (int j = 0; j < 10; ++j) all.push_back({j, 2});
  m.add_constraint(row(all, Relation::equal, 21));
  CHECK_FALSE(solve_feasibility(m).has_value());

  IlpModel hard(12, 3);
  std::vector<Term> mixed;
  for (int j = 0; j < 12; ++j) mixed.push_back({j, j % 2 == 0 ? 3 : 5});
  hard.add_constraint(row(mixed, Relation::equal, 29));
  IlpOptions tight;
  tight.node_limit = 1;
  std::vector<Term> other;
  for (int j = 0; j < 12; ++j) other.push_back({j, 1});
  hard.add_constraint(row(other, Relation::equal, 7));
  CHECK_THROWS_AS(solve_feasibility(hard, tight), ResourceLimitExceeded);
}

TEST_CASE("lazy constraints") {
  // x + y = 2 on [0, 2]; the separator rejects every point with x > 0
  IlpModel m(2, 2);
  m.add_constraint(row({{0, 1}, {1, 1}}, Relation::equal, 2));
  int calls = 0;
  const LazySeparator sep = [&](std::span<const std::int64_t> v) -> std::optional<LinearConstraint> {
    ++calls;
    if (v[0] > 0) return row({{0, 1}}, Relation::less_equal, v[0] - 1);
    return std::nullopt;
  };
  const LazySolve out = solve_with_lazy_constraints(m, sep);
  REQUIRE(out.solution.has_value());
  CHECK(out.solution->values == std::vector<std::int64_t>{0, 2});
  IlpModel full = m;
  for (const auto& c : out.cuts) full.add_constraint(c);
  CHECK(full.is_satisfied_by(out.solution->values));
  CHECK(calls == static_cast<int>(out.cuts.size()) + 1);

  const LazySeparator refuse_all = [](std::span<const std::int64_t> v) -> std::optional<LinearConstraint> {
    return row({{0, 1}, {1, -1}}, Relation::less_equal, v[0] - v[1] - 1);
  };
  CHECK_FALSE(solve_with_lazy_constraints(m, refuse_all).solution.has_value());

  const LazySeparator bogus = [](std::span<const std::int64_t>) -> std::optional<LinearConstraint> {
    return row({}, Relation::less_equal, 0);
  };
  CHECK_THROWS_AS(solve_with_lazy_constraints(m, bogus), InternalError);
}

TEST_CASE("lazy solving matches solving with the hidden rows up front") {
  std::mt19937_64 rng(53);
  for (int rep = 0; rep < 150; ++rep) {
    const IlpModel m = random_model(rng, 5, 3, 3);
    const IlpModel hidden = random_model(rng, m.var_count(), 3, 3);
    std::vector<LinearConstraint> rows;
    for (const auto& c : hidden.constraints()) {
      LinearConstraint trimmed = c;
      trimmed.terms.clear();
      for (const Term& t : c.terms) {
        if (t.var < m.var_count()) trimmed.terms.push_back(t);
      }
      rows.push_back(trimmed);
    }
    const LazySeparator sep = [&](std::span<const std::int64_t> v) -> std::optional<LinearConstraint> {
      for (const auto& c : rows) {
        std::int64_t lhs = 0;
        for (const Term& t : c.terms) lhs += t.coef * v[static_cast<std::size_t>(t.var)];
        if (c.relation == Relation::equal ? lhs != c.rhs : lhs > c.rhs) return c;
      }
      return std::nullopt;
    };
    IlpModel upfront = m;
    for (const auto& c : rows) upfront.add_constraint(c);
    const LazySolve lazy = solve_with_lazy_constraints(m, sep);
    CHECK(lazy.solution.has_value() == box_feasible(upfront));
    if (lazy.solution) CHECK(upfront.is_satisfied_by(lazy.solution->values));
  }
}

TEST_CASE("box pruner") {
  // x0 + x1 = 2 on [0, 2]; refuse every box that already commits x0
  IlpModel m(2, 2);
  m.add_constraint(row({{0, 1}, {1, 1}}, Relation::equal, 2));
  IlpOptions o;
  int calls = 0;
  o.prune = [&](std::span<const std::int64_t> lb, std::span<const std::int64_t>) {
    ++calls;
    return lb[0] > 0;
  };
  const auto sol = solve_feasibility(m, o);
  REQUIRE(sol.has_value());
  CHECK(sol->values == std::vector<std::int64_t>{0, 2});
  CHECK(calls > 0);

  o.prune = [](std::span<const std::int64_t>, std::span<const std::int64_t>) { return true; };
  CHECK_FALSE(solve_feasibility(m, o).has_value());
}

TEST_CASE("settle branch fixes the rest at the lower bounds") {
  IlpModel m(3, 4);
  m.add_constraint(row({{0, 1}, {1, 1}, {2, 1}}, Relation::less_equal, 4));
  m.set_bounds(1, 2, 4);
  IlpOptions o;
  o.branch_hint = [](std::span<const std::int64_t>, std::span<const std::int64_t>) {
    return std::optional<BranchChoice>(BranchChoice{-1, ValueOrder::ascending, true});
  };
  IlpStats stats;
  const auto sol = solve_feasibility(m, o, &stats);
  REQUIRE(sol.has_value());
  CHECK(sol->values == std::vector<std::int64_t>{0, 2, 0});
  CHECK(stats.nodes == 2);

  // the lower-bound point violates x0 + x1 + x2 >= 3, so settling refutes the whole box
  IlpModel cover = m;
  cover.add_constraint(row({{0, -1}, {1, -1}, {2, -1}}, Relation::less_equal, -3));
  CHECK_FALSE(solve_feasibility(cover, o).has_value());
}
