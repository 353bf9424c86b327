#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ndchan {

enum class Relation { equal, less_equal };

struct Term {
  int var = 0;
  std::int64_t coef = 0;
};

// sum(coef * x[var]) (= | <=) rhs
struct LinearConstraint {
  std::vector<Term> terms;
  Relation relation = Relation::less_equal;
  std::int64_t rhs = 0;

  // Builds a constraint from a dense coefficient vector; zero entries are dropped.
  static LinearConstraint dense(std::span<const std::int64_t> coefs, Relation relation, std::int64_t rhs);
};

// Bounded integer feasibility model. Variables live in [lower, upper], lower defaults to 0.
class IlpModel {
 public:
  IlpModel() = default;
  IlpModel(int var_count, std::int64_t upper_bound);

  int var_count() const { return static_cast<int>(lower_.size()); }
  std::int64_t lower_bound(int var) const { return lower_[static_cast<std::size_t>(var)]; }
  std::int64_t upper_bound(int var) const { return upper_[static_cast<std::size_t>(var)]; }
  void set_bounds(int var, std::int64_t lower, std::int64_t upper);

  const std::vector<LinearConstraint>& constraints() const { return constraints_; }
  // Throws InputError if a term references a variable outside [0, var_count).
  void add_constraint(LinearConstraint c);
  [[nodiscard]] IlpModel with_constraint(LinearConstraint c) const;

  // Direct re-check of every bound and constraint.
  bool is_satisfied_by(std::span<const std::int64_t> values) const;

  // One line per constraint ("3 x0 - 1 x2 <= 7"), then one line per bound.
  std::string to_lp_text() const;

 private:
  std::vector<std::int64_t> lower_;
  std::vector<std::int64_t> upper_;
  std::vector<LinearConstraint> constraints_;
};

struct IlpSolution {
  std::vector<std::int64_t> values;
};

enum class ValueOrder {
  ascending,
  descending,
  low_last,  // lb + 1, ..., ub, then lb
};

struct BranchChoice {
  int var = -1;
  ValueOrder order = ValueOrder::ascending;
  // Ignore var: the node's only child fixes every unfixed variable at its lower bound.
  bool settle = false;
};

// Consulted at every search node with the current bounds. Must name an unfixed variable, or
// return nullopt to fall back to the built-in rule. Any such choice keeps the search exact; a
// settle choice asserts that no acceptable point of the box lies above the lower bounds.
using BranchHint =
    std::function<std::optional<BranchChoice>(std::span<const std::int64_t> lb, std::span<const std::int64_t> ub)>;

// Consulted at every search node after propagation: true declares that no feasible point lies
// in the box, and the node fails. Soundness is the caller's responsibility.
using BoxPruner = std::function<bool(std::span<const std::int64_t> lb, std::span<const std::int64_t> ub)>;

struct IlpOptions {
  // Search nodes before ResourceLimitExceeded is thrown; 0 = unlimited.
  std::uint64_t node_limit = 0;
  BranchHint branch_hint;
  BoxPruner prune;
};

struct IlpStats {
  std::uint64_t nodes = 0;
  std::uint64_t failures = 0;
};

// Depth-first search with interval bound propagation on every constraint. Branching: while
// some equality row with only positive coefficients still needs activity, take the first
// free variable of the one with the fewest free variables and try values high to low;
// otherwise the smallest domain (lowest index on ties), values ascending. A branch_hint in
// the options takes precedence over both. Exact and deterministic; returns nullopt iff the
// model has no integer solution within its bounds (given a sound prune and settle hints).
std::optional<IlpSolution> solve_feasibility(const IlpModel& model, const IlpOptions& options = {},
                                             IlpStats* stats = nullptr);

// Called on every integer point that satisfies the model and all cuts so far. Returning a
// constraint violated by the point adds it to the model; returning nullopt accepts the point.
using LazySeparator = std::function<std::optional<LinearConstraint>(std::span<const std::int64_t>)>;

struct LazySolve {
  std::optional<IlpSolution> solution;
  std::vector<LinearConstraint> cuts;  // in the order they were added
};

// Called at every search node with the current bounds. May return a constraint that no point
// of the box satisfies (its minimum activity already exceeds the right-hand side); the node
// then fails and the constraint joins the model.
using BoundSeparator =
    std::function<std::optional<LinearConstraint>(std::span<const std::int64_t> lb, std::span<const std::int64_t> ub)>;

struct LazySeparators {
  LazySeparator at_leaf;
  BoundSeparator at_node;  // optional
};

// Same search as solve_feasibility, but cuts are installed into the running search instead
// of restarting it. Equivalent to re-solving model + cuts until the separator accepts.
// Throws InternalError if a separator returns a constraint the point (or box) satisfies.
LazySolve solve_with_lazy_constraints(const IlpModel& model, const LazySeparator& separator,
                                      const IlpOptions& options = {}, IlpStats* stats = nullptr);
LazySolve solve_with_lazy_constraints(const IlpModel& model, const LazySeparators& separators,
                                      const IlpOptions& options = {}, IlpStats* stats = nullptr);

// "3 x0 - 1 x2 <= 7"
std::string format_constraint(const LinearConstraint& c);

}  // namespace ndchan
