#include "ndchan/ilp.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <sstream>

#include "ndchan/errors.hpp"

namespace ndchan {

using Wide = __int128;

LinearConstraint LinearConstraint::dense(std::span<const std::int64_t> coefs, Relation relation, std::int64_t rhs) {
  LinearConstraint c;
  c.relation = relation;
  c.rhs = rhs;
  for (std::size_t i = 0; i < coefs.size(); ++i) {
    if (coefs[i] != 0) c.terms.push_back({static_cast<int>(i), coefs[i]});
  }
  return c;
}

IlpModel::IlpModel(int var_count, std::int64_t upper_bound)
    : lower_(static_cast<std::size_t>(var_count), 0), upper_(static_cast<std::size_t>(var_count), upper_bound) {
  if (var_count < 0) throw InputError("negative variable count");
}

void IlpModel::set_bounds(int var, std::int64_t lower, std::int64_t upper) {
  if (var < 0 || var >= var_count()) throw InputError("variable index out of range");
  lower_[static_cast<std::size_t>(var)] = lower;
  upper_[static_cast<std::size_t>(var)] = upper;
}

namespace {

LinearConstraint normalized(LinearConstraint c, int var_count) {
  std::map<int, std::int64_t> merged;
  for (const Term& t : c.terms) {
    if (t.var < 0 || t.var >= var_count) {
      throw InputError("constraint references variable " + std::to_string(t.var) + " of " +
                       std::to_string(var_count));
    }
    merged[t.var] += t.coef;
  }
  c.terms.clear();
  for (auto [var, coef] : merged) {
    if (coef != 0) c.terms.push_back({var, coef});
  }
  return c;
}

bool satisfies(const LinearConstraint& c, std::span<const std::int64_t> values) {
  Wide lhs = 0;
  for (const Term& t : c.terms) lhs += Wide{t.coef} * values[static_cast<std::size_t>(t.var)];
  return c.relation == Relation::equal ? lhs == c.rhs : lhs <= c.rhs;
}

}  // namespace

void IlpModel::add_constraint(LinearConstraint c) { constraints_.push_back(normalized(std::move(c), var_count())); }

IlpModel IlpModel::with_constraint(LinearConstraint c) const {
  IlpModel next = *this;
  next.add_constraint(std::move(c));
  return next;
}

bool IlpModel::is_satisfied_by(std::span<const std::int64_t> values) const {
  if (static_cast<int>(values.size()) != var_count()) return false;
  for (int i = 0; i < var_count(); ++i) {
    if (values[static_cast<std::size_t>(i)] < lower_bound(i) || values[static_cast<std::size_t>(i)] > upper_bound(i)) {
      return false;
    }
  }
  return std::all_of(constraints_.begin(), constraints_.end(),
                     [&](const LinearConstraint& c) { return satisfies(c, values); });
}

std::string format_constraint(const LinearConstraint& c) {
  std::ostringstream out;
  bool first = true;
  for (const Term& t : c.terms) {
    const std::int64_t mag = t.coef < 0 ? -t.coef : t.coef;
    if (first) {
      out << (t.coef < 0 ? "-" : "") << mag << " x" << t.var;
    } else {
      out << (t.coef < 0 ? " - " : " + ") << mag << " x" << t.var;
    }
    first = false;
  }
  if (first) out << '0';
  out << (c.relation == Relation::equal ? " = " : " <= ") << c.rhs;
  return out.str();
}

std::string IlpModel::to_lp_text() const {
  std::ostringstream out;
  for (const auto& c : constraints_) out << format_constraint(c) << '\n';
  for (int i = 0; i < var_count(); ++i) {
    out << lower_bound(i) << " <= x" << i << " <= " << upper_bound(i) << '\n';
  }
  return out.str();
}

namespace {

Wide floor_div(Wide a, Wide b) {
  Wide q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

class Search {
 public:
  Search(const IlpModel& model, const IlpOptions& options, const LazySeparators* separators = nullptr)
      : options_(options), separators_(separators), var_count_(model.var_count()) {
    const auto n = static_cast<std::size_t>(model.var_count());
    lb_.resize(n);
    ub_.resize(n);
    cols_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      lb_[j] = model.lower_bound(static_cast<int>(j));
      ub_[j] = model.upper_bound(static_cast<int>(j));
    }
    root_lb_ = lb_;
    root_ub_ = ub_;
    for (const auto& c : model.constraints()) add_row(c);
  }

  std::optional<IlpSolution> run(IlpStats* stats) {
    std::optional<IlpSolution> result;
    for (std::size_t j = 0; j < lb_.size(); ++j) {
      if (lb_[j] > ub_[j]) return finish(stats, result);
    }
    if (propagate() && dfs()) {
      result = IlpSolution{std::vector<std::int64_t>(lb_.begin(), lb_.end())};
    }
    return finish(stats, result);
  }

  std::vector<LinearConstraint> take_cuts() { return std::move(cuts_); }

 private:
  struct Row {
    std::vector<Term> terms;
    bool has_lo = false;
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    Wide min_act = 0;
    Wide max_act = 0;
    Wide max_swing = 0;  // bounds |coef| * (ub - lb) over the terms; shrinks with the domains
    bool covering = false;
  };
  struct ColEntry {
    int row;
    std::int64_t coef;
  };
  struct TrailEntry {
    int var;
    std::int64_t lb;
    std::int64_t ub;
  };
  struct SwingEntry {
    std::size_t trail_size;  // trail length when the old value was saved
    int row;
    Wide swing;
  };

  std::optional<IlpSolution> finish(IlpStats* stats, std::optional<IlpSolution>& result) {
    if (stats != nullptr) {
      stats->nodes += nodes_;
      stats->failures += failures_;
    }
    return std::move(result);
  }

  // Activities are taken from the current bounds, so rows may be added mid-search.
  void add_row(const LinearConstraint& c) {
    Row row;
    // terms fixed at the root are constants for the whole search
    Wide rhs = c.rhs;
    for (const Term& t : c.terms) {
      const auto j = static_cast<std::size_t>(t.var);
      if (root_lb_[j] == root_ub_[j]) {
        rhs -= Wide{t.coef} * root_lb_[j];
      } else {
        row.terms.push_back(t);
      }
    }
    if (rhs < std::numeric_limits<std::int64_t>::min() || rhs > std::numeric_limits<std::int64_t>::max()) {
      row.terms = c.terms;
      rhs = c.rhs;
    }
    row.hi = static_cast<std::int64_t>(rhs);
    row.has_lo = c.relation == Relation::equal;
    row.lo = row.hi;
    row.covering = row.has_lo && std::all_of(row.terms.begin(), row.terms.end(), [](const Term& t) { return t.coef > 0; });
    for (const Term& t : row.terms) {
      const Wide lo = Wide{t.coef} * lb_[static_cast<std::size_t>(t.var)];
      const Wide hi = Wide{t.coef} * ub_[static_cast<std::size_t>(t.var)];
      row.min_act += std::min(lo, hi);
      row.max_act += std::max(lo, hi);
      // root widths: a row added mid-search must stay valid after backtracking
      const Wide width = Wide{root_ub_[static_cast<std::size_t>(t.var)]} - root_lb_[static_cast<std::size_t>(t.var)];
      row.max_swing = std::max(row.max_swing, (t.coef < 0 ? -Wide{t.coef} : Wide{t.coef}) * width);
    }
    const int id = static_cast<int>(rows_.size());
    for (const Term& t : row.terms) cols_[static_cast<std::size_t>(t.var)].push_back({id, t.coef});
    rows_.push_back(std::move(row));
    queued_.push_back(0);
    enqueue(id);
  }

  // At a complete assignment: true if it stands, false if the separator cut it off.
  bool accept_leaf() {
    if (separators_ == nullptr || !separators_->at_leaf) return true;
    auto cut = separators_->at_leaf(std::span<const std::int64_t>(lb_));
    if (!cut) return true;
    LinearConstraint c = normalized(std::move(*cut), var_count_);
    if (satisfies(c, lb_)) throw InternalError("separator returned a constraint the point satisfies");
    add_row(c);
    cuts_.push_back(std::move(c));
    return false;
  }

  // false if the node separator refuted the current box
  bool accept_node() {
    if (separators_ == nullptr || !separators_->at_node) return true;
    auto cut = separators_->at_node(std::span<const std::int64_t>(lb_), std::span<const std::int64_t>(ub_));
    if (!cut) return true;
    LinearConstraint c = normalized(std::move(*cut), var_count_);
    Wide min_act = 0;
    Wide max_act = 0;
    for (const Term& t : c.terms) {
      const Wide lo = Wide{t.coef} * lb_[static_cast<std::size_t>(t.var)];
      const Wide hi = Wide{t.coef} * ub_[static_cast<std::size_t>(t.var)];
      min_act += std::min(lo, hi);
      max_act += std::max(lo, hi);
    }
    const bool refuted = min_act > c.rhs || (c.relation == Relation::equal && max_act < c.rhs);
    if (!refuted) throw InternalError("node separator returned a constraint the box can satisfy");
    add_row(c);
    cuts_.push_back(std::move(c));
    return false;
  }

  void enqueue(int r) {
    if (queued_[static_cast<std::size_t>(r)] == 0) {
      queued_[static_cast<std::size_t>(r)] = 1;
      queue_.push_back(r);
    }
  }

  void apply_activity(int var, std::int64_t old_lb, std::int64_t old_ub) {
    const auto j = static_cast<std::size_t>(var);
    const Wide dlb = Wide{lb_[j]} - old_lb;
    const Wide dub = Wide{ub_[j]} - old_ub;
    for (const ColEntry& c : cols_[j]) {
      Row& row = rows_[static_cast<std::size_t>(c.row)];
      if (c.coef > 0) {
        row.min_act += c.coef * dlb;
        row.max_act += c.coef * dub;
      } else {
        row.min_act += c.coef * dub;
        row.max_act += c.coef * dlb;
      }
    }
  }

  // false on an empty domain
  bool tighten(int var, Wide new_lb, Wide new_ub) {
    const auto j = static_cast<std::size_t>(var);
    const std::int64_t lb = new_lb > lb_[j] ? static_cast<std::int64_t>(new_lb) : lb_[j];
    const std::int64_t ub = new_ub < ub_[j] ? static_cast<std::int64_t>(new_ub) : ub_[j];
    if (lb == lb_[j] && ub == ub_[j]) return true;
    if (lb > ub) return false;
    trail_.push_back({var, lb_[j], ub_[j]});
    const std::int64_t old_lb = lb_[j];
    const std::int64_t old_ub = ub_[j];
    lb_[j] = lb;
    ub_[j] = ub;
    apply_activity(var, old_lb, old_ub);
    for (const ColEntry& c : cols_[j]) enqueue(c.row);
    return true;
  }

  bool propagate_row(int r) {
    const Row& row = rows_[static_cast<std::size_t>(r)];
    if (row.min_act > row.hi) return false;
    if (row.has_lo && row.max_act < row.lo) return false;
    const Wide slack_hi = Wide{row.hi} - row.min_act;
    const Wide slack_lo = row.has_lo ? row.max_act - row.lo : Wide{-1};
    // no term swings further than the slack, so none can be tightened
    if (slack_hi >= row.max_swing && (!row.has_lo || slack_lo >= row.max_swing)) return true;
    Wide largest = 0;
    for (const Term& t : row.terms) {
      const auto j = static_cast<std::size_t>(t.var);
      const Wide range = Wide{ub_[j]} - lb_[j];
      if (range == 0) continue;
      const Wide a = t.coef > 0 ? Wide{t.coef} : -Wide{t.coef};
      const Wide swing = a * range;
      const Wide lb = lb_[j];
      const Wide ub = ub_[j];
      if (t.coef > 0) {
        if (swing > slack_hi && !tighten(t.var, lb, lb + floor_div(slack_hi, a))) return false;
        if (row.has_lo && swing > slack_lo && !tighten(t.var, ub - floor_div(slack_lo, a), ub)) return false;
      } else {
        if (swing > slack_hi && !tighten(t.var, ub - floor_div(slack_hi, a), ub)) return false;
        if (row.has_lo && swing > slack_lo && !tighten(t.var, lb, lb + floor_div(slack_lo, a))) return false;
      }
      largest = std::max(largest, a * (Wide{ub_[j]} - lb_[j]));
    }
    if (largest < row.max_swing) {
      swing_trail_.push_back({trail_.size(), r, row.max_swing});
      rows_[static_cast<std::size_t>(r)].max_swing = largest;
    }
    return true;
  }

  bool propagate() {
    while (!queue_.empty()) {
      const int r = queue_.back();
      queue_.pop_back();
      queued_[static_cast<std::size_t>(r)] = 0;
      if (!propagate_row(r)) {
        for (int q : queue_) queued_[static_cast<std::size_t>(q)] = 0;
        queue_.clear();
        return false;
      }
    }
    return true;
  }

  void undo_to(std::size_t mark) {
    while (!swing_trail_.empty() && swing_trail_.back().trail_size >= mark) {
      rows_[static_cast<std::size_t>(swing_trail_.back().row)].max_swing = swing_trail_.back().swing;
      swing_trail_.pop_back();
    }
    while (trail_.size() > mark) {
      const TrailEntry e = trail_.back();
      trail_.pop_back();
      const auto j = static_cast<std::size_t>(e.var);
      const std::int64_t cur_lb = lb_[j];
      const std::int64_t cur_ub = ub_[j];
      lb_[j] = e.lb;
      ub_[j] = e.ub;
      apply_activity(e.var, cur_lb, cur_ub);
    }
  }

  int pick_covering() const {
    int best = -1;
    int best_free = 0;
    for (const Row& row : rows_) {
      if (!row.covering || row.min_act >= row.lo) continue;
      int free = 0;
      int first = -1;
      for (const Term& t : row.terms) {
        const auto j = static_cast<std::size_t>(t.var);
        if (ub_[j] > lb_[j]) {
          if (first < 0) first = t.var;
          ++free;
        }
      }
      if (first >= 0 && (best < 0 || free < best_free)) {
        best = first;
        best_free = free;
      }
    }
    return best;
  }

  int pick_variable() const {
    int best = -1;
    Wide best_range = 0;
    for (std::size_t j = 0; j < lb_.size(); ++j) {
      const Wide range = Wide{ub_[j]} - lb_[j];
      if (range > 0 && (best < 0 || range < best_range)) {
        best = static_cast<int>(j);
        best_range = range;
        if (range == 1) break;
      }
    }
    return best;
  }

  BranchChoice pick_branch() const {
    if (options_.branch_hint) {
      if (auto hint = options_.branch_hint(std::span<const std::int64_t>(lb_), std::span<const std::int64_t>(ub_))) {
        if (hint->settle) return *hint;
        const auto j = static_cast<std::size_t>(hint->var);
        if (hint->var < 0 || j >= lb_.size() || lb_[j] == ub_[j]) throw InternalError("branch hint named a fixed variable");
        return *hint;
      }
    }
    if (const int var = pick_covering(); var >= 0) return {var, ValueOrder::descending};
    return {pick_variable(), ValueOrder::ascending};
  }

  bool dfs() {
    ++nodes_;
    if (options_.node_limit != 0 && nodes_ > options_.node_limit) {
      throw ResourceLimitExceeded("integer search exceeded " + std::to_string(options_.node_limit) + " nodes");
    }
    if (options_.prune && options_.prune(std::span<const std::int64_t>(lb_), std::span<const std::int64_t>(ub_))) {
      return false;
    }
    if (!accept_node()) return false;
    const BranchChoice choice = pick_branch();
    if (choice.settle) {
      const std::size_t mark = trail_.size();
      for (std::size_t j = 0; j < lb_.size(); ++j) {
        if (lb_[j] < ub_[j]) tighten(static_cast<int>(j), lb_[j], lb_[j]);
      }
      if (trail_.size() == mark) return accept_leaf();
      if (propagate() && dfs()) return true;
      ++failures_;
      undo_to(mark);
      return false;
    }
    if (choice.var < 0) return accept_leaf();
    const auto j = static_cast<std::size_t>(choice.var);
    const int var = choice.var;
    const std::int64_t lo = lb_[j];
    const std::int64_t hi = ub_[j];
    for (std::int64_t k = 0; k <= hi - lo; ++k) {
      std::int64_t v = lo + k;
      if (choice.order == ValueOrder::descending) v = hi - k;
      if (choice.order == ValueOrder::low_last) v = k < hi - lo ? lo + 1 + k : lo;
      const std::size_t mark = trail_.size();
      if (tighten(var, v, v) && propagate() && dfs()) return true;
      ++failures_;
      undo_to(mark);
    }
    return false;
  }

  IlpOptions options_;
  const LazySeparators* separators_;
  int var_count_;
  std::vector<LinearConstraint> cuts_;
  std::vector<std::int64_t> lb_;
  std::vector<std::int64_t> ub_;
  std::vector<std::int64_t> root_lb_;
  std::vector<std::int64_t> root_ub_;
  std::vector<Row> rows_;
  std::vector<std::vector<ColEntry>> cols_;
  std::vector<char> queued_;
  std::vector<int> queue_;
  std::vector<TrailEntry> trail_;
  std::vector<SwingEntry> swing_trail_;
  std::uint64_t nodes_ = 0;
  std::uint64_t failures_ = 0;
};

}  // namespace

std::optional<IlpSolution> solve_feasibility(const IlpModel& model, const IlpOptions& options, IlpStats* stats) {
  return Search(model, options).run(stats);
}

LazySolve solve_with_lazy_constraints(const IlpModel& model, const LazySeparator& separator,
                                      const IlpOptions& options, IlpStats* stats) {
  return solve_with_lazy_constraints(model, LazySeparators{separator, {}}, options, stats);
}

LazySolve solve_with_lazy_constraints(const IlpModel& model, const LazySeparators& separators,
                                      const IlpOptions& options, IlpStats* stats) {
  Search search(model, options, &separators);
  LazySolve out;
  out.solution = search.run(stats);
  out.cuts = search.take_cuts();
  return out;
}

}  // namespace ndchan
