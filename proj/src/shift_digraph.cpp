#include "ndchan/shift_digraph.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <string>

#include "ndchan/errors.hpp"

namespace ndchan {

WindowCode encode_window(std::span<const TypeMask> sets, int type_count) {
  WindowCode code = 0;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    code |= static_cast<WindowCode>(sets[i]) << (static_cast<int>(i) * type_count);
  }
  return code;
}

std::vector<TypeMask> decode_window(WindowCode code, int type_count, int length) {
  const WindowCode mask = (WindowCode{1} << type_count) - 1;
  std::vector<TypeMask> sets(static_cast<std::size_t>(length));
  for (int i = 0; i < length; ++i) sets[static_cast<std::size_t>(i)] = static_cast<TypeMask>((code >> (i * type_count)) & mask);
  return sets;
}

bool window_is_valid(const TypeGraph& tg, std::span<const TypeMask> sets) {
  const int tau = tg.type_count();
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t j = i; j < sets.size(); ++j) {
      const auto gap = static_cast<int>(j - i);
      for (int t = 0; t < tau; ++t) {
        if ((sets[i] >> t & 1u) == 0) continue;
        for (int r = 0; r < tau; ++r) {
          if ((sets[j] >> r & 1u) == 0 || !tg.adjacent(t, r)) continue;
          if (t == r && gap == 0) continue;
          if (gap < tg.weight(t, r)) return false;
        }
      }
    }
  }
  return true;
}

int ShiftDigraph::find(WindowCode code) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), code);
  if (it == nodes_.end() || *it != code) return -1;
  return static_cast<int>(it - nodes_.begin());
}

namespace {

// conflict[d][t]: types that may not sit d slots away from t.
std::vector<std::vector<TypeMask>> conflict_table(const TypeGraph& tg, int span) {
  const int tau = tg.type_count();
  std::vector<std::vector<TypeMask>> table(static_cast<std::size_t>(span) + 1,
                                           std::vector<TypeMask>(static_cast<std::size_t>(tau), 0));
  for (int d = 0; d <= span; ++d) {
    for (int t = 0; t < tau; ++t) {
      for (int r = 0; r < tau; ++r) {
        if (!tg.adjacent(t, r) || (t == r && d == 0)) continue;
        if (d < tg.weight(t, r)) table[static_cast<std::size_t>(d)][static_cast<std::size_t>(t)] |= TypeMask{1} << r;
      }
    }
  }
  return table;
}

bool compatible(const std::vector<TypeMask>& conflicts, TypeMask a, TypeMask b) {
  for (TypeMask rest = a; rest != 0; rest &= rest - 1) {
    const int t = __builtin_ctz(rest);
    if ((conflicts[static_cast<std::size_t>(t)] & b) != 0) return false;
  }
  return true;
}

class WindowEnumerator {
 public:
  WindowEnumerator(int tau, int z, const std::vector<std::vector<TypeMask>>& conflicts, std::size_t max_nodes)
      : tau_(tau), z_(z), conflicts_(conflicts), max_nodes_(max_nodes), slots_(static_cast<std::size_t>(z), 0) {}

  std::vector<WindowCode> run() {
    fill(0);
    std::sort(found_.begin(), found_.end());
    return std::move(found_);
  }

 private:
  void fill(int pos) {
    if (pos == z_) {
      if (found_.size() >= max_nodes_) throw ResourceLimitExceeded("shift digraph exceeds the node limit");
      found_.push_back(encode_window(slots_, tau_));
      return;
    }
    const TypeMask all = (TypeMask{1} << tau_) - 1;
    for (TypeMask s = 0;; ++s) {
      bool ok = compatible(conflicts_[0], s, s);
      for (int prev = pos - 1; ok && prev >= 0; --prev) {
        ok = compatible(conflicts_[static_cast<std::size_t>(pos - prev)], s, slots_[static_cast<std::size_t>(prev)]);
      }
      if (ok) {
        slots_[static_cast<std::size_t>(pos)] = s;
        fill(pos + 1);
      }
      if (s == all) break;
    }
    slots_[static_cast<std::size_t>(pos)] = 0;
  }

  int tau_;
  int z_;
  const std::vector<std::vector<TypeMask>>& conflicts_;
  std::size_t max_nodes_;
  std::vector<TypeMask> slots_;
  std::vector<WindowCode> found_;
};

}  // namespace

ShiftDigraph build_shift_digraph(const TypeGraph& tg, int z, const DigraphLimits& limits) {
  if (z < 1) throw InputError("window length must be at least 1");
  if (!tg.reflexive()) throw InputError("shift digraph needs a reflexive type graph");
  if (tg.type_count() > 0 && !tg.weighted()) throw InputError("shift digraph needs a weighted type graph");
  const int tau = tg.type_count();
  if (tau > 31 || static_cast<long>(tau) * z > 63) {
    throw ResourceLimitExceeded("window encoding needs " + std::to_string(tau * z) + " bits (limit 63)");
  }

  const auto conflicts = conflict_table(tg, z);
  ShiftDigraph d;
  d.tau_ = tau;
  d.z_ = z;
  d.nodes_ = WindowEnumerator(tau, z, conflicts, limits.max_nodes).run();
  d.out_.resize(d.nodes_.size());
  d.in_.resize(d.nodes_.size());

  const TypeMask all = (TypeMask{1} << tau) - 1;
  const int last_shift = (z - 1) * tau;
  for (std::size_t src = 0; src < d.nodes_.size(); ++src) {
    const WindowCode w = d.nodes_[src];
    const TypeMask leaving = static_cast<TypeMask>(w & d.slot_mask());
    const WindowCode kept = w >> tau;
    for (TypeMask s = 0;; ++s) {
      const int dst = d.find(kept | (static_cast<WindowCode>(s) << last_shift));
      // The slot that falls out of W sits z positions before the new one.
      if (dst >= 0 && compatible(conflicts[static_cast<std::size_t>(z)], s, leaving)) {
        if (d.edges_.size() >= limits.max_edges) throw ResourceLimitExceeded("shift digraph exceeds the edge limit");
        const int id = static_cast<int>(d.edges_.size());
        d.edges_.push_back({static_cast<int>(src), dst});
        d.out_[src].push_back(id);
        d.in_[static_cast<std::size_t>(dst)].push_back(id);
      }
      if (s == all) break;
    }
  }
  if (d.nodes_.empty() || d.nodes_.front() != 0) throw InternalError("empty window missing from shift digraph");
  return d;
}

ShiftDigraph build_shift_digraph(const TypeGraph& tg, int z) { return build_shift_digraph(tg, z, DigraphLimits{}); }

void write_edge_list(const ShiftDigraph& d, std::ostream& out) {
  out << "# shift digraph: types " << d.type_count() << " window " << d.window_length() << " nodes " << d.node_count()
      << " edges " << d.edge_count() << '\n';
  char buf[64];
  for (const auto& e : d.edges()) {
    std::snprintf(buf, sizeof buf, "%llx %llx\n", static_cast<unsigned long long>(d.nodes()[static_cast<std::size_t>(e.source)]),
                  static_cast<unsigned long long>(d.nodes()[static_cast<std::size_t>(e.target)]));
    out << buf;
  }
}

}  // namespace ndchan
