#pragma once

// Finite-depth views of the vector tree T^sigma, strong subtrees described by
// successor selections, valuation trees and structural embeddings.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "brt/error.hpp"
#include "brt/valuation.hpp"

namespace brt {

using NodeSet = std::set<ValuationFunction, NodeLess>;

namespace detail {

// Tuples that may carry a nonzero value in an extension of a level-`from` node
// to level `to`: leading entry in [from, to), bound > 1.
inline std::vector<Tuple> free_slots(const Signature& sigma, int shift, int from, int to) {
  std::vector<Tuple> out;
  int max_len = 0;
  for (int l = 1; l <= to; ++l)
    if (sigma[shift + l] > 1) max_len = l;
  for (auto& t : decreasing_tuples(to, max_len, from))
    if (sigma[shift + static_cast<int>(t.size())] > 1) out.push_back(std::move(t));
  return out;
}

}  // namespace detail

/// Number of level-`to` nodes extending a level-`from` node of T_shift.
inline std::uint64_t count_extensions(const Signature& sigma, int shift, int from, int to) {
  std::uint64_t total = 1;
  for (int l = 1; l <= to; ++l) {
    std::uint64_t slots = detail::binomial(to, l) - detail::binomial(from, l);
    total = detail::sat_mul(total, detail::sat_pow(sigma[shift + l], slots));
  }
  return total;
}

/// All nodes at level `to` extending t, in node_less order.
inline std::vector<ValuationFunction> extensions_to_level(const ValuationFunction& t, int to,
                                                          std::uint64_t cap = kDefaultNodeCap) {
  if (to < t.level()) throw InputError("extensions_to_level: target below node level");
  std::uint64_t estimate = count_extensions(t.signature(), t.shift(), t.level(), to);
  if (estimate > cap) throw InfeasibleError("extensions_to_level: too many nodes", cap, estimate);
  auto slots = detail::free_slots(t.signature(), t.shift(), t.level(), to);
  std::vector<ValuationFunction> out;
  out.reserve(estimate);
  std::vector<int> vals(slots.size(), 0);
  ValuationFunction base = t.with_level(to);
  while (true) {
    ValuationFunction f = base;
    for (std::size_t i = 0; i < slots.size(); ++i)
      if (vals[i]) f.set(slots[i], vals[i]);
    out.push_back(std::move(f));
    std::size_t i = slots.size();
    for (; i > 0; --i) {
      if (++vals[i - 1] < t.signature()[t.shift() + static_cast<int>(slots[i - 1].size())]) break;
      vals[i - 1] = 0;
    }
    if (i == 0) break;
  }
  std::sort(out.begin(), out.end(), NodeLess{});
  return out;
}

/// A uniformly random level-`to` extension of t.
template <class Rng>
ValuationFunction random_extension(const ValuationFunction& t, int to, Rng& rng) {
  ValuationFunction f = t.with_level(to);
  for (const auto& slot : detail::free_slots(t.signature(), t.shift(), t.level(), to)) {
    std::uniform_int_distribution<int> d(0, f.bound(slot.size()) - 1);
    f.set(slot, d(rng));
  }
  return f;
}

/// T_shift(n) in node_less order. Fails with InfeasibleError above `cap` nodes.
inline std::vector<ValuationFunction> level_nodes(const Signature& sigma, int shift, int n,
                                                  std::uint64_t cap = kDefaultNodeCap) {
  return extensions_to_level(zero_function(sigma, shift, 0), n, cap);
}

/// T_shift(<n) in node_less order.
inline std::vector<ValuationFunction> nodes_below(const Signature& sigma, int shift, int n,
                                                  std::uint64_t cap = kDefaultNodeCap) {
  std::uint64_t total = 0;
  for (int m = 0; m < n; ++m) total = detail::sat_add(total, count_level_nodes(sigma, shift, m));
  if (total > cap) throw InfeasibleError("nodes_below: too many nodes", cap, total);
  std::vector<ValuationFunction> out;
  for (int m = 0; m < n; ++m) {
    auto level = level_nodes(sigma, shift, m, cap);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

/// Immediate successors of s in T_shift.
inline std::vector<ValuationFunction> directions(const ValuationFunction& s, std::uint64_t cap = kDefaultNodeCap) {
  return extensions_to_level(s, s.level() + 1, cap);
}

// ---------------------------------------------------------------------------
// Strong subtrees
// ---------------------------------------------------------------------------

/// One coordinate of a strong vector subtree, described by its root, its level
/// set and a successor selection: for a node s at levels[j] and an immediate
/// successor t of s in T, select(t) is the unique member of the subtree at
/// levels[j+1] above t. Directions without an explicit entry select the
/// node_less-least choice, the zero extension of t.
struct StrongSubtree {
  int shift = 0;
  std::vector<int> levels;
  ValuationFunction root;
  std::map<ValuationFunction, ValuationFunction, NodeLess> selections;

  ValuationFunction select(const ValuationFunction& direction) const {
    auto it = selections.find(direction);
    if (it != selections.end()) return it->second;
    auto pos = std::find(levels.begin(), levels.end(), direction.level() - 1);
    if (pos == levels.end() || pos + 1 == levels.end()) throw InputError("select: direction not above a subtree level");
    return direction.with_level(*(pos + 1));
  }

  int level_index(int level) const {
    auto pos = std::find(levels.begin(), levels.end(), level);
    return pos == levels.end() ? -1 : static_cast<int>(pos - levels.begin());
  }

  bool contains(const ValuationFunction& f) const {
    if (f.shift() != shift) return false;
    int idx = level_index(f.level());
    if (idx < 0) return false;
    if (!(restrict(f, levels[0]) == root)) return false;
    for (int j = 0; j < idx; ++j) {
      ValuationFunction chosen = select(restrict(f, levels[j] + 1));
      if (!(chosen == restrict(f, levels[j + 1]))) return false;
    }
    return true;
  }

  /// Nodes per level for the first `height` levels.
  std::vector<std::vector<ValuationFunction>> materialize(int height, std::uint64_t cap = kDefaultNodeCap) const {
    if (height > static_cast<int>(levels.size())) throw InputError("materialize: height exceeds level set");
    std::vector<std::vector<ValuationFunction>> out;
    if (height == 0) return out;
    out.push_back({root});
    std::uint64_t total = 1;
    for (int j = 0; j + 1 < height; ++j) {
      std::uint64_t per = count_immediate_successors(root.signature(), shift, levels[j]);
      total = detail::sat_add(total, detail::sat_mul(per, out.back().size()));
      if (total > cap) throw InfeasibleError("materialize: strong subtree too large", cap, total);
      std::vector<ValuationFunction> next;
      for (const auto& s : out.back())
        for (const auto& t : directions(s, cap)) next.push_back(select(t));
      std::sort(next.begin(), next.end(), NodeLess{});
      out.push_back(std::move(next));
    }
    return out;
  }

  /// Structural checks: root on levels[0], explicit selections extend their
  /// direction and land on the next level.
  void validate() const {
    if (levels.empty()) throw InputError("strong subtree without levels");
    for (std::size_t i = 1; i < levels.size(); ++i)
      if (levels[i] <= levels[i - 1]) throw InputError("strong subtree levels must increase");
    if (root.shift() != shift || root.level() != levels[0]) throw InputError("strong subtree root off its level");
    for (const auto& [dir, chosen] : selections) {
      int idx = level_index(dir.level() - 1);
      if (dir.shift() != shift || idx < 0 || idx + 1 >= static_cast<int>(levels.size()))
        throw InputError("selection direction off the level set");
      if (chosen.level() != levels[idx + 1] || !is_below(dir, chosen))
        throw InputError("selection does not extend its direction to the next level");
    }
  }
};

/// Level-compatible strong subtrees of T_0, T_1, ...: coordinate c has shift c.
struct StrongSubtreeWitness {
  std::vector<int> levels;
  std::vector<StrongSubtree> coords;

  int dimension() const { return static_cast<int>(coords.size()); }
  int height() const { return static_cast<int>(levels.size()); }

  void validate() const {
    for (std::size_t c = 0; c < coords.size(); ++c) {
      if (coords[c].levels != levels) throw InputError("witness coordinates are not level compatible");
      if (coords[c].shift != static_cast<int>(c)) throw InputError("witness coordinate shift mismatch");
      coords[c].validate();
    }
  }
};

/// Closed under pairwise meets.
inline bool is_meet_closed(const NodeSet& nodes) {
  for (auto a = nodes.begin(); a != nodes.end(); ++a)
    for (auto b = std::next(a); b != nodes.end(); ++b)
      if (!nodes.count(meet(*a, *b))) return false;
  return true;
}

/// Strong-subtree predicate for an explicit finite node set of T_shift whose
/// top level is taken as the maximal level.
inline bool is_strong_subtree(const NodeSet& nodes, std::uint64_t cap = kDefaultNodeCap) {
  if (nodes.empty()) return true;
  if (!is_meet_closed(nodes)) return false;
  std::map<int, std::vector<ValuationFunction>> by_level;
  for (const auto& n : nodes) by_level[n.level()].push_back(n);
  if (by_level.begin()->second.size() != 1) return false;
  const auto& root = by_level.begin()->second.front();
  for (const auto& n : nodes)
    if (!is_below(root, n) || n.shift() != root.shift()) return false;
  for (auto it = by_level.begin(); std::next(it) != by_level.end(); ++it) {
    const auto& next = std::next(it)->second;
    for (const auto& s : it->second) {
      std::map<ValuationFunction, int, NodeLess> hits;
      for (const auto& u : next)
        if (is_below(s, u)) ++hits[restrict(u, s.level() + 1)];
      if (hits.empty()) return false;  // unbalanced
      for (const auto& [dir, count] : hits)
        if (count != 1) return false;
      if (hits.size() != count_immediate_successors(s.signature(), s.shift(), s.level())) return false;
      (void)cap;
    }
  }
  return true;
}

/// Extends a subtree E of T_shift to a strong subtree with level set `levels`
/// (which must contain L(E)). Directions met by E select E's node; the others
/// select their zero extension. E empty with empty `levels` gives the empty tree.
inline StrongSubtree complete_to_strong(const NodeSet& e, std::vector<int> levels, int shift,
                                        const Signature& sigma) {
  StrongSubtree s;
  s.shift = shift;
  s.levels = levels;
  if (levels.empty()) {
    if (!e.empty()) throw InputError("complete_to_strong: level set misses the input levels");
    s.root = zero_function(sigma, shift, 0);
    return s;
  }
  for (const auto& f : e) {
    if (f.shift() != shift) throw InputError("complete_to_strong: node of another shift");
    if (s.level_index(f.level()) < 0) throw InputError("complete_to_strong: node off the level set");
  }
  NodeSet closed;
  for (const auto& f : e)
    for (int l : levels)
      if (l <= f.level()) closed.insert(restrict(f, l));
  if (closed.empty()) {
    s.root = zero_function(sigma, shift, levels[0]);
  } else {
    s.root = *closed.begin();
    for (const auto& f : closed)
      if (f.level() == levels[0] && !(f == s.root)) throw InputError("complete_to_strong: input is not rooted");
  }
  for (const auto& f : closed) {
    int idx = s.level_index(f.level());
    if (idx == 0) continue;
    ValuationFunction dir = restrict(f, levels[idx - 1] + 1);
    auto [it, fresh] = s.selections.emplace(dir, f);
    if (!fresh && !(it->second == f))
      throw InputError("complete_to_strong: two input nodes above one direction (not meet closed)");
  }
  return s;
}

/// The operation on E with its own level set; E must be meet closed.
inline StrongSubtree complete_to_strong(const NodeSet& e) {
  if (!is_meet_closed(e)) throw InputError("complete_to_strong: input is not meet closed");
  std::set<int> lv;
  for (const auto& f : e) lv.insert(f.level());
  if (e.empty()) return complete_to_strong(e, {}, 0, Signature({}, 1));
  return complete_to_strong(e, std::vector<int>(lv.begin(), lv.end()), e.begin()->shift(), e.begin()->signature());
}

/// Random strong vector subtree with the given levels, every selection explicit.
template <class Rng>
StrongSubtreeWitness random_witness(const Signature& sigma, int dimension, const std::vector<int>& levels, Rng& rng,
                                    std::uint64_t cap = kDefaultNodeCap) {
  StrongSubtreeWitness w;
  w.levels = levels;
  std::uint64_t total = 0;
  for (int c = 0; c < dimension; ++c) {
    StrongSubtree s;
    s.shift = c;
    s.levels = levels;
    s.root = random_extension(zero_function(sigma, c, 0), levels[0], rng);
    std::vector<ValuationFunction> frontier{s.root};
    for (std::size_t j = 0; j + 1 < levels.size(); ++j) {
      std::vector<ValuationFunction> next;
      for (const auto& node : frontier)
        for (const auto& t : directions(node, cap)) {
          auto chosen = random_extension(t, levels[j + 1], rng);
          s.selections.emplace(t, chosen);
          next.push_back(chosen);
          if (++total > cap) throw InfeasibleError("random_witness: too many nodes", cap, total);
        }
      frontier = std::move(next);
    }
    w.coords.push_back(std::move(s));
  }
  return w;
}

/// The full trees T_c restricted to the levels {0..height-1}.
inline StrongSubtreeWitness full_witness(const Signature& sigma, int dimension, int height) {
  StrongSubtreeWitness w;
  for (int l = 0; l < height; ++l) w.levels.push_back(l);
  for (int c = 0; c < dimension; ++c) w.coords.push_back({c, w.levels, zero_function(sigma, c, 0), {}});
  return w;
}

// ---------------------------------------------------------------------------
// Valuation trees
// ---------------------------------------------------------------------------

struct ValuationTree {
  int height = 0;
  std::vector<int> levels;                               // T_0-levels of the tree levels
  std::vector<std::vector<ValuationFunction>> by_level;  // node_less order within each level
  StrongSubtreeWitness witness;

  std::size_t size() const {
    std::size_t n = 0;
    for (const auto& l : by_level) n += l.size();
    return n;
  }

  NodeSet nodes() const {
    NodeSet out;
    for (const auto& l : by_level) out.insert(l.begin(), l.end());
    return out;
  }

  bool contains(const ValuationFunction& f) const {
    for (std::size_t m = 0; m < levels.size(); ++m)
      if (levels[m] == f.level()) return std::binary_search(by_level[m].begin(), by_level[m].end(), f, NodeLess{});
    return false;
  }
};

/// val(S_0, ..., S_{k-1}) for the first k coordinates of the witness.
inline ValuationTree build_valuation_tree(const StrongSubtreeWitness& witness, int k,
                                          std::uint64_t cap = kDefaultNodeCap) {
  witness.validate();
  if (k < 0 || k > witness.dimension() || k > witness.height())
    throw InputError("build_valuation_tree: witness must have dimension and height >= k");
  ValuationTree tree;
  tree.height = k;
  tree.levels.assign(witness.levels.begin(), witness.levels.begin() + k);
  tree.witness = witness;
  if (k == 0) return tree;
  const Signature& sigma = witness.coords[0].root.signature();
  std::uint64_t estimate = 0;
  for (int m = 0; m < k; ++m) estimate = detail::sat_add(estimate, count_level_nodes(sigma, 0, m));
  if (estimate > cap) throw InfeasibleError("build_valuation_tree: tree too large", cap, estimate);

  // upper[m] = level m of val(S_{c+1}, ..., S_{k-1}).
  std::vector<std::vector<ValuationFunction>> upper;
  for (int c = k - 1; c >= 0; --c) {
    const StrongSubtree& s = witness.coords[c];
    int h = k - c;
    std::vector<std::vector<ValuationFunction>> cur{{s.root}};
    for (int m = 0; m + 1 < h; ++m) {
      std::vector<ValuationFunction> next;
      for (const auto& f : cur[m])
        for (const auto& g : upper[m])
          for (const auto& t : extensions(f, g)) next.push_back(s.select(t));
      std::sort(next.begin(), next.end(), NodeLess{});
      cur.push_back(std::move(next));
    }
    upper = std::move(cur);
  }
  tree.by_level = std::move(upper);
  return tree;
}

/// Membership in val(S_c, ..., S_{c+h-1}) without building the tree: f belongs
/// iff it lies in S_c on one of the first h levels and each of its slices at a
/// lower tree level lies in the valuation tree one coordinate up.
inline bool val_contains(const StrongSubtreeWitness& witness, int h, const ValuationFunction& f) {
  std::map<std::pair<int, ValuationFunction>, bool,
           decltype([](const auto& a, const auto& b) {
             return a.first != b.first ? a.first < b.first : node_less(a.second, b.second);
           })>
      memo;
  std::function<bool(int, const ValuationFunction&)> rec = [&](int height, const ValuationFunction& g) -> bool {
    int c = g.shift();
    if (height <= 0 || c >= witness.dimension()) return false;
    auto key = std::make_pair(height, g);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    const StrongSubtree& s = witness.coords[c];
    int idx = s.level_index(g.level());
    bool ok = idx >= 0 && idx < height && s.contains(g);
    for (int m = 0; ok && m < idx; ++m) ok = rec(height - 1, slice(g, {witness.levels[m]}));
    memo.emplace(key, ok);
    return ok;
  };
  return rec(h + f.shift(), f);
}

/// The structural embedding T_0(<k) -> T of a valuation tree, stored as a map.
/// A node u at level m goes to the node v at tree level m with
/// v(levels[ys]) = u(ys) for every decreasing ys below m.
struct StructuralEmbedding {
  std::map<ValuationFunction, ValuationFunction, NodeLess> map;

  const ValuationFunction& operator()(const ValuationFunction& u) const {
    auto it = map.find(u);
    if (it == map.end()) throw InputError("structural embedding: node outside the domain");
    return it->second;
  }
};

/// Pull-back of a tree node at tree level m along the level enumeration.
inline ValuationFunction pull_back(const ValuationFunction& v, const std::vector<int>& levels, int m) {
  ValuationFunction u(v.signature_ptr(), v.shift(), m);
  for (const auto& [t, val] : v.values()) {
    Tuple ys;
    for (int x : t) {
      auto pos = std::find(levels.begin(), levels.begin() + m, x);
      if (pos == levels.begin() + m) break;
      ys.push_back(static_cast<int>(pos - levels.begin()));
    }
    if (ys.size() == t.size()) u.set(ys, val);
  }
  return u;
}

inline StructuralEmbedding structural_embedding(const ValuationTree& tree) {
  StructuralEmbedding emb;
  for (int m = 0; m < tree.height; ++m) {
    for (const auto& v : tree.by_level[m]) {
      auto [it, fresh] = emb.map.emplace(pull_back(v, tree.levels, m), v);
      if (!fresh) throw InputError("structural_embedding: input is not a valuation tree");
    }
  }
  if (tree.height > 0) {
    const Signature& sigma = tree.by_level[0][0].signature();
    std::uint64_t expected = 0;
    for (int m = 0; m < tree.height; ++m) expected += count_level_nodes(sigma, 0, m);
    if (emb.map.size() != expected) throw InputError("structural_embedding: input is not a valuation tree");
  }
  return emb;
}

using CopyColouring = std::function<int(std::span<const ValuationFunction>)>;

/// <chi(f o f_i) : i> with f the structural embedding into val(witness).
inline std::vector<int> induced_colouring(const StrongSubtreeWitness& witness, int h, const CopyColouring& chi,
                                          const std::vector<std::vector<ValuationFunction>>& copies,
                                          std::uint64_t cap = kDefaultNodeCap) {
  auto tree = build_valuation_tree(witness, h, cap);
  auto f = structural_embedding(tree);
  std::vector<int> out;
  out.reserve(copies.size());
  for (const auto& copy : copies) {
    std::vector<ValuationFunction> image;
    for (const auto& u : copy) image.push_back(f(u));
    out.push_back(chi(image));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Bounded search for monochromatic strong subtrees
// ---------------------------------------------------------------------------

namespace detail {

// Calls `emit` for every strong subtree of T_shift with the given levels whose
// root is drawn from `roots` and whose selection for a direction t is drawn
// from options(t, next_level). Returns false when `emit` asked to stop.
inline bool enumerate_strong(
    int shift, const std::vector<int>& levels, const std::vector<ValuationFunction>& roots,
    const std::function<std::vector<ValuationFunction>(const ValuationFunction&, int)>& options,
    std::uint64_t& budget, std::uint64_t cap, const std::function<bool(const StrongSubtree&)>& emit) {
  StrongSubtree s;
  s.shift = shift;
  s.levels = levels;
  // Pending directions of the current level, resolved one by one.
  std::function<bool(std::vector<ValuationFunction>, std::size_t, int, std::vector<ValuationFunction>)> rec =
      [&](std::vector<ValuationFunction> dirs, std::size_t i, int j,
          std::vector<ValuationFunction> next) -> bool {
    if (i == dirs.size()) {
      if (j + 2 >= static_cast<int>(levels.size())) {
        if (++budget > cap) throw InfeasibleError("milliken_search: search space too large", cap, budget);
        return emit(s);
      }
      std::vector<ValuationFunction> nd;
      for (const auto& u : next)
        for (const auto& t : directions(u, cap)) nd.push_back(t);
      return rec(std::move(nd), 0, j + 1, {});
    }
    for (const auto& choice : options(dirs[i], levels[j + 1])) {
      s.selections[dirs[i]] = choice;
      next.push_back(choice);
      if (!rec(dirs, i + 1, j, next)) return false;
      next.pop_back();
    }
    s.selections.erase(dirs[i]);
    return true;
  };
  for (const auto& r : roots) {
    s.root = r;
    s.selections.clear();
    if (levels.size() == 1) {
      if (++budget > cap) throw InfeasibleError("milliken_search: search space too large", cap, budget);
      if (!emit(s)) return false;
      continue;
    }
    if (!rec(directions(r, cap), 0, 0, {})) return false;
  }
  return true;
}

inline void level_subsets(const std::vector<int>& pool, int size, const std::function<bool(const std::vector<int>&)>& f) {
  std::vector<int> pick;
  std::function<bool(std::size_t)> rec = [&](std::size_t start) -> bool {
    if (static_cast<int>(pick.size()) == size) return f(pick);
    for (std::size_t i = start; i < pool.size(); ++i) {
      pick.push_back(pool[i]);
      if (!rec(i + 1)) return false;
      pick.pop_back();
    }
    return true;
  };
  rec(0);
}

}  // namespace detail

using WitnessColouring = std::function<int(const StrongSubtreeWitness&)>;

struct MillikenQuery {
  Signature sigma;
  int dimension = 1;
  int window = 4;         ///< levels 0..window-1 are searched
  int target_height = 2;  ///< height of the returned strong vector subtree
  int k = 1;              ///< height of the coloured subtrees
  bool unbounded_branching = false;
  std::uint64_t cap = kDefaultNodeCap;
};

struct MillikenResult {
  bool found = false;
  StrongSubtreeWitness witness;
  int colour = 0;
  std::uint64_t examined = 0;
  std::vector<std::vector<int>> frontier;  // level sets exhausted without success
};

/// All height-k strong vector subtrees of `s` (an explicit strong vector subtree).
inline void for_each_substrong(const StrongSubtreeWitness& s, int k, std::uint64_t& budget, std::uint64_t cap,
                               const std::function<bool(const StrongSubtreeWitness&)>& emit) {
  int d = s.dimension();
  std::vector<std::vector<std::vector<ValuationFunction>>> mat;
  for (const auto& c : s.coords) mat.push_back(c.materialize(s.height(), cap));
  detail::level_subsets(s.levels, k, [&](const std::vector<int>& sub) {
    std::vector<std::vector<StrongSubtree>> per(d);
    for (int c = 0; c < d; ++c) {
      auto at = [&](int level) -> const std::vector<ValuationFunction>& {
        return mat[c][s.coords[c].level_index(level)];
      };
      auto opts = [&](const ValuationFunction& t, int next) {
        std::vector<ValuationFunction> out;
        for (const auto& u : at(next))
          if (is_below(t, u)) out.push_back(u);
        return out;
      };
      detail::enumerate_strong(c, sub, at(sub[0]), opts, budget, cap, [&](const StrongSubtree& st) {
        per[c].push_back(st);
        return true;
      });
    }
    std::vector<std::size_t> idx(d, 0);
    if (std::any_of(per.begin(), per.end(), [](const auto& v) { return v.empty(); })) return true;
    while (true) {
      StrongSubtreeWitness w;
      w.levels = sub;
      for (int c = 0; c < d; ++c) w.coords.push_back(per[c][idx[c]]);
      if (!emit(w)) return false;
      int c = d - 1;
      while (c >= 0 && ++idx[c] == per[c].size()) idx[c--] = 0;
      if (c < 0) return true;
    }
  });
}

/// Searches the window for a strong vector subtree of the target height all of
/// whose height-k strong subtrees share a colour. Exhaustion is reported, and an
/// oversize search fails with InfeasibleError.
inline MillikenResult milliken_search(const MillikenQuery& q, const WitnessColouring& colouring) {
  if (q.unbounded_branching)
    throw InputError("milliken_search: the tree is not finitely branching; bounded search does not apply");
  if (q.dimension < 1 || q.k < 1 || q.target_height < q.k || q.window < q.target_height)
    throw InputError("milliken_search: need dimension >= 1 and 1 <= k <= target height <= window");
  MillikenResult result;
  std::vector<int> pool(q.window);
  for (int i = 0; i < q.window; ++i) pool[i] = i;
  std::uint64_t budget = 0;
  detail::level_subsets(pool, q.target_height, [&](const std::vector<int>& levels) {
    std::vector<std::vector<StrongSubtree>> per(q.dimension);
    for (int c = 0; c < q.dimension; ++c) {
      auto roots = level_nodes(q.sigma, c, levels[0], q.cap);
      auto opts = [&](const ValuationFunction& t, int next) { return extensions_to_level(t, next, q.cap); };
      detail::enumerate_strong(c, levels, roots, opts, budget, q.cap, [&](const StrongSubtree& st) {
        per[c].push_back(st);
        return true;
      });
    }
    std::vector<std::size_t> idx(q.dimension, 0);
    while (true) {
      StrongSubtreeWitness cand;
      cand.levels = levels;
      for (int c = 0; c < q.dimension; ++c) cand.coords.push_back(per[c][idx[c]]);
      ++result.examined;
      std::optional<int> colour;
      bool mono = true;
      for_each_substrong(cand, q.k, budget, q.cap, [&](const StrongSubtreeWitness& sub) {
        int col = colouring(sub);
        if (!colour) colour = col;
        mono = *colour == col;
        return mono;
      });
      if (mono && colour) {
        result.found = true;
        result.witness = cand;
        result.colour = *colour;
        return false;
      }
      int c = q.dimension - 1;
      while (c >= 0 && ++idx[c] == per[c].size()) idx[c--] = 0;
      if (c < 0) break;
    }
    result.frontier.push_back(levels);
    return true;
  });
  return result;
}

}  // namespace brt
