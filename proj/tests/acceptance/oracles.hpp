#pragma once

// Brute-force reference implementations used to cross-check the library.
// They work from the definitions directly and share no code paths with it
// beyond the value types.

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "brt/brt.hpp"

namespace oracle {

using brt::EnumeratedStructure;
using brt::Signature;
using brt::Tuple;
using brt::ValuationFunction;

/// Nonempty subsets of {0..n-1}, each written decreasing.
inline std::vector<Tuple> decreasing_subsets(int n) {
  std::vector<Tuple> out;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    Tuple t;
    for (int i = n - 1; i >= 0; --i)
      if (mask & (1u << i)) t.push_back(i);
    out.push_back(t);
  }
  return out;
}

/// Every node of T_0 at level n: all maps t -> [0, sigma_|t|) on decreasing tuples below n.
inline std::vector<ValuationFunction> level(const Signature& sigma, int n) {
  auto sp = std::make_shared<const Signature>(sigma);
  auto slots = decreasing_subsets(n);
  std::vector<int> vals(slots.size(), 0);
  std::vector<ValuationFunction> out;
  while (true) {
    ValuationFunction f(sp, 0, n);
    for (std::size_t i = 0; i < slots.size(); ++i)
      if (vals[i] != 0) f.set(slots[i], vals[i]);
    out.push_back(f);
    std::size_t i = 0;
    for (; i < slots.size(); ++i) {
      if (++vals[i] < sigma[static_cast<int>(slots[i].size())]) break;
      vals[i] = 0;
    }
    if (i == slots.size()) break;
  }
  return out;
}

inline std::vector<std::vector<ValuationFunction>> levels_below(const Signature& sigma, int k) {
  std::vector<std::vector<ValuationFunction>> out;
  for (int n = 0; n < k; ++n) out.push_back(level(sigma, n));
  return out;
}

inline ValuationFunction restrict_to(const ValuationFunction& f, int m) {
  ValuationFunction r(f.signature_ptr(), f.shift(), m);
  for (const auto& [t, v] : f.values())
    if (t.front() < m) r.set(t, v);
  return r;
}

/// Whether g restricted to the level of f equals f.
inline bool below(const ValuationFunction& f, const ValuationFunction& g) {
  return f.level() <= g.level() && restrict_to(g, f.level()) == f;
}

/// Meet inside an explicit tree given level by level: the highest node below both.
inline const ValuationFunction* tree_meet(const std::vector<std::vector<ValuationFunction>>& tree,
                                          const ValuationFunction& a, const ValuationFunction& b) {
  for (int m = static_cast<int>(tree.size()) - 1; m >= 0; --m)
    for (const auto& f : tree[m])
      if (below(f, a) && below(f, b)) return &f;
  return nullptr;
}

/// All bijections T_0(<k) -> tree that preserve levels, meets, and the valuation
/// identity psi(x)(L(t)) = x(t). `levels` lists the T_0 levels of the tree levels.
inline std::vector<std::vector<std::pair<ValuationFunction, ValuationFunction>>> structural_embeddings(
    const Signature& sigma, const std::vector<std::vector<ValuationFunction>>& tree, const std::vector<int>& levels) {
  int k = static_cast<int>(tree.size());
  auto dom = levels_below(sigma, k);
  std::vector<const ValuationFunction*> order;
  for (const auto& l : dom)
    for (const auto& f : l) order.push_back(&f);
  std::map<const ValuationFunction*, const ValuationFunction*> psi;
  std::set<const ValuationFunction*> used;
  std::vector<std::vector<std::pair<ValuationFunction, ValuationFunction>>> found;

  auto valuation_ok = [&](const ValuationFunction& x, const ValuationFunction& y) {
    for (const auto& t : decreasing_subsets(x.level())) {
      Tuple lt;
      for (int i : t) lt.push_back(levels[i]);
      if (y(lt) != x(t)) return false;
    }
    return true;
  };
  auto meets_ok = [&](const ValuationFunction* x) {
    for (const auto& [u, v] : psi) {
      const ValuationFunction* dm = tree_meet(dom, *u, *x);
      const ValuationFunction* tm = tree_meet(tree, *v, *psi.at(x));
      if (!dm || !tm || !psi.count(dm) || psi.at(dm) != tm) return false;
    }
    return true;
  };
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == order.size()) {
      found.emplace_back();
      for (const auto& [u, v] : psi) found.back().emplace_back(*u, *v);
      return;
    }
    const ValuationFunction* x = order[i];
    for (const auto& y : tree[x->level()]) {
      if (used.count(&y) || !valuation_ok(*x, y)) continue;
      psi[x] = &y;
      used.insert(&y);
      if (meets_ok(x)) rec(i + 1);
      used.erase(&y);
      psi.erase(x);
    }
  };
  rec(0);
  return found;
}

/// Relation code of a set of T_0 nodes with distinct levels, read off the top node.
inline int g_code(std::vector<ValuationFunction> nodes) {
  std::sort(nodes.begin(), nodes.end(), [](const auto& a, const auto& b) { return a.level() > b.level(); });
  for (std::size_t i = 1; i < nodes.size(); ++i)
    if (nodes[i].level() == nodes[i - 1].level()) return 0;
  if (nodes.size() < 2) return 0;
  Tuple t;
  for (std::size_t i = 1; i < nodes.size(); ++i) t.push_back(nodes[i].level());
  int v = nodes[0](t);
  int arity = static_cast<int>(nodes.size());
  return v >= 1 && v <= nodes[0].signature()[arity - 1] - 2 ? v : 0;
}

/// The hypergraph G_h on T_0(<h) as an explicit structure in the language of `lang`.
inline EnumeratedStructure g_structure(const brt::RelationalLanguage& lang, const Signature& sigma, int h,
                                       std::vector<ValuationFunction>& vertices) {
  vertices.clear();
  for (const auto& l : levels_below(sigma, h)) {
    auto sorted = l;
    std::sort(sorted.begin(), sorted.end(), brt::NodeLess{});
    vertices.insert(vertices.end(), sorted.begin(), sorted.end());
  }
  int n = static_cast<int>(vertices.size());
  EnumeratedStructure g(lang, n, true);
  std::vector<int> pick;
  std::function<void(int)> rec = [&](int start) {
    if (pick.size() >= 2) {
      std::vector<ValuationFunction> img;
      for (int v : pick) img.push_back(vertices[v]);
      if (int c = g_code(img)) g.add(lang.name_of(static_cast<int>(pick.size()), c), pick);
    }
    if (static_cast<int>(pick.size()) == lang.max_arity()) return;
    for (int v = start; v < n; ++v) {
      pick.push_back(v);
      rec(v + 1);
      pick.pop_back();
    }
  };
  rec(0);
  return g;
}

/// Tuples of s inside `vertices`, renamed along the given order.
inline std::set<std::pair<std::string, Tuple>> induced_tuples(const EnumeratedStructure& s,
                                                              const std::vector<int>& vertices) {
  std::map<int, int> pos;
  for (std::size_t i = 0; i < vertices.size(); ++i) pos[vertices[i]] = static_cast<int>(i);
  std::set<std::pair<std::string, Tuple>> out;
  for (const auto& [name, tuples] : s.relations())
    for (const auto& t : tuples) {
      Tuple r;
      for (int v : t) {
        auto it = pos.find(v);
        if (it == pos.end()) break;
        r.push_back(it->second);
      }
      if (r.size() == t.size()) out.insert({name, r});
    }
  return out;
}

inline std::set<std::pair<std::string, Tuple>> all_tuples(const EnumeratedStructure& s) {
  std::vector<int> id(s.size());
  for (int i = 0; i < s.size(); ++i) id[i] = i;
  return induced_tuples(s, id);
}

/// Increasing maps A -> B that carry A exactly onto the induced substructure.
inline std::vector<std::vector<int>> embeddings(const EnumeratedStructure& a, const EnumeratedStructure& b) {
  std::vector<std::vector<int>> out;
  std::vector<int> pick;
  auto want = all_tuples(a);
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(pick.size()) == a.size()) {
      if (induced_tuples(b, pick) == want) out.push_back(pick);
      return;
    }
    for (int v = start; v < b.size(); ++v) {
      pick.push_back(v);
      rec(v + 1);
      pick.pop_back();
    }
  };
  rec(0);
  return out;
}

/// Whether some set of |F| vertices of m induces a copy of F in any order.
inline bool contains_copy(const EnumeratedStructure& m, const EnumeratedStructure& f) {
  auto want = all_tuples(f);
  std::vector<int> pick;
  bool hit = false;
  std::function<void(int)> rec = [&](int start) {
    if (hit) return;
    if (static_cast<int>(pick.size()) == f.size()) {
      auto perm = pick;
      do
        if (induced_tuples(m, perm) == want) hit = true;
      while (!hit && std::next_permutation(perm.begin(), perm.end()));
      return;
    }
    for (int v = start; v < m.size(); ++v) {
      pick.push_back(v);
      rec(v + 1);
      pick.pop_back();
    }
  };
  rec(0);
  return hit;
}

/// w(t|l) = l + t_0 + ... + t_{l-1}.
inline long long weight(const std::vector<int>& t, std::size_t l) {
  long long w = static_cast<long long>(l);
  for (std::size_t i = 0; i < l; ++i) w += t[i];
  return w;
}

/// w(t|l) - n for the least l with w(t|l) >= n.
inline long long colour_at(const std::vector<int>& t, long long n) {
  std::size_t l = 0;
  while (weight(t, l) < n) ++l;
  return weight(t, l) - n;
}

inline long long hl_colour(const std::vector<int>& t) { return colour_at(t, static_cast<long long>(t.size())); }

/// Colour of a 3-vertex copy {n < w < v}: read the codes of {i, v} for i < w.
inline long long inf_colour(const EnumeratedStructure& h, std::vector<int> copy) {
  std::sort(copy.begin(), copy.end());
  std::vector<int> s;
  for (int i = 0; i < copy[1]; ++i) {
    int c = 0;
    for (const auto& [name, tuples] : h.relations())
      if (tuples.count({i, copy[2]})) c = h.language().code_of(name);
    s.push_back(c);
  }
  if (copy[0] > static_cast<int>(s.size())) return 0;
  return colour_at(s, copy[0]);
}

}  // namespace oracle
