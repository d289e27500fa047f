#pragma once

// Class reductions: adding unary relations by a product, encoding arbitrary
// injective structures as hypergraphs, and stripping bad tuples.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "brt/error.hpp"
#include "brt/structures.hpp"

namespace brt {

// ---------------------------------------------------------------------------
// Unary product
// ---------------------------------------------------------------------------

using ProductVertex = std::pair<int, int>;  // (base vertex v, unary index i)

struct UnaryProduct {
  EnumeratedStructure base;
  std::optional<int> unaries;  // nullopt: countably many
  std::vector<ProductVertex> vertices;  // lexicographic
  std::map<ProductVertex, int> index;
  EnumeratedStructure structure;

  int vertex(int v, int i) const {
    auto it = index.find({v, i});
    if (it == index.end())
      throw InputError("no product vertex (" + std::to_string(v) + "," + std::to_string(i) + ")");
    return it->second;
  }
  int project(int p) const { return vertices.at(p).first; }
};

inline std::string unary_name(int i) { return "U" + std::to_string(i); }

/// G over a unary-free base: vertices (v,i) with i < min(v+1,u), (v,i) in U^i,
/// and a tuple related iff its projection is.
inline UnaryProduct unary_expand(const EnumeratedStructure& base, std::optional<int> u,
                                 std::uint64_t cap = kDefaultNodeCap) {
  if (base.language().has_unaries()) throw InputError("unary_expand: base language has unary relations");
  if (u && *u < 1) throw InputError("unary_expand: need at least one unary relation");
  UnaryProduct g;
  g.base = base;
  g.unaries = u;
  auto width = [&](int v) { return u ? std::min(v + 1, *u) : v + 1; };
  std::uint64_t total = 0;
  for (int v = 0; v < base.size(); ++v) total += width(v);
  for (const auto& [name, tuples] : base.relations())
    for (const auto& t : tuples) {
      std::uint64_t c = 1;
      for (int x : t) c = detail::sat_mul(c, width(x));
      total = detail::sat_add(total, c);
    }
  if (total > cap) throw InfeasibleError("unary_expand: product too large", cap, total);

  std::vector<Symbol> symbols = base.language().symbols();
  std::vector<CountableFamily> families = base.language().families();
  if (u) {
    for (int i = 0; i < *u; ++i) symbols.push_back({unary_name(i), 1});
  } else {
    families.push_back({"U", 1});
  }
  RelationalLanguage lang(symbols, families);

  for (int v = 0; v < base.size(); ++v)
    for (int i = 0; i < width(v); ++i) {
      g.index.emplace(ProductVertex{v, i}, static_cast<int>(g.vertices.size()));
      g.vertices.push_back({v, i});
    }
  g.structure = EnumeratedStructure(lang, static_cast<int>(g.vertices.size()), base.is_hypergraph());
  for (int p = 0; p < static_cast<int>(g.vertices.size()); ++p) g.structure.add(unary_name(g.vertices[p].second), {p});
  for (const auto& [name, tuples] : base.relations())
    for (const auto& t : tuples) {
      std::vector<int> choice(t.size(), 0);
      while (true) {
        Tuple img;
        for (std::size_t j = 0; j < t.size(); ++j) img.push_back(g.vertex(t[j], choice[j]));
        g.structure.add(name, img);
        std::size_t j = t.size();
        for (; j > 0; --j) {
          if (++choice[j - 1] < width(t[j - 1])) break;
          choice[j - 1] = 0;
        }
        if (j == 0) break;
      }
    }
  return g;
}

/// pi o f is injective.
inline bool is_transversal(const UnaryProduct& g, const std::vector<int>& f) {
  std::set<int> seen;
  for (int p : f)
    if (!seen.insert(g.project(p)).second) return false;
  return true;
}

/// psi_0(v,i) = (psi(v), i) for a map psi on base vertices.
inline std::vector<int> lift_embedding(const UnaryProduct& g, const std::vector<int>& psi) {
  if (static_cast<int>(psi.size()) != g.base.size()) throw InputError("lift_embedding: map must cover the base");
  std::vector<int> out;
  out.reserve(g.vertices.size());
  for (const auto& [v, i] : g.vertices) out.push_back(g.vertex(psi.at(v), i));
  return out;
}

// ---------------------------------------------------------------------------
// Hypergraph encoding
// ---------------------------------------------------------------------------

struct SymbolPermutation {
  std::string symbol;
  std::vector<int> perm;  // t_j = x_{perm[j]} for the sorted vertex set x

  auto operator<=>(const SymbolPermutation&) const = default;
};

using EncodedSet = std::vector<SymbolPermutation>;  // sorted, nonempty

inline std::string encoded_name(const EncodedSet& s) {
  std::string out = "R{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ";";
    out += s[i].symbol + "[";
    for (std::size_t j = 0; j < s[i].perm.size(); ++j) out += (j ? "," : "") + std::to_string(s[i].perm[j]);
    out += "]";
  }
  return out + "}";
}

struct EncodedLanguage {
  RelationalLanguage original;
  RelationalLanguage encoded;
  std::map<int, std::vector<SymbolPermutation>> catalogue;  // M_i
  std::map<std::string, EncodedSet> by_name;
  std::map<EncodedSet, std::string> name_of;
};

inline EncodedLanguage encode_language(const RelationalLanguage& lang, std::uint64_t cap = 1u << 16) {
  EncodedLanguage el;
  el.original = lang;
  for (const auto& f : lang.families())
    if (f.arity > 1) throw InputError("encode_language: infinitely many relations of arity > 1");
  std::vector<Symbol> symbols;
  for (const auto& s : lang.symbols())
    if (s.arity == 1) symbols.push_back(s);
  std::uint64_t total = 0;
  for (const auto& s : lang.symbols()) {
    if (s.arity < 2) continue;
    std::vector<int> perm(s.arity);
    std::iota(perm.begin(), perm.end(), 0);
    do el.catalogue[s.arity].push_back({s.name, perm});
    while (std::next_permutation(perm.begin(), perm.end()));
  }
  for (auto& [arity, m] : el.catalogue) {
    std::sort(m.begin(), m.end());
    if (m.size() >= 63) throw InfeasibleError("encode_language: too many encoded symbols", cap, UINT64_MAX);
    total = detail::sat_add(total, (std::uint64_t{1} << m.size()) - 1);
    if (total > cap) throw InfeasibleError("encode_language: too many encoded symbols", cap, total);
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m.size()); ++mask) {
      EncodedSet s;
      for (std::size_t j = 0; j < m.size(); ++j)
        if (mask & (std::uint64_t{1} << j)) s.push_back(m[j]);
      std::string name = encoded_name(s);
      symbols.push_back({name, arity});
      el.by_name.emplace(name, s);
      el.name_of.emplace(s, name);
    }
  }
  std::vector<CountableFamily> unary_families;
  for (const auto& f : lang.families()) unary_families.push_back(f);
  el.encoded = RelationalLanguage(symbols, unary_families);
  return el;
}

/// T(A): each vertex set carries the relation indexed by M_A of its sorted enumeration.
inline EnumeratedStructure encode_T(const EnumeratedStructure& a, const EncodedLanguage& el) {
  if (!(a.language() == el.original)) throw InputError("encode_T: language mismatch");
  EnumeratedStructure out(el.encoded, a.size(), true);
  std::map<Tuple, EncodedSet> sets;
  for (const auto& [name, tuples] : a.relations()) {
    int arity = *a.language().arity_of(name);
    for (const auto& t : tuples) {
      if (arity == 1) {
        out.add(name, t);
        continue;
      }
      Tuple sorted = t;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw InputError("encode_T: relation '" + name + "' holds a non-injective tuple");
      std::vector<int> perm;
      for (int x : t) perm.push_back(static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), x) - sorted.begin()));
      sets[sorted].push_back({name, perm});
    }
  }
  for (auto& [set, s] : sets) {
    std::sort(s.begin(), s.end());
    out.add(el.name_of.at(s), set);
  }
  return out;
}

/// U(A'): re-expands every encoded relation.
inline EnumeratedStructure decode_U(const EnumeratedStructure& a, const EncodedLanguage& el) {
  if (!(a.language() == el.encoded)) throw InputError("decode_U: language mismatch");
  EnumeratedStructure out(el.original, a.size(), false);
  for (const auto& [name, tuples] : a.relations()) {
    auto it = el.by_name.find(name);
    for (const auto& t : tuples) {
      if (it == el.by_name.end()) {
        out.add(name, t);
        continue;
      }
      for (const auto& sp : it->second) {
        Tuple img;
        for (int j : sp.perm) img.push_back(t[j]);
        out.add(sp.symbol, img);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Bad tuples
// ---------------------------------------------------------------------------

/// Canonical form under all vertex permutations: the least sorted relation listing.
inline std::vector<std::pair<std::string, Tuple>> canonical_form(const EnumeratedStructure& s) {
  std::vector<int> perm(s.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::optional<std::vector<std::pair<std::string, Tuple>>> best;
  do {
    std::vector<std::pair<std::string, Tuple>> listing;
    for (const auto& [name, tuples] : s.relations())
      for (const auto& t : tuples) {
        Tuple img;
        for (int x : t) img.push_back(perm[x]);
        if (s.is_hypergraph()) std::sort(img.begin(), img.end());
        listing.emplace_back(name, img);
      }
    std::sort(listing.begin(), listing.end());
    if (!best || listing < *best) best = std::move(listing);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return *best;
}

inline bool isomorphic(const EnumeratedStructure& a, const EnumeratedStructure& b) {
  if (a.size() != b.size() || !(a.language() == b.language())) return false;
  for (const auto& s : a.language().symbols())
    if (a.tuples(s.name).size() != b.tuples(s.name).size()) return false;
  return canonical_form(a) == canonical_form(b);
}

inline void check_forbidden(const std::vector<EnumeratedStructure>& forbidden) {
  for (const auto& f : forbidden) {
    if (f.size() < 2) throw InputError("strip_bad: forbidden structures need at least two vertices");
    if (!is_covered(f)) throw InputError("strip_bad: forbidden structure not covered by a relation");
    if (f.size() > 8) throw InputError("strip_bad: forbidden structure too large");
  }
}

/// M induces a member of F on X.
inline bool is_bad(const EnumeratedStructure& m, std::vector<int> x, const std::vector<EnumeratedStructure>& forbidden) {
  std::sort(x.begin(), x.end());
  auto induced = m.induced(x);
  for (const auto& f : forbidden)
    if (f.size() == induced.size() && isomorphic(f, induced)) return true;
  return false;
}

/// The tuple contains a bad subset.
inline bool is_bad_tuple(const EnumeratedStructure& m, const Tuple& t,
                         const std::vector<EnumeratedStructure>& forbidden) {
  std::vector<int> verts(t.begin(), t.end());
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  int n = static_cast<int>(verts.size());
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    if (std::popcount(mask) < 2) continue;
    std::vector<int> sub;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) sub.push_back(verts[i]);
    if (is_bad(m, sub, forbidden)) return true;
  }
  return false;
}

/// G: M with every bad tuple of arity >= 2 removed.
inline EnumeratedStructure strip_bad(const EnumeratedStructure& m, const std::vector<EnumeratedStructure>& forbidden) {
  check_forbidden(forbidden);
  EnumeratedStructure g = m;
  for (const auto& [name, tuples] : m.relations()) {
    if (*m.language().arity_of(name) < 2) continue;
    for (const auto& t : tuples)
      if (is_bad_tuple(m, t, forbidden)) g.remove(name, t);
  }
  return g;
}

/// Isomorphism types of structures on A's vertices and unaries whose stripped
/// form is A, in canonical-form order.
inline std::vector<EnumeratedStructure> preimage_types(const EnumeratedStructure& a,
                                                       const std::vector<EnumeratedStructure>& forbidden,
                                                       std::uint64_t cap = 1u << 16) {
  check_forbidden(forbidden);
  if (!(strip_bad(a, forbidden) == a)) throw InputError("preimage_types: A is not F-free");
  std::vector<std::pair<std::string, Tuple>> extra;
  for (const auto& s : a.language().symbols()) {
    if (s.arity < 2 || s.arity > a.size()) continue;
    std::vector<int> pick(s.arity);
    std::function<void(int)> rec = [&](int depth) {
      if (depth == s.arity) {
        Tuple t(pick.begin(), pick.end());
        if (a.is_hypergraph() && !std::is_sorted(t.begin(), t.end())) return;
        if (!a.related(s.name, t)) extra.emplace_back(s.name, t);
        return;
      }
      for (int v = 0; v < a.size(); ++v)
        if (std::find(pick.begin(), pick.begin() + depth, v) == pick.begin() + depth) {
          pick[depth] = v;
          rec(depth + 1);
        }
    };
    rec(0);
  }
  if (extra.size() >= 63 || (std::uint64_t{1} << extra.size()) > cap)
    throw InfeasibleError("preimage_types: too many candidate structures", cap,
                          extra.size() >= 63 ? UINT64_MAX : std::uint64_t{1} << extra.size());
  std::map<std::vector<std::pair<std::string, Tuple>>, EnumeratedStructure> types;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << extra.size()); ++mask) {
    EnumeratedStructure b = a;
    bool ok = true;
    for (std::size_t j = 0; j < extra.size() && ok; ++j)
      if (mask & (std::uint64_t{1} << j)) {
        if (a.is_hypergraph() && b.code(extra[j].second) != 0) ok = false;
        else b.add(extra[j].first, extra[j].second);
      }
    if (!ok || !(strip_bad(b, forbidden) == a)) continue;
    types.emplace(canonical_form(b), b);
  }
  std::vector<EnumeratedStructure> out;
  for (auto& [k, b] : types) out.push_back(std::move(b));
  return out;
}

}  // namespace brt
