#pragma once

// Enumerated relational languages and finite structures, monotone embeddings,
// and staged prefixes of universal countable structures.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "brt/error.hpp"

namespace brt {

using Tuple = std::vector<int>;

struct Symbol {
  std::string name;
  int arity = 0;

  bool operator==(const Symbol&) const = default;
};

/// A family of countably many symbols of one arity, named prefix0, prefix1, ...
/// Members exist lazily once referenced.
struct CountableFamily {
  std::string prefix;
  int arity = 0;

  bool operator==(const CountableFamily&) const = default;
};

class RelationalLanguage {
 public:
  RelationalLanguage() = default;

  explicit RelationalLanguage(std::vector<Symbol> symbols, std::vector<CountableFamily> families = {})
      : symbols_(std::move(symbols)), families_(std::move(families)) {
    std::set<std::string> names;
    for (const auto& s : symbols_) {
      if (s.arity < 1) throw InputError("symbol '" + s.name + "' has arity < 1");
      if (s.name.empty()) throw InputError("empty symbol name");
      if (!names.insert(s.name).second) throw InputError("duplicate symbol name '" + s.name + "'");
    }
    std::set<int> family_arities;
    for (const auto& f : families_) {
      if (f.arity < 1) throw InputError("countable family '" + f.prefix + "' has arity < 1");
      if (!family_arities.insert(f.arity).second)
        throw InputError("two countable families of arity " + std::to_string(f.arity));
      for (const auto& s : symbols_)
        if (family_member_index(f, s.name)) throw InputError("symbol '" + s.name + "' collides with a family name");
    }
  }

  const std::vector<Symbol>& symbols() const { return symbols_; }
  const std::vector<CountableFamily>& families() const { return families_; }

  /// Number of symbols of the given arity; nullopt when countably many.
  std::optional<int> count(int arity) const {
    for (const auto& f : families_)
      if (f.arity == arity) return std::nullopt;
    return static_cast<int>(std::count_if(symbols_.begin(), symbols_.end(),
                                          [&](const Symbol& s) { return s.arity == arity; }));
  }

  /// Largest arity carrying a symbol (0 for the empty language).
  int max_arity() const {
    int mu = 0;
    for (const auto& s : symbols_) mu = std::max(mu, s.arity);
    for (const auto& f : families_) mu = std::max(mu, f.arity);
    return mu;
  }

  bool has_unaries() const { return count(1) != 0; }

  std::optional<int> arity_of(const std::string& name) const {
    for (const auto& s : symbols_)
      if (s.name == name) return s.arity;
    for (const auto& f : families_)
      if (family_member_index(f, name)) return f.arity;
    return std::nullopt;
  }

  /// 1-based index of a symbol among the symbols of its arity: explicit
  /// symbols first (in declaration order), then family members.
  int code_of(const std::string& name) const {
    auto ar = arity_of(name);
    if (!ar) throw InputError("unknown symbol '" + name + "'");
    int j = 0;
    for (const auto& s : symbols_) {
      if (s.arity != *ar) continue;
      ++j;
      if (s.name == name) return j;
    }
    for (const auto& f : families_)
      if (auto idx = family_member_index(f, name)) return j + 1 + *idx;
    throw InputError("unknown symbol '" + name + "'");
  }

  /// Inverse of code_of.
  std::string name_of(int arity, int code) const {
    if (code < 1) throw InputError("relation codes start at 1");
    int j = 0;
    for (const auto& s : symbols_) {
      if (s.arity != arity) continue;
      if (++j == code) return s.name;
    }
    for (const auto& f : families_)
      if (f.arity == arity) return f.prefix + std::to_string(code - j - 1);
    throw InputError("no symbol of arity " + std::to_string(arity) + " with code " + std::to_string(code));
  }

  bool operator==(const RelationalLanguage&) const = default;

 private:
  static std::optional<int> family_member_index(const CountableFamily& f, const std::string& name) {
    if (name.size() <= f.prefix.size() || name.compare(0, f.prefix.size(), f.prefix) != 0) return std::nullopt;
    std::string digits = name.substr(f.prefix.size());
    if (!std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) return std::nullopt;
    if (digits.size() > 1 && digits[0] == '0') return std::nullopt;
    if (digits.size() > 9) return std::nullopt;
    return std::stoi(digits);
  }

  std::vector<Symbol> symbols_;
  std::vector<CountableFamily> families_;
};

/// Finite structure on {0..size-1}. In hypergraph mode every tuple is stored as
/// a sorted vertex set and read as a symmetric, injective relation.
class EnumeratedStructure {
 public:
  EnumeratedStructure() = default;
  EnumeratedStructure(RelationalLanguage language, int size, bool hypergraph = false)
      : language_(std::move(language)), size_(size), hypergraph_(hypergraph) {
    if (size < 0) throw InputError("negative structure size");
  }

  const RelationalLanguage& language() const { return language_; }
  int size() const { return size_; }
  bool is_hypergraph() const { return hypergraph_; }
  const std::map<std::string, std::set<Tuple>>& relations() const { return relations_; }

  const std::set<Tuple>& tuples(const std::string& name) const {
    static const std::set<Tuple> empty;
    auto it = relations_.find(name);
    return it == relations_.end() ? empty : it->second;
  }

  int add_vertex() { return size_++; }

  void add(const std::string& name, Tuple t) {
    auto ar = language_.arity_of(name);
    if (!ar) throw InputError("unknown symbol '" + name + "'");
    if (static_cast<int>(t.size()) != *ar)
      throw InputError("tuple of length " + std::to_string(t.size()) + " in relation '" + name + "' of arity " +
                       std::to_string(*ar));
    for (int v : t)
      if (v < 0 || v >= size_) throw InputError("tuple entry " + std::to_string(v) + " out of range");
    if (hypergraph_) {
      std::sort(t.begin(), t.end());
      if (std::adjacent_find(t.begin(), t.end()) != t.end())
        throw InputError("non-injective tuple in hypergraph relation '" + name + "'");
      for (const auto& [other, set] : relations_)
        if (other != name && language_.arity_of(other) == ar && set.count(t))
          throw InputError("vertex set already carries relation '" + other + "'");
    }
    relations_[name].insert(std::move(t));
  }

  void remove(const std::string& name, const Tuple& t) {
    auto it = relations_.find(name);
    if (it == relations_.end()) return;
    it->second.erase(t);
    if (it->second.empty()) relations_.erase(it);
  }

  bool related(const std::string& name, Tuple t) const {
    if (hypergraph_) std::sort(t.begin(), t.end());
    auto it = relations_.find(name);
    return it != relations_.end() && it->second.count(t) > 0;
  }

  /// Hypergraph mode: the code (see RelationalLanguage::code_of) of the
  /// relation carried by a vertex set, or 0.
  int code(Tuple set) const {
    std::sort(set.begin(), set.end());
    for (const auto& [name, tuples] : relations_)
      if (language_.arity_of(name) == static_cast<int>(set.size()) && tuples.count(set))
        return language_.code_of(name);
    return 0;
  }

  /// Substructure induced on the given increasing vertex list, relabelled 0..m-1.
  EnumeratedStructure induced(const std::vector<int>& vertices) const {
    EnumeratedStructure out(language_, static_cast<int>(vertices.size()), hypergraph_);
    std::vector<int> pos(size_, -1);
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      if (vertices[i] < 0 || vertices[i] >= size_) throw InputError("induced: vertex out of range");
      if (i > 0 && vertices[i] <= vertices[i - 1]) throw InputError("induced: vertices must increase");
      pos[vertices[i]] = static_cast<int>(i);
    }
    for (const auto& [name, tuples] : relations_)
      for (const auto& t : tuples) {
        Tuple img;
        img.reserve(t.size());
        for (int v : t) {
          if (pos[v] < 0) break;
          img.push_back(pos[v]);
        }
        if (img.size() == t.size()) out.relations_[name].insert(std::move(img));
      }
    return out;
  }

  /// Checks tuple ranges, arities and, in hypergraph mode, the hypergraph axioms.
  void validate() const {
    std::map<std::pair<int, Tuple>, std::string> seen;
    for (const auto& [name, tuples] : relations_) {
      auto ar = language_.arity_of(name);
      if (!ar) throw InputError("unknown symbol '" + name + "'");
      for (const auto& t : tuples) {
        if (static_cast<int>(t.size()) != *ar) throw InputError("arity mismatch in relation '" + name + "'");
        for (int v : t)
          if (v < 0 || v >= size_) throw InputError("tuple entry out of range in '" + name + "'");
        if (hypergraph_) {
          if (!std::is_sorted(t.begin(), t.end()) || std::adjacent_find(t.begin(), t.end()) != t.end())
            throw InputError("hypergraph tuple not a sorted vertex set in '" + name + "'");
          auto [it, fresh] = seen.emplace(std::make_pair(*ar, t), name);
          if (!fresh) throw InputError("vertex set in both '" + it->second + "' and '" + name + "'");
        }
      }
    }
  }

  bool operator==(const EnumeratedStructure& o) const {
    return size_ == o.size_ && language_ == o.language_ && relations_ == o.relations_;
  }

 private:
  RelationalLanguage language_;
  int size_ = 0;
  bool hypergraph_ = false;
  std::map<std::string, std::set<Tuple>> relations_;  // no empty entries
};

using Embedding = std::vector<int>;

namespace detail {

// Per symbol: tuples grouped by their largest entry.
inline std::map<std::string, std::map<int, std::vector<Tuple>>> by_max_vertex(const EnumeratedStructure& s) {
  std::map<std::string, std::map<int, std::vector<Tuple>>> out;
  for (const auto& [name, tuples] : s.relations())
    for (const auto& t : tuples) out[name][*std::max_element(t.begin(), t.end())].push_back(t);
  return out;
}

}  // namespace detail

/// Whether `map` (strictly increasing) is an embedding A -> B: relations are
/// preserved and reflected on the image.
inline bool is_embedding(const EnumeratedStructure& a, const EnumeratedStructure& b, const Embedding& map) {
  if (static_cast<int>(map.size()) != a.size()) return false;
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (map[i] < 0 || map[i] >= b.size()) return false;
    if (i > 0 && map[i] <= map[i - 1]) return false;
  }
  std::vector<int> inverse(b.size(), -1);
  for (std::size_t i = 0; i < map.size(); ++i) inverse[map[i]] = static_cast<int>(i);
  for (const auto& [name, tuples] : a.relations())
    for (const auto& t : tuples) {
      Tuple img;
      for (int v : t) img.push_back(map[v]);
      if (!b.related(name, img)) return false;
    }
  for (const auto& [name, tuples] : b.relations())
    for (const auto& t : tuples) {
      Tuple pre;
      for (int v : t) {
        if (inverse[v] < 0) break;
        pre.push_back(inverse[v]);
      }
      if (pre.size() == t.size() && !a.related(name, pre)) return false;
    }
  return true;
}

/// All monotone embeddings A -> B in lexicographic order of the vertex map.
/// `limit` stops the enumeration early (0 = unlimited).
inline std::vector<Embedding> enumerate_embeddings(const EnumeratedStructure& a, const EnumeratedStructure& b,
                                                   std::size_t limit = 0) {
  if (!(a.language() == b.language())) throw InputError("enumerate_embeddings: language mismatch");
  std::vector<Embedding> out;
  if (a.size() > b.size()) return out;
  auto a_max = detail::by_max_vertex(a);
  auto b_max = detail::by_max_vertex(b);
  Embedding map;
  std::vector<int> inverse(b.size(), -1);

  auto consistent = [&](int av, int bv) {
    for (const auto& [name, groups] : a_max) {
      auto it = groups.find(av);
      if (it == groups.end()) continue;
      for (const auto& t : it->second) {
        Tuple img;
        for (int v : t) img.push_back(v == av ? bv : map[v]);
        if (!b.related(name, img)) return false;
      }
    }
    for (const auto& [name, groups] : b_max) {
      auto it = groups.find(bv);
      if (it == groups.end()) continue;
      for (const auto& t : it->second) {
        Tuple pre;
        for (int v : t) {
          int p = v == bv ? av : inverse[v];
          if (p < 0) break;
          pre.push_back(p);
        }
        if (pre.size() == t.size() && !a.related(name, pre)) return false;
      }
    }
    return true;
  };

  std::function<bool(int)> extend = [&](int av) -> bool {
    if (av == a.size()) {
      out.push_back(map);
      return limit == 0 || out.size() < limit;
    }
    int lo = map.empty() ? 0 : map.back() + 1;
    int hi = b.size() - (a.size() - av);
    for (int bv = lo; bv <= hi; ++bv) {
      if (!consistent(av, bv)) continue;
      map.push_back(bv);
      inverse[bv] = av;
      bool go_on = extend(av + 1);
      inverse[bv] = -1;
      map.pop_back();
      if (!go_on) return false;
    }
    return true;
  };
  extend(0);
  return out;
}

/// Every pair of distinct vertices co-occurs in some related tuple.
inline bool gaifman_irreducible(const EnumeratedStructure& f) {
  int n = f.size();
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (const auto& [name, tuples] : f.relations())
    for (const auto& t : tuples)
      for (int u : t)
        for (int v : t) adj[u][v] = true;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (!adj[u][v]) return false;
  return true;
}

/// Some single related tuple contains every vertex.
inline bool is_covered(const EnumeratedStructure& f) {
  if (f.size() == 0) return false;
  for (const auto& [name, tuples] : f.relations())
    for (const auto& t : tuples) {
      std::set<int> seen(t.begin(), t.end());
      if (static_cast<int>(seen.size()) == f.size()) return true;
    }
  return false;
}

/// F-freeness: no monotone embedding of any member of `forbidden`.
inline bool is_free_of(const EnumeratedStructure& s, const std::vector<EnumeratedStructure>& forbidden) {
  for (const auto& f : forbidden)
    if (!enumerate_embeddings(f, s, 1).empty()) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Staged prefixes of the universal structure
// ---------------------------------------------------------------------------

/// One realized one-point extension: a new vertex over `base` with relation
/// codes `type` (see extension_slots for the slot layout).
struct ExtensionRecord {
  std::vector<int> base;
  std::vector<int> type;
  int vertex = -1;

  bool operator==(const ExtensionRecord&) const = default;
};

struct GenericPrefix {
  EnumeratedStructure structure;
  std::vector<ExtensionRecord> log;
  int rounds = 0;

  static GenericPrefix empty(const RelationalLanguage& language) {
    return GenericPrefix{EnumeratedStructure(language, 0, true), {}, 0};
  }
};

struct ExtendOptions {
  int max_subset_size = 0;  ///< 0: bounded by the round index only
  int max_code = 0;         ///< bound on relation codes drawn from countable families; 0: round index
  int window = 0;           ///< only vertices < window form bases; 0: every vertex present at round start
  std::uint64_t vertex_cap = kDefaultNodeCap;
  std::optional<std::uint64_t> seed;  ///< shuffles the realization order (fuzzing mode)
  std::vector<EnumeratedStructure> forbidden;
};

/// A slot of a one-point extension over X: the vertex subset Y of X joined with
/// the new vertex, and the number of codes available (codes run 0..options).
struct ExtensionSlot {
  std::vector<int> subset;
  int arity = 0;
  int options = 0;
};

inline std::vector<ExtensionSlot> extension_slots(const RelationalLanguage& lang, const std::vector<int>& base,
                                                  int code_bound) {
  std::vector<ExtensionSlot> slots;
  for (int arity = 1; arity <= lang.max_arity(); ++arity) {
    auto n = lang.count(arity);
    int options = 0;
    if (n) {
      options = *n;
    } else {
      int explicit_count = static_cast<int>(std::count_if(lang.symbols().begin(), lang.symbols().end(),
                                                          [&](const Symbol& s) { return s.arity == arity; }));
      options = explicit_count + code_bound;
    }
    if (options == 0) continue;
    int need = arity - 1;
    if (need > static_cast<int>(base.size())) continue;
    std::vector<int> pick(need);
    std::function<void(int, int)> rec = [&](int start, int depth) {
      if (depth == need) {
        slots.push_back({pick, arity, options});
        return;
      }
      for (int i = start; i < static_cast<int>(base.size()); ++i) {
        pick[depth] = base[i];
        rec(i + 1, depth + 1);
      }
    };
    rec(0, 0);
  }
  return slots;
}

/// Relation codes of vertex v against the slots (v must exceed every slot vertex).
inline std::vector<int> realized_type(const EnumeratedStructure& s, const std::vector<ExtensionSlot>& slots, int v) {
  std::vector<int> type;
  type.reserve(slots.size());
  for (const auto& slot : slots) {
    Tuple t = slot.subset;
    t.push_back(v);
    type.push_back(s.code(t));
  }
  return type;
}

namespace detail {

// Odometer over slot codes, last slot fastest.
inline bool next_type(std::vector<int>& type, const std::vector<ExtensionSlot>& slots) {
  for (std::size_t i = type.size(); i-- > 0;) {
    if (++type[i] <= slots[i].options) return true;
    type[i] = 0;
  }
  return false;
}

inline void realize(GenericPrefix& p, const std::vector<int>& base, const std::vector<ExtensionSlot>& slots,
                    const std::vector<int>& type) {
  int v = p.structure.add_vertex();
  const auto& lang = p.structure.language();
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (type[i] == 0) continue;
    Tuple t = slots[i].subset;
    t.push_back(v);
    p.structure.add(lang.name_of(slots[i].arity, type[i]), t);
  }
  p.log.push_back({base, type, v});
}

}  // namespace detail

/// Runs `rounds` further rounds. In round r every pair (X, one-point extension
/// type over X) with |X| <= r and family codes <= r, X drawn from the vertices
/// present at the start of the round, is realized by a fresh last vertex unless
/// some vertex after max X already realizes it.
inline GenericPrefix generic_extend(GenericPrefix prefix, int rounds, const ExtendOptions& options = {}) {
  prefix.structure.validate();
  if (!prefix.structure.is_hypergraph()) throw InputError("generic_extend: prefix must be a hypergraph");
  for (int step = 0; step < rounds; ++step) {
    int round = prefix.rounds + 1;
    int subset_bound = options.max_subset_size > 0 ? std::min(options.max_subset_size, round) : round;
    int code_bound = options.max_code > 0 ? std::min(options.max_code, round) : round;
    int pool = prefix.structure.size();
    if (options.window > 0) pool = std::min(pool, options.window);

    // Bases ordered by (max vertex, lex); empty base first.
    std::vector<std::vector<int>> bases{{}};
    for (int size = 1; size <= std::min(subset_bound, pool); ++size) {
      std::vector<int> pick(size);
      std::function<void(int, int)> rec = [&](int start, int depth) {
        if (depth == size) {
          bases.push_back(pick);
          return;
        }
        for (int i = start; i < pool; ++i) {
          pick[depth] = i;
          rec(i + 1, depth + 1);
        }
      };
      rec(0, 0);
    }
    std::stable_sort(bases.begin(), bases.end(), [](const auto& a, const auto& b) {
      int ma = a.empty() ? -1 : a.back(), mb = b.empty() ? -1 : b.back();
      return ma != mb ? ma < mb : a < b;
    });

    struct Pending {
      std::vector<int> base;
      std::vector<ExtensionSlot> slots;
      std::vector<int> type;
    };
    std::vector<Pending> todo;
    std::uint64_t estimate = prefix.structure.size();
    for (const auto& base : bases) {
      auto slots = extension_slots(prefix.structure.language(), base, code_bound);
      std::uint64_t count = 1;
      for (const auto& s : slots) count = detail::sat_mul(count, static_cast<std::uint64_t>(s.options) + 1);
      estimate = detail::sat_add(estimate, count);
      if (estimate > options.vertex_cap) throw InfeasibleError("generic_extend: prefix too large", options.vertex_cap, estimate);
      std::set<std::vector<int>> realized;
      int first = base.empty() ? 0 : base.back() + 1;
      for (int v = first; v < prefix.structure.size(); ++v) realized.insert(realized_type(prefix.structure, slots, v));
      std::vector<int> type(slots.size(), 0);
      do {
        if (!realized.count(type)) todo.push_back({base, slots, type});
      } while (detail::next_type(type, slots));
    }
    if (options.seed) {
      std::mt19937_64 rng(*options.seed + static_cast<std::uint64_t>(round));
      std::shuffle(todo.begin(), todo.end(), rng);
    }
    for (const auto& item : todo) {
      if (!options.forbidden.empty()) {
        GenericPrefix trial = prefix;
        detail::realize(trial, item.base, item.slots, item.type);
        std::vector<int> local = item.base;
        local.push_back(trial.structure.size() - 1);
        if (!is_free_of(trial.structure.induced(local), options.forbidden)) continue;
      }
      detail::realize(prefix, item.base, item.slots, item.type);
    }
    prefix.rounds = round;
  }
  return prefix;
}

}  // namespace brt
