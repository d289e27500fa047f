#pragma once

// Enveloping embeddings of a hypergraph prefix into G^sigma, envelopes of
// finite image sets, and the counting side of the upper bound.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "brt/error.hpp"
#include "brt/structures.hpp"
#include "brt/trees.hpp"
#include "brt/valuation.hpp"

namespace brt {

/// Formal branching symbol b^s_xs (xs strictly decreasing, s >= 1).
struct Marker {
  Tuple xs;
  int s = 1;

  bool operator==(const Marker&) const = default;
  auto operator<=>(const Marker& o) const {
    if (auto c = xs <=> o.xs; c != 0) return c;
    return s <=> o.s;
  }
};

/// |S_m| = max_{i<k} sigma_{i+m} - 2, clamped at 0.
inline int marker_range(const Signature& sigma, int k, int m) {
  int best = 0;
  for (int i = 0; i < k; ++i) best = std::max(best, sigma[i + m] - 2);
  return best;
}

/// Either a vertex of H or a marker.
using JElement = std::variant<int, Marker>;

/// The linear order on J: vertices by value, i before b^s_xs iff i < xs[0],
/// markers by (lex xs, s).
inline bool j_less(const JElement& a, const JElement& b) {
  if (auto* i = std::get_if<int>(&a)) {
    if (auto* j = std::get_if<int>(&b)) return *i < *j;
    return *i < std::get<Marker>(b).xs.front();
  }
  const auto& ma = std::get<Marker>(a);
  if (auto* j = std::get_if<int>(&b)) return ma.xs.front() <= *j;
  return ma < std::get<Marker>(b);
}

struct EnvelopingEmbedding {
  int k = 0;
  Signature sigma;
  EnumeratedStructure source;
  std::vector<int> vertex_level;       // psi on vertices
  std::map<Marker, int> marker_level;  // psi on the marker catalogue
  std::set<int> original;              // O
  std::set<int> branching;             // B
  std::vector<ValuationFunction> images;

  const ValuationFunction& operator()(int v) const { return images.at(v); }
  int size() const { return static_cast<int>(images.size()); }
  int psi(const Marker& m) const {
    auto it = marker_level.find(m);
    if (it == marker_level.end()) throw InputError("marker outside the catalogue");
    return it->second;
  }
};

/// The k-enveloping embedding of a finite hypergraph without unaries. The
/// marker catalogue holds every b^s_xs with xs[0] below the prefix size.
inline EnvelopingEmbedding build_enveloping(const EnumeratedStructure& h, int k,
                                            std::uint64_t cap = kDefaultNodeCap) {
  if (k < 1) throw InputError("build_enveloping: k must be at least 1");
  if (!h.is_hypergraph()) throw InputError("build_enveloping: source must be a hypergraph");
  if (h.language().has_unaries()) throw InputError("build_enveloping: unary relations are handled by reductions");
  EnvelopingEmbedding phi;
  phi.k = k;
  phi.sigma = signature_from_language(h.language());
  phi.source = h;
  const Signature& sigma = phi.sigma;
  if (sigma.tail() > 2) throw InputError("build_enveloping: signature tail must be at most 2");
  int n = h.size();

  int max_len = 0;
  for (int m = 1; m <= std::max(1, static_cast<int>(sigma.prefix().size()) + k); ++m)
    if (marker_range(sigma, k, m) > 0) max_len = m;
  std::uint64_t estimate = n;
  for (int m = 1; m <= max_len; ++m)
    estimate = detail::sat_add(estimate, detail::sat_mul(detail::binomial(n, m), marker_range(sigma, k, m)));
  if (estimate > cap) throw InfeasibleError("build_enveloping: marker catalogue too large", cap, estimate);

  std::vector<JElement> j;
  for (int v = 0; v < n; ++v) j.emplace_back(v);
  for (auto& xs : decreasing_tuples(n, max_len))
    for (int s = 1; s <= marker_range(sigma, k, static_cast<int>(xs.size())); ++s) j.emplace_back(Marker{xs, s});
  std::sort(j.begin(), j.end(), j_less);
  phi.vertex_level.assign(n, -1);
  for (int rank = 0; rank < static_cast<int>(j.size()); ++rank) {
    if (auto* v = std::get_if<int>(&j[rank])) {
      phi.vertex_level[*v] = rank;
      phi.original.insert(rank);
    } else {
      phi.marker_level.emplace(std::get<Marker>(j[rank]), rank);
      phi.branching.insert(rank);
    }
  }

  auto sp = std::make_shared<const Signature>(sigma);
  for (int v = 0; v < n; ++v) phi.images.emplace_back(sp, 0, phi.vertex_level[v]);
  for (const auto& [name, tuples] : h.relations()) {
    int r = h.language().code_of(name);
    for (const auto& t : tuples) {
      int top = t.back();
      Tuple rest(t.rbegin() + 1, t.rend());  // decreasing, below top
      ValuationFunction& f = phi.images[top];
      Tuple lv;
      for (int x : rest) lv.push_back(phi.vertex_level[x]);
      f.set(lv, r);
      int a = static_cast<int>(t.size());
      for (int m = 0; m < k && m <= a - 2; ++m) {
        int value = sigma[m + 1] - 1;
        if (value == 0) continue;
        Tuple key(lv.begin(), lv.begin() + m);
        key.push_back(phi.psi(Marker{Tuple(rest.begin() + m, rest.end()), r}));
        f.set(key, value);
      }
    }
  }
  return phi;
}

struct EnvelopingVerdict {
  bool ok = true;
  int condition = 0;  // 1 or 2 on failure
  int vertex = -1;
  int other = -1;  // -1: compared against a constant zero
  Tuple xs;
  Tuple ys;
  int level = -1;
  std::string message;
};

/// Checks both enveloping conditions for the images of `scope`, for slices of
/// length below k_check (defaults to phi.k).
inline EnvelopingVerdict verify_k_enveloping(const EnvelopingEmbedding& phi, const std::vector<int>& scope,
                                             std::optional<int> k_check = std::nullopt) {
  int k = k_check.value_or(phi.k);
  EnvelopingVerdict v;
  auto fail = [&](int cond, int vertex, int other, Tuple xs, Tuple ys, int level, std::string msg) {
    v = {false, cond, vertex, other, std::move(xs), std::move(ys), level, std::move(msg)};
    return v;
  };
  for (int s : scope)
    if (s < 0 || s >= phi.size()) throw InputError("verify_k_enveloping: scope vertex out of range");

  for (int s : scope)
    for (const auto& [t, val] : phi(s).values()) {
      std::size_t reach = std::min<std::size_t>(k > 0 ? k - 1 : 0, t.size() - 1);
      for (std::size_t j = 0; j < reach; ++j)
        if (!phi.original.count(t[j]))
          return fail(1, s, -1, Tuple(t.begin(), t.begin() + j + 1), t, t[j], "nonzero slice through a B level");
    }

  struct Slice {
    int vertex;
    Tuple xs;
    ValuationFunction f;
  };
  for (int m = 0; m < k; ++m) {
    std::vector<Slice> slices;
    for (int s : scope) {
      std::set<Tuple> prefixes;
      for (const auto& [t, val] : phi(s).values())
        if (static_cast<int>(t.size()) > m) prefixes.insert(Tuple(t.begin(), t.begin() + m));
      for (const auto& xs : prefixes) slices.push_back({s, xs, slice(phi(s), xs)});
    }
    for (const auto& a : slices) {
      int first = a.f.level();
      for (const auto& [t, val] : a.f.values()) first = std::min(first, t.front());
      if (!phi.branching.count(first))
        return fail(2, a.vertex, -1, a.xs, {}, first, "slice leaves the zero function at a level outside B");
    }
    for (std::size_t i = 0; i < slices.size(); ++i)
      for (std::size_t j = i + 1; j < slices.size(); ++j) {
        const auto& a = slices[i];
        const auto& b = slices[j];
        if (comparable(a.f, b.f)) continue;
        int d = first_difference(a.f, b.f);
        if (!phi.branching.count(d))
          return fail(2, a.vertex, b.vertex, a.xs, b.xs, d, "incomparable slices meet outside B");
      }
  }
  return v;
}

// ---------------------------------------------------------------------------
// Envelopes
// ---------------------------------------------------------------------------

struct EnvelopeStage {
  NodeSet e0, e1, e2, e3;
};

struct Envelope {
  std::vector<int> subset;
  std::vector<int> levels;  // the level set of the strong subtrees
  int height = 0;
  std::vector<EnvelopeStage> trace;
  StrongSubtreeWitness witness;
  std::optional<ValuationTree> tree;  // present when T_0(<height) fits the cap
  bool contained = false;
};

inline std::set<int> levels_of(const NodeSet& s) {
  std::set<int> out;
  for (const auto& f : s) out.insert(f.level());
  return out;
}

/// Upper bound on envelope heights: R(0)=0, else sum of a_0..a_k with
/// a_0 = 2k-1 and a_i = 2a_{i-1}-1.
inline std::uint64_t r_bound(int k) {
  if (k < 0) throw InputError("r_bound: negative k");
  if (k == 0) return 0;
  std::uint64_t a = 2 * static_cast<std::uint64_t>(k) - 1, total = 0;
  for (int i = 0; i <= k; ++i) {
    total = detail::sat_add(total, a);
    a = detail::sat_add(detail::sat_mul(a, 2), 0) - 1;
  }
  return total;
}

namespace detail {

inline NodeSet close_with_zero_and_meets(const NodeSet& e0, NodeSet& e1) {
  e1 = e0;
  if (e0.empty()) return {};
  int top = 0;
  for (const auto& f : e0) top = std::max(top, f.level());
  e1.insert(zero_like(*e0.begin(), top));
  NodeSet e2;
  for (auto a = e1.begin(); a != e1.end(); ++a)
    for (auto b = a; b != e1.end(); ++b) e2.insert(meet(*a, *b));
  return e2;
}

}  // namespace detail

/// The E-set cascade and the resulting envelope of phi[S]. Containment is
/// checked lazily; the explicit tree is built when it fits the cap.
inline Envelope compute_envelope(const EnvelopingEmbedding& phi, std::vector<int> subset,
                                 std::uint64_t cap = kDefaultNodeCap) {
  std::sort(subset.begin(), subset.end());
  if (std::adjacent_find(subset.begin(), subset.end()) != subset.end())
    throw InputError("compute_envelope: repeated vertex");
  if (static_cast<int>(subset.size()) > phi.k) throw InputError("compute_envelope: |S| exceeds k");
  auto verdict = verify_k_enveloping(phi, subset, static_cast<int>(subset.size()));
  if (!verdict.ok) throw InputError("compute_envelope: embedding is not enveloping: " + verdict.message);

  Envelope env;
  env.subset = subset;
  if (subset.empty()) {
    env.contained = true;
    return env;
  }
  EnvelopeStage st;
  for (int s : subset) st.e0.insert(phi(s));
  while (!st.e0.empty()) {
    st.e2 = detail::close_with_zero_and_meets(st.e0, st.e1);
    env.trace.push_back(st);
    const NodeSet& prev = env.trace.back().e2;
    EnvelopeStage next;
    for (const auto& f : prev)
      for (const auto& g : prev)
        if (g.level() < f.level()) next.e0.insert(slice(f, {g.level()}));
    st = std::move(next);
  }

  std::set<int> all;
  for (const auto& s : env.trace)
    for (int l : levels_of(s.e2)) all.insert(l);
  env.levels.assign(all.begin(), all.end());
  env.height = static_cast<int>(env.levels.size());
  for (auto& s : env.trace)
    for (const auto& f : s.e2)
      for (int l : env.levels)
        if (l <= f.level()) s.e3.insert(restrict(f, l));

  env.witness.levels = env.levels;
  for (int c = 0; c < env.height; ++c) {
    NodeSet core = c < static_cast<int>(env.trace.size()) ? env.trace[c].e3 : NodeSet{};
    env.witness.coords.push_back(complete_to_strong(core, env.levels, c, phi.sigma));
  }

  env.contained = true;
  for (int s : subset) env.contained = env.contained && val_contains(env.witness, env.height, phi(s));

  std::uint64_t size = 0;
  for (int m = 0; m < env.height; ++m) size = detail::sat_add(size, count_level_nodes(phi.sigma, 0, m));
  if (size <= cap) {
    env.tree = build_valuation_tree(env.witness, env.height, cap);
    for (int s : subset) env.contained = env.contained && env.tree->contains(phi(s));
  }
  return env;
}

/// The seven trace properties of the cascade. Returns the violations found.
inline std::vector<std::string> verify_envelope_trace(const EnvelopingEmbedding& phi, const Envelope& env) {
  std::vector<std::string> bad;
  int k = static_cast<int>(env.subset.size());
  auto note = [&](int i, int prop, const std::string& what) {
    bad.push_back("stage " + std::to_string(i) + " property " + std::to_string(prop) + ": " + what);
  };
  auto is_original_slice = [&](const ValuationFunction& e, int i) {
    for (int s : env.subset) {
      std::set<Tuple> prefixes;
      for (const auto& [t, v] : phi(s).values())
        if (static_cast<int>(t.size()) > i) prefixes.insert(Tuple(t.begin(), t.begin() + i));
      for (const auto& xs : prefixes) {
        bool orig = std::all_of(xs.begin(), xs.end(), [&](int x) { return phi.original.count(x) > 0; });
        if (orig && slice(phi(s), xs) == e) return true;
      }
      if (i == 0 && phi(s) == e) return true;
    }
    return false;
  };
  std::set<int> image_levels;
  for (int s : env.subset) image_levels.insert(phi(s).level());

  for (int i = 0; i < static_cast<int>(env.trace.size()); ++i) {
    const auto& st = env.trace[i];
    for (const auto& f : st.e0)
      if (!st.e1.count(f)) note(i, 1, "E0 not inside E1");
    for (const auto& f : st.e1)
      if (!st.e2.count(f)) note(i, 1, "E1 not inside E2");
    if (!is_meet_closed(st.e2)) note(i, 1, "E2 is not a subtree");
    for (const auto& f : st.e1)
      if (!f.is_zero() && !is_original_slice(f, i)) note(i, 2, "E1 member is neither zero nor an original slice");
    for (const auto& f : st.e2)
      if (std::none_of(st.e1.begin(), st.e1.end(), [&](const auto& g) { return is_below(f, g); }))
        note(i, 2, "E2 member is not a restriction of an E1 member");
    std::set<int> nonzero;
    for (const auto& f : st.e1)
      if (!f.is_zero()) nonzero.insert(f.level());
    if (static_cast<int>(nonzero.size()) > std::max(0, k - i)) note(i, 3, "too many levels with nonzero members");
    auto lv = levels_of(st.e2);
    for (int l : lv)
      if (phi.original.count(l) && !image_levels.count(l)) note(i, 5, "O level without an image");
    if (i > 0) {
      auto pv = levels_of(env.trace[i - 1].e2);
      for (int l : lv)
        if (!pv.count(l) && !phi.branching.count(l)) note(i, 4, "new level outside B");
      std::set<int> lost;
      for (int l : pv)
        if (!lv.count(l)) lost.insert(l);
      if (lost != std::set<int>{*pv.rbegin()}) note(i, 6, "dropped levels differ from the previous maximum");
      if (!lv.empty() && *lv.rbegin() >= *pv.rbegin()) note(i, 7, "maximum level did not decrease");
    }
  }
  return bad;
}

/// Number of monotone embeddings of A into the G^sigma structure induced on
/// T_0(<h), taken in the enumeration order.
inline std::uint64_t degree_upper_bound(const EnumeratedStructure& a, int h, const Signature& sigma,
                                        std::uint64_t cap = kDefaultNodeCap) {
  if (!a.is_hypergraph()) throw InputError("degree_upper_bound: A must be a hypergraph");
  if (a.language().has_unaries()) throw InputError("degree_upper_bound: A must not use unary relations");
  auto nodes = nodes_below(sigma, 0, h, cap);
  int n = a.size();
  std::vector<int> pick;
  std::uint64_t count = 0, steps = 0, budget = detail::sat_mul(cap, 64);
  auto consistent = [&](int idx) {
    int v = static_cast<int>(pick.size());  // vertex being placed
    for (std::uint32_t mask = 1; mask < (1u << v); ++mask) {
      Tuple set;
      std::vector<ValuationFunction> img;
      for (int u = 0; u < v; ++u)
        if (mask & (1u << u)) {
          set.push_back(u);
          img.push_back(nodes[pick[u]]);
        }
      set.push_back(v);
      img.push_back(nodes[idx]);
      int want = a.code(set);
      int arity = static_cast<int>(set.size());
      if (want > sigma[arity - 1] - 2) throw InputError("degree_upper_bound: A uses a relation absent from sigma");
      if (g_sigma_code(img) != want) return false;
    }
    return true;
  };
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(pick.size()) == n) {
      ++count;
      return;
    }
    for (int idx = start; idx < static_cast<int>(nodes.size()); ++idx) {
      if (++steps > budget) throw InfeasibleError("degree_upper_bound: search too large", budget, steps);
      if (!consistent(idx)) continue;
      pick.push_back(idx);
      rec(idx + 1);
      pick.pop_back();
    }
  };
  if (n > 30) throw InputError("degree_upper_bound: A too large");
  rec(0);
  return count;
}

}  // namespace brt
