#pragma once

// Colourings that stay unbounded on strong subtrees of the infinitely branching
// tree and on tree-like copies of the countably-edge-coloured random graph.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "brt/error.hpp"
#include "brt/structures.hpp"

namespace brt {

using SeqNode = std::vector<int>;

/// w(t) = |t| + sum of entries.
inline long long seq_weight(const SeqNode& t, std::size_t prefix) {
  prefix = std::min(prefix, t.size());
  long long w = static_cast<long long>(prefix);
  for (std::size_t i = 0; i < prefix; ++i) w += t[i];
  return w;
}
inline long long seq_weight(const SeqNode& t) { return seq_weight(t, t.size()); }

/// Least l with w(t|l) >= n; requires n <= |t|.
inline std::size_t seq_ell(const SeqNode& t, long long n) {
  if (n < 0 || n > static_cast<long long>(t.size())) throw InputError("seq_ell: n must lie in [0, |t|]");
  for (std::size_t l = 0;; ++l)
    if (seq_weight(t, l) >= n) return l;
}

inline void check_seq(const SeqNode& t) {
  for (int x : t)
    if (x < 0) throw InputError("sequence entries must be natural numbers");
}

/// c(t) = w(t|l(t)) - |t|.
inline long long hl_colour(const SeqNode& t) {
  check_seq(t);
  long long n = static_cast<long long>(t.size());
  return seq_weight(t, seq_ell(t, n)) - n;
}

/// Strong subtree of the infinitely branching tree: root, levels (the first is
/// |root|), and a selector that extends a direction s^a (s on levels[j]) to
/// the subtree node on levels[j+1].
struct SeqStrongSubtree {
  SeqNode root;
  std::vector<int> levels;
  std::function<SeqNode(const SeqNode& direction, int level)> selector;

  static SeqNode pad_zero(const SeqNode& d, int level) {
    SeqNode t = d;
    t.resize(level, 0);
    return t;
  }

  /// Levels start at |root| and increase; the default selector pads with zeros.
  void validate() const {
    check_seq(root);
    if (levels.empty() || levels[0] != static_cast<int>(root.size()))
      throw InputError("seq subtree: first level must be the root length");
    for (std::size_t i = 1; i < levels.size(); ++i)
      if (levels[i] <= levels[i - 1]) throw InputError("seq subtree: levels must increase");
  }

  SeqNode select(const SeqNode& direction, int level) const {
    SeqNode t = selector ? selector(direction, level) : pad_zero(direction, level);
    if (static_cast<int>(t.size()) != level || !std::equal(direction.begin(), direction.end(), t.begin()))
      throw InputError("seq subtree: selector must extend its direction to the next level");
    return t;
  }

  bool contains(const SeqNode& t) const {
    auto pos = std::find(levels.begin(), levels.end(), static_cast<int>(t.size()));
    if (pos == levels.end()) return false;
    if (!std::equal(root.begin(), root.end(), t.begin())) return false;
    for (auto it = levels.begin(); it != pos; ++it) {
      SeqNode dir(t.begin(), t.begin() + *it + 1);
      SeqNode want(t.begin(), t.begin() + *(it + 1));
      if (select(dir, *(it + 1)) != want) return false;
    }
    return true;
  }
};

/// The node of T' at the first level n > w(root) that extends root^(k+x),
/// k = n - w(root) - 1; its colour is x.
inline SeqNode hl_witness(const SeqStrongSubtree& tree, int x) {
  tree.validate();
  if (x < 0) throw InputError("hl_witness: colour must be natural");
  long long wr = seq_weight(tree.root);
  auto pos = std::find_if(tree.levels.begin(), tree.levels.end(), [&](int l) { return l > wr; });
  if (pos == tree.levels.end())
    throw InputError("hl_witness: no available level above w(root) = " + std::to_string(wr));
  int n = *pos;
  long long k = n - wr - 1;
  SeqNode t = tree.root;
  for (auto it = tree.levels.begin(); it != pos; ++it) {
    SeqNode dir = t;
    dir.push_back(it == tree.levels.begin() ? static_cast<int>(k + x) : 0);
    t = tree.select(dir, *(it + 1));
  }
  if (hl_colour(t) != x) throw InputError("hl_witness: constructed node has the wrong colour");
  return t;
}

// ---------------------------------------------------------------------------
// Infinite colouring of three-vertex copies
// ---------------------------------------------------------------------------

/// The setting with countably many binary relations E0, E1, ... and no
/// unaries. Every vertex is a copy of B, so j(v) = v and b(v) = v;
/// s(v)_i is the code of {i, v}: 0 for no relation, x for E_{x-1}.
class InfColouringContext {
 public:
  explicit InfColouringContext(EnumeratedStructure h) : h_(std::move(h)) {
    const auto& lang = h_.language();
    if (lang.has_unaries()) throw InputError("inf context: unary relations are not supported");
    if (lang.count(2).has_value()) throw InputError("inf context: needs countably many binary relations");
    for (const auto& s : lang.symbols())
      if (s.arity == 2) throw InputError("inf context: binary relations must all come from the family");
    catalogue_to(h_.size());
  }

  const EnumeratedStructure& structure() const { return h_; }

  /// Replaces the prefix by a larger one extending it and updates the catalogue.
  void grow(const EnumeratedStructure& larger) {
    if (larger.size() < h_.size() || !(larger.induced(iota(h_.size())) == h_))
      throw InputError("inf context: new prefix does not extend the old one");
    h_ = larger;
    catalogue_to(h_.size());
  }

  int j(int v) const { return v; }
  int b(int v) const { return v; }
  const SeqNode& s(int v) const { return s_.at(v); }

  /// The vertex ids of the B-catalogue prefix, recomputed from scratch.
  SeqNode s_fresh(int v) const {
    SeqNode out;
    for (int i = 0; i < v; ++i) out.push_back(h_.code({i, v}));
    return out;
  }

  bool is_copy_of_a(std::vector<int> copy) const {
    std::sort(copy.begin(), copy.end());
    if (copy.size() != 3 || copy[0] == copy[1] || copy[1] == copy[2]) return false;
    for (int a = 0; a < 3; ++a)
      for (int c = a + 1; c < 3; ++c)
        if (h_.code({copy[a], copy[c]}) != 0) return false;
    return true;
  }

 private:
  static std::vector<int> iota(int n) {
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 0);
    return v;
  }

  void catalogue_to(int n) {
    while (static_cast<int>(s_.size()) < n) s_.push_back(s_fresh(static_cast<int>(s_.size())));
  }

  EnumeratedStructure h_;
  std::vector<SeqNode> s_;
};

/// The colour from (s, n): w(s|l(s,n)) - n when n <= |s|, else 0.
inline long long inf_colour_of(const SeqNode& s, long long n) {
  if (n > static_cast<long long>(s.size())) return 0;
  return seq_weight(s, seq_ell(s, n)) - n;
}

inline long long inf_colour(const InfColouringContext& ctx, std::vector<int> copy) {
  if (!ctx.is_copy_of_a(copy)) throw InputError("inf_colour: not a copy of A (three vertices, no relations)");
  std::sort(copy.begin(), copy.end());
  int n = copy[0];
  int w = copy[1];
  const SeqNode& sv = ctx.s(copy[2]);
  SeqNode s(sv.begin(), sv.begin() + ctx.j(w));
  return inf_colour_of(s, n);
}

struct InfWitness {
  bool found = false;
  std::vector<int> copy;  // vertices of H
  long long colour = 0;
  std::vector<int> r;     // r0..r3
  int x = -1;
  int y = -1;
  int grow_by = 0;        // suggested prefix growth when not found
  std::string reason;
};

namespace detail {

inline bool same_type(const EnumeratedStructure& h, std::vector<int> a, std::vector<int> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (std::adjacent_find(a.begin(), a.end()) != a.end() || std::adjacent_find(b.begin(), b.end()) != b.end())
    return false;
  return a.size() == b.size() && h.induced(a) == h.induced(b);
}

}  // namespace detail

/// Runs the construction for target colour p against an embedding f given by
/// its values on the prefix 0..|f|-1. A missing choice yields a grow signal.
inline InfWitness inf_witness(const InfColouringContext& ctx, long long p, const std::vector<int>& f) {
  const auto& h = ctx.structure();
  InfWitness out;
  int dom = static_cast<int>(f.size());
  auto grow = [&](const std::string& why) {
    out.grow_by = std::max(8, h.size());
    out.reason = why;
    return out;
  };
  for (int v : f)
    if (v < 0 || v >= h.size()) throw InputError("inf_witness: embedding leaves the prefix");
  if (p < 0) throw InputError("inf_witness: colour must be natural");
  if (dom < 2) return grow("domain too small for r0, r1");
  int r0 = 0, r1 = 1;
  const SeqNode& s1 = ctx.s(f[r1]);
  long long base = seq_weight(SeqNode(s1.begin(), s1.begin() + ctx.j(f[r0])));
  int r2 = -1;
  for (int c = r1 + 1; c < dom && r2 < 0; ++c)
    if (f[c] > base) r2 = c;
  if (r2 < 0) return grow("no r2 with a large enough level");
  int n = f[r2];
  int r3 = -1;
  for (int c = r2 + 1; c < dom && r3 < 0; ++c)
    if (ctx.j(f[c]) > n && h.code({r2, c}) == 0) r3 = c;
  if (r3 < 0) return grow("no r3");
  long long q = n - base - 1 + p;
  int x = -1;
  for (int c = r3 + 1; c < dom && x < 0; ++c)
    if (h.code({r0, c}) == q && h.code({r2, c}) == 0 && h.code({r3, c}) == 0) x = c;
  if (x < 0) return grow("no x realizing relation code " + std::to_string(q));
  std::vector<int> xs{r0, r1, r2, r3};
  std::vector<int> fx{f[r0], f[r1], f[r2], f[r3]};
  std::vector<int> low(f[r0]);
  std::iota(low.begin(), low.end(), 0);
  int y = -1;
  for (int c = r3 + 1; c < dom && y < 0; ++c) {
    auto lhs = fx;
    lhs.push_back(f[c]);
    auto rhs = xs;
    rhs.push_back(x);
    auto a = low;
    a.push_back(f[c]);
    auto b = low;
    b.push_back(f[r1]);
    if (detail::same_type(h, lhs, rhs) && detail::same_type(h, a, b)) y = c;
  }
  if (y < 0) return grow("tree-likeness gave no y inside the prefix");
  out.r = {r0, r1, r2, r3};
  out.x = x;
  out.y = y;
  out.copy = {f[r2], f[r3], f[y]};
  if (!ctx.is_copy_of_a(out.copy)) return grow("constructed vertices do not form a copy of A");
  out.colour = inf_colour(ctx, out.copy);
  out.found = out.colour == p;
  if (!out.found) out.reason = "constructed copy has colour " + std::to_string(out.colour);
  return out;
}

// ---------------------------------------------------------------------------
// Tree-likeness
// ---------------------------------------------------------------------------

struct TreeLikeVerdict {
  enum class Kind { pass, fail, inconclusive } kind = Kind::inconclusive;
  std::vector<int> xs;
  int i = -1;
  int x = -1;
  std::uint64_t instances = 0;
};

/// Checks both type conditions for every nonempty X within [0, bound), every
/// i and every x in (max X, bound), searching y over the domain of f.
inline TreeLikeVerdict is_tree_like(const EnumeratedStructure& h, const std::vector<int>& f, int bound) {
  int dom = static_cast<int>(f.size());
  if (bound > dom) throw InputError("is_tree_like: bound exceeds the domain of f");
  if (bound > 20) throw InputError("is_tree_like: bound too large");
  for (int v : f)
    if (v < 0 || v >= h.size()) throw InputError("is_tree_like: f leaves the structure");
  TreeLikeVerdict verdict;
  for (std::uint32_t mask = 1; mask < (1u << bound); ++mask) {
    std::vector<int> xs;
    for (int v = 0; v < bound; ++v)
      if (mask & (1u << v)) xs.push_back(v);
    std::vector<int> fx;
    for (int v : xs) fx.push_back(f[v]);
    std::vector<int> low(f[xs[0]]);
    std::iota(low.begin(), low.end(), 0);
    for (int i = 0; i < static_cast<int>(xs.size()); ++i)
      for (int x = xs.back() + 1; x < bound; ++x) {
        ++verdict.instances;
        bool ok = false;
        for (int y = xs.back() + 1; y < dom && !ok; ++y) {
          auto lhs = fx;
          lhs.push_back(f[y]);
          auto rhs = xs;
          rhs.push_back(x);
          auto a = low;
          a.push_back(f[y]);
          auto b = low;
          b.push_back(f[xs[i]]);
          ok = detail::same_type(h, lhs, rhs) && detail::same_type(h, a, b);
        }
        if (!ok) {
          verdict.kind = TreeLikeVerdict::Kind::fail;
          verdict.xs = xs;
          verdict.i = i;
          verdict.x = x;
          return verdict;
        }
      }
  }
  verdict.kind = verdict.instances ? TreeLikeVerdict::Kind::pass : TreeLikeVerdict::Kind::inconclusive;
  return verdict;
}

}  // namespace brt
