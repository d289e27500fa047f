#pragma once

// Signatures and valuation functions: the nodes of the trees T_i.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "brt/error.hpp"
#include "brt/structures.hpp"

namespace brt {

/// Branching bounds (sigma_1, sigma_2, ...): an explicit prefix followed by a
/// constant tail. Indices are 1-based.
class Signature {
 public:
  Signature() = default;
  Signature(std::vector<int> prefix, int tail) : prefix_(std::move(prefix)), tail_(tail) {
    for (int v : prefix_)
      if (v < 1) throw InputError("signature entries must be >= 1");
    if (tail_ < 1) throw InputError("signature tail must be >= 1");
    normalize();
  }

  int operator[](int index) const {
    if (index < 1) throw InputError("signature index must be >= 1");
    return index <= static_cast<int>(prefix_.size()) ? prefix_[index - 1] : tail_;
  }

  Signature shift(int by) const {
    if (by < 0) throw InputError("negative signature shift");
    std::vector<int> p;
    for (int i = by; i < static_cast<int>(prefix_.size()); ++i) p.push_back(prefix_[i]);
    return Signature(std::move(p), tail_);
  }

  const std::vector<int>& prefix() const { return prefix_; }
  int tail() const { return tail_; }

  bool operator==(const Signature&) const = default;

 private:
  void normalize() {
    while (!prefix_.empty() && prefix_.back() == tail_) prefix_.pop_back();
  }

  std::vector<int> prefix_;
  int tail_ = 1;
};

/// sigma_i = n_{i+1} + 2 for i < mu, 1 otherwise. Unary symbols are ignored;
/// countably many symbols of an arity >= 2 leave the tree infinitely branching.
inline Signature signature_from_language(const RelationalLanguage& lang) {
  int mu = 0;
  for (int arity = 2; arity <= lang.max_arity(); ++arity) {
    auto n = lang.count(arity);
    if (!n) throw InputError("countably many relations of arity " + std::to_string(arity) + ": no finite signature");
    if (*n > 0) mu = arity;
  }
  std::vector<int> prefix;
  for (int i = 1; i < mu; ++i) prefix.push_back(*lang.count(i + 1) + 2);
  return Signature(std::move(prefix), 1);
}

/// Decreasing tuples ordered by length, then lexicographically.
struct TupleLess {
  bool operator()(const Tuple& a, const Tuple& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

inline bool is_decreasing(std::span<const int> t) {
  for (std::size_t i = 1; i < t.size(); ++i)
    if (t[i] >= t[i - 1]) return false;
  return true;
}

/// A sigma^(shift)-valuation function of a finite level. Only nonzero values are
/// stored; equality compares shift, level and the stored values.
class ValuationFunction {
 public:
  using Values = std::map<Tuple, int, TupleLess>;

  ValuationFunction() : sigma_(std::make_shared<const Signature>()) {}
  ValuationFunction(std::shared_ptr<const Signature> sigma, int shift, int level)
      : sigma_(std::move(sigma)), shift_(shift), level_(level) {
    if (shift < 0 || level < 0) throw InputError("negative shift or level");
  }
  ValuationFunction(const Signature& sigma, int shift, int level)
      : ValuationFunction(std::make_shared<const Signature>(sigma), shift, level) {}

  int level() const { return level_; }
  int shift() const { return shift_; }
  const Signature& signature() const { return *sigma_; }
  const std::shared_ptr<const Signature>& signature_ptr() const { return sigma_; }
  const Values& values() const { return values_; }
  bool is_zero() const { return values_.empty(); }

  /// Bound on values for tuples of the given length.
  int bound(std::size_t length) const { return (*sigma_)[shift_ + static_cast<int>(length)]; }

  int operator()(const Tuple& t) const {
    auto it = values_.find(t);
    return it == values_.end() ? 0 : it->second;
  }

  void set(const Tuple& t, int v) {
    if (t.empty()) throw InputError("valuation functions are defined on nonempty tuples");
    if (!is_decreasing(t) || t.front() >= level_ || t.back() < 0)
      throw InputError("tuple outside I^n for level " + std::to_string(level_));
    if (v < 0 || v >= bound(t.size()))
      throw InputError("value " + std::to_string(v) + " out of range for tuple length " + std::to_string(t.size()));
    if (v == 0)
      values_.erase(t);
    else
      values_[t] = v;
  }

  /// Same values, different level. Caller guarantees no stored tuple reaches the new level.
  ValuationFunction with_level(int level) const {
    ValuationFunction r = *this;
    r.level_ = level;
    return r;
  }

  bool operator==(const ValuationFunction& o) const {
    return shift_ == o.shift_ && level_ == o.level_ && values_ == o.values_;
  }

 private:
  friend ValuationFunction restrict(const ValuationFunction&, int);
  friend ValuationFunction slice(const ValuationFunction&, const Tuple&);

  std::shared_ptr<const Signature> sigma_;
  int shift_ = 0;
  int level_ = 0;
  Values values_;
};

inline ValuationFunction zero_function(const Signature& sigma, int shift, int level) {
  return ValuationFunction(sigma, shift, level);
}

inline ValuationFunction zero_like(const ValuationFunction& f, int level) {
  return ValuationFunction(f.signature_ptr(), f.shift(), level);
}

/// f|_level: keeps tuples whose leading entry is below `level`.
inline ValuationFunction restrict(const ValuationFunction& f, int level) {
  if (level < 0 || level > f.level())
    throw InputError("restrict: level " + std::to_string(level) + " above " + std::to_string(f.level()));
  ValuationFunction r(f.sigma_, f.shift_, level);
  for (const auto& [t, v] : f.values_)
    if (t.front() < level) r.values_.emplace_hint(r.values_.end(), t, v);
  return r;
}

/// The xs-slice f^xs: level xs.back() (or |f| for empty xs), shift + |xs|,
/// and f^xs(ys) = f(xs ++ ys).
inline ValuationFunction slice(const ValuationFunction& f, const Tuple& xs) {
  if (xs.empty()) return f;
  if (!is_decreasing(xs) || xs.front() >= f.level() || xs.back() < 0)
    throw InputError("slice: tuple must be strictly decreasing with entries below the level");
  ValuationFunction r(f.sigma_, f.shift_ + static_cast<int>(xs.size()), xs.back());
  for (const auto& [t, v] : f.values_) {
    if (t.size() <= xs.size() || !std::equal(xs.begin(), xs.end(), t.begin())) continue;
    r.values_.emplace(Tuple(t.begin() + static_cast<std::ptrdiff_t>(xs.size()), t.end()), v);
  }
  return r;
}

/// The extension of f by g with value `singleton` at the tuple (n).
inline ValuationFunction extend(const ValuationFunction& f, const ValuationFunction& g, int singleton) {
  if (f.level() != g.level()) throw InputError("extension: levels differ");
  if (g.shift() != f.shift() + 1) throw InputError("extension: g must have shift one above f");
  int n = f.level();
  ValuationFunction h = f.with_level(n + 1);
  h.set({n}, singleton);
  for (const auto& [t, v] : g.values()) {
    Tuple u{n};
    u.insert(u.end(), t.begin(), t.end());
    h.set(u, v);
  }
  return h;
}

/// All members of f^g, ordered by the singleton value.
inline std::vector<ValuationFunction> extensions(const ValuationFunction& f, const ValuationFunction& g) {
  std::vector<ValuationFunction> out;
  for (int a = 0; a < f.bound(1); ++a) out.push_back(extend(f, g, a));
  return out;
}

/// Least level at which f and g disagree, or min(|f|, |g|) when one restricts
/// to the other.
inline int first_difference(const ValuationFunction& f, const ValuationFunction& g) {
  int limit = std::min(f.level(), g.level());
  int best = limit;
  auto scan = [&](const ValuationFunction& a, const ValuationFunction& b) {
    for (const auto& [t, v] : a.values())
      if (t.front() < best && b(t) != v) best = t.front();
  };
  scan(f, g);
  scan(g, f);
  return best;
}

/// Meet in T_i.
inline ValuationFunction meet(const ValuationFunction& f, const ValuationFunction& g) {
  return restrict(f, first_difference(f, g));
}

inline bool comparable(const ValuationFunction& f, const ValuationFunction& g) {
  return first_difference(f, g) == std::min(f.level(), g.level());
}

/// Whether g extends f in the tree order (f <= g).
inline bool is_below(const ValuationFunction& f, const ValuationFunction& g) {
  return f.level() <= g.level() && comparable(f, g);
}

/// Enumeration order of G^sigma: level first, then the value at the least
/// tuple (length, then lex) where the functions differ.
inline bool node_less(const ValuationFunction& f, const ValuationFunction& g) {
  if (f.level() != g.level()) return f.level() < g.level();
  if (f.shift() != g.shift()) return f.shift() < g.shift();
  auto i = f.values().begin(), fe = f.values().end();
  auto j = g.values().begin(), ge = g.values().end();
  TupleLess less;
  while (i != fe || j != ge) {
    if (j == ge || (i != fe && less(i->first, j->first))) return false;  // f nonzero where g is zero
    if (i == fe || less(j->first, i->first)) return true;
    if (i->second != j->second) return i->second < j->second;
    ++i;
    ++j;
  }
  return false;
}

struct NodeLess {
  bool operator()(const ValuationFunction& f, const ValuationFunction& g) const { return node_less(f, g); }
};

/// The G^sigma relation code on a tuple of shift-0 nodes of pairwise distinct
/// levels: x0(|x1|, ..., |x_{i-1}|) where x0 has the largest level, or 0 when
/// that value does not name a relation.
inline int g_sigma_code(std::vector<ValuationFunction> nodes) {
  if (nodes.size() < 2) return 0;
  std::sort(nodes.begin(), nodes.end(), [](const auto& a, const auto& b) { return a.level() > b.level(); });
  for (std::size_t i = 1; i < nodes.size(); ++i)
    if (nodes[i].level() == nodes[i - 1].level()) return 0;
  Tuple t;
  for (std::size_t i = 1; i < nodes.size(); ++i) t.push_back(nodes[i].level());
  int v = nodes[0](t);
  int arity = static_cast<int>(nodes.size());
  return v >= 1 && v <= nodes[0].signature()[arity - 1] - 2 ? v : 0;
}

/// {x0, ..., x_{i-1}} in R_{i,j}. Nodes must be shift 0 with strictly decreasing levels.
inline bool g_sigma_related(const std::vector<ValuationFunction>& nodes, int arity, int colour) {
  if (static_cast<int>(nodes.size()) != arity || arity < 2) throw InputError("g_sigma_related: arity mismatch");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].shift() != 0) throw InputError("g_sigma_related: nodes must lie in T_0");
    if (i > 0 && nodes[i].level() >= nodes[i - 1].level())
      throw InputError("g_sigma_related: levels must strictly decrease");
  }
  int top = nodes[0].signature()[arity - 1] - 2;
  if (colour < 1 || colour > top) throw InputError("g_sigma_related: colour out of range");
  return g_sigma_code(nodes) == colour;
}

/// Decreasing tuples with entries in [lo, hi) whose leading entry is in
/// [lead_lo, hi), of lengths 1..max_length, in TupleLess order.
inline std::vector<Tuple> decreasing_tuples(int hi, int max_length, int lead_lo = 0) {
  std::vector<Tuple> out;
  Tuple cur;
  std::function<void(int, int)> rec = [&](int below, int remaining) {
    if (remaining == 0) {
      out.push_back(cur);
      return;
    }
    for (int x = 0; x < below; ++x) {
      cur.push_back(x);
      rec(x, remaining - 1);
      cur.pop_back();
    }
  };
  for (int len = 1; len <= max_length; ++len)
    for (int lead = lead_lo; lead < hi; ++lead) {
      cur = {lead};
      rec(lead, len - 1);
    }
  std::sort(out.begin(), out.end(), TupleLess{});
  return out;
}

/// |T_shift(n)| = prod_l sigma^(shift)_l ^ C(n, l), saturating.
inline std::uint64_t count_level_nodes(const Signature& sigma, int shift, int n) {
  std::uint64_t total = 1;
  for (int l = 1; l <= n; ++l) total = detail::sat_mul(total, detail::sat_pow(sigma[shift + l], detail::binomial(n, l)));
  return total;
}

/// Number of immediate successors of any node of T_shift at level n.
inline std::uint64_t count_immediate_successors(const Signature& sigma, int shift, int n) {
  return detail::sat_mul(static_cast<std::uint64_t>(sigma[shift + 1]), count_level_nodes(sigma, shift + 1, n));
}

}  // namespace brt
