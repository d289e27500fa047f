#pragma once

// Graphviz output for valuation trees and strong subtree witnesses.

#include <map>
#include <sstream>
#include <string>

#include "brt/trees.hpp"

namespace brt::dot {

/// Compact label such as "L3 (0)=1 (2,0)=2"; the zero function prints as "L3 0".
inline std::string label(const ValuationFunction& f) {
  std::ostringstream os;
  os << 'L' << f.level();
  if (f.shift() != 0) os << " s" << f.shift();
  if (f.is_zero()) os << " 0";
  for (const auto& [t, v] : f.values()) {
    os << " (";
    for (std::size_t i = 0; i < t.size(); ++i) os << (i ? "," : "") << t[i];
    os << ")=" << v;
  }
  return os.str();
}

namespace detail {

// Writes a forest: each node's parent is its restriction to the previous listed level.
inline void write_levels(std::ostream& os, const std::vector<std::vector<ValuationFunction>>& by_level,
                         const std::vector<int>& levels, const std::string& prefix) {
  std::map<ValuationFunction, std::string, NodeLess> ids;
  for (std::size_t l = 0; l < by_level.size(); ++l) {
    os << "  { rank=same;";
    for (std::size_t i = 0; i < by_level[l].size(); ++i) {
      std::string id = prefix + std::to_string(l) + "_" + std::to_string(i);
      ids.emplace(by_level[l][i], id);
      os << ' ' << id << ';';
    }
    os << " }\n";
    for (std::size_t i = 0; i < by_level[l].size(); ++i)
      os << "  " << ids.at(by_level[l][i]) << " [label=\"" << label(by_level[l][i]) << "\"];\n";
  }
  for (std::size_t l = 1; l < by_level.size(); ++l)
    for (const auto& f : by_level[l]) {
      auto it = ids.find(restrict(f, levels[l - 1]));
      if (it != ids.end()) os << "  " << it->second << " -> " << ids.at(f) << ";\n";
    }
}

}  // namespace detail

inline std::string tree(const ValuationTree& t) {
  std::ostringstream os;
  os << "digraph valuation_tree {\n  node [shape=box, fontname=\"monospace\"];\n";
  detail::write_levels(os, t.by_level, t.levels, "n");
  os << "}\n";
  return os.str();
}

/// One cluster per coordinate, materialized up to `height` levels.
inline std::string witness(const StrongSubtreeWitness& w, int height, std::uint64_t cap = kDefaultNodeCap) {
  std::ostringstream os;
  os << "digraph witness {\n  node [shape=box, fontname=\"monospace\"];\n";
  for (std::size_t c = 0; c < w.coords.size(); ++c) {
    os << " subgraph cluster_" << c << " {\n  label=\"coordinate " << c << "\";\n";
    auto levels = w.coords[c].materialize(height, cap);
    std::vector<int> lv(w.levels.begin(), w.levels.begin() + std::min<std::size_t>(levels.size(), w.levels.size()));
    detail::write_levels(os, levels, lv, "c" + std::to_string(c) + "_");
    os << " }\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace brt::dot
