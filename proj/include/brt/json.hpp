#pragma once

// JSON encodings of the library objects (schema "brt-structure/1" for structures).

#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "brt/adversarial.hpp"
#include "brt/envelopes.hpp"
#include "brt/error.hpp"
#include "brt/structures.hpp"
#include "brt/trees.hpp"
#include "brt/valuation.hpp"

namespace brt::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kStructureSchema = "brt-structure/1";

template <class T>
T get(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing JSON field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("bad JSON field '") + key + "': " + e.what());
  }
}

inline Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("invalid JSON in '" + path + "': " + e.what());
  }
}

// --- languages and structures ------------------------------------------------

inline Json to_json(const RelationalLanguage& lang) {
  Json j;
  j["symbols"] = Json::array();
  for (const auto& s : lang.symbols()) j["symbols"].push_back({{"name", s.name}, {"arity", s.arity}});
  if (!lang.families().empty()) {
    j["families"] = Json::array();
    for (const auto& f : lang.families()) j["families"].push_back({{"prefix", f.prefix}, {"arity", f.arity}});
  }
  return j;
}

inline RelationalLanguage language_from_json(const Json& j) {
  std::vector<Symbol> symbols;
  std::vector<CountableFamily> families;
  for (const auto& s : get<Json>(j, "symbols")) symbols.push_back({get<std::string>(s, "name"), get<int>(s, "arity")});
  if (j.contains("families"))
    for (const auto& f : j.at("families")) families.push_back({get<std::string>(f, "prefix"), get<int>(f, "arity")});
  return RelationalLanguage(symbols, families);
}

inline Json to_json(const EnumeratedStructure& s) {
  Json j;
  j["schema"] = kStructureSchema;
  j["language"] = to_json(s.language());
  j["size"] = s.size();
  j["hypergraph"] = s.is_hypergraph();
  j["relations"] = Json::object();
  for (const auto& [name, tuples] : s.relations()) {
    Json arr = Json::array();
    for (const auto& t : tuples) arr.push_back(t);
    j["relations"][name] = arr;
  }
  return j;
}

inline EnumeratedStructure structure_from_json(const Json& j) {
  if (j.contains("schema") && j.at("schema") != kStructureSchema)
    throw InputError("unsupported structure schema " + j.at("schema").dump());
  EnumeratedStructure s(language_from_json(get<Json>(j, "language")), get<int>(j, "size"),
                        j.value("hypergraph", true));
  if (j.contains("relations"))
    for (const auto& [name, tuples] : j.at("relations").items())
      for (const auto& t : tuples) {
        if (!t.is_array()) throw InputError("relation tuples must be arrays");
        s.add(name, t.get<Tuple>());
      }
  s.validate();
  return s;
}

/// A language file may be either a bare language or a structure.
inline RelationalLanguage language_from_any(const Json& j) {
  return j.contains("language") ? language_from_json(j.at("language")) : language_from_json(j);
}

// --- signatures and valuation functions ------------------------------------

inline Json to_json(const Signature& s) { return {{"prefix", s.prefix()}, {"tail", s.tail()}}; }

inline Signature signature_from_json(const Json& j) {
  return Signature(get<std::vector<int>>(j, "prefix"), get<int>(j, "tail"));
}

inline Json to_json(const ValuationFunction& f) {
  Json j;
  if (f.shift() != 0) j["shift"] = f.shift();
  j["level"] = f.level();
  j["values"] = Json::array();
  for (const auto& [t, v] : f.values()) j["values"].push_back({{"tuple", t}, {"v", v}});
  return j;
}

inline ValuationFunction vf_from_json(const Json& j, const std::shared_ptr<const Signature>& sigma, int shift) {
  ValuationFunction f(sigma, j.value("shift", shift), get<int>(j, "level"));
  if (j.contains("values"))
    for (const auto& e : j.at("values")) f.set(get<Tuple>(e, "tuple"), get<int>(e, "v"));
  return f;
}

template <class Range>
Json nodes_json(const Range& nodes) {
  Json arr = Json::array();
  for (const auto& f : nodes) arr.push_back(to_json(f));
  return arr;
}

// --- witnesses and trees -----------------------------------------------------

inline Json to_json(const StrongSubtreeWitness& w) {
  Json j;
  j["levels"] = w.levels;
  j["coords"] = Json::array();
  for (const auto& c : w.coords) {
    Json sel = Json::array();
    for (const auto& [dir, chosen] : c.selections) sel.push_back({{"direction", to_json(dir)}, {"node", to_json(chosen)}});
    j["coords"].push_back({{"root", to_json(c.root)}, {"selections", sel}});
  }
  return j;
}

inline StrongSubtreeWitness witness_from_json(const Json& j, const Signature& sigma) {
  auto sp = std::make_shared<const Signature>(sigma);
  StrongSubtreeWitness w;
  w.levels = get<std::vector<int>>(j, "levels");
  int c = 0;
  for (const auto& cj : get<Json>(j, "coords")) {
    StrongSubtree s;
    s.shift = c;
    s.levels = w.levels;
    s.root = vf_from_json(get<Json>(cj, "root"), sp, c);
    if (cj.contains("selections"))
      for (const auto& e : cj.at("selections"))
        s.selections.emplace(vf_from_json(get<Json>(e, "direction"), sp, c), vf_from_json(get<Json>(e, "node"), sp, c));
    w.coords.push_back(std::move(s));
    ++c;
  }
  w.validate();
  return w;
}

inline Json to_json(const ValuationTree& t) {
  Json j;
  j["height"] = t.height;
  j["levels"] = t.levels;
  j["size"] = t.size();
  j["nodes"] = Json::array();
  for (const auto& level : t.by_level) j["nodes"].push_back(nodes_json(level));
  return j;
}

// --- envelopes ---------------------------------------------------------------

inline Json to_json(const EnvelopingEmbedding& phi) {
  Json j;
  j["k"] = phi.k;
  j["signature"] = to_json(phi.sigma);
  j["vertex_levels"] = phi.vertex_level;
  j["markers"] = Json::array();
  for (const auto& [m, level] : phi.marker_level) j["markers"].push_back({{"xs", m.xs}, {"s", m.s}, {"level", level}});
  j["images"] = nodes_json(phi.images);
  return j;
}

inline Json to_json(const EnvelopingVerdict& v) {
  Json j{{"ok", v.ok}};
  if (!v.ok) {
    j["condition"] = v.condition;
    j["vertex"] = v.vertex;
    j["other"] = v.other;
    j["xs"] = v.xs;
    j["ys"] = v.ys;
    j["level"] = v.level;
    j["message"] = v.message;
  }
  return j;
}

inline Json to_json(const Envelope& e) {
  Json j;
  j["subset"] = e.subset;
  j["levels"] = e.levels;
  j["height"] = e.height;
  Json stages = Json::array();
  for (const auto& st : e.trace) {
    auto lv = levels_of(st.e2);
    stages.push_back({{"set", nodes_json(st.e2)}, {"levels", std::vector<int>(lv.begin(), lv.end())}});
  }
  j["trace"] = {{"stage", stages}};
  j["contained"] = e.contained;
  return j;
}

// --- adversarial -------------------------------------------------------------

inline Json to_json(const InfWitness& w) {
  Json j{{"found", w.found}};
  if (!w.copy.empty()) {
    j["copy"] = w.copy;
    j["colour"] = w.colour;
    j["r"] = w.r;
    j["x"] = w.x;
    j["y"] = w.y;
  }
  if (!w.found) {
    j["grow_by"] = w.grow_by;
    j["reason"] = w.reason;
  }
  return j;
}

inline Json to_json(const TreeLikeVerdict& v) {
  const char* kind = v.kind == TreeLikeVerdict::Kind::pass   ? "pass"
                     : v.kind == TreeLikeVerdict::Kind::fail ? "fail"
                                                             : "inconclusive";
  Json j{{"verdict", kind}, {"instances", v.instances}};
  if (v.kind == TreeLikeVerdict::Kind::fail) j["witness"] = {{"X", v.xs}, {"i", v.i}, {"x", v.x}};
  return j;
}

}  // namespace brt::io
