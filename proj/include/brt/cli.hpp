#pragma once

// Subcommand front end: JSON results on the output stream, diagnostics on the
// error stream. Exit codes: 0 success, 1 input error, 2 infeasible.

#include <cstdlib>
#include <numeric>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "brt/adversarial.hpp"
#include "brt/dot.hpp"
#include "brt/envelopes.hpp"
#include "brt/error.hpp"
#include "brt/json.hpp"
#include "brt/reductions.hpp"
#include "brt/structures.hpp"
#include "brt/trees.hpp"
#include "brt/valuation.hpp"

namespace brt::cli {

enum ExitCode : int { kOk = 0, kInputError = 1, kInfeasible = 2 };

struct Config {
  std::uint64_t cap = kDefaultNodeCap;
  std::uint64_t seed = 0;
  std::string format = "json";  // json | dot | table
  bool pretty = false;
};

namespace detail {

using io::Json;

inline std::uint64_t cap_from_env(std::uint64_t fallback) {
  const char* v = std::getenv("BRT_CAP");
  if (!v || !*v) return fallback;
  try {
    std::size_t used = 0;
    auto cap = std::stoull(v, &used);
    if (used != std::string(v).size() || cap == 0) throw std::invalid_argument("cap");
    return cap;
  } catch (const std::exception&) {
    throw InputError(std::string("BRT_CAP must be a positive integer, got '") + v + "'");
  }
}

inline void table(std::ostream& out, const Json& j, const std::string& path = "") {
  if (j.is_object() && !j.empty()) {
    for (const auto& [k, v] : j.items()) table(out, v, path.empty() ? k : path + "." + k);
  } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array())) {
    for (std::size_t i = 0; i < j.size(); ++i) table(out, j[i], path + "[" + std::to_string(i) + "]");
  } else {
    out << (path.empty() ? "value" : path) << '\t' << j.dump() << '\n';
  }
}

struct Emitter {
  const Config& cfg;
  std::ostream& out;

  void json(const Json& j) const {
    if (cfg.format == "table")
      table(out, j);
    else
      out << (cfg.pretty ? j.dump(2) : j.dump()) << '\n';
  }
  bool dot() const { return cfg.format == "dot"; }
};

inline Signature sigma_from(const std::string& lang_file, const std::vector<int>& prefix, int tail) {
  if (!lang_file.empty()) return signature_from_language(io::language_from_any(io::read_file(lang_file)));
  return Signature(prefix, tail);
}

inline std::vector<std::vector<ValuationFunction>> full_levels(const Signature& sigma, int shift, int height,
                                                              std::uint64_t cap) {
  std::vector<std::vector<ValuationFunction>> out;
  for (int l = 0; l < height; ++l) out.push_back(level_nodes(sigma, shift, l, cap));
  return out;
}

inline std::vector<EnumeratedStructure> read_structures(const std::vector<std::string>& files) {
  std::vector<EnumeratedStructure> out;
  for (const auto& f : files) out.push_back(io::structure_from_json(io::read_file(f)));
  return out;
}

}  // namespace detail

/// Parses `args` (without the program name) and runs one subcommand.
inline int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using detail::Json;
  Config cfg;
  CLI::App app{"Big Ramsey degree toolkit for finitely constrained relational structures", "brt"};
  app.require_subcommand(1);
  std::optional<std::uint64_t> cap_flag;
  bool dot_flag = false;
  app.add_option("--cap", cap_flag, "node-count cap (overrides BRT_CAP)")->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "seed for randomized constructions");
  app.add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"json", "dot", "table"}));
  app.add_flag("--dot", dot_flag, "shorthand for --format dot");
  app.add_flag("--pretty", cfg.pretty, "indent JSON output");
  app.fallthrough();

  // sig
  std::string lang_file;
  auto* sig = app.add_subcommand("sig", "signature of a language");
  sig->add_option("--lang", lang_file, "language or structure JSON")->required();

  // tree
  std::vector<int> sigma_prefix;
  int sigma_tail = 1;
  int shift = 0, level = 0;
  bool below = false;
  auto* tree = app.add_subcommand("tree", "nodes of a level of T_c");
  auto add_sigma = [&](CLI::App* sc) {
    auto* l = sc->add_option("--lang", lang_file, "derive the signature from a language");
    auto* p = sc->add_option("--sigma", sigma_prefix, "signature prefix")->delimiter(',');
    sc->add_option("--tail", sigma_tail, "signature tail value")->check(CLI::PositiveNumber);
    l->excludes(p);
  };
  add_sigma(tree);
  tree->add_option("--shift", shift, "tree index c")->check(CLI::NonNegativeNumber);
  tree->add_option("--level", level, "level n")->required()->check(CLI::NonNegativeNumber);
  tree->add_flag("--below", below, "all nodes of levels < n");

  // val
  std::optional<int> dim;
  int k = 1;
  std::vector<int> levels;
  std::string witness_file;
  bool emit_witness = false;
  auto* val = app.add_subcommand("val", "valuation tree val(S, k) of a strong subtree witness");
  add_sigma(val);
  val->add_option("--dim", dim, "dimension d (default: k)")->check(CLI::PositiveNumber);
  val->add_option("--k", k, "height k")->required()->check(CLI::NonNegativeNumber);
  val->add_option("--levels", levels, "witness levels (random witness with --seed)")->delimiter(',');
  val->add_option("--witness", witness_file, "witness JSON");
  val->add_flag("--emit-witness", emit_witness, "include the witness in the report");

  // embed
  std::string source_file, target_file;
  std::size_t limit = 0;
  auto* embed = app.add_subcommand("embed", "monotone embeddings between structures");
  embed->add_option("--source", source_file)->required();
  embed->add_option("--target", target_file)->required();
  embed->add_option("--limit", limit, "stop after this many (0 = all)");

  // envelope
  std::vector<int> subset;
  std::string prefix_file;
  auto* envelope = app.add_subcommand("envelope", "envelope of a finite subset of a prefix");
  envelope->add_option("--k", k, "enveloping parameter k")->required()->check(CLI::PositiveNumber);
  envelope->add_option("--subset", subset, "vertices of the prefix")->delimiter(',');
  envelope->add_option("--prefix", prefix_file, "hypergraph prefix JSON")->required();

  // degree
  std::string structure_file;
  int h = 0;
  auto* degree = app.add_subcommand("degree", "upper bound on the big Ramsey degree of A");
  degree->add_option("--structure", structure_file, "finite hypergraph A")->required();
  degree->add_option("--height", h, "envelope height")->required()->check(CLI::NonNegativeNumber);
  degree->add_option("--lang", lang_file, "language fixing the signature (default: A's)");

  // reduce
  auto* reduce = app.add_subcommand("reduce", "reductions between structure classes");
  reduce->require_subcommand(1);
  auto* encode = reduce->add_subcommand("encode", "encode as a hypergraph");
  encode->add_option("--structure", structure_file)->required();
  auto* decode = reduce->add_subcommand("decode", "decode a hypergraph back");
  decode->add_option("--structure", structure_file)->required();
  decode->add_option("--lang", lang_file, "original language")->required();
  std::optional<int> unary_count;
  auto* unaries = reduce->add_subcommand("unaries", "product with unary relations");
  unaries->add_option("--structure", structure_file)->required();
  unaries->add_option("--u", unary_count, "number of unaries (omit: countably many)")->check(CLI::PositiveNumber);
  std::vector<std::string> forbidden_files;
  auto* strip = reduce->add_subcommand("strip", "remove bad tuples");
  strip->add_option("--structure", structure_file)->required();
  strip->add_option("--forbidden", forbidden_files, "forbidden structures")->required()->delimiter(',');

  // adversarial
  auto* adversarial = app.add_subcommand("adversarial", "adversarial colourings");
  adversarial->require_subcommand(1);
  std::vector<long long> node_vals;
  auto* hl = adversarial->add_subcommand("hl", "colour of a node of the infinitely branching tree");
  hl->add_option("--node", node_vals, "node entries")->delimiter(',')->expected(0, -1);
  long long colour = 0;
  auto* hlw = adversarial->add_subcommand("hl-witness", "node of colour x in a strong subtree");
  hlw->add_option("--colour", colour)->required()->check(CLI::NonNegativeNumber);
  hlw->add_option("--root", node_vals, "subtree root")->delimiter(',');
  hlw->add_option("--levels", levels, "subtree levels (default: consecutive)")->delimiter(',');
  int rounds = 0, window = 4, max_subset = 3, max_code = 6;
  auto* inf = adversarial->add_subcommand("inf", "copy of A with colour p in a generic prefix");
  inf->add_option("--prefix-size", rounds, "extension rounds")->required()->check(CLI::NonNegativeNumber);
  inf->add_option("--colour", colour)->required()->check(CLI::NonNegativeNumber);
  inf->add_option("--window", window)->check(CLI::NonNegativeNumber);
  inf->add_option("--max-subset", max_subset)->check(CLI::NonNegativeNumber);
  inf->add_option("--max-code", max_code)->check(CLI::NonNegativeNumber);
  std::vector<int> map;
  int bound = 0;
  auto* tree_like = adversarial->add_subcommand("tree-like", "tree-likeness of an embedding");
  tree_like->add_option("--structure", structure_file)->required();
  tree_like->add_option("--map", map, "the embedding f")->required()->delimiter(',');
  tree_like->add_option("--bound", bound, "largest |X| tried")->required()->check(CLI::NonNegativeNumber);

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kInputError;
  }

  try {
    cfg.cap = cap_flag ? *cap_flag : detail::cap_from_env(kDefaultNodeCap);
    if (dot_flag) cfg.format = "dot";
    detail::Emitter emit{cfg, out};

    if (sig->parsed()) {
      emit.json(io::to_json(signature_from_language(io::language_from_any(io::read_file(lang_file)))));
    } else if (tree->parsed()) {
      auto sigma = detail::sigma_from(lang_file, sigma_prefix, sigma_tail);
      if (emit.dot()) {
        ValuationTree t;
        t.height = level + 1;
        for (int l = 0; l <= level; ++l) t.levels.push_back(l);
        t.by_level = detail::full_levels(sigma, shift, level + 1, cfg.cap);
        out << dot::tree(t);
      } else {
        auto nodes = below ? nodes_below(sigma, shift, level, cfg.cap) : level_nodes(sigma, shift, level, cfg.cap);
        emit.json({{"count", nodes.size()}, {"nodes", io::nodes_json(nodes)}});
      }
    } else if (val->parsed()) {
      auto sigma = detail::sigma_from(lang_file, sigma_prefix, sigma_tail);
      StrongSubtreeWitness w;
      if (!witness_file.empty()) {
        w = io::witness_from_json(io::read_file(witness_file), sigma);
      } else if (!levels.empty()) {
        std::mt19937_64 rng(cfg.seed);
        w = random_witness(sigma, dim.value_or(k), levels, rng, cfg.cap);
      } else {
        w = full_witness(sigma, dim.value_or(k), k);
      }
      auto t = build_valuation_tree(w, k, cfg.cap);
      if (emit.dot()) {
        out << dot::tree(t);
      } else {
        auto j = io::to_json(t);
        if (emit_witness) j["witness"] = io::to_json(w);
        emit.json(j);
      }
    } else if (embed->parsed()) {
      auto a = io::structure_from_json(io::read_file(source_file));
      auto b = io::structure_from_json(io::read_file(target_file));
      auto es = enumerate_embeddings(a, b, limit);
      emit.json({{"count", es.size()}, {"embeddings", es}});
    } else if (envelope->parsed()) {
      auto hs = io::structure_from_json(io::read_file(prefix_file));
      auto phi = build_enveloping(hs, k, cfg.cap);
      auto env = compute_envelope(phi, subset, cfg.cap);
      if (emit.dot()) {
        if (env.tree)
          out << dot::tree(*env.tree);
        else
          out << dot::witness(env.witness, std::min(env.height, 2), cfg.cap);
      } else {
        std::vector<int> scope(hs.size());
        std::iota(scope.begin(), scope.end(), 0);
        auto j = io::to_json(env);
        j["enveloping"] = io::to_json(verify_k_enveloping(phi, scope));
        j["trace_violations"] = verify_envelope_trace(phi, env);
        emit.json(j);
      }
    } else if (degree->parsed()) {
      auto a = io::structure_from_json(io::read_file(structure_file));
      auto sigma = lang_file.empty() ? signature_from_language(a.language())
                                     : signature_from_language(io::language_from_any(io::read_file(lang_file)));
      emit.json({{"h", h}, {"signature", io::to_json(sigma)}, {"bound", degree_upper_bound(a, h, sigma, cfg.cap)}});
    } else if (reduce->parsed()) {
      auto s = io::structure_from_json(io::read_file(structure_file));
      if (encode->parsed()) {
        emit.json(io::to_json(encode_T(s, encode_language(s.language()))));
      } else if (decode->parsed()) {
        auto lang = io::language_from_any(io::read_file(lang_file));
        emit.json(io::to_json(decode_U(s, encode_language(lang))));
      } else if (unaries->parsed()) {
        auto g = unary_expand(s, unary_count, cfg.cap);
        Json vs = Json::array();
        for (const auto& [v, i] : g.vertices) vs.push_back({v, i});
        emit.json({{"vertices", vs}, {"structure", io::to_json(g.structure)}});
      } else {
        emit.json(io::to_json(strip_bad(s, detail::read_structures(forbidden_files))));
      }
    } else if (adversarial->parsed()) {
      if (hl->parsed()) {
        emit.json({{"colour", hl_colour(SeqNode(node_vals.begin(), node_vals.end()))}});
      } else if (hlw->parsed()) {
        SeqStrongSubtree t;
        t.root.assign(node_vals.begin(), node_vals.end());
        check_seq(t.root);
        if (levels.empty()) {
          long long top = static_cast<long long>(t.root.size()) + seq_weight(t.root) + colour + 2;
          if (top > static_cast<long long>(cfg.cap)) throw InfeasibleError("hl-witness: too many levels", cfg.cap, top);
          for (long long l = static_cast<long long>(t.root.size()); l <= top; ++l) t.levels.push_back(static_cast<int>(l));
        } else {
          t.levels = levels;
        }
        auto node = hl_witness(t, static_cast<int>(colour));
        emit.json({{"node", node}, {"colour", hl_colour(node)}});
      } else if (inf->parsed()) {
        ExtendOptions o;
        o.window = window;
        o.max_subset_size = max_subset;
        o.max_code = max_code;
        o.vertex_cap = cfg.cap;
        auto prefix = generic_extend(GenericPrefix::empty(RelationalLanguage({}, {{"E", 2}})), rounds, o);
        InfColouringContext ctx(prefix.structure);
        std::vector<int> f(prefix.structure.size());
        std::iota(f.begin(), f.end(), 0);
        auto j = io::to_json(inf_witness(ctx, colour, f));
        j["prefix_size"] = prefix.structure.size();
        emit.json(j);
      } else {
        auto hs = io::structure_from_json(io::read_file(structure_file));
        emit.json(io::to_json(is_tree_like(hs, map, bound)));
      }
    }
    return kOk;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::out_of_range& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  }
}

inline int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  return dispatch(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

}  // namespace brt::cli
