// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "brt/brt.hpp"
#include "brt/cli.hpp"
#include "oracles.hpp"

using namespace brt;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
  std::vector<std::string> failures;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (failures.size() < 5) failures.push_back(what);
    }
  }
};

std::vector<int> iota_vec(int n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

std::vector<int> random_levels(int count, int below, std::mt19937& rng) {
  auto pool = iota_vec(below);
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(count);
  std::sort(pool.begin(), pool.end());
  return pool;
}

EnumeratedStructure random_hypergraph(const RelationalLanguage& lang, int n, std::mt19937& rng, double p = 0.35) {
  EnumeratedStructure s(lang, n, true);
  std::bernoulli_distribution coin(p);
  for (const auto& sym : lang.symbols()) {
    std::vector<int> pick;
    std::function<void(int)> rec = [&](int start) {
      if (static_cast<int>(pick.size()) == sym.arity) {
        bool taken = false;
        for (const auto& other : lang.symbols())
          if (other.arity == sym.arity && s.related(other.name, pick)) taken = true;
        if (!taken && coin(rng)) s.add(sym.name, pick);
        return;
      }
      for (int v = start; v < n; ++v) {
        pick.push_back(v);
        rec(v + 1);
        pick.pop_back();
      }
    };
    rec(0);
  }
  return s;
}

EnumeratedStructure random_structure(const RelationalLanguage& lang, int n, std::mt19937& rng, double p) {
  EnumeratedStructure s(lang, n);
  std::bernoulli_distribution coin(p);
  for (const auto& sym : lang.symbols()) {
    std::vector<int> pick(sym.arity);
    std::function<void(int)> rec = [&](int d) {
      if (d == sym.arity) {
        if (coin(rng)) s.add(sym.name, pick);
        return;
      }
      for (int v = 0; v < n; ++v)
        if (std::find(pick.begin(), pick.begin() + d, v) == pick.begin() + d) {
          pick[d] = v;
          rec(d + 1);
        }
    };
    rec(0);
  }
  return s;
}

RelationalLanguage graph_language() { return RelationalLanguage({{"E", 2}}); }
RelationalLanguage uniform3_language() { return RelationalLanguage({{"T", 3}}); }

// 1. Exactly one structural embedding T_0(<k) -> val(S, k), and it is the library's.
Outcome structural_uniqueness() {
  Outcome o;
  std::mt19937 rng(101);
  int witnesses = 0;
  for (int trial = 0; trial < 50; ++trial) {
    bool first = trial % 2 == 0;
    Signature sigma = first ? Signature({1, 2}, 1) : Signature({3}, 1);
    int k = first ? 1 + trial / 2 % 3 : 1 + trial / 2 % 2;
    auto w = random_witness(sigma, k, random_levels(k, k + 3, rng), rng);
    auto tree = build_valuation_tree(w, k);
    auto found = oracle::structural_embeddings(sigma, tree.by_level, tree.levels);
    ++witnesses;
    o.expect(found.size() == 1, "trial " + std::to_string(trial) + ": " + std::to_string(found.size()) +
                                    " structural embeddings");
    if (found.size() != 1) continue;
    auto emb = structural_embedding(tree);
    o.expect(emb.map.size() == found[0].size(), "library map has the wrong size");
    for (const auto& [u, v] : found[0]) o.expect(emb(u) == v, "library map disagrees with brute force");
  }
  o.detail = std::to_string(witnesses) + " witnesses";
  return o;
}

// 2. |val(S, k)| = |T_0(<k)|.
Outcome node_count() {
  Outcome o;
  std::mt19937 rng(202);
  int checked = 0;
  for (const auto& sigma : {Signature({1, 2}, 1), Signature({3}, 1), Signature({2, 3}, 1)})
    for (int k = 0; k <= 4; ++k) {
      auto want = oracle::levels_below(sigma, k);
      for (int trial = 0; trial < 8; ++trial) {
        auto w = k == 0 ? full_witness(sigma, 0, 0) : random_witness(sigma, k, random_levels(k, k + 2, rng), rng);
        auto tree = build_valuation_tree(w, k);
        o.expect(static_cast<int>(tree.by_level.size()) == k, "wrong height");
        std::size_t total = 0;
        for (int m = 0; m < k && m < static_cast<int>(tree.by_level.size()); ++m) {
          o.expect(tree.by_level[m].size() == want[m].size(), "level " + std::to_string(m) + " size mismatch");
          total += want[m].size();
        }
        o.expect(tree.size() == total, "size mismatch at k=" + std::to_string(k));
        o.expect(tree.nodes().size() == tree.size(), "duplicate nodes");
        ++checked;
      }
    }
  o.detail = std::to_string(checked) + " trees";
  return o;
}

// 3. build_enveloping passes the verifier and is an embedding into G^sigma.
Outcome enveloping() {
  Outcome o;
  std::mt19937 rng(303);
  int instances = 0;
  for (const auto& lang : {graph_language(), uniform3_language()}) {
    int arity = lang.max_arity();
    for (int k = 1; k <= 3; ++k)
      for (int n = 1; n <= 12; ++n)
        for (int rep = 0; rep < 3; ++rep) {
          auto h = random_hypergraph(lang, n, rng);
          auto phi = build_enveloping(h, k);
          auto v = verify_k_enveloping(phi, iota_vec(n));
          o.expect(v.ok, "k=" + std::to_string(k) + " n=" + std::to_string(n) + ": " + v.message);
          std::vector<int> pick;
          std::function<void(int)> rec = [&](int start) {
            if (static_cast<int>(pick.size()) == arity) {
              std::vector<ValuationFunction> img;
              for (int x : pick) img.push_back(phi(x));
              o.expect(oracle::g_code(img) == h.code(pick), "phi is not an embedding");
              return;
            }
            for (int x = start; x < n; ++x) {
              pick.push_back(x);
              rec(x + 1);
              pick.pop_back();
            }
          };
          rec(0);
          ++instances;
        }
  }
  o.detail = std::to_string(instances) + " prefixes";
  return o;
}

// 4. Random envelopes: containment, height bound, trace properties.
Outcome envelopes() {
  Outcome o;
  o.expect(r_bound(1) == 2 && r_bound(2) == 17 && r_bound(3) == 64, "r_bound values");
  std::mt19937 rng(404);
  int lazy = 0;
  for (int trial = 0; trial < 200; ++trial) {
    auto lang = trial % 2 ? uniform3_language() : graph_language();
    int k = 1 + trial % 3;
    int n = 3 + static_cast<int>(rng() % 10);
    auto h = random_hypergraph(lang, n, rng);
    auto phi = build_enveloping(h, k);
    auto all = iota_vec(n);
    std::shuffle(all.begin(), all.end(), rng);
    std::vector<int> s(all.begin(), all.begin() + 1 + static_cast<int>(rng() % std::min(k, n)));
    auto env = compute_envelope(phi, s);
    std::string tag = "trial " + std::to_string(trial);
    o.expect(static_cast<std::uint64_t>(env.height) <= r_bound(k), tag + ": height above R(k)");
    o.expect(env.contained, tag + ": not contained");
    for (int x : s) {
      if (env.tree) {
        auto nodes = env.tree->nodes();
        o.expect(nodes.count(phi(x)) == 1, tag + ": image missing from the explicit tree");
      } else {
        o.expect(val_contains(env.witness, env.height, phi(x)), tag + ": image not in the lazy tree");
      }
    }
    if (!env.tree) ++lazy;
    auto bad = verify_envelope_trace(phi, env);
    o.expect(bad.empty(), tag + ": " + (bad.empty() ? "" : bad.front()));
  }
  o.detail = "200 instances, " + std::to_string(lazy) + " checked lazily";
  return o;
}

// 5. Degree bounds against an explicit G_h.
Outcome degrees() {
  Outcome o;
  auto lang = graph_language();
  Signature sigma({3}, 1);
  EnumeratedStructure vertex(lang, 1, true);
  EnumeratedStructure edge(lang, 2, true);
  edge.add("E", {0, 1});
  EnumeratedStructure nonedge(lang, 2, true);
  std::ostringstream d;
  auto check = [&](const EnumeratedStructure& a, int h, std::optional<std::uint64_t> expected) {
    std::vector<ValuationFunction> verts;
    auto g = oracle::g_structure(lang, sigma, h, verts);
    auto brute = oracle::embeddings(a, g).size();
    auto lib = degree_upper_bound(a, h, sigma);
    o.expect(lib == brute, "h=" + std::to_string(h) + ": library " + std::to_string(lib) + " vs brute force " +
                               std::to_string(brute));
    if (expected) o.expect(lib == *expected, "expected " + std::to_string(*expected));
    d << lib << ' ';
  };
  check(vertex, 2, 4);
  check(edge, 2, 1);
  for (int h = 1; h <= 3; ++h) {
    check(vertex, h, std::nullopt);
    check(edge, h, std::nullopt);
    check(nonedge, h, std::nullopt);
  }
  o.detail = "bounds " + d.str();
  o.detail.pop_back();
  return o;
}

// 6. Encoding round trips and embedding transfer.
Outcome reductions() {
  Outcome o;
  std::mt19937 rng(606);
  int pairs = 0;
  for (const auto& lang : {RelationalLanguage({{"E", 2}}), RelationalLanguage({{"E", 2}, {"T", 3}})}) {
    auto el = encode_language(lang);
    for (int trial = 0; trial < 100; ++trial) {
      auto a = random_structure(lang, 1 + trial % 6, rng, 0.3);
      o.expect(decode_U(encode_T(a, el), el) == a, "U(T(A)) != A");
      auto hyp = random_hypergraph(el.encoded, 1 + trial % 6, rng, 0.4);
      o.expect(encode_T(decode_U(hyp, el), el) == hyp, "T(U(H)) != H");
    }
    for (int trial = 0; trial < 60; ++trial) {
      auto a = random_structure(lang, 1 + trial % 4, rng, 0.5);
      auto b = random_structure(lang, 1 + rng() % 4, rng, 0.5);
      auto direct = oracle::embeddings(a, b);
      o.expect(direct == oracle::embeddings(encode_T(a, el), encode_T(b, el)), "embedding sets differ");
      auto lib = enumerate_embeddings(a, b);
      o.expect(std::vector<std::vector<int>>(lib.begin(), lib.end()) == direct, "library embeddings differ");
      ++pairs;
    }
  }
  // Every digraph on two vertices into every digraph on three.
  auto lang = RelationalLanguage({{"E", 2}});
  auto el = encode_language(lang);
  auto digraph = [&](int n, unsigned mask) {
    EnumeratedStructure s(lang, n);
    int bit = 0;
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v)
        if (u != v && (mask >> bit++ & 1u)) s.add("E", {u, v});
    return s;
  };
  for (unsigned ma = 0; ma < 4; ++ma)
    for (unsigned mb = 0; mb < 64; ++mb) {
      auto a = digraph(2, ma), b = digraph(3, mb);
      o.expect(oracle::embeddings(a, b) == oracle::embeddings(encode_T(a, el), encode_T(b, el)),
               "exhaustive digraph transfer");
      ++pairs;
    }
  o.detail = std::to_string(pairs) + " embedding comparisons";
  return o;
}

// 7. strip_bad output contains no copy of any forbidden structure.
Outcome stripping() {
  Outcome o;
  std::mt19937 rng(707);
  RelationalLanguage digraph({{"E", 2}});
  EnumeratedStructure cycle(digraph, 2);
  cycle.add("E", {0, 1});
  cycle.add("E", {1, 0});

  RelationalLanguage mixed({{"E", 2}, {"T", 3}});
  EnumeratedStructure marked(mixed, 3);
  marked.add("T", {0, 1, 2});
  marked.add("E", {0, 1});

  RelationalLanguage ternary({{"T", 3}});
  EnumeratedStructure swap(ternary, 3);
  swap.add("T", {0, 1, 2});
  swap.add("T", {1, 0, 2});
  EnumeratedStructure loop(ternary, 3);
  loop.add("T", {0, 1, 2});
  loop.add("T", {1, 2, 0});

  struct Family {
    RelationalLanguage lang;
    std::vector<EnumeratedStructure> f;
    double p;
  };
  std::vector<Family> families{{digraph, {cycle}, 0.5}, {mixed, {marked}, 0.15}, {ternary, {swap, loop}, 0.1}};
  int checked = 0, dirty = 0;
  for (const auto& fam : families)
    for (int n = 1; n <= 10; ++n)
      for (int rep = 0; rep < 3; ++rep) {
        auto m = random_structure(fam.lang, n, rng, fam.p);
        auto g = strip_bad(m, fam.f);
        for (const auto& f : fam.f)
          if (oracle::contains_copy(m, f)) {
            ++dirty;
            break;
          }
        for (const auto& f : fam.f) o.expect(!oracle::contains_copy(g, f), "copy survives stripping");
        o.expect(is_free_of(g, fam.f), "is_free_of disagrees");
        for (const auto& [name, tuples] : g.relations())
          for (const auto& t : tuples) o.expect(m.related(name, t), "stripping added a tuple");
        ++checked;
      }
  o.detail = std::to_string(checked) + " structures, " + std::to_string(dirty) + " with copies before stripping";
  return o;
}

// 8. Every colour x <= 10 appears in every sampled strong subtree.
Outcome hl_persistence() {
  Outcome o;
  std::mt19937 rng(808);
  int nodes = 0;
  for (int trial = 0; trial < 50; ++trial) {
    SeqStrongSubtree t;
    int root_len = static_cast<int>(rng() % 4);
    for (int i = 0; i < root_len; ++i) t.root.push_back(static_cast<int>(rng() % 5));
    int l = root_len;
    for (int i = 0; i < 40; ++i) {
      t.levels.push_back(l);
      l += 1 + static_cast<int>(rng() % 3);
    }
    std::uint32_t salt = rng();
    t.selector = [salt](const SeqNode& d, int level) {
      SeqNode out = d;
      std::uint64_t hash = 1469598103934665603ull ^ salt;
      for (int x : d) hash = (hash ^ static_cast<std::uint64_t>(x)) * 1099511628211ull;
      while (static_cast<int>(out.size()) < level) {
        hash = hash * 6364136223846793005ull + 1442695040888963407ull;
        out.push_back(static_cast<int>(hash >> 61));
      }
      return out;
    };
    for (int x = 0; x <= 10; ++x) {
      auto node = hl_witness(t, x);
      o.expect(oracle::hl_colour(node) == x, "wrong colour");
      bool on_level = std::find(t.levels.begin(), t.levels.end(), static_cast<int>(node.size())) != t.levels.end();
      bool inside = on_level && std::equal(t.root.begin(), t.root.end(), node.begin());
      for (std::size_t j = 0; inside && j + 1 < t.levels.size() && t.levels[j] < static_cast<int>(node.size()); ++j) {
        SeqNode dir(node.begin(), node.begin() + t.levels[j] + 1);
        SeqNode want(node.begin(), node.begin() + t.levels[j + 1]);
        inside = t.selector(dir, t.levels[j + 1]) == want;
      }
      o.expect(inside, "witness outside the subtree");
      ++nodes;
    }
  }
  o.detail = std::to_string(nodes) + " witnesses";
  return o;
}

// 9. Colours 0..5 on copies of the 3-vertex independent set under the identity.
Outcome inf_colours() {
  Outcome o;
  ExtendOptions opt;
  opt.window = 4;
  opt.max_subset_size = 3;
  opt.max_code = 6;
  auto prefix = generic_extend(GenericPrefix::empty(RelationalLanguage({}, {{"E", 2}})), 6, opt);
  const auto& h = prefix.structure;
  InfColouringContext ctx(h);
  auto f = iota_vec(h.size());
  for (int p = 0; p <= 5; ++p) {
    auto w = inf_witness(ctx, p, f);
    o.expect(w.found, "colour " + std::to_string(p) + " not found: " + w.reason);
    if (!w.found) continue;
    o.expect(w.copy.size() == 3 && oracle::induced_tuples(h, w.copy).empty(), "not an independent triple");
    o.expect(inf_colour(ctx, w.copy) == p, "inf_colour disagrees");
    o.expect(oracle::inf_colour(h, w.copy) == p, "oracle colour disagrees");
  }
  o.detail = "prefix of " + std::to_string(h.size()) + " vertices";
  return o;
}

// 10. The CLI matrix produces identical bytes on a rerun.
Outcome determinism() {
  Outcome o;
  std::string d = BRT_DATA_DIR;
  std::vector<std::vector<std::string>> matrix{
      {"sig", "--lang", d + "/graph.json"},
      {"--format", "table", "sig", "--lang", d + "/path3.json"},
      {"tree", "--sigma", "2,3", "--level", "2"},
      {"--dot", "tree", "--sigma", "3", "--level", "2"},
      {"tree", "--lang", d + "/graph.json", "--level", "3", "--below"},
      {"val", "--sigma", "3", "--k", "3"},
      {"--seed", "5", "val", "--sigma", "1,2", "--k", "3", "--levels", "1,2,4", "--emit-witness"},
      {"--seed", "6", "--dot", "val", "--sigma", "3", "--k", "2", "--levels", "0,2"},
      {"embed", "--source", d + "/edge.json", "--target", d + "/path3.json"},
      {"envelope", "--k", "2", "--subset", "0,1", "--prefix", d + "/path3.json"},
      {"--dot", "envelope", "--k", "3", "--subset", "0,1,2", "--prefix", d + "/path3.json"},
      {"degree", "--structure", d + "/edge.json", "--height", "3"},
      {"reduce", "encode", "--structure", d + "/digraph.json"},
      {"reduce", "unaries", "--structure", d + "/path3.json", "--u", "2"},
      {"reduce", "unaries", "--structure", d + "/path3.json"},
      {"reduce", "strip", "--structure", d + "/digraph.json", "--forbidden", d + "/cycle2.json"},
      {"adversarial", "hl", "--node", "3"},
      {"adversarial", "hl-witness", "--colour", "7", "--root", "2,1"},
      {"adversarial", "inf", "--prefix-size", "4", "--colour", "1"},
      {"adversarial", "tree-like", "--structure", d + "/path3.json", "--map", "0,1,2", "--bound", "3"},
      {"--cap", "5", "tree", "--sigma", "3", "--level", "3"},
      {"sig", "--bogus"},
  };
  auto run_all = [&] {
    std::string all;
    for (const auto& args : matrix) {
      std::ostringstream out, err;
      int code = cli::dispatch(args, out, err);
      all += std::to_string(code) + "\n" + out.str() + "\n" + err.str() + "\n";
    }
    return all;
  };
  auto first = run_all();
  auto second = run_all();
  o.expect(first == second, "outputs differ between runs");
  o.detail = std::to_string(matrix.size()) + " invocations, " + std::to_string(first.size()) + " bytes";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
    double limit_s;
  };
  std::vector<Criterion> criteria{
      {"structural-embedding uniqueness", structural_uniqueness, 30},
      {"node-count corollary", node_count, 0},
      {"k-enveloping correctness", enveloping, 120},
      {"envelope algorithm", envelopes, 0},
      {"degree pipeline consistency", degrees, 0},
      {"reduction round trips", reductions, 0},
      {"bad-tuple stripping", stripping, 0},
      {"HL colouring persistence", hl_persistence, 10},
      {"infinite-degree colouring", inf_colours, 0},
      {"CLI determinism", determinism, 0},
  };
  bool all_ok = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o.expect(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (criteria[i].limit_s > 0) o.expect(secs < criteria[i].limit_s, "over the time limit");
    all_ok = all_ok && o.ok;
    std::printf("criterion %zu: %s %s (%s, %.2fs)\n", i + 1, o.ok ? "PASS" : "FAIL", criteria[i].name,
                o.detail.c_str(), secs);
    for (const auto& f : o.failures) std::printf("    %s\n", f.c_str());
  }
  return all_ok ? 0 : 1;
}
