#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "brt/cli.hpp"

using namespace brt;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(BRT_DATA_DIR) + "/" + name; }

}  // namespace

TEST(Cli, SignatureOfGraphs) {
  auto r = run({"sig", "--lang", data("graph.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "{\"prefix\":[3],\"tail\":1}\n");
  EXPECT_TRUE(r.err.empty());
}

TEST(Cli, EnvelopeOfPathPair) {
  auto r = run({"envelope", "--k", "2", "--subset", "0,1", "--prefix", data("path3.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = io::Json::parse(r.out);
  EXPECT_EQ(j["levels"], io::Json::parse("[0,1,3]"));
  EXPECT_TRUE(j["contained"].get<bool>());
  EXPECT_TRUE(j["enveloping"]["ok"].get<bool>());
  EXPECT_TRUE(j["trace_violations"].empty());
}

TEST(Cli, HlColour) {
  auto r = run({"adversarial", "hl", "--node", "3"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "{\"colour\":3}\n");
}

TEST(Cli, UnknownFlagPrintsUsage) {
  auto r = run({"sig", "--lang", data("graph.json"), "--nope"});
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(r.out.empty());
  EXPECT_NE(r.err.find("Usage:"), std::string::npos);
}

TEST(Cli, MissingSubcommandAndFile) {
  EXPECT_EQ(run({}).code, 1);
  auto r = run({"sig", "--lang", data("no-such-file.json")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("cannot open"), std::string::npos);
}

TEST(Cli, InfeasibleReportsCapAndEstimate) {
  auto r = run({"--cap", "5", "tree", "--sigma", "3", "--level", "3"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("cap 5"), std::string::npos);
  EXPECT_NE(r.err.find("estimate 27"), std::string::npos);
}

TEST(Cli, EnvironmentCap) {
  ::setenv("BRT_CAP", "5", 1);
  auto capped = run({"tree", "--sigma", "3", "--level", "3"});
  ::setenv("BRT_CAP", "zero", 1);
  auto bad = run({"tree", "--sigma", "3", "--level", "1"});
  ::unsetenv("BRT_CAP");
  auto open = run({"tree", "--sigma", "3", "--level", "3"});
  EXPECT_EQ(capped.code, 2);
  EXPECT_EQ(bad.code, 1);
  ASSERT_EQ(open.code, 0);
  EXPECT_EQ(io::Json::parse(open.out)["count"], 27);
}

TEST(Cli, DotOutput) {
  auto r = run({"--dot", "val", "--sigma", "3", "--k", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("digraph valuation_tree {", 0), 0u);
  EXPECT_NE(r.out.find("->"), std::string::npos);
}

TEST(Cli, SeededRunsAreByteIdentical) {
  std::vector<std::string> args{"--seed", "11", "val", "--sigma", "3", "--k", "2", "--levels", "1,2,4", "--emit-witness"};
  auto a = run(args), b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  args[1] = "12";
  EXPECT_NE(run(args).out, a.out);
}

TEST(Cli, WitnessRoundTripsThroughJson) {
  auto r = run({"--seed", "3", "val", "--sigma", "1,2", "--k", "3", "--levels", "0,1,3", "--emit-witness"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = io::Json::parse(r.out);
  auto w = io::witness_from_json(j["witness"], Signature({1, 2}, 1));
  EXPECT_EQ(io::to_json(w), j["witness"]);
  j.erase("witness");
  EXPECT_EQ(io::to_json(build_valuation_tree(w, 3)), j);
}

TEST(Cli, ReduceRoundTrip) {
  auto enc = run({"reduce", "encode", "--structure", data("digraph.json")});
  ASSERT_EQ(enc.code, 0) << enc.err;
  auto s = io::structure_from_json(io::Json::parse(enc.out));
  EXPECT_TRUE(s.is_hypergraph());
  auto path = testing::TempDir() + "/encoded.json";
  std::ofstream(path) << enc.out;
  auto dec = run({"reduce", "decode", "--structure", path, "--lang", data("digraph.json")});
  ASSERT_EQ(dec.code, 0) << dec.err;
  EXPECT_EQ(io::structure_from_json(io::Json::parse(dec.out)), io::structure_from_json(io::read_file(data("digraph.json"))));
}

TEST(Cli, StripRemovesTwoCycle) {
  auto r = run({"reduce", "strip", "--structure", data("digraph.json"), "--forbidden", data("cycle2.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  auto s = io::structure_from_json(io::Json::parse(r.out));
  EXPECT_EQ(s.tuples("E"), (std::set<Tuple>{{1, 2}}));
}

TEST(Cli, EmbedAndDegree) {
  auto e = run({"embed", "--source", data("edge.json"), "--target", data("path3.json")});
  EXPECT_EQ(e.out, "{\"count\":2,\"embeddings\":[[0,1],[1,2]]}\n");
  auto d = run({"degree", "--structure", data("edge.json"), "--height", "3"});
  ASSERT_EQ(d.code, 0) << d.err;
  EXPECT_EQ(io::Json::parse(d.out)["bound"], 13);
}

TEST(Cli, AdversarialSubcommands) {
  auto w = run({"adversarial", "hl-witness", "--colour", "4", "--root", "1,0"});
  ASSERT_EQ(w.code, 0) << w.err;
  EXPECT_EQ(io::Json::parse(w.out)["colour"], 4);
  auto t = run({"adversarial", "tree-like", "--structure", data("path3.json"), "--map", "0,1,2", "--bound", "2"});
  EXPECT_EQ(io::Json::parse(t.out)["verdict"], "pass");
  auto bad = run({"adversarial", "tree-like", "--structure", data("path3.json"), "--map", "0,1,2", "--bound", "4"});
  EXPECT_EQ(bad.code, 1);
}

TEST(Cli, TableFormat) {
  auto r = run({"--format", "table", "sig", "--lang", data("graph.json")});
  EXPECT_EQ(r.out, "prefix\t[3]\ntail\t1\n");
}

TEST(Json, StructureRoundTripAndSchemaCheck) {
  auto s = io::structure_from_json(io::read_file(data("digraph.json")));
  EXPECT_EQ(io::structure_from_json(io::to_json(s)), s);
  auto j = io::to_json(s);
  j["schema"] = "brt-structure/9";
  EXPECT_THROW(io::structure_from_json(j), InputError);
  j = io::to_json(s);
  j["relations"]["E"].push_back({0, 7});
  EXPECT_THROW(io::structure_from_json(j), InputError);
}

TEST(Json, CountableFamiliesSurvive) {
  RelationalLanguage lang({{"U", 1}}, {{"E", 2}});
  auto j = io::to_json(lang);
  EXPECT_EQ(j.dump(), R"({"symbols":[{"name":"U","arity":1}],"families":[{"prefix":"E","arity":2}]})");
  EXPECT_EQ(io::language_from_json(j), lang);
}
