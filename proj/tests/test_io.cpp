#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace fbas;
using namespace testing_support;

TEST(ParseNodes, HubAndHalves) {
  Fbas f = load("hub_and_halves.json");
  ASSERT_EQ(f.size(), 5u);
  EXPECT_EQ(f.quorum_set(0).threshold, 3u);
  EXPECT_EQ(f.quorum_set(0).validators.size(), 5u);
  EXPECT_EQ(f.quorum_set(3).validators, (std::vector<NodeId>{0, 3, 4}));
}

TEST(ParseNodes, UnknownValidatorsBecomePlaceholders) {
  std::vector<std::string> warnings;
  Fbas f = parse_nodes(R"([{"publicKey": "a", "quorumSet": {"threshold": 1, "validators": ["a", "ghost"]}}])",
                       &warnings);
  ASSERT_EQ(f.size(), 2u);
  EXPECT_EQ(f.name(1), "ghost");
  EXPECT_FALSE(satisfies(f.all_nodes(), f.quorum_set(1)));
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("ghost"), std::string::npos);
}

TEST(ParseNodes, MissingQuorumSetIsUnsatisfiable) {
  std::vector<std::string> warnings;
  Fbas f = parse_nodes(R"([{"publicKey": "a", "quorumSet": null, "extra": 5}, {"publicKey": "b"}])", &warnings);
  EXPECT_EQ(warnings.size(), 2u);
  EXPECT_TRUE(find_minimal_quorums(f).empty());
}

TEST(ParseNodes, IgnoresUnknownFields) {
  Fbas f = parse_nodes(
      R"([{"publicKey": "a", "name": "x", "quorumSet": {"threshold": 1, "validators": ["a"], "hashKey": "h"}}])");
  EXPECT_EQ(find_minimal_quorums(f), family({{0}}));
}

TEST(ParseNodes, Errors) {
  EXPECT_THROW(parse_nodes("{"), ParseError);
  EXPECT_THROW(parse_nodes("{}"), ParseError);
  EXPECT_THROW(parse_nodes(R"([{"quorumSet": null}])"), ParseError);
  EXPECT_THROW(parse_nodes(R"([{"publicKey": "a"}, {"publicKey": "a"}])"), ParseError);
  EXPECT_THROW(parse_nodes(R"([{"publicKey": "a", "quorumSet": {"threshold": -1, "validators": []}}])"), ParseError);
  EXPECT_THROW(parse_nodes(R"([{"publicKey": "a", "quorumSet": {"threshold": 1, "validators": [3]}}])"), ParseError);
}

TEST(ParseNodes, NestedRoundTrip) {
  RandomFbas gen(41);
  for (int round = 0; round < 30; ++round) {
    Fbas f = gen(6);
    EXPECT_TRUE(parse_nodes(emit_nodes(f)) == f);
  }
  Fbas b = load("seven_nodes.json");
  EXPECT_EQ(emit_nodes(parse_nodes(emit_nodes(b))), emit_nodes(b));
}

TEST(Organizations, ParseAndValidate) {
  Fbas f = load("hub_and_halves.json");
  auto groups = parse_organizations(R"([{"id": "o1", "name": "One", "validators": ["1", "2", "zz"]},
                                        {"id": "o2", "validators": ["3"]}])",
                                    f);
  ASSERT_EQ(groups.size(), 2u);
  EXPECT_EQ(groups[0].name, "One");
  EXPECT_EQ(groups[0].members, (NodeIdSet{1, 2}));
  EXPECT_EQ(groups[1].name, "o2");
  EXPECT_THROW(parse_organizations(R"([{"name": "A", "validators": ["1"]}, {"name": "B", "validators": ["1"]}])", f),
               ParseError);
  EXPECT_THROW(parse_organizations(R"([{"validators": ["1"]}])", f), ParseError);
}

TEST(AsRel, ParsesRelationships) {
  TrustGraph g = parse_as_rel("# comment\n1|2|-1\n\n2|3|0|bgp\n");
  ASSERT_EQ(g.node_count(), 3u);
  EXPECT_EQ(g.edge_count(), 4u);
  EXPECT_EQ(g.labels(), (std::vector<std::string>{"1", "2", "3"}));
}

TEST(AsRel, CustomerTrustsProvider) {
  TrustGraph g = parse_as_rel("1|2|-1\n", AsRelDirection::CustomerToProvider);
  EXPECT_EQ(g.outlinks(1), (std::vector<NodeId>{0}));
  EXPECT_TRUE(g.outlinks(0).empty());
}

TEST(AsRel, ReportsLineNumbers) {
  try {
    parse_as_rel("1|2|0\n1|2|7\n");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  EXPECT_THROW(parse_as_rel("1|2\n"), ParseError);
  EXPECT_THROW(parse_as_rel("1||0\n"), ParseError);
  EXPECT_THROW(parse_as_rel("1|2|x\n"), ParseError);
}

TEST(EmitResult, JsonUsesPublicKeys) {
  AnalysisResult r = analyze(load("hub_and_halves.json"));
  auto doc = nlohmann::json::parse(emit_result(r, OutputFormat::Json));
  EXPECT_EQ(doc["minimal_splitting_sets"], nlohmann::json::parse(R"([["0"]])"));
  EXPECT_EQ(doc["top_tier"].size(), 5u);
  EXPECT_TRUE(doc["has_quorum_intersection"].get<bool>());
  EXPECT_EQ(doc["statistics"]["blocking"]["histogram"], nlohmann::json::parse(R"({"1": 1, "2": 4})"));
}

TEST(EmitResult, CsvRowsMatchHistograms) {
  AnalysisResult r = analyze(load("seven_nodes.json"));
  std::string csv = emit_result(r, OutputFormat::Csv);
  std::size_t rows = std::count(csv.begin(), csv.end(), '\n') - 1;
  EXPECT_EQ(rows, r.quorum_stats.histogram.size() + r.blocking_stats.histogram.size() +
                      r.splitting_stats.histogram.size());
  EXPECT_EQ(csv.rfind("family,cardinality,count\n", 0), 0u);
  EXPECT_NE(csv.find("splitting,3,11\n"), std::string::npos);
}

TEST(EmitResult, Deterministic) {
  for (auto format : {OutputFormat::Json, OutputFormat::Csv, OutputFormat::Text}) {
    EXPECT_EQ(emit_result(analyze(load("seven_nodes.json")), format),
              emit_result(analyze(load("seven_nodes.json")), format));
  }
}

TEST(EmitResult, TextSummary) {
  std::string text = emit_result(analyze(load("split_halves.json")), OutputFormat::Text);
  EXPECT_NE(text.find("quorum intersection: NO"), std::string::npos);
}
