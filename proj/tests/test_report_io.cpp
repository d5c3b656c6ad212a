#include <regex>

#include <gtest/gtest.h>
#include <json.hpp>

#include "stirval/errors.hpp"
#include "stirval/report_io.hpp"
#include "stirval/verifiers.hpp"

using namespace stirval;
using nlohmann::json;

namespace {

TreeReport tree(unsigned long p, std::uint64_t k, int depth) {
  TreeOptions o;
  o.depth = depth;
  return build_tree(Prime(p), k, o);
}

std::size_t count(const std::string& s, const std::regex& re) {
  return static_cast<std::size_t>(std::distance(std::sregex_iterator(s.begin(), s.end(), re), std::sregex_iterator()));
}

} // namespace

TEST(Format, Parse) {
  EXPECT_EQ(parse_format("json"), Format::Json);
  EXPECT_EQ(parse_format("dot"), Format::Dot);
  EXPECT_THROW(parse_format("yaml"), UsageError);
}

TEST(TreeJson, EmptyTree) {
  const json j = json::parse(export_tree(tree(3, 1, 3), Format::Json));
  EXPECT_EQ(j.at("mu"), 0);
  EXPECT_TRUE(j.at("chains").empty());
  EXPECT_EQ(j.at("schema_version"), kSchemaVersion);
}

TEST(TreeJson, Schema) {
  const json j = json::parse(export_tree(tree(7, 3, 6), Format::Json));
  for (const char* key : {"p", "k", "mu", "m0_observed", "chains"})
    EXPECT_TRUE(j.contains(key)) << key;
  ASSERT_FALSE(j.at("chains").empty());
  const json& c = j.at("chains")[0];
  for (const char* key : {"a0", "alpha", "l", "x0_digits", "levels"})
    EXPECT_TRUE(c.contains(key)) << key;
  const json& level = c.at("levels")[0];
  for (const char* key : {"m", "n_modulus", "least_valuation", "status"})
    EXPECT_TRUE(level.contains(key)) << key;
}

TEST(TreeJson, NoFloats) {
  const std::string text = export_tree(tree(5, 4, 6), Format::Json);
  std::function<void(const json&)> walk = [&](const json& j) {
    EXPECT_FALSE(j.is_number_float());
    if (j.is_structured())
      for (const auto& x : j)
        walk(x);
  };
  walk(json::parse(text));
}

TEST(TreeJson, RoundTripIsByteIdentical) {
  for (const auto& [p, k] : std::vector<std::pair<unsigned long, std::uint64_t>>{{2, 5}, {3, 4}, {7, 3}, {5, 1}}) {
    const std::string once = export_tree(tree(p, k, 7), Format::Json);
    const std::string twice = export_tree(tree_from_json(once), Format::Json);
    EXPECT_EQ(once, twice) << p << " " << k;
  }
}

TEST(TreeJson, RejectsOtherKinds) {
  EXPECT_THROW(tree_from_json("{\"kind\": \"zeros\"}"), UsageError);
  EXPECT_THROW(tree_from_json("[1, 2"), UsageError);
}

TEST(TreeDot, NodeCountFollowsSplitLaw) {
  // Depth 3 for p = 3, k = 4: count the nodes the split law predicts from the tree's own level table.
  const TreeReport t = tree(3, 4, 3);
  const std::string dot = export_tree(t, Format::Dot);
  std::size_t expected = t.roots.size();
  for (const LevelSummary& l : t.levels)
    if (l.level < t.depth)
      expected += 3 * l.active;
  EXPECT_EQ(count(dot, std::regex(R"(n\d+ \[label=)")), expected);
  EXPECT_EQ(count(dot, std::regex("shape=box")) + count(dot, std::regex("shape=circle")), expected);
  EXPECT_NE(dot.find("label=\"[0] mod 2 :"), std::string::npos);
}

TEST(TreeDot, SplitLawCountPastStabilization) {
  // p = 2, k = 5 stabilizes at level 0 with two active classes: 2 roots, then
  // 2 constant + 2 active per level.
  const TreeReport t = tree(2, 5, 3);
  const std::string dot = export_tree(t, Format::Dot);
  EXPECT_EQ(count(dot, std::regex(R"(n\d+ \[label=)")), 2u + 3 * 4);
  EXPECT_EQ(count(dot, std::regex("shape=box")), 3u * 2);
}

TEST(TreeDot, ParsedTreeHasNoNodes) {
  const TreeReport t = tree_from_json(export_tree(tree(3, 4, 3), Format::Json));
  EXPECT_THROW(export_tree(t, Format::Dot), UsageError);
  EXPECT_THROW(export_tree(t, Format::Csv), UsageError);
}

TEST(ReportJson, RoundTrip) {
  const VerifierReport r = verify_gessel_lengyel(Prime(3), 5);
  const std::string once = export_report(r, Format::Json);
  const json j = json::parse(once);
  EXPECT_EQ(j.at("claim"), "geslen");
  EXPECT_EQ(j.at("outcome"), "pass");
  EXPECT_EQ(j.at("schema_version"), kSchemaVersion);
  const VerifierReport back = report_from_json(once);
  EXPECT_EQ(back.derived, r.derived);
  EXPECT_EQ(export_report(back, Format::Json), once);
}

TEST(ReportText, MentionsOutcome) {
  const std::string text = export_report(verify_lengyel_wannemacker(1, 3), Format::Text);
  EXPECT_NE(text.find("pass"), std::string::npos);
  EXPECT_THROW(export_report(verify_lengyel_wannemacker(1, 3), Format::Dot), UsageError);
}

TEST(ValuationCsv, Rows) {
  const std::string csv = valuation_table_csv(Prime(2), 5, 4, 8);
  EXPECT_EQ(csv, "n,vp_S\n4,inf\n5,0\n6,0\n7,2\n8,1\n");
}
