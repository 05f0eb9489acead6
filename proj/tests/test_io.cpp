#include <gtest/gtest.h>

#include "khmut/io.hpp"
#include "oracles.hpp"
#include "reference.hpp"

using namespace khmut;

TEST(Table, RoundTrip) {
  const BigradedDims k0 = reference::kh_k0();
  EXPECT_EQ(format_table(k0), reference::kKhK0);
  EXPECT_EQ(parse_table(format_table(k0)), k0);
  EXPECT_EQ(parse_table("1^-7_-13 2^0_1"), parse_table("1^{-7}_{-13} 2^{0}_{1}"));
  EXPECT_EQ(format_table(parse_table("3^{10}_{21}")), "3^{10}_{21}");
  EXPECT_EQ(format_table(BigradedDims{}), "");
}

TEST(Table, Rejections) {
  for (const char* bad : {"1^0", "x^0_1", "1^{0_1", "1^0_1z", "-1^0_1", "1_0^1", "1^_1"})
    EXPECT_THROW(parse_table(bad), ParseError) << bad;
}

TEST(Json, CanonicalRoundTrip) {
  const BigradedDims b = reference::kh_k0t();
  const nlohmann::json j = kh_json(b, Ring::Q, false);
  const std::string text = j.dump();
  const nlohmann::json again = nlohmann::json::parse(text);
  EXPECT_EQ(again.dump(), text);
  EXPECT_EQ(dims_from_json(again.at("dims")), b);
  EXPECT_EQ(again.at("total"), 26);
  EXPECT_EQ(again.at("delta"), nlohmann::json::parse("[[-3,2],[-1,9],[1,11],[3,4]]"));
  EXPECT_THROW(dims_from_json(nlohmann::json::parse("[[1,2]]")), ParseError);
  EXPECT_THROW(parse_json_text("{", "x"), ParseError);
}

TEST(Json, DiagramRoundTrip) {
  const PlanarDiagram d = oracle::load("k0tau.json");
  const std::string text = d.to_json().dump();
  EXPECT_EQ(parse_pd(text), d);
  EXPECT_EQ(parse_pd(text).to_json().dump(), text);
}

TEST(Format, Delta) {
  EXPECT_EQ(format_delta(reference::kDeltaK0), "-3:4 -1:11 1:9 3:2");
  EXPECT_EQ(format_delta({{0, 0}, {2, 1}}), "2:1");
}

TEST(Format, HfkGrid) {
  const std::string g = format_hfk_grid(BigradedDims{{{-2, -1}, 1}, {{-1, 0}, 1}, {{0, 1}, 3}});
  EXPECT_EQ(g,
            " m\\a  -1   0   1\n"
            "   0         F^3\n"
            "  -1       F    \n"
            "  -2   F        \n");
  EXPECT_EQ(format_hfk_grid(BigradedDims{}), "(zero)\n");
}

TEST(Compare, ReportFlags) {
  ComparisonReport r;
  r.kh_a = reference::kh_k0();
  r.kh_b = reference::kh_k0t();
  EXPECT_TRUE(r.total_equal());
  EXPECT_FALSE(r.bigraded_equal());
  EXPECT_TRUE(r.delta_swap());
  EXPECT_TRUE(r.euler_equal());
  const nlohmann::json j = comparison_json(r);
  EXPECT_EQ(j.at("delta_swap"), true);
  EXPECT_EQ(j.at("s"), nlohmann::json::parse("[null,null]"));
  ComparisonReport same;
  same.kh_a = same.kh_b = reference::kh_k0();
  EXPECT_FALSE(same.delta_swap());
}
