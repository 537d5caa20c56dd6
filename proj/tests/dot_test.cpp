#include <gtest/gtest.h>

#include <regex>

#include "adviser/adviser.hpp"

using namespace adviser;

namespace {

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

std::size_t edges_with(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);)
    if (line.find(" -> ") != std::string::npos && line.find("__start") == std::string::npos && line.find(needle) != std::string::npos) ++n;
  return n;
}

}  // namespace

TEST(Dot, PlainExportHasNoStyling) {
  const auto text = export_dot(fixture_fig1());
  EXPECT_FALSE(std::regex_search(text, std::regex(R"(\bcolor=)")));
  EXPECT_EQ(count(text, "shape=box"), 4U);
  EXPECT_EQ(count(text, "shape=circle"), 3U);
  EXPECT_EQ(count(text, "lightblue"), 3U);
  EXPECT_EQ(export_dot(fixture_fig1()), text);
}

TEST(Dot, Fig1AlphaBMarksFiveEdges) {
  DotOverlay o;
  o.adviser = nominal_adviser(fixture_fig1()).adviser;
  EXPECT_EQ(edges_with(export_dot(fixture_fig1(), o), "color=\"red\""), 5U);
}

TEST(Dot, Fig3NominalStrategyMarksFourEdges) {
  const auto a = fixture_fig3();
  const auto nominal = nominal_adviser(a);
  DotOverlay o;
  o.adviser = nominal.adviser;
  o.losing = nominal.ladder.final;
  o.strategy = synthesize(a).nominal().strategy;
  const auto text = export_dot(a, o);
  EXPECT_EQ(edges_with(text, "green3"), 4U);
  EXPECT_EQ(count(text, "penwidth=2];"), 4U + 5U);
}

TEST(Dot, OverlaysMustReferToTheArena) {
  DotOverlay bad_adviser;
  bad_adviser.adviser = Adviser{};
  bad_adviser.adviser->forbidden["nope"] = {};
  EXPECT_THROW(export_dot(fixture_fig1(), bad_adviser), Error);

  DotOverlay bad_strategy;
  bad_strategy.strategy = MemorylessStrategy{{"s2", "u_a1"}};
  EXPECT_THROW(export_dot(fixture_fig1(), bad_strategy), Error);

  DotOverlay bad_losing;
  bad_losing.losing = std::set<std::string>{"zz"};
  EXPECT_THROW(export_dot(fixture_fig1(), bad_losing), Error);
}

TEST(Dot, CurrentStateIsHighlighted) {
  DotOverlay o;
  o.current = "s3";
  const auto text = export_dot(fixture_fig1(), o);
  EXPECT_NE(text.find("\"s3\" [shape=box, fillcolor=\"palegreen\", peripheries=2"), std::string::npos);
}
