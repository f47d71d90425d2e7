#include <gtest/gtest.h>

#include <random>

#include "deon/dsl.hpp"
#include "support/scenarios.hpp"

using namespace deon;
using deon::testing::load;
using deon::testing::scenario_text;

TEST(Parse, TheftCounts) {
  auto s = load("theft");
  EXPECT_EQ(s.name, "theft");
  EXPECT_EQ(s.plans.size(), 1u);
  EXPECT_EQ(s.predicates.size(), 3u);
  EXPECT_EQ(s.effects.size(), 1u);
  EXPECT_EQ(s.plans[0].reasons.size(), 2u);
  EXPECT_EQ(s.plans[0].action.str(), "A(a)");
  EXPECT_TRUE(s.find_predicate("A")->is_action);
}

TEST(Parse, AllGoldenScenariosParse) {
  for (const auto& name : deon::testing::golden_names()) {
    auto r = parse_scenario(scenario_text(name));
    EXPECT_TRUE(r.ok()) << name;
    EXPECT_TRUE(r.diagnostics.empty()) << name;
  }
}

TEST(Parse, EmptyInputNeedsHeader) {
  auto r = parse_scenario("");
  ASSERT_FALSE(r.ok());
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_EQ(r.diagnostics[0].message, "expected scenario header");
  EXPECT_EQ(r.diagnostics[0].span.line, 1u);
  EXPECT_EQ(r.diagnostics[0].span.column, 1u);
}

TEST(Parse, MissingCommaPointsAtSecondAtom) {
  const std::string text =
      "scenario t\nagents a\npredicates { C1/1, C2/1, action A/1 }\n"
      "plan p agent a: reasons { C1(a) C2(a) } action { A(a) }\n";
  auto r = parse_scenario(text);
  ASSERT_FALSE(r.ok());
  const auto& d = r.diagnostics.front();
  EXPECT_EQ(d.code, diag::kSyntax);
  EXPECT_EQ(d.span.line, 4u);
  EXPECT_EQ(d.span.column, 33u);
  EXPECT_EQ(text.substr(d.span.offset, d.span.length), "C2");
  EXPECT_EQ(d.expected, "',' or '}'");
  EXPECT_EQ(d.str(), "<input>:4:33: error[syntax]: unexpected 'C2' (expected ',' or '}')");
}

TEST(Parse, ValidationErrorsCarrySpans) {
  const std::string text =
      "scenario t\nagents a\npredicates { C1/1, action A/1 }\n"
      "plan p agent a: reasons { C9(a) } action { A(a) }\n";
  auto r = parse_scenario(text);
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.diagnostics.front().code, "unknown-predicate");
  EXPECT_EQ(r.diagnostics.front().span.line, 4u);
}

TEST(Parse, UnknownTermIsReported) {
  auto r = parse_scenario("scenario t\nagents a\npredicates { C/1, action A/1 }\n"
                          "plan p agent a: reasons { C(zed) } action { A(a) }\n");
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.diagnostics.front().code, diag::kUnknownReference);
}

TEST(Parse, LexicalErrorsDoNotStopTheScan) {
  auto r = parse_scenario("scenario t\nagents a @ b\n");
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.diagnostics.front().code, diag::kLexical);
  EXPECT_EQ(r.diagnostics.front().span.column, 10u);
}

TEST(Parse, RationalUtilities) {
  auto s = deon::testing::parse_or_die(
      "scenario r\nagents a\npredicates { C/0, action A/0, action B/0 }\n"
      "plan p agent a: reasons { C } action { A }\n"
      "candidates ctx given { C } { A, B }\n"
      "utility ctx { A = 3/4; B = -0.25; }\n");
  EXPECT_EQ(s.utility("ctx", {Atom{"A", {}}, false}), Rational(3, 4));
  EXPECT_EQ(s.utility("ctx", {Atom{"B", {}}, false}), Rational(-1, 4));
  EXPECT_FALSE(parse_scenario("scenario r\nagents a\npredicates { C/0, action A/0 }\n"
                              "plan p agent a: reasons { C } action { A }\n"
                              "candidates ctx given { C } { A }\nutility ctx { A = 1/0; }\n")
                   .ok());
}

TEST(Parse, DepthAndSizeLimits) {
  std::string deep = "scenario d\nagents a\npredicates { C/0 }\nphysics { ";
  for (int i = 0; i < 1000; ++i) deep += "(";
  deep += "C";
  for (int i = 0; i < 1000; ++i) deep += ")";
  deep += "; }\n";
  auto r = parse_scenario(deep);
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.diagnostics.front().code, diag::kLimit);

  ParseOptions small;
  small.max_bytes = 16;
  auto big = parse_scenario(scenario_text("theft"), small);
  ASSERT_FALSE(big.ok());
  EXPECT_EQ(big.diagnostics.front().code, diag::kLimit);
}

TEST(Parse, CrlfLineEndings) {
  std::string text = scenario_text("pedestrian");
  std::string crlf;
  for (char c : text) {
    if (c == '\n') crlf += '\r';
    crlf += c;
  }
  auto r = parse_scenario(crlf);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(*r.scenario, load("pedestrian"));
}

TEST(Print, RoundTripOnGoldenScenarios) {
  for (const auto& name : deon::testing::golden_names()) {
    auto s = load(name);
    const auto printed = print_scenario(s);
    auto again = parse_scenario(printed);
    ASSERT_TRUE(again.ok()) << name << "\n" << printed;
    EXPECT_EQ(*again.scenario, s) << name;
    EXPECT_EQ(print_scenario(*again.scenario), printed) << name;
  }
}

TEST(Parse, FuzzNeverCrashes) {
  std::mt19937 rng(4242);
  const std::string alphabet = "abcxyzCA01 \n\t{}(),;:=./-#>";
  const auto& names = deon::testing::golden_names();
  for (int i = 0; i < 5000; ++i) {
    std::string text;
    if (i % 2 == 0) {
      std::uniform_int_distribution<int> len(0, 200), ch(0, 255);
      for (int k = len(rng); k > 0; --k) text += static_cast<char>(ch(rng));
    } else {
      text = scenario_text(names[static_cast<std::size_t>(i) % names.size()]);
      std::uniform_int_distribution<std::size_t> pos(0, text.size() - 1);
      std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
      for (int k = 0; k < 3; ++k) text[pos(rng)] = alphabet[pick(rng)];
    }
    ParseResult r;
    ASSERT_NO_THROW(r = parse_scenario(text));
    EXPECT_EQ(r.ok(), r.diagnostics.empty() || r.diagnostics.front().severity != Severity::Error);
  }
}
