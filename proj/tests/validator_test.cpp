#include <gtest/gtest.h>

#include "support.hpp"

using namespace bww;

namespace {

std::vector<Diagnostic> check_fixture(const std::string& name) {
  return validate(bww::test::build_file(bww::test::fixture(name)));
}

}  // namespace

TEST(Validator, SampleModelsAreConformant) {
  for (const char* f : {"library.bww", "campus.bww", "book.bww", "precedes_chain.bww"})
    EXPECT_TRUE(validate(bww::test::build_file(bww::test::sample(f))).empty()) << f;
  EXPECT_TRUE(check_fixture("empty.bww").empty());
}

struct RuleCase {
  const char* file;
  Code code;
  Severity severity;
};

void PrintTo(const RuleCase& c, std::ostream* os) { *os << c.file; }

class RuleFixture : public ::testing::TestWithParam<RuleCase> {};

TEST_P(RuleFixture, TriggersExactlyItsCode) {
  auto diags = check_fixture(GetParam().file);
  ASSERT_EQ(diags.size(), 1u) << GetParam().file;
  EXPECT_EQ(diags[0].code, GetParam().code);
  EXPECT_EQ(diags[0].severity, GetParam().severity);
  EXPECT_TRUE(diags[0].span);
}

INSTANTIATE_TEST_SUITE_P(
    AllRules, RuleFixture,
    ::testing::Values(RuleCase{"v1.bww", Code::V1, Severity::Error}, RuleCase{"v2.bww", Code::V2, Severity::Error},
                      RuleCase{"v3.bww", Code::V3, Severity::Error}, RuleCase{"v4.bww", Code::V4, Severity::Error},
                      RuleCase{"v5.bww", Code::V5, Severity::Error}, RuleCase{"v6.bww", Code::V6, Severity::Error},
                      RuleCase{"v7.bww", Code::V7, Severity::Error}, RuleCase{"v8.bww", Code::V8, Severity::Error},
                      RuleCase{"v9.bww", Code::V9, Severity::Error}, RuleCase{"v10.bww", Code::V10, Severity::Error},
                      RuleCase{"v11.bww", Code::V11, Severity::Error},
                      RuleCase{"w1.bww", Code::W1, Severity::Warning},
                      RuleCase{"i2.bww", Code::I2, Severity::Info}),
    [](const auto& info) { return std::string(to_string(info.param.code)); });

TEST(Validator, V4ReportsBothDirections) {
  Model m = bww::test::build(R"(model M { property E; property F; thing a possesses E; thing b possesses F;
    class C characteristic E = { b }; })");
  auto diags = validate(m);
  ASSERT_EQ(diags.size(), 2u);
  EXPECT_EQ(diags[0].code, Code::V4);
  EXPECT_EQ(diags[1].code, Code::V4);
}

TEST(Validator, SelfPartIsV7) {
  auto diags = validate(bww::test::build("model M { property P; thing A possesses P parts A; }"));
  EXPECT_EQ(bww::test::codes(diags), std::vector<Code>{Code::V7});
}

TEST(Validator, StepWithoutChangeIsV9) {
  auto diags = validate(bww::test::build(
      "model M { property P; thing A possesses P; states of A: x, y; process Pr of A = <x, x>; }"));
  EXPECT_EQ(bww::test::codes(diags), std::vector<Code>{Code::V9});
}

TEST(Validator, OneV9PerBrokenJunction) {
  bww::test::Rng rng(5);
  for (int round = 0; round < 100; ++round) {
    int steps = bww::test::pick(rng, 2, 6);
    int broken = bww::test::pick(rng, 1, steps - 1);
    std::string src = "model M { property P; thing A possesses P; states of A: s0, s1, s2, s3, s4, s5, s6, s7, zz;\n";
    src += "  process Pr of A =";
    for (int i = 0; i < steps; ++i) {
      std::string from = "s" + std::to_string(i);
      if (i == broken) from = "zz";
      src += std::string(i ? ", " : " ") + "<" + from + ", s" + std::to_string(i + 1) + ">";
    }
    src += ";\n}";
    auto diags = validate(bww::test::build(src));
    ASSERT_EQ(bww::test::codes(diags), std::vector<Code>{Code::V9}) << src;
  }
}

TEST(Validator, DiagnosticsAreSortedAndDeterministic) {
  Model m = bww::test::build(R"(model M {
    thing Ghost;
    property Lonely;
    property A; property B; precedes A -> B;
    thing s possesses B;
  })");
  auto a = validate(m);
  auto b = validate(m);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].message, b[i].message);
  for (std::size_t i = 1; i < a.size(); ++i) EXPECT_FALSE(diagnostic_less(a[i], a[i - 1]));
  EXPECT_EQ(bww::test::codes(a), (std::vector<Code>{Code::V1, Code::V1, Code::V1, Code::V3}));
}

TEST(Diagnostics, TextFormat) {
  Diagnostic d{Code::V3, Severity::Error, "s", SourceSpan{"m.bww", 4, 9, 4, 10}, "thing 's' lacks 'A'"};
  EXPECT_EQ(render(d), "m.bww:4:9: error[V3]: thing 's' lacks 'A'");
  Diagnostic nospan{Code::W1, Severity::Warning, "T", std::nullopt, "collapsed"};
  EXPECT_EQ(render(nospan, "m.bww"), "m.bww: warning[W1]: collapsed");
}
