#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "random_instance.hpp"
#include "xcsp/generators.hpp"
#include "xcsp/io.hpp"
#include "xcsp/verifier.hpp"

using namespace xcsp;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string wrap(const std::string& vars, const std::string& cons, const std::string& type = "CSP",
                 const std::string& objectives = "") {
  return "<instance format=\"XCSP3\" type=\"" + type + "\">\n<variables>\n" + vars + "\n</variables>\n<constraints>\n" +
         cons + "\n</constraints>\n" + objectives + "</instance>\n";
}

Instance parse_ok(const std::string& text) {
  auto r = parse_instance(text);
  if (!r.ok()) {
    ADD_FAILURE() << to_string(r.diagnostics.at(0)) << "\n" << text;
    return {};
  }
  return *r.instance;
}

}  // namespace

TEST(Reader, RangeDomain) {
  const Instance inst = parse_ok(wrap("<var id=\"x\"> 1..3 </var>", ""));
  ASSERT_EQ(inst.variables.size(), 1u);
  EXPECT_EQ(inst.variables[0].dom, Domain({1, 2, 3}));
}

TEST(Reader, MixedDomain) {
  const Instance inst = parse_ok(wrap("<var id=\"x\"> -2 0..2 7 </var>", ""));
  EXPECT_EQ(inst.variables[0].dom, Domain({-2, 0, 1, 2, 7}));
}

TEST(Reader, ShortTable) {
  const Instance inst = parse_ok(wrap("<var id=\"x\"> 1..3 </var><var id=\"y\"> 1..3 </var>",
                                      "<extension><list> x y </list><supports> (1,*)(2,3) </supports></extension>"));
  const auto& e = std::get<Extension>(inst.constraints.at(0).kind);
  EXPECT_TRUE(e.positive);
  EXPECT_TRUE(e.is_short());
  EXPECT_EQ(e.tuples, (std::vector<Tuple>{{1, kStar}, {2, 3}}));
}

TEST(Reader, ConflictsStayNegative) {
  const Instance inst = parse_ok(wrap("<var id=\"x\"> 0 1 </var><var id=\"y\"> 0 1 </var>",
                                      "<extension><list> x y </list><conflicts> (0,0) </conflicts></extension>"));
  const auto& e = std::get<Extension>(inst.constraints.at(0).kind);
  EXPECT_FALSE(e.positive);
  EXPECT_EQ(e.tuples.size(), 1u);
}

TEST(Reader, FunctionalIntension) {
  const Instance inst = parse_ok(wrap("<var id=\"x\"> 0..3 </var><var id=\"y\"> 0..3 </var><var id=\"z\"> 0..6 </var>",
                                      "<intension> eq(add(x,y),z) </intension>"));
  const auto& e = std::get<Intension>(inst.constraints.at(0).kind).expr;
  EXPECT_EQ(e, ex::eq(ex::add(ex::var(0), ex::var(1)), ex::var(2)));
}

TEST(Reader, ArraysAreFlattened) {
  const Instance inst = parse_ok(wrap("<array id=\"x\" size=\"[2][3]\"> 0..5 </array>",
                                      "<allDifferent> x[1][] </allDifferent>"));
  ASSERT_EQ(inst.variables.size(), 6u);
  EXPECT_EQ(inst.variables[0].id, "x[0][0]");
  EXPECT_EQ(inst.variables[5].id, "x[1][2]");
  const auto& a = std::get<AllDifferent>(inst.constraints.at(0).kind);
  EXPECT_EQ(a.list, (std::vector<Expr>{ex::var(3), ex::var(4), ex::var(5)}));
}

TEST(Reader, GroupsAndBlocksExpandInline) {
  const Instance inst = parse_ok(wrap(
      "<array id=\"x\" size=\"[3]\"> 0..2 </array>",
      "<block class=\"symmetry-breaking\">\n"
      "  <group><intension> lt(%0,%1) </intension><args> x[0] x[1] </args><args> x[1] x[2] </args></group>\n"
      "</block>"));
  ASSERT_EQ(inst.constraints.size(), 2u);
  EXPECT_EQ(inst.constraints[0].tag, "symmetry-breaking");
  EXPECT_EQ(std::get<Intension>(inst.constraints[1].kind).expr, ex::lt(ex::var(1), ex::var(2)));
}

TEST(Reader, NonCoreElementIsNamed) {
  auto r = parse_instance(wrap("<var id=\"x\"> 0 1 </var>", "<smart> x </smart>"));
  ASSERT_FALSE(r.ok());
  EXPECT_NE(r.diagnostics.at(0).message.find("smart"), std::string::npos);
}

TEST(Writer, CompactsContiguousRuns) {
  Instance inst;
  inst.add_variable("x", Domain::range(1, 3));
  inst.add_variable("y", Domain({0, 1, 5, 6, 7}));
  const std::string xml = write_instance(inst);
  EXPECT_NE(xml.find("<var id=\"x\"> 1..3 </var>"), std::string::npos) << xml;
  EXPECT_NE(xml.find("<var id=\"y\"> 0 1 5..7 </var>"), std::string::npos) << xml;
  EXPECT_EQ(format_domain(Domain({0, 1, 5, 6, 7})), "0 1 5..7");
}

TEST(Writer, TwoSpaceIndentationAndAttributeOrder) {
  Instance inst;
  inst.name = "demo";
  inst.add_variable("x", Domain::range(0, 1));
  const std::string xml = write_instance(inst);
  EXPECT_EQ(xml.rfind("<instance id=\"demo\" format=\"XCSP3\" type=\"CSP\">", 0), 0u) << xml;
  EXPECT_NE(xml.find("\n  <variables>\n    <var id=\"x\">"), std::string::npos) << xml;
}

TEST(Writer, CostasHasOneAllDifferentOverTheMarks) {
  ProblemParams p;
  p.problem = Problem::Costas;
  p.n = 4;
  const std::string xml = write_instance(generate(p));
  EXPECT_NE(xml.find("<allDifferent> x[0] x[1] x[2] x[3] </allDifferent>"), std::string::npos) << xml;
  std::size_t plain = 0;
  for (std::size_t at = xml.find("<allDifferent> x["); at != std::string::npos; at = xml.find("<allDifferent> x[", at + 1)) {
    ++plain;
  }
  EXPECT_EQ(plain, 1u);
}

TEST(Writer, ByteIdenticalAcrossInvocations) {
  ProblemParams p;
  p.problem = Problem::SportsScheduling;
  p.n = 6;
  const Instance a = generate(p);
  const Instance b = generate(p);
  EXPECT_EQ(write_instance(a), write_instance(a));
  EXPECT_EQ(write_instance(a), write_instance(b));
}

TEST(Instantiation, PositionalPairing) {
  EXPECT_EQ(parse_instantiation("<instantiation><list> x y </list><values> 1 2 </values></instantiation>"),
            (Instantiation{{"x", "y"}, {1, 2}}));
  EXPECT_EQ(parse_instantiation("<instantiation> <list> x[0] x[1] </list> <values> 3 3 </values> </instantiation>"),
            (Instantiation{{"x[0]", "x[1]"}, {3, 3}}));
}

TEST(Instantiation, Rejections) {
  EXPECT_THROW(parse_instantiation("<instantiation><list> x y </list><values> 1 * </values></instantiation>"),
               ModelError);
  EXPECT_THROW(parse_instantiation("<instantiation><list> x y </list><values> 1 </values></instantiation>"),
               ModelError);
  EXPECT_THROW(parse_instantiation("<instantiation><list> x </list>"), ModelError);
}

TEST(Instantiation, SingleLineRoundtrip) {
  const Instantiation a{{"x[0]", "y"}, {-3, 12}};
  const std::string line = write_instantiation(a);
  EXPECT_EQ(line.find('\n'), std::string::npos);
  EXPECT_EQ(parse_instantiation(line), a);
}

TEST(Diagnostics, MalformedCorpus) {
  const fs::path dir = fs::path(XCSP_TEST_DATA) / "malformed";
  std::ifstream index(dir / "expected.tsv");
  ASSERT_TRUE(index) << dir;
  std::string row;
  int documents = 0;
  while (std::getline(index, row)) {
    std::stringstream ss(row);
    std::string file, line, column, message;
    std::getline(ss, file, '\t');
    std::getline(ss, line, '\t');
    std::getline(ss, column, '\t');
    std::getline(ss, message);
    SCOPED_TRACE(file);
    const auto r = parse_instance(slurp(dir / file));
    ASSERT_FALSE(r.ok());
    ASSERT_FALSE(r.diagnostics.empty());
    const auto& d = r.diagnostics[0];
    EXPECT_EQ(d.severity, Severity::Error);
    EXPECT_EQ(d.line, std::stoi(line));
    EXPECT_EQ(d.column, std::stoi(column));
    EXPECT_NE(d.message.find(message), std::string::npos) << d.message;
    ++documents;
  }
  EXPECT_GE(documents, 20);
}

TEST(RoundtripProperty, GeneratorOutputs) {
  for (const auto& p : sample_params()) {
    const Instance inst = generate(p);
    SCOPED_TRACE(inst.name);
    const std::string text = write_instance(inst);
    const auto r = parse_instance(text);
    ASSERT_TRUE(r.ok()) << to_string(r.diagnostics.at(0));
    EXPECT_TRUE(*r.instance == inst);
    EXPECT_EQ(write_instance(*r.instance), text);
  }
}

TEST(RoundtripProperty, ThousandRandomInstances) {
  for (int i = 0; i < 1000; ++i) {
    xcsp::testing::RandomInstance gen(static_cast<std::uint64_t>(i) + 77);
    const Instance inst = gen.make(6, 5, i % xcsp::testing::RandomInstance::kKinds, i % 2 == 1);
    const std::string text = write_instance(inst);
    const auto r = parse_instance(text);
    ASSERT_TRUE(r.ok()) << i << ": " << to_string(r.diagnostics.at(0)) << "\n" << text;
    ASSERT_TRUE(*r.instance == inst) << i << "\n" << text;
    ASSERT_EQ(write_instance(*r.instance), text) << i;
  }
}
