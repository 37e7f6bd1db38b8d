#include "doctest.h"
#include "generators.hpp"
#include "rbn/errors.hpp"
#include "rbn/frontend.hpp"

using namespace rbn;

namespace {

SourceSpan span_of(const std::string& text) {
  try {
    parse_model_unchecked(text);
  } catch (const ParseError& e) {
    return e.span();
  }
  FAIL("no parse error for: " << text);
  return {};
}

}  // namespace

TEST_CASE("formulas parse into the expected trees") {
  CHECK(parse_formula("1/2") == Formula::constant(Rational(1, 2)));
  CHECK(parse_formula("0.25") == Formula::constant(Rational(1, 4)));
  CHECK(parse_formula("r(x, y)") == Formula::indicator("r", {var("x"), var("y")}));
  CHECK(parse_formula("cc(1, r(x), 0)") ==
        Formula::convex(Formula::constant(Rational(1)), Formula::indicator("r", {var("x")}), Formula::constant(Rational(0))));
  CHECK(parse_formula("max{ r(z) | z ; z != x }") ==
        Formula::comb("max", {Formula::indicator("r", {var("z")})}, {"z"}, Constraint::not_equal(var("z"), var("x"))));
  CHECK(parse_formula("p", {}, {{"p", Rational(1, 3)}}) == Formula::constant(Rational(1, 3)));
  CHECK(parse_formula("r(k)", {"k"}) == Formula::indicator("r", {Term::constant("k")}));
}

TEST_CASE("constraint precedence: negation binds tighter than and, and than or") {
  const Constraint c = parse_constraint("x = y | !x = z & lt(x, z)");
  const auto* either = c.as<Constraint::Or>();
  REQUIRE(either != nullptr);
  const auto* both = either->rhs.as<Constraint::And>();
  REQUIRE(both != nullptr);
  CHECK(both->lhs.as<Constraint::Not>() != nullptr);
  CHECK(to_string(c) == "x = y | x != z & lt(x, z)");
  CHECK(to_string(parse_constraint("(x = y | x = z) & true")) == "(x = y | x = z) & true");
}

TEST_CASE("printing is stable and reparses to the same document") {
  for (const char* file : {"robot.rbn", "symmetric.rbn", "temporal.rbn", "functional.rbn", "cancer.rbn",
                           "casesplit.rbn", "chain.rbn", "diamond.rbn"}) {
    const ParsedModel m = testing::load_corpus_model(file);
    const std::string printed = pretty_print(m.document);
    INFO(file);
    CHECK(parse_model(printed).document == m.document);
    CHECK(pretty_print(parse_model(printed).document) == printed);
  }
}

TEST_CASE("random documents survive a print and parse round trip") {
  testing::Rng rng(41);
  for (int i = 0; i < 300; ++i) {
    const ModelDocument doc = testing::random_document(rng);
    const std::string text = pretty_print(doc);
    INFO(text);
    REQUIRE(parse_model_unchecked(text).document == doc);
  }
}

TEST_CASE("syntax errors carry line and column") {
  const SourceSpan s = span_of("relation r/1;\nr(x) = cc(1, 2;\n");
  CHECK(s.line == 2);
  CHECK(s.column == 15);
  CHECK(span_of("relation r/1;\n  r(x) = @;").column == 10);
  CHECK(span_of("p = 1.5;").column == 5);
  CHECK(span_of("relation exists/1;").line == 1);
  CHECK(span_of("relation r/1; r(x) = max{ | ; true };").column == 27);
}

TEST_CASE("parameters are checked and substituted") {
  CHECK_THROWS_WITH_AS(parse_model("p = 1.5;"), doctest::Contains("outside [0,1]"), ParseError);
  CHECK_THROWS_AS(parse_model("p = 1/2; p = 1/3;"), ParseError);
  CHECK_THROWS_AS(parse_model("relation r/1; r(x) = q;"), ParseError);
  const ParsedModel m = parse_model("p = 2/5; relation r/1; r(x) = cc(p, p, 0);");
  CHECK(m.network.label("r").body == parse_formula("cc(2/5, 2/5, 0)"));
}

TEST_CASE("deeply nested input is rejected rather than overflowing the stack") {
  std::string deep = "relation r/1; r(x) = ";
  for (int i = 0; i < 5000; ++i) deep += "cc(";
  CHECK_THROWS_AS(parse_model_unchecked(deep), ParseError);
  std::string fo(5000, '!');
  CHECK_THROWS_AS(parse_fol(fo + "true"), ParseError);
}

TEST_CASE("scenarios parse domains, rigid tables, bindings, evidence and queries") {
  const ScenarioDocument doc = parse_scenario(
      "domain {a, b, c}\n"
      "rigid lt = {(a,b), (b,c), (a,c)}\n"
      "bind k = b\n"
      "evidence {t(a), !t(b)}\n"
      "query s(a), b(a,b)\n");
  CHECK(doc.domain == std::vector<std::string>{"a", "b", "c"});
  REQUIRE(doc.rigid.size() == 1);
  CHECK(doc.rigid[0].tuples.size() == 3);
  CHECK(doc.bindings == std::vector<std::pair<std::string, std::string>>{{"k", "b"}});
  REQUIRE(doc.evidence.size() == 2);
  CHECK_FALSE(doc.evidence[1].positive);
  CHECK(doc.queries.size() == 2);
  CHECK(parse_scenario(pretty_print(doc)) == doc);
}

TEST_CASE("scenario errors") {
  CHECK_THROWS_WITH_AS(parse_scenario("domain {a}\nevidence {t(a), !t(a)}\nquery t(a)"),
                       doctest::Contains("contradictory evidence"), ParseError);
  CHECK_THROWS_AS(parse_scenario("domain {a, a}\nquery t(a)"), ParseError);
  CHECK_THROWS_AS(parse_scenario("domain {a}\nquery t(b)"), ParseError);
  CHECK_THROWS_AS(parse_scenario("domain {a, b}\nrigid lt = {(a,b), (a)}\nquery t(a)"), ParseError);
  CHECK_THROWS_AS(parse_scenario("domain {a}\nbind k = a\nbind k = a\nquery t(a)"), ParseError);
}

TEST_CASE("binding a scenario checks it against the vocabulary") {
  const ParsedModel m = testing::load_corpus_model("functional.rbn");
  const ScenarioDocument ok = parse_scenario(testing::read_corpus("functional.rbs"));
  const BoundScenario bound = bind_scenario(m.network, ok);
  CHECK(bound.structure.size() == 4);
  CHECK(bound.structure.constant("v2") == bound.structure.element("e2"));
  CHECK(bound.queries.size() == 3);
  CHECK_THROWS_AS(bind_scenario(m.network, parse_scenario("domain {a}\nquery r(a,a)")), Error);
  CHECK_THROWS_AS(bind_scenario(m.network, parse_scenario("domain {a}\nrigid gt = {(a,a)}\nquery r(a,a)")), Error);
  const ParsedModel robot = testing::load_corpus_model("robot.rbn");
  CHECK_THROWS_AS(bind_scenario(robot.network, parse_scenario("domain {a}\nquery s(a,a)")), Error);
  CHECK_THROWS_AS(bind_scenario(robot.network, parse_scenario("domain {a}\nquery q(a)")), Error);
}

TEST_CASE("lexer rejects stray bytes without crashing") {
  CHECK_THROWS_WITH_AS(parse_model_unchecked("relation r/1; $"), doctest::Contains("unexpected character '$'"), ParseError);
  CHECK_THROWS_WITH_AS(parse_model_unchecked(std::string("relation \x01")), doctest::Contains("unexpected byte 0x01"),
                       ParseError);
  testing::Rng rng(2);
  std::uniform_int_distribution<int> byte(0, 255);
  for (int i = 0; i < 2000; ++i) {
    std::string text(static_cast<std::size_t>(i % 64), '\0');
    for (char& c : text) c = static_cast<char>(byte(rng));
    try {
      parse_model(text);
    } catch (const Error&) {
    }
  }
}
