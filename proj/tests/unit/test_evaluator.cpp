#include "doctest.h"
#include "generators.hpp"
#include "rbn/errors.hpp"
#include "rbn/evaluator.hpp"
#include "rbn/frontend.hpp"

using namespace rbn;

namespace {

Structure robot_world(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= n; ++i) names.push_back("l" + std::to_string(i));
  Structure s(names);
  s.add_relation("b", 2);
  s.add_relation("t", 1);
  s.add_relation("s", 1);
  return s;
}

}  // namespace

TEST_CASE("constraints evaluate equality, rigid atoms and connectives") {
  Structure s({"a", "b", "c"});
  s.add_relation("lt", 2);
  s.set("lt", std::vector<Element>{0, 1}, true);
  s.bind_constant("k", 1);
  const Binding b{{"x", 0}, {"y", 1}};
  CHECK(eval_constraint(parse_constraint("x != y & lt(x, y)"), s, b));
  CHECK_FALSE(eval_constraint(parse_constraint("lt(y, x) | x = y"), s, b));
  CHECK(eval_constraint(parse_constraint("y = k", {"k"}), s, b));
  CHECK(eval_constraint(parse_constraint("!(x = k)", {"k"}), s, b));
  CHECK_THROWS_AS(eval_constraint(parse_constraint("x = w"), s, b), EvaluationError);
}

TEST_CASE("bindings shadow and pop") {
  Binding b{{"x", 0}};
  b.bind("x", 2);
  CHECK(b.at("x") == 2);
  b.pop();
  CHECK(b.at("x") == 0);
  CHECK_FALSE(b.lookup("y").has_value());
  CHECK_THROWS_AS(b.at("y"), EvaluationError);
}

TEST_CASE("multisets keep one entry per argument and satisfying tuple") {
  Structure s({"a", "b", "c"});
  s.add_relation("t", 1);
  s.set("t", std::vector<Element>{1}, true);
  const Formula f = parse_formula("max{ t(z), 1/2 | z ; z != x }");
  const auto* comb = f.as<Formula::Comb>();
  REQUIRE(comb != nullptr);
  const auto m = build_multiset<double>(*comb, s, Binding{{"x", 0}});
  CHECK(m == Multiset({1.0, 0.0, 0.5, 0.5}));
  const auto exact = build_multiset<Exact>(*comb, s, Binding{{"x", 1}});
  CHECK(exact.size() == 4);
  CHECK(exact.count(Exact(1) / 2) == 2);
}

TEST_CASE("convex combinations and empty combination terms") {
  Structure s({"a"});
  const Binding none;
  CHECK(eval_formula<double>(parse_formula("cc(1/2, 1, 0)"), s, none) == 0.5);
  CHECK(eval_formula<Exact>(parse_formula("cc(1/3, 1/2, 1/4)"), s, none) == Exact(1, 6) + Exact(2, 3) * Exact(1, 4));
  CHECK(eval_formula<double>(parse_formula("noisyor{ 1 | z ; z != z }"), s, none) == 0.0);
  CHECK(eval_formula<double>(parse_formula("min{ 0 | z ; false }"), s, none) == 1.0);
}

TEST_CASE("robot success probability follows the label") {
  const ParsedModel m = testing::load_corpus_model("robot.rbn");
  Structure s = robot_world(3);
  // t(l2) holds; every path except l1 -> l2 is blocked.
  s.set("t", std::vector<Element>{1}, true);
  for (Element x = 0; x < 3; ++x) {
    for (Element y = 0; y < 3; ++y) {
      if (x != y) s.set("b", std::vector<Element>{x, y}, true);
    }
  }
  s.set("b", std::vector<Element>{0, 1}, false);
  // Open move to the terminal l2.
  CHECK(atom_probability<Exact>(m.network, s, {"s", {0}}) == Exact(1));
  CHECK(atom_probability<Exact>(m.network, s, {"s", {1}}) == Exact(1));
  CHECK(atom_probability<Exact>(m.network, s, {"s", {2}}) == Exact(0));
  // One open incoming path: meet another robot with p2.
  s.set("b", std::vector<Element>{0, 2}, false);
  CHECK(atom_probability<Exact>(m.network, s, {"s", {2}}) == Exact(1, 2));
  // Two open incoming paths combine by noisy-or.
  s.set("b", std::vector<Element>{1, 2}, false);
  CHECK(atom_probability<Exact>(m.network, s, {"s", {2}}) == Exact(3, 4));
}

TEST_CASE("joint probability multiplies relation interpretations") {
  const ParsedModel m = parse_model("relation a/1; relation c/1; a(x) = 1/4; c(x) = cc(a(x), 1, 1/2);");
  Structure s({"u", "v"});
  s.add_relation("a", 1);
  s.add_relation("c", 1);
  s.set("a", std::vector<Element>{0}, true);
  s.set("c", std::vector<Element>{0}, true);
  CHECK(interpretation_probability<Exact>(m.network, s, "a") == Exact(1, 4) * Exact(3, 4));
  CHECK(interpretation_probability<Exact>(m.network, s, "c") == Exact(1) * Exact(1, 2));
  CHECK(joint_probability<Exact>(m.network, s) == Exact(3, 16) * Exact(1, 2));
}

TEST_CASE("recursive labels read undetermined atoms as a well-foundedness failure") {
  const ParsedModel m = testing::load_corpus_model("symmetric.rbn");
  Structure s({"a", "b"});
  s.add_relation("leq", 2);
  s.add_relation("r", 2, Truth::Unknown);
  CHECK_THROWS_AS(atom_probability<double>(m.network, s, {"r", {1, 0}}), WellFoundednessError);
}
