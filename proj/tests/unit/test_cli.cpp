#include <sstream>

#include "commands.hpp"
#include "doctest.h"
#include "generators.hpp"
#include <json.hpp>

using namespace rbn;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "rbn");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string corpus(const char* file) { return testing::corpus_path(file); }

}  // namespace

TEST_CASE("check accepts valid models and warns about recursion") {
  CHECK(run_cli({"check", corpus("robot.rbn")}).code == cli::kOk);
  const Outcome rec = run_cli({"check", corpus("symmetric.rbn")});
  CHECK(rec.code == cli::kOk);
  CHECK(rec.err.find("recursive") != std::string::npos);
  CHECK(run_cli({"check", "--recursive", corpus("symmetric.rbn")}).err.empty());
  CHECK(run_cli({"check", corpus("missing.rbn")}).code == cli::kInvalid);
}

TEST_CASE("infer prints one line per query with network statistics") {
  const Outcome o = run_cli({"infer", "--no-timings", "--oracle", corpus("robot.rbn"), corpus("robot.rbs")});
  REQUIRE(o.code == cli::kOk);
  CHECK(o.out.find("s(l1) = 0.911010742188") != std::string::npos);
  CHECK(o.out.find("nodes=11") != std::string::npos);
  CHECK(o.out.find("delta=0") != std::string::npos);
  CHECK(o.out.find(" ms)") == std::string::npos);
  const Outcome rec = run_cli({"infer", "--no-timings", corpus("symmetric.rbn"), corpus("symmetric.rbs")});
  REQUIRE(rec.code == cli::kOk);
  CHECK(rec.out.find("well-founded: yes (recursive: r)") != std::string::npos);
}

TEST_CASE("infer emits JSON records") {
  const Outcome o = run_cli({"infer", "--json", corpus("functional.rbn"), corpus("functional.rbs")});
  REQUIRE(o.code == cli::kOk);
  std::istringstream lines(o.out);
  std::string line;
  std::vector<nlohmann::json> records;
  while (std::getline(lines, line)) {
    const auto j = nlohmann::json::parse(line);
    if (j.contains("query")) records.push_back(j);
  }
  REQUIRE(records.size() == 3);
  CHECK(records[0]["query"] == "r(a,e1)");
  CHECK(std::stod(records[1]["probability"].get<std::string>()) == doctest::Approx(1.0 / 6));
  CHECK(records[2].contains("time_ms"));
}

TEST_CASE("exit codes distinguish failure kinds") {
  CHECK(run_cli({"infer", corpus("robot.rbn"), corpus("robot_inconsistent.rbs")}).code == cli::kInconsistent);
  const Outcome cyc = run_cli({"infer", corpus("symmetric.rbn"), corpus("symmetric_unordered.rbs")});
  CHECK(cyc.code == cli::kNotWellFounded);
  CHECK(cyc.err.find("->") != std::string::npos);
  CHECK(run_cli({"infer", "--budget-bits", "6", corpus("robot.rbn"), corpus("robot.rbs")}).code == cli::kBudget);
  CHECK(run_cli({"infer", corpus("robot.rbn"), corpus("symmetric.rbs")}).code == cli::kInvalid);
  CHECK(run_cli({"frobnicate"}).code == cli::kInvalid);
}

TEST_CASE("deps prints parent formulas and normal forms") {
  const Outcome o = run_cli({"deps", corpus("robot.rbn"), "s", "b"});
  REQUIRE(o.code == cli::kOk);
  CHECK(o.out.find("pa[s,b](x1; y1, y2) := ") == 0);
  CHECK(o.out.find("normal form: ") != std::string::npos);
  const Outcome anc = run_cli({"deps", "--ancestor", corpus("chain.rbn"), "c", "a"});
  CHECK(anc.code == cli::kOk);
  CHECK(anc.out.find("pa*[c,a]") != std::string::npos);
  CHECK(run_cli({"deps", corpus("robot.rbn"), "s", "nope"}).code == cli::kInvalid);
}

TEST_CASE("translate-fol prints the probability formula") {
  const Outcome o = run_cli({"translate-fol", "--max-or", "u(x) | exists y v(x, y)"});
  REQUIRE(o.code == cli::kOk);
  CHECK(o.out == "max{ u(x), max{ v(x, y) | y ; true } | ; true }\n");
  CHECK(run_cli({"translate-fol", "u(x) |"}).code == cli::kInvalid);
}

TEST_CASE("oracle subcommand reports enumeration results") {
  const Outcome o = run_cli({"oracle", corpus("symmetric.rbn"), corpus("symmetric.rbs")});
  REQUIRE(o.code == cli::kOk);
  CHECK(o.out.find("0.333333333333") != std::string::npos);
}
