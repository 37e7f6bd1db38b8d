// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "generators.hpp"
#include "rbn/dependency.hpp"
#include "rbn/errors.hpp"
#include "rbn/evaluator.hpp"
#include "rbn/fol.hpp"
#include "rbn/frontend.hpp"
#include "rbn/grounding.hpp"

using namespace rbn;

namespace {

using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = true;
  std::string detail;
};

struct Outcome {
  int id;
  std::string title;
  Verdict verdict;
  double seconds;
  double limit;
};

Outcome run_criterion(int id, std::string title, double limit, const std::function<Verdict()>& body) {
  const auto start = Clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("uncaught exception: ") + e.what()};
  }
  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  if (limit > 0 && seconds > limit) {
    v.pass = false;
    v.detail += "; over the time limit";
  }
  return {id, std::move(title), std::move(v), seconds, limit};
}

std::string fmt(const char* format, double x) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, format, x);
  return buffer;
}

std::vector<std::string> element_names(std::size_t n, const std::string& prefix = "e") {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back(prefix + std::to_string(i));
  return names;
}

Rational parameter(const ModelDocument& doc, const std::string& name) {
  for (const ModelItem& item : doc.items) {
    if (const auto* p = std::get_if<ParameterDecl>(&item); p && p->name == name) return p->value;
  }
  throw Error("model has no parameter " + name);
}

// Compares variable elimination with the enumeration oracle on one case;
// both must agree on inconsistency.
struct OracleStats {
  std::size_t cases = 0;
  std::size_t inconsistent = 0;
  double max_delta = 0;
  std::string failure;
};

void compare_with_oracle(const RelationalNetwork& network, const Structure& s, const Evidence& e, const GroundAtom& q,
                         OracleStats& stats) {
  ++stats.cases;
  std::optional<double> expected, actual;
  try {
    expected = brute_force_conditional<double>(network, s, e, q);
  } catch (const InconsistentEvidenceError&) {
  }
  try {
    actual = infer<double>(network, s, e, q).probability;
  } catch (const InconsistentEvidenceError&) {
  }
  if (expected.has_value() != actual.has_value()) {
    if (stats.failure.empty()) stats.failure = "inconsistency mismatch on " + to_string(q, s);
    return;
  }
  if (!expected) {
    ++stats.inconsistent;
    return;
  }
  const double delta = std::abs(*expected - *actual);
  stats.max_delta = std::max(stats.max_delta, delta);
  if (delta > 1e-9 && stats.failure.empty()) {
    stats.failure = to_string(q, s) + ": infer " + fmt("%.15g", *actual) + " vs oracle " + fmt("%.15g", *expected);
  }
}

Verdict oracle_verdict(const OracleStats& stats) {
  std::string detail = std::to_string(stats.cases) + " cases, " + std::to_string(stats.inconsistent) +
                       " inconsistent, max delta " + fmt("%.3g", stats.max_delta);
  if (!stats.failure.empty()) return {false, detail + "; " + stats.failure};
  return {true, detail};
}

std::vector<GroundAtom> all_atoms(const RelationalNetwork& network, std::size_t n) {
  std::vector<GroundAtom> atoms;
  for (const auto& [relation, arity] : network.vocabulary().probabilistic()) {
    for (const Tuple& t : all_tuples(n, arity)) atoms.push_back({relation, t});
  }
  return atoms;
}

// Evidence sets: none, every single literal, and a few random pairs.
std::vector<Evidence> evidence_sets(testing::Rng& rng, const std::vector<GroundAtom>& atoms, std::size_t pairs) {
  std::vector<Evidence> out(1);
  for (const GroundAtom& a : atoms) {
    for (bool v : {true, false}) {
      Evidence e;
      e.add(a, v);
      out.push_back(e);
    }
  }
  std::uniform_int_distribution<std::size_t> pick(0, atoms.size() - 1);
  std::bernoulli_distribution sign(0.5);
  for (std::size_t i = 0; i < pairs && atoms.size() > 1; ++i) {
    Evidence e;
    const std::size_t a = pick(rng), b = pick(rng);
    if (a == b) continue;
    e.add(atoms[a], sign(rng));
    e.add(atoms[b], sign(rng));
    out.push_back(e);
  }
  return out;
}

void compare_all(testing::Rng& rng, const RelationalNetwork& network, const Structure& s, std::size_t pairs,
                 bool single_literals, OracleStats& stats) {
  const std::vector<GroundAtom> atoms = all_atoms(network, s.size());
  std::vector<Evidence> sets = evidence_sets(rng, atoms, pairs);
  if (!single_literals) sets.erase(sets.begin() + 1, sets.begin() + 1 + 2 * static_cast<std::ptrdiff_t>(atoms.size()));
  for (const Evidence& e : sets) {
    for (const GroundAtom& q : atoms) {
      if (!e.contains(q)) compare_with_oracle(network, s, e, q, stats);
    }
  }
}

// Rigid order relation over `rank` (element -> position).
Structure with_order(Structure s, const std::string& relation, const std::vector<std::size_t>& rank, bool strict) {
  s.add_relation(relation, 2);
  for (Element a = 0; a < s.size(); ++a) {
    for (Element b = 0; b < s.size(); ++b) {
      const bool holds = strict ? rank[a] < rank[b] : rank[a] <= rank[b];
      s.set(relation, std::vector<Element>{a, b}, holds);
    }
  }
  return s;
}

// succ over the first `points` elements of the domain.
Structure with_chain(std::size_t n, std::size_t points) {
  Structure s(element_names(n, "t"));
  s.add_relation("succ", 2);
  for (Element i = 0; i + 1 < points; ++i) s.set("succ", std::vector<Element>{i, i + 1}, true);
  return s;
}

std::vector<std::size_t> random_rank(testing::Rng& rng, std::size_t n) {
  std::vector<std::size_t> rank(n);
  std::iota(rank.begin(), rank.end(), 0);
  std::shuffle(rank.begin(), rank.end(), rng);
  return rank;
}

Structure functional_structure(testing::Rng& rng, std::size_t n) {
  Structure s = with_order(Structure(element_names(n)), "lt", random_rank(rng, n), true);
  std::uniform_int_distribution<Element> pick(0, static_cast<Element>(n - 1));
  for (const char* c : {"v1", "v2", "v3"}) s.bind_constant(c, pick(rng));
  return s;
}

// Rigid structures of each corpus network for |D| = n.
std::vector<Structure> corpus_structures(testing::Rng& rng, const std::string& file, std::size_t n) {
  std::vector<Structure> out;
  if (file == "symmetric.rbn") {
    for (int i = 0; i < 2; ++i) out.push_back(with_order(Structure(element_names(n)), "leq", random_rank(rng, n), false));
  } else if (file == "temporal.rbn") {
    for (std::size_t points = 1; points <= n; ++points) out.push_back(with_chain(n, points));
  } else if (file == "functional.rbn") {
    for (int i = 0; i < 3; ++i) out.push_back(functional_structure(rng, n));
  } else {
    out.emplace_back(element_names(n));
  }
  return out;
}

const std::vector<std::string> kCorpus = {"robot.rbn",     "symmetric.rbn", "temporal.rbn", "functional.rbn",
                                          "cancer.rbn",    "casesplit.rbn", "chain.rbn",    "diamond.rbn"};

// --------------------------------------------------------------- criteria

Verdict random_oracle_equivalence() {
  testing::Rng rng(20240601);
  OracleStats stats;
  for (int trial = 0; trial < 200; ++trial) {
    testing::NetworkShape shape;
    shape.rigid = trial % 5 == 4;
    const ParsedModel m = parse_model(pretty_print(testing::random_model(rng, shape)));
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 3);
    const Structure s = testing::random_structure(rng, m.network, n);
    const GroundAtom q = testing::random_atom(rng, m.network, n);
    const Evidence e = testing::random_evidence(rng, m.network, n, q, 3);
    compare_with_oracle(m.network, s, e, q, stats);
  }
  return oracle_verdict(stats);
}

Verdict recursive_oracle_equivalence() {
  testing::Rng rng(7);
  OracleStats stats;
  const ParsedModel symmetric = testing::load_corpus_model("symmetric.rbn");
  const ParsedModel temporal = testing::load_corpus_model("temporal.rbn");
  const ParsedModel functional = testing::load_corpus_model("functional.rbn");
  for (std::size_t n = 1; n <= 3; ++n) {
    for (int i = 0; i < 2; ++i) {
      const Structure s = with_order(Structure(element_names(n)), "leq", random_rank(rng, n), false);
      compare_all(rng, symmetric.network, s, 10, true, stats);
    }
    for (std::size_t points = 1; points <= n; ++points) compare_all(rng, temporal.network, with_chain(n, points), 10, true, stats);
    for (int i = 0; i < 4; ++i) compare_all(rng, functional.network, functional_structure(rng, n), 10, true, stats);
  }
  // Four time points: the chain for one object, without and with evidence
  // at the second time point.
  const Structure chain = with_chain(4, 4);
  Evidence second;
  second.add({"r", {1, 0}}, true);
  for (const Evidence& e : {Evidence{}, second}) {
    for (Element t = 0; t < 4; ++t) {
      if (!e.contains({"r", {t, 0}})) compare_with_oracle(temporal.network, chain, e, {"r", {t, 0}}, stats);
    }
  }
  return oracle_verdict(stats);
}

Verdict robot_against_full_enumeration() {
  const ParsedModel m = testing::load_corpus_model("robot.rbn");
  for (const char* p : {"p0", "p1", "p2"}) {
    if (parameter(m.document, p) != Rational(1, 2)) return {false, std::string(p) + " is not 1/2"};
  }
  const Structure s(std::vector<std::string>{"l1", "l2", "l3", "l4"});
  const GroundAtom q{"s", {0}};
  const auto r = infer<double>(m.network, s, {}, q);
  // Every (b, t) interpretation: 16 + 4 cells.
  const double oracle = brute_force_conditional<double>(m.network, s, {}, q, 20);
  const double delta = std::abs(r.probability - oracle);
  const std::string detail = "VE " + fmt("%.12f", r.probability) + ", enumeration " + fmt("%.12f", oracle) +
                             ", delta " + fmt("%.3g", delta);
  return {delta <= 1e-9, detail};
}

Verdict blocked_path_dependency() {
  std::ostringstream out, err;
  const std::string model = testing::corpus_path("robot.rbn");
  const char* argv[] = {"rbn", "deps", model.c_str(), "s", "b"};
  if (cli::run(5, argv, out, err) != cli::kOk) return {false, "deps failed: " + err.str()};
  const std::string text = out.str();
  const std::string head = "pa[s,b](x1; y1, y2) := ";
  if (text.rfind(head, 0) != 0) return {false, "unexpected output: " + text};
  const std::string formula = text.substr(head.size(), text.find('\n') - head.size());
  const FOFormula phi = parse_fol(formula);
  std::size_t patterns = 0;
  for (std::size_t n = 1; n <= 4; ++n) {
    const Structure s(element_names(n));
    for (Element x = 0; x < n; ++x) {
      for (Element y1 = 0; y1 < n; ++y1) {
        for (Element y2 = 0; y2 < n; ++y2) {
          const bool expected = (y1 == x && y2 != x) || (y1 != x && y2 == x);
          ++patterns;
          if (model_check(phi, s, Binding{{"x1", x}, {"y1", y1}, {"y2", y2}}) != expected) {
            return {false, formula + " disagrees at |D|=" + std::to_string(n)};
          }
        }
      }
    }
  }
  return {true, formula + " (" + std::to_string(patterns) + " assignments)"};
}

Verdict auxiliary_network_shape() {
  const ParsedModel m = testing::load_corpus_model("robot.rbn");
  const ScenarioDocument doc = parse_scenario(testing::read_corpus("robot10.rbs"));
  const BoundScenario scenario = bind_scenario(m.network, doc);
  if (scenario.structure.size() != 10 || !scenario.evidence.empty()) return {false, "robot10 scenario changed"};
  const Element l1 = scenario.structure.element("l1");
  const GroundNetwork g = build_auxiliary_network(m.network, scenario.structure, {}, {"s", {l1}});
  std::set<GroundAtom> expected = {{"s", {l1}}};
  for (Element i = 0; i < 10; ++i) {
    expected.insert({"t", {i}});
    if (i != l1) {
      expected.insert({"b", {l1, i}});
      expected.insert({"b", {i, l1}});
    }
  }
  std::set<GroundAtom> actual;
  for (const auto& node : g.nodes()) actual.insert(node.atom);
  return {actual == expected && g.size() == 29,
          std::to_string(g.size()) + " nodes, " + std::to_string(g.edge_count()) + " edges"};
}

Verdict first_order_round_trip() {
  const std::vector<std::string> corpus = {
      "u(x)",
      "v(x, x)",
      "x = y",
      "!u(x) & x != y",
      "u(x) | v(y, x)",
      "exists z v(x, z)",
      "forall z (u(z) | v(z, z))",
      "exists z (v(x, z) & forall w (v(z, w) | w = x))",
      "forall z exists w (v(z, w) & !u(w))",
      "!(exists z (u(z) & v(z, y)) | forall w !v(w, x))",
      "exists z (z != x & (u(z) | !exists w (v(w, z) & w != y)))",
      "forall z (v(x, z) | !(u(z) & exists w (v(z, w) & w = y)))",
  };
  const std::vector<std::pair<std::string, std::size_t>> vocabulary = {{"u", 1}, {"v", 2}};
  std::vector<FOFormula> phis;
  std::vector<Formula> translated, translated_max;
  for (const std::string& text : corpus) {
    phis.push_back(parse_fol(text));
    translated.push_back(translate(phis.back()));
    translated_max.push_back(translate(phis.back(), {.max_for_or = true}));
  }
  std::size_t checks = 0;
  for (std::size_t n = 1; n <= 3; ++n) {
    const std::size_t bits = n + n * n;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << bits); ++mask) {
      Structure s(element_names(n));
      std::size_t bit = 0;
      for (const auto& [relation, arity] : vocabulary) {
        s.add_relation(relation, arity);
        for (const Tuple& t : all_tuples(n, arity)) s.set(relation, t, (mask >> bit++) & 1);
      }
      for (std::size_t i = 0; i < phis.size(); ++i) {
        for (Element x = 0; x < n; ++x) {
          for (Element y = 0; y < n; ++y) {
            const Binding b{{"x", x}, {"y", y}};
            const Exact expected = model_check(phis[i], s, b) ? 1 : 0;
            checks += 2;
            if (eval_formula<Exact>(translated[i], s, b) != expected ||
                eval_formula<Exact>(translated_max[i], s, b) != expected) {
              return {false, corpus[i] + " disagrees at |D|=" + std::to_string(n)};
            }
          }
        }
      }
    }
  }
  return {true, std::to_string(corpus.size()) + " formulas, " + std::to_string(checks) + " evaluations"};
}

Verdict normalization() {
  testing::Rng rng(99);
  std::size_t sums = 0;
  double worst = 0;
  for (const std::string& file : kCorpus) {
    const ParsedModel m = testing::load_corpus_model(file);
    for (std::size_t n = 1; n <= 3; ++n) {
      for (const Structure& s : corpus_structures(rng, file, n)) {
        double total = 0;
        enumerate_joint<double>(m.network, s, 24, [&](const Structure&, const double& p) { total += p; });
        ++sums;
        worst = std::max(worst, std::abs(total - 1));
        if (std::abs(total - 1) > 1e-9) return {false, file + " sums to " + fmt("%.15g", total)};
      }
    }
  }
  return {true, std::to_string(kCorpus.size()) + " networks, " + std::to_string(sums) + " rigid structures, max |sum-1| " +
                    fmt("%.3g", worst)};
}

Verdict closed_form_marginals() {
  std::vector<std::string> notes;
  // Random function: P(r(x, v_i)) = (1-p_1)...(1-p_{i-1}) p_i.
  {
    const ParsedModel m = testing::load_corpus_model("functional.rbn");
    const BoundScenario sc = bind_scenario(m.network, parse_scenario("domain {e1, e2, e3}\n"
                                                                     "rigid lt = {(e1,e2), (e1,e3), (e2,e3)}\n"
                                                                     "bind v1 = e1\nbind v2 = e2\nbind v3 = e3\n"
                                                                     "query r(e1,e1)\n"));
    Exact keep = 1;
    for (int i = 1; i <= 3; ++i) {
      const Exact p = parameter(m.document, "p" + std::to_string(i)).to_exact();
      const Exact expected = keep * p;
      keep *= 1 - p;
      const Element v = sc.structure.constant("v" + std::to_string(i));
      for (Element x = 0; x < sc.structure.size(); ++x) {
        const GroundAtom q{"r", {x, v}};
        const Exact oracle = brute_force_conditional<Exact>(m.network, sc.structure, {}, q);
        const Exact ve = infer<Exact>(m.network, sc.structure, {}, q).probability;
        if (oracle != expected || ve != expected) {
          return {false, "functional " + to_string(q, sc.structure) + " differs from the closed form"};
        }
      }
    }
    notes.push_back("functional exact");
  }
  // Two-state chain: q_{i+1} = q_i p1 + (1 - q_i) p2.
  {
    const ParsedModel m = testing::load_corpus_model("temporal.rbn");
    const double p0 = parameter(m.document, "p0").to_double();
    const double p1 = parameter(m.document, "p1").to_double();
    const double p2 = parameter(m.document, "p2").to_double();
    double worst = 0;
    for (std::size_t points : {3, 4}) {
      const Structure s = with_chain(points, points);
      for (Element x = 0; x < points; ++x) {
        double q = p0;
        for (Element t = 0; t < points; ++t) {
          const GroundAtom atom{"r", {t, x}};
          const double ve = infer<double>(m.network, s, {}, atom).probability;
          worst = std::max(worst, std::abs(ve - q));
          if (points == 3) worst = std::max(worst, std::abs(brute_force_conditional<double>(m.network, s, {}, atom) - q));
          q = q * p1 + (1 - q) * p2;
        }
      }
    }
    if (worst > 1e-12) return {false, "temporal marginals off by " + fmt("%.3g", worst)};
    notes.push_back("temporal " + fmt("%.2g", worst));
  }
  // Symmetric relation: every pair has marginal p.
  {
    const ParsedModel m = testing::load_corpus_model("symmetric.rbn");
    const double p = parameter(m.document, "p").to_double();
    const Structure s = with_order(Structure(element_names(3)), "leq", {0, 1, 2}, false);
    double worst = 0;
    for (const Tuple& t : all_tuples(3, 2)) {
      const GroundAtom atom{"r", t};
      worst = std::max({worst, std::abs(infer<double>(m.network, s, {}, atom).probability - p),
                        std::abs(brute_force_conditional<double>(m.network, s, {}, atom) - p)});
    }
    if (worst > 1e-12) return {false, "symmetric marginals off by " + fmt("%.3g", worst)};
    notes.push_back("symmetric " + fmt("%.2g", worst));
  }
  return {true, notes[0] + ", " + notes[1] + ", " + notes[2]};
}

Verdict dependency_flip_test() {
  testing::Rng rng(4242);
  std::vector<ParsedModel> corpus;
  for (const std::string& file : kCorpus) corpus.push_back(testing::load_corpus_model(file));
  std::size_t trials = 0, toggles = 0;
  for (int i = 0; i < 1200; ++i) {
    const std::size_t n = 1 + static_cast<std::size_t>(i % 3);
    testing::FlipOutcome outcome;
    if (i % 4 == 3) {
      outcome = testing::flip_trial(rng, corpus[static_cast<std::size_t>(i / 4) % corpus.size()].network, n);
    } else {
      testing::NetworkShape shape;
      shape.rigid = i % 2 == 1;
      const ParsedModel m = parse_model(pretty_print(testing::random_model(rng, shape)));
      outcome = testing::flip_trial(rng, m.network, n);
    }
    ++trials;
    toggles += outcome.toggles;
    if (outcome.violations > 0) return {false, outcome.first_violation};
  }
  return {true, std::to_string(trials) + " trials, " + std::to_string(toggles) + " toggles, 0 violations"};
}

Verdict frontend_round_trip_and_fuzz() {
  testing::Rng rng(31337);
  for (int i = 0; i < 1000; ++i) {
    const ModelDocument doc = i % 2 ? testing::random_document(rng) : testing::random_model(rng, {3, 2, 4, i % 4 == 0});
    const std::string text = pretty_print(doc);
    if (parse_model_unchecked(text).document != doc) return {false, "round trip failed for:\n" + text};
    if (pretty_print(parse_model_unchecked(text).document) != text) return {false, "printing is not stable:\n" + text};
  }
  // Random bytes, and corpus files with random byte edits.
  std::vector<std::string> seeds;
  for (const std::string& file : kCorpus) seeds.push_back(testing::read_corpus(file));
  for (const char* file : {"robot.rbs", "functional.rbs", "symmetric.rbs"}) seeds.push_back(testing::read_corpus(file));
  std::uniform_int_distribution<int> byte(0, 255);
  std::uniform_int_distribution<std::size_t> length(0, 96);
  std::size_t rejected = 0;
  for (int i = 0; i < 1000000; ++i) {
    std::string input;
    if (i % 2 == 0) {
      input.resize(length(rng));
      for (char& c : input) c = static_cast<char>(byte(rng));
    } else {
      input = seeds[static_cast<std::size_t>(i / 2) % seeds.size()];
      std::uniform_int_distribution<std::size_t> at(0, input.size() - 1);
      for (int k = 0; k < 3; ++k) input[at(rng)] = static_cast<char>(byte(rng));
    }
    try {
      switch (i % 3) {
        case 0:
          parse_model(input);
          break;
        case 1:
          parse_scenario(input);
          break;
        default:
          parse_fol(input);
          break;
      }
    } catch (const Error&) {
      ++rejected;
    }
  }
  return {true, "1000 round trips, 1000000 fuzz inputs (" + std::to_string(rejected) + " rejected)"};
}

struct Criterion {
  int id;
  const char* title;
  double limit;  // seconds, 0 for none
  Verdict (*body)();
};

const Criterion kCriteria[] = {
    {1, "oracle equivalence, non-recursive", 60, random_oracle_equivalence},
    {2, "oracle equivalence, recursive corpus", 30, recursive_oracle_equivalence},
    {3, "robot world against 2^20 enumeration", 60, robot_against_full_enumeration},
    {4, "blocked-path parent formula", 0, blocked_path_dependency},
    {5, "auxiliary network shape, |D| = 10", 1, auxiliary_network_shape},
    {6, "first-order translation round trip", 120, first_order_round_trip},
    {7, "normalization of corpus networks", 0, normalization},
    {8, "closed-form marginals", 0, closed_form_marginals},
    {9, "dependency flip test", 0, dependency_flip_test},
    {10, "frontend round trip and fuzzing", 0, frontend_round_trip_and_fuzz},
};

}  // namespace

// With no arguments every criterion runs; otherwise only the given ids.
int main(int argc, char** argv) {
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  std::size_t run = 0, failed = 0;
  for (const Criterion& c : kCriteria) {
    if (!selected.empty() && !selected.contains(c.id)) continue;
    const Outcome o = run_criterion(c.id, c.title, c.limit, c.body);
    std::printf("[%s] %2d %-40s %8.2f s  %s\n", o.verdict.pass ? "PASS" : "FAIL", o.id, o.title.c_str(), o.seconds,
                o.verdict.detail.c_str());
    std::fflush(stdout);
    ++run;
    if (!o.verdict.pass) ++failed;
  }
  std::printf("%zu/%zu criteria passed\n", run - failed, run);
  return failed == 0 && run > 0 ? 0 : 1;
}
