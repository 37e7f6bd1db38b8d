#include "generators.hpp"

#include <fstream>
#include <sstream>

#include "rbn/dependency.hpp"
#include "rbn/errors.hpp"
#include "rbn/evaluator.hpp"

#ifndef RBN_CORPUS_DIR
#error "RBN_CORPUS_DIR must be defined"
#endif

namespace rbn::testing {

namespace {

template <class T>
const T& pick(Rng& rng, const std::vector<T>& items) {
  return items[std::uniform_int_distribution<std::size_t>(0, items.size() - 1)(rng)];
}

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

Rational random_probability(Rng& rng) {
  static const std::vector<Rational> values = {Rational(0),    Rational(1),    Rational(1, 2), Rational(1, 3),
                                               Rational(2, 3), Rational(1, 4), Rational(3, 4), Rational(1, 10),
                                               Rational(9, 10), Rational(2, 5)};
  if (coin(rng, 0.3)) return Rational(static_cast<std::int64_t>(uniform(rng, 0, 20)), 20);
  return pick(rng, values);
}

Term random_term(Rng& rng, const std::vector<std::string>& scope, const std::vector<std::string>& constants) {
  if (!constants.empty() && (scope.empty() || coin(rng, 0.2))) return Term::constant(pick(rng, constants));
  return Term::variable(pick(rng, scope));
}

}  // namespace

Constraint random_constraint(Rng& rng, const std::vector<std::string>& scope, const std::vector<std::string>& constants,
                             const std::vector<std::string>& rigid) {
  const std::size_t kind = uniform(rng, 0, 9);
  if (scope.empty() && constants.empty()) return coin(rng) ? Constraint::truth() : Constraint::falsity();
  switch (kind) {
    case 0:
      return Constraint::truth();
    case 1:
      return coin(rng, 0.2) ? Constraint::falsity() : Constraint::truth();
    case 2:
    case 3:
      return Constraint::equal(random_term(rng, scope, constants), random_term(rng, scope, constants));
    case 4:
    case 5:
      return Constraint::not_equal(random_term(rng, scope, constants), random_term(rng, scope, constants));
    case 6:
      if (!rigid.empty()) {
        return Constraint::rigid(pick(rng, rigid), {random_term(rng, scope, constants), random_term(rng, scope, constants)});
      }
      return Constraint::negate(Constraint::equal(random_term(rng, scope, constants), random_term(rng, scope, constants)));
    case 7:
      return Constraint::conj(random_constraint(rng, scope, constants, rigid), random_constraint(rng, scope, constants, rigid));
    case 8:
      return Constraint::disj(random_constraint(rng, scope, constants, rigid), random_constraint(rng, scope, constants, rigid));
    default:
      return Constraint::negate(random_constraint(rng, scope, constants, rigid));
  }
}

Formula random_formula(Rng& rng, std::size_t depth, std::vector<std::string> scope,
                       const std::vector<std::pair<std::string, std::size_t>>& readable,
                       const std::vector<std::string>& constants, const std::vector<std::string>& rigid) {
  const bool leaf = depth == 0 || coin(rng, 0.3);
  if (leaf) {
    if (!readable.empty() && !scope.empty() && coin(rng, 0.6)) {
      const auto& [relation, arity] = pick(rng, readable);
      std::vector<Term> args;
      for (std::size_t i = 0; i < arity; ++i) args.push_back(random_term(rng, scope, constants));
      return Formula::indicator(relation, std::move(args));
    }
    return Formula::constant(random_probability(rng));
  }
  if (coin(rng)) {
    return Formula::convex(random_formula(rng, depth - 1, scope, readable, constants, rigid),
                           random_formula(rng, depth - 1, scope, readable, constants, rigid),
                           random_formula(rng, depth - 1, scope, readable, constants, rigid));
  }
  static const std::vector<std::string> functions = {"noisyor", "max", "min", "mean"};
  std::vector<std::string> bound;
  const std::size_t n_bound = uniform(rng, 0, 2);
  for (std::size_t i = 0; i < n_bound; ++i) {
    bound.push_back("z" + std::to_string(depth) + std::string(1, static_cast<char>('a' + i)));
  }
  std::vector<std::string> inner = scope;
  inner.insert(inner.end(), bound.begin(), bound.end());
  std::vector<Formula> args;
  const std::size_t n_args = uniform(rng, 1, 2);
  for (std::size_t i = 0; i < n_args; ++i) args.push_back(random_formula(rng, depth - 1, inner, readable, constants, rigid));
  return Formula::comb(pick(rng, functions), std::move(args), std::move(bound),
                       random_constraint(rng, inner, constants, rigid));
}

ModelDocument random_model(Rng& rng, const NetworkShape& shape) {
  ModelDocument doc;
  std::vector<std::string> constants, rigid;
  if (shape.rigid) {
    doc.items.push_back(RigidDecl{"rel", 2});
    doc.items.push_back(ConstantDecl{"k"});
    constants.push_back("k");
    rigid.push_back("rel");
  }
  const std::size_t n = uniform(rng, 1, shape.max_relations);
  std::vector<std::pair<std::string, std::size_t>> relations;
  for (std::size_t i = 0; i < n; ++i) {
    relations.emplace_back("r" + std::to_string(i), uniform(rng, 1, shape.max_arity));
    doc.items.push_back(RelationDecl{relations.back().first, relations.back().second});
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> params;
    for (std::size_t k = 0; k < relations[i].second; ++k) params.push_back("x" + std::to_string(k + 1));
    const std::vector<std::pair<std::string, std::size_t>> readable(relations.begin(), relations.begin() + i);
    doc.items.push_back(LabelDecl{relations[i].first, params,
                                  random_formula(rng, shape.max_depth, params, readable, constants, rigid)});
  }
  return doc;
}

ModelDocument random_document(Rng& rng) {
  ModelDocument doc;
  std::vector<std::string> constants, rigid;
  std::vector<std::pair<std::string, std::size_t>> relations;
  const std::size_t n_items = uniform(rng, 1, 8);
  for (std::size_t i = 0; i < n_items; ++i) {
    const std::string id = std::to_string(i);
    switch (uniform(rng, 0, 5)) {
      case 0:
        relations.emplace_back("p" + id, uniform(rng, 1, 3));
        doc.items.push_back(RelationDecl{relations.back().first, relations.back().second});
        break;
      case 1:
        rigid.push_back("g" + id);
        doc.items.push_back(RigidDecl{rigid.back(), 2});
        break;
      case 2:
        constants.push_back("c" + id);
        doc.items.push_back(ConstantDecl{constants.back()});
        break;
      case 3: {
        std::vector<Rational> table;
        const std::size_t len = uniform(rng, 1, 4);
        for (std::size_t k = 0; k < len; ++k) table.emplace_back(static_cast<std::int64_t>(uniform(rng, 0, 3)), 16);
        doc.items.push_back(CombfunDecl{"f" + id, table});
        break;
      }
      case 4:
        doc.items.push_back(ParameterDecl{"q" + id, random_probability(rng)});
        break;
      default: {
        std::vector<std::string> params;
        const std::size_t arity = uniform(rng, 0, 3);
        for (std::size_t k = 0; k < arity; ++k) params.push_back("x" + std::to_string(k + 1));
        doc.items.push_back(LabelDecl{"l" + id, params, random_formula(rng, 4, params, relations, constants, rigid)});
        break;
      }
    }
  }
  return doc;
}

FOFormula random_fol(Rng& rng, std::size_t depth, std::vector<std::string> scope) {
  if (depth == 0 || coin(rng, 0.25)) {
    if (!scope.empty() && coin(rng, 0.8)) {
      if (coin(rng, 0.3)) return FOFormula::equal(pick(rng, scope), pick(rng, scope));
      if (coin(rng)) return FOFormula::atom("u", {pick(rng, scope)});
      return FOFormula::atom("v", {pick(rng, scope), pick(rng, scope)});
    }
    return FOFormula::truth(coin(rng));
  }
  switch (uniform(rng, 0, 5)) {
    case 0:
      return FOFormula::negate(random_fol(rng, depth - 1, scope));
    case 1:
      return FOFormula::conj(random_fol(rng, depth - 1, scope), random_fol(rng, depth - 1, scope));
    case 2:
      return FOFormula::disj(random_fol(rng, depth - 1, scope), random_fol(rng, depth - 1, scope));
    default: {
      std::string y = "y" + std::to_string(depth);
      scope.push_back(y);
      FOFormula body = random_fol(rng, depth - 1, scope);
      return coin(rng) ? FOFormula::exists(y, body) : FOFormula::forall(y, body);
    }
  }
}

Structure random_structure(Rng& rng, const RelationalNetwork& network, std::size_t domain_size) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < domain_size; ++i) names.push_back("e" + std::to_string(i));
  Structure s(names);
  for (const auto& [relation, arity] : network.vocabulary().rigid()) {
    s.add_relation(relation, arity, Truth::False);
    for (const Tuple& t : all_tuples(domain_size, arity)) s.set(relation, t, coin(rng));
  }
  for (const std::string& c : network.vocabulary().constants()) {
    s.bind_constant(c, static_cast<Element>(uniform(rng, 0, domain_size - 1)));
  }
  return s;
}

Structure random_full_structure(Rng& rng, const std::vector<std::pair<std::string, std::size_t>>& relations,
                                std::size_t domain_size) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < domain_size; ++i) names.push_back("e" + std::to_string(i));
  Structure s(names);
  for (const auto& [relation, arity] : relations) {
    s.add_relation(relation, arity, Truth::False);
    for (const Tuple& t : all_tuples(domain_size, arity)) s.set(relation, t, coin(rng));
  }
  return s;
}

GroundAtom random_atom(Rng& rng, const RelationalNetwork& network, std::size_t domain_size) {
  std::vector<std::pair<std::string, std::size_t>> relations(network.vocabulary().probabilistic().begin(),
                                                             network.vocabulary().probabilistic().end());
  const auto& [relation, arity] = pick(rng, relations);
  GroundAtom a{relation, {}};
  for (std::size_t i = 0; i < arity; ++i) a.args.push_back(static_cast<Element>(uniform(rng, 0, domain_size - 1)));
  return a;
}

Evidence random_evidence(Rng& rng, const RelationalNetwork& network, std::size_t domain_size, const GroundAtom& query,
                         std::size_t max_literals) {
  Evidence e;
  const std::size_t n = uniform(rng, 0, max_literals);
  for (std::size_t i = 0; i < n; ++i) {
    GroundAtom a = random_atom(rng, network, domain_size);
    if (a == query || e.contains(a)) continue;
    e.add(std::move(a), coin(rng));
  }
  return e;
}

FlipOutcome flip_trial(Rng& rng, const RelationalNetwork& network, std::size_t domain_size) {
  FlipOutcome outcome;
  Structure s = with_probabilistic_relations(network, random_structure(rng, network, domain_size));
  for (const auto& [relation, arity] : network.vocabulary().probabilistic()) {
    for (const Tuple& t : all_tuples(domain_size, arity)) s.set(relation, t, coin(rng));
  }
  const GroundAtom target = random_atom(rng, network, domain_size);
  const Exact base = atom_probability<Exact>(network, s, target);
  for (const auto& [relation, arity] : network.vocabulary().probabilistic()) {
    const DependencyFormula pa = parent_formula(network, target.relation, relation);
    for (const Tuple& t : all_tuples(domain_size, arity)) {
      if (eval_dependency(pa, s, target.args, t)) continue;
      const bool old = s.holds(relation, t);
      s.set(relation, t, !old);
      const Exact flipped = atom_probability<Exact>(network, s, target);
      s.set(relation, t, old);
      ++outcome.toggles;
      if (flipped != base) {
        if (outcome.violations++ == 0) {
          outcome.first_violation = to_string(target, s) + " changes when " + to_string(GroundAtom{relation, t}, s) +
                                    " is toggled";
        }
      }
    }
  }
  return outcome;
}

std::string corpus_path(const std::string& file) { return std::string(RBN_CORPUS_DIR) + "/" + file; }

std::string read_corpus(const std::string& file) {
  std::ifstream in(corpus_path(file));
  if (!in) throw Error("cannot open corpus file " + file);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

ParsedModel load_corpus_model(const std::string& file) { return parse_model(read_corpus(file)); }

}  // namespace rbn::testing
