#include "rbn/model.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "rbn/errors.hpp"

namespace rbn {

// ---------------------------------------------------------------- Constraint

Constraint::Constraint() : node_(std::make_shared<const Node>(True{})) {}

Constraint Constraint::truth() { return Constraint(); }
Constraint Constraint::falsity() { return Constraint(std::make_shared<const Node>(False{})); }

Constraint Constraint::equal(Term lhs, Term rhs) {
  return Constraint(std::make_shared<const Node>(Equal{std::move(lhs), std::move(rhs)}));
}

Constraint Constraint::not_equal(Term lhs, Term rhs) { return negate(equal(std::move(lhs), std::move(rhs))); }

Constraint Constraint::rigid(std::string relation, std::vector<Term> args) {
  return Constraint(std::make_shared<const Node>(Rigid{std::move(relation), std::move(args)}));
}

Constraint Constraint::negate(Constraint operand) {
  return Constraint(std::make_shared<const Node>(Not{std::move(operand)}));
}

Constraint Constraint::conj(Constraint lhs, Constraint rhs) {
  return Constraint(std::make_shared<const Node>(And{std::move(lhs), std::move(rhs)}));
}

Constraint Constraint::disj(Constraint lhs, Constraint rhs) {
  return Constraint(std::make_shared<const Node>(Or{std::move(lhs), std::move(rhs)}));
}

bool operator==(const Constraint& a, const Constraint& b) {
  return a.node_ == b.node_ || *a.node_ == *b.node_;
}

// ------------------------------------------------------------------ Formula

Formula::Formula() : node_(std::make_shared<const Node>(Const{Rational(0)})) {}

Formula Formula::constant(Rational value) { return Formula(std::make_shared<const Node>(Const{value})); }

Formula Formula::indicator(std::string relation, std::vector<Term> args) {
  return Formula(std::make_shared<const Node>(Indicator{std::move(relation), std::move(args)}));
}

Formula Formula::convex(Formula weight, Formula if_true, Formula if_false) {
  return Formula(std::make_shared<const Node>(Convex{std::move(weight), std::move(if_true), std::move(if_false)}));
}

Formula Formula::comb(std::string function, std::vector<Formula> args, std::vector<std::string> bound,
                      Constraint constraint) {
  return Formula(std::make_shared<const Node>(
      Comb{std::move(function), std::move(args), std::move(bound), std::move(constraint)}));
}

Formula Formula::product(Formula a, Formula b) { return convex(std::move(a), std::move(b), constant(Rational(0))); }

Formula Formula::complement(Formula a) { return convex(std::move(a), constant(Rational(0)), constant(Rational(1))); }

bool operator==(const Formula& a, const Formula& b) { return a.node_ == b.node_ || *a.node_ == *b.node_; }

// ----------------------------------------------------------- free variables

namespace {

void collect_terms(const std::vector<Term>& terms, std::set<std::string>& out) {
  for (const Term& t : terms) {
    if (t.is_variable()) out.insert(t.name);
  }
}

void collect(const Constraint& c, std::set<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Constraint::Equal>) {
          collect_terms({n.lhs, n.rhs}, out);
        } else if constexpr (std::is_same_v<T, Constraint::Rigid>) {
          collect_terms(n.args, out);
        } else if constexpr (std::is_same_v<T, Constraint::Not>) {
          collect(n.operand, out);
        } else if constexpr (std::is_same_v<T, Constraint::And> || std::is_same_v<T, Constraint::Or>) {
          collect(n.lhs, out);
          collect(n.rhs, out);
        }
      },
      c.node());
}

}  // namespace

std::set<std::string> free_vars(const Constraint& c) {
  std::set<std::string> out;
  collect(c, out);
  return out;
}

std::set<std::string> free_vars(const Formula& f) {
  std::set<std::string> out;
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Formula::Indicator>) {
          collect_terms(n.args, out);
        } else if constexpr (std::is_same_v<T, Formula::Convex>) {
          for (const Formula* sub : {&n.weight, &n.if_true, &n.if_false}) out.merge(free_vars(*sub));
        } else if constexpr (std::is_same_v<T, Formula::Comb>) {
          std::set<std::string> inner = free_vars(n.constraint);
          for (const Formula& arg : n.args) inner.merge(free_vars(arg));
          for (const std::string& z : n.bound) inner.erase(z);
          out.merge(inner);
        }
      },
      f.node());
  return out;
}

std::set<std::string> mentioned_relations(const Formula& f) {
  std::set<std::string> out;
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Formula::Indicator>) {
          out.insert(n.relation);
        } else if constexpr (std::is_same_v<T, Formula::Convex>) {
          for (const Formula* sub : {&n.weight, &n.if_true, &n.if_false}) out.merge(mentioned_relations(*sub));
        } else if constexpr (std::is_same_v<T, Formula::Comb>) {
          for (const Formula& arg : n.args) out.merge(mentioned_relations(arg));
        }
      },
      f.node());
  return out;
}

// --------------------------------------------------------------- Vocabulary

void Vocabulary::check_fresh(const std::string& name) const {
  if (name == "=") throw Error("equality is built in and cannot be declared");
  if (name.empty()) throw Error("empty symbol name");
  if (probabilistic_.contains(name) || rigid_.contains(name) || constants_.contains(name)) {
    throw Error("symbol '" + name + "' is declared twice");
  }
}

void Vocabulary::add_probabilistic(std::string name, std::size_t arity) {
  check_fresh(name);
  if (arity == 0) throw Error("relation '" + name + "' must have arity >= 1");
  probabilistic_.emplace(std::move(name), arity);
}

void Vocabulary::add_rigid(std::string name, std::size_t arity) {
  check_fresh(name);
  if (arity == 0) throw Error("rigid relation '" + name + "' must have arity >= 1");
  rigid_.emplace(std::move(name), arity);
}

void Vocabulary::add_constant(std::string name) {
  check_fresh(name);
  constants_.insert(std::move(name));
}

bool Vocabulary::is_probabilistic(std::string_view name) const { return probabilistic_.contains(std::string(name)); }
bool Vocabulary::is_rigid(std::string_view name) const { return rigid_.contains(std::string(name)); }
bool Vocabulary::is_constant(std::string_view name) const { return constants_.contains(std::string(name)); }

std::size_t Vocabulary::arity(std::string_view relation) const {
  const std::string key(relation);
  if (auto it = probabilistic_.find(key); it != probabilistic_.end()) return it->second;
  if (auto it = rigid_.find(key); it != rigid_.end()) return it->second;
  throw Error("undeclared relation '" + key + "'");
}

// -------------------------------------------------------- RelationalNetwork

RelationalNetwork::RelationalNetwork(Vocabulary vocabulary, CombinationRegistry registry)
    : vocabulary_(std::move(vocabulary)), registry_(std::move(registry)) {}

void RelationalNetwork::set_label(const std::string& relation, std::vector<std::string> params, Formula body) {
  std::set<std::string> parents = mentioned_relations(body);
  parents.erase(relation);
  set_label(relation, std::move(params), std::move(body), std::move(parents));
}

void RelationalNetwork::set_label(const std::string& relation, std::vector<std::string> params, Formula body,
                                  std::set<std::string> parents) {
  parents.erase(relation);
  labels_.insert_or_assign(relation, Label{std::move(params), std::move(body)});
  parents_.insert_or_assign(relation, std::move(parents));
}

bool RelationalNetwork::has_label(std::string_view relation) const { return labels_.find(relation) != labels_.end(); }

std::vector<std::string> RelationalNetwork::labeled_relations() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : labels_) out.push_back(name);
  return out;
}

const Label& RelationalNetwork::label(std::string_view relation) const {
  auto it = labels_.find(relation);
  if (it == labels_.end()) throw Error("relation '" + std::string(relation) + "' has no label");
  return it->second;
}

const std::set<std::string>& RelationalNetwork::parents(std::string_view relation) const {
  static const std::set<std::string> none;
  auto it = parents_.find(relation);
  return it == parents_.end() ? none : it->second;
}

std::set<std::string> RelationalNetwork::children(std::string_view relation) const {
  std::set<std::string> out;
  for (const auto& [name, ps] : parents_) {
    if (ps.contains(std::string(relation))) out.insert(name);
  }
  return out;
}

bool RelationalNetwork::is_recursive(std::string_view relation) const {
  auto it = labels_.find(relation);
  return it != labels_.end() && mentioned_relations(it->second.body).contains(std::string(relation));
}

bool RelationalNetwork::any_recursive() const {
  return std::any_of(labels_.begin(), labels_.end(), [&](const auto& kv) { return is_recursive(kv.first); });
}

std::vector<std::string> RelationalNetwork::topological_order() const {
  std::map<std::string, std::size_t> pending;
  for (const auto& [name, _] : vocabulary_.probabilistic()) pending[name] = 0;
  for (const auto& [name, ps] : parents_) {
    for (const std::string& p : ps) {
      if (pending.contains(p)) ++pending[name];
    }
  }
  std::set<std::string> ready;
  for (const auto& [name, n] : pending) {
    if (n == 0) ready.insert(name);
  }
  std::vector<std::string> order;
  while (!ready.empty()) {
    std::string next = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(next);
    for (const std::string& child : children(next)) {
      if (pending.contains(child) && --pending[child] == 0) ready.insert(child);
    }
  }
  if (order.size() != pending.size()) throw Error("relation graph has a cycle");
  return order;
}

// --------------------------------------------------------------- validation

bool ValidationReport::has(Violation::Kind kind) const {
  return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.kind == kind; });
}

std::string ValidationReport::to_string() const {
  std::ostringstream out;
  for (const Violation& v : violations) {
    if (!v.relation.empty()) out << v.relation << ": ";
    out << v.message << '\n';
  }
  return out.str();
}

namespace {

class LabelChecker {
 public:
  LabelChecker(const RelationalNetwork& network, const std::string& relation, ValidationReport& report)
      : network_(network), vocabulary_(network.vocabulary()), relation_(relation), report_(report) {}

  void check(const Label& label) {
    const std::size_t arity = vocabulary_.arity(relation_);
    if (label.params.size() != arity) {
      add(Violation::Kind::ArityMismatch, "label has " + std::to_string(label.params.size()) +
                                              " parameters but the relation has arity " + std::to_string(arity));
    }
    std::set<std::string> seen;
    for (const std::string& p : label.params) {
      if (!seen.insert(p).second) add(Violation::Kind::DuplicateParameter, "parameter '" + p + "' repeated");
      scope_.push_back(p);
    }
    visit(label.body);
  }

 private:
  void add(Violation::Kind kind, std::string message) {
    report_.violations.push_back({kind, relation_, std::move(message)});
  }

  bool in_scope(const std::string& v) const { return std::find(scope_.begin(), scope_.end(), v) != scope_.end(); }

  void check_terms(const std::vector<Term>& terms) {
    for (const Term& t : terms) {
      if (t.is_variable()) {
        if (!in_scope(t.name)) add(Violation::Kind::StrayFreeVariable, "variable '" + t.name + "' is not bound");
      } else if (!vocabulary_.is_constant(t.name)) {
        add(Violation::Kind::UnknownSymbol, "undeclared constant '" + t.name + "'");
      }
    }
  }

  void visit(const Constraint& c) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Constraint::Equal>) {
            check_terms({n.lhs, n.rhs});
          } else if constexpr (std::is_same_v<T, Constraint::Rigid>) {
            if (!vocabulary_.is_rigid(n.relation)) {
              add(Violation::Kind::UnknownSymbol, "'" + n.relation + "' is not a rigid relation");
            } else if (vocabulary_.arity(n.relation) != n.args.size()) {
              add(Violation::Kind::ArityMismatch, "rigid atom " + n.relation + " has wrong arity");
            }
            check_terms(n.args);
          } else if constexpr (std::is_same_v<T, Constraint::Not>) {
            visit(n.operand);
          } else if constexpr (std::is_same_v<T, Constraint::And> || std::is_same_v<T, Constraint::Or>) {
            visit(n.lhs);
            visit(n.rhs);
          }
        },
        c.node());
  }

  void visit(const Formula& f) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Formula::Const>) {
            if (!n.value.in_unit_interval()) {
              add(Violation::Kind::ConstantOutOfRange, "constant " + n.value.to_string() + " is outside [0,1]");
            }
          } else if constexpr (std::is_same_v<T, Formula::Indicator>) {
            if (!vocabulary_.is_probabilistic(n.relation)) {
              add(Violation::Kind::UnknownSymbol, "'" + n.relation + "' is not a probabilistic relation");
            } else {
              if (vocabulary_.arity(n.relation) != n.args.size()) {
                add(Violation::Kind::ArityMismatch, "indicator " + n.relation + " has " +
                                                        std::to_string(n.args.size()) + " arguments, expected " +
                                                        std::to_string(vocabulary_.arity(n.relation)));
              }
              if (n.relation != relation_ && !network_.parents(relation_).contains(n.relation)) {
                add(Violation::Kind::NonParentSymbol, "label reads non-parent symbol '" + n.relation + "'");
              }
            }
            check_terms(n.args);
          } else if constexpr (std::is_same_v<T, Formula::Convex>) {
            visit(n.weight);
            visit(n.if_true);
            visit(n.if_false);
          } else if constexpr (std::is_same_v<T, Formula::Comb>) {
            if (!network_.registry().contains(n.function)) {
              add(Violation::Kind::UnknownCombination, "unknown combination function '" + n.function + "'");
            }
            if (n.args.empty()) add(Violation::Kind::EmptyCombination, "combination term without arguments");
            const std::size_t mark = scope_.size();
            for (const std::string& z : n.bound) scope_.push_back(z);
            visit(n.constraint);
            for (const Formula& arg : n.args) visit(arg);
            scope_.resize(mark);
          }
        },
        f.node());
  }

  const RelationalNetwork& network_;
  const Vocabulary& vocabulary_;
  const std::string& relation_;
  ValidationReport& report_;
  std::vector<std::string> scope_;
};

// DFS over the parent graph; reports one cycle as "a -> b -> a".
void find_cycle(const RelationalNetwork& network, ValidationReport& report) {
  const auto& relations = network.vocabulary().probabilistic();
  std::map<std::string, int> color;
  std::vector<std::string> stack;
  std::function<bool(const std::string&)> dfs = [&](const std::string& r) {
    color[r] = 1;
    stack.push_back(r);
    for (const std::string& p : network.parents(r)) {
      if (!relations.contains(p)) continue;
      if (color[p] == 1) {
        auto start = std::find(stack.begin(), stack.end(), p);
        std::string path;
        for (auto it = start; it != stack.end(); ++it) path += *it + " -> ";
        report.violations.push_back({Violation::Kind::Cycle, "", "cycle: " + path + p});
        return true;
      }
      if (color[p] == 0 && dfs(p)) return true;
    }
    stack.pop_back();
    color[r] = 2;
    return false;
  };
  for (const auto& [name, _] : relations) {
    if (color[name] == 0 && dfs(name)) return;
  }
}

}  // namespace

ValidationReport validate_network(const RelationalNetwork& network) {
  ValidationReport report;
  const Vocabulary& vocabulary = network.vocabulary();
  for (const auto& [name, _] : vocabulary.probabilistic()) {
    if (!network.has_label(name)) {
      report.violations.push_back({Violation::Kind::MissingLabel, name, "relation has no label"});
      continue;
    }
    for (const std::string& p : network.parents(name)) {
      if (!vocabulary.is_probabilistic(p)) {
        report.violations.push_back({Violation::Kind::UnknownSymbol, name, "parent '" + p + "' is not declared"});
      }
    }
    LabelChecker(network, name, report).check(network.label(name));
  }
  for (const std::string& name : network.labeled_relations()) {
    if (!vocabulary.is_probabilistic(name)) {
      report.violations.push_back({Violation::Kind::UnknownSymbol, name, "label for undeclared relation"});
    }
  }
  find_cycle(network, report);
  return report;
}

}  // namespace rbn
