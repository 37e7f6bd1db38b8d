#include "rbn/dependency.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "rbn/errors.hpp"
#include "rbn/evaluator.hpp"

namespace rbn {

namespace {

using Conjuncts = std::vector<DepConjunct>;
using Substitution = std::map<std::string, Term>;

Term substitute(const Term& t, const Substitution& sub) {
  if (!t.is_variable()) return t;
  auto it = sub.find(t.name);
  return it == sub.end() ? t : it->second;
}

DepConjunct substitute(const DepConjunct& c, const Substitution& sub) {
  DepConjunct out;
  for (const std::string& z : c.exists) {
    auto it = sub.find(z);
    out.exists.push_back(it == sub.end() ? z : it->second.name);
  }
  for (const DepLiteral& lit : c.literals) {
    DepLiteral l = lit;
    for (Term& t : l.args) t = substitute(t, sub);
    out.literals.push_back(std::move(l));
  }
  return out;
}

void orient(DepLiteral& lit) {
  if ((lit.kind == DepLiteral::Kind::Equal || lit.kind == DepLiteral::Kind::NotEqual) && lit.args[1] < lit.args[0]) {
    std::swap(lit.args[0], lit.args[1]);
  }
}

// Eliminates existential variables equated with other terms, detects
// syntactic contradictions, and drops duplicate literals. nullopt means the
// conjunct is unsatisfiable.
std::optional<DepConjunct> simplify(const DepConjunct& c) {
  const std::set<std::string> existential(c.exists.begin(), c.exists.end());
  auto is_existential = [&](const Term& t) { return t.is_variable() && existential.contains(t.name); };

  std::map<Term, Term> parent;
  std::function<Term(const Term&)> find = [&](const Term& t) -> Term {
    auto it = parent.find(t);
    if (it == parent.end() || it->second == t) return t;
    Term root = find(it->second);
    parent[t] = root;
    return root;
  };
  for (const DepLiteral& lit : c.literals) {
    if (lit.kind != DepLiteral::Kind::Equal) continue;
    for (const Term& t : lit.args) parent.try_emplace(t, t);
    Term a = find(lit.args[0]);
    Term b = find(lit.args[1]);
    if (a != b) parent[b] = a;
  }

  std::map<Term, std::vector<Term>> classes;
  for (const auto& [t, _] : parent) classes[find(t)].push_back(t);

  // Representative: free variable, then constant, then existential.
  auto preference = [&](const Term& t) { return is_existential(t) ? 2 : (t.is_variable() ? 0 : 1); };
  std::map<Term, Term> representative;
  std::vector<DepLiteral> literals;
  for (auto& [root, members] : classes) {
    std::sort(members.begin(), members.end(), [&](const Term& a, const Term& b) {
      return std::pair(preference(a), a) < std::pair(preference(b), b);
    });
    representative[root] = members.front();
    std::vector<Term> rigid_members;
    for (const Term& m : members) {
      if (!is_existential(m)) rigid_members.push_back(m);
    }
    for (std::size_t i = 1; i < rigid_members.size(); ++i) {
      literals.push_back(DepLiteral::equal(rigid_members[0], rigid_members[i]));
    }
  }
  auto rep = [&](const Term& t) {
    auto it = parent.find(t);
    return it == parent.end() ? t : representative.at(find(t));
  };

  for (const DepLiteral& lit : c.literals) {
    if (lit.kind == DepLiteral::Kind::Equal) continue;
    DepLiteral l = lit;
    for (Term& t : l.args) t = rep(t);
    if (l.kind == DepLiteral::Kind::NotEqual && l.args[0] == l.args[1]) return std::nullopt;
    literals.push_back(std::move(l));
  }
  for (DepLiteral& l : literals) orient(l);
  std::sort(literals.begin(), literals.end());
  literals.erase(std::unique(literals.begin(), literals.end()), literals.end());

  for (const DepLiteral& l : literals) {
    if (l.kind != DepLiteral::Kind::Rigid) continue;
    DepLiteral negated = l;
    negated.kind = DepLiteral::Kind::NotRigid;
    if (std::binary_search(literals.begin(), literals.end(), negated)) return std::nullopt;
  }

  DepConjunct out;
  out.literals = std::move(literals);
  for (const std::string& z : c.exists) {
    bool used = std::any_of(out.literals.begin(), out.literals.end(), [&](const DepLiteral& l) {
      return std::any_of(l.args.begin(), l.args.end(), [&](const Term& t) { return t == Term::variable(z); });
    });
    if (used && std::find(out.exists.begin(), out.exists.end(), z) == out.exists.end()) out.exists.push_back(z);
  }
  return out;
}

// Renames the existential variables of `c` to prefix1, prefix2, ... in order
// of first occurrence.
DepConjunct canonicalize(const DepConjunct& c, const std::string& prefix) {
  std::vector<std::string> order;
  for (const DepLiteral& l : c.literals) {
    for (const Term& t : l.args) {
      if (t.is_variable() && std::find(c.exists.begin(), c.exists.end(), t.name) != c.exists.end() &&
          std::find(order.begin(), order.end(), t.name) == order.end()) {
        order.push_back(t.name);
      }
    }
  }
  Substitution sub;
  for (std::size_t i = 0; i < order.size(); ++i) sub[order[i]] = Term::variable(prefix + std::to_string(i + 1));
  DepConjunct out = substitute(c, sub);
  out.exists.clear();
  for (std::size_t i = 0; i < order.size(); ++i) out.exists.push_back(prefix + std::to_string(i + 1));
  for (DepLiteral& l : out.literals) orient(l);
  std::sort(out.literals.begin(), out.literals.end());
  return out;
}

bool subset(const std::vector<DepLiteral>& a, const std::vector<DepLiteral>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// Deletes duplicate disjuncts and disjuncts implied by a quantifier-free one.
Conjuncts prune(Conjuncts ds) {
  std::sort(ds.begin(), ds.end());
  ds.erase(std::unique(ds.begin(), ds.end()), ds.end());
  Conjuncts out;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    bool implied = false;
    for (std::size_t j = 0; j < ds.size() && !implied; ++j) {
      if (i == j || !ds[j].exists.empty()) continue;
      if (subset(ds[j].literals, ds[i].literals) && (ds[j].literals.size() < ds[i].literals.size() || j < i)) {
        implied = true;
      }
    }
    if (!implied) out.push_back(ds[i]);
  }
  return out;
}

Conjuncts simplify_all(const Conjuncts& ds, const std::string& prefix) {
  Conjuncts out;
  for (const DepConjunct& d : ds) {
    if (auto s = simplify(d)) out.push_back(canonicalize(*s, prefix));
  }
  return prune(std::move(out));
}

// Negation normal form, then DNF.
std::vector<std::vector<DepLiteral>> constraint_dnf(const Constraint& c, bool negated,
                                                    const std::function<Term(const Term&)>& rename) {
  using Dnf = std::vector<std::vector<DepLiteral>>;
  auto cross = [](const Dnf& a, const Dnf& b) {
    Dnf out;
    for (const auto& x : a) {
      for (const auto& y : b) {
        auto z = x;
        z.insert(z.end(), y.begin(), y.end());
        out.push_back(std::move(z));
      }
    }
    return out;
  };
  return std::visit(
      [&](const auto& n) -> Dnf {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Constraint::True>) {
          return negated ? Dnf{} : Dnf{{}};
        } else if constexpr (std::is_same_v<T, Constraint::False>) {
          return negated ? Dnf{{}} : Dnf{};
        } else if constexpr (std::is_same_v<T, Constraint::Equal>) {
          auto kind = negated ? DepLiteral::Kind::NotEqual : DepLiteral::Kind::Equal;
          return Dnf{{DepLiteral{kind, {}, {rename(n.lhs), rename(n.rhs)}}}};
        } else if constexpr (std::is_same_v<T, Constraint::Rigid>) {
          DepLiteral lit{negated ? DepLiteral::Kind::NotRigid : DepLiteral::Kind::Rigid, n.relation, {}};
          for (const Term& t : n.args) lit.args.push_back(rename(t));
          return Dnf{{lit}};
        } else if constexpr (std::is_same_v<T, Constraint::Not>) {
          return constraint_dnf(n.operand, !negated, rename);
        } else {
          const bool conjunctive = std::is_same_v<T, Constraint::And> != negated;
          Dnf lhs = constraint_dnf(n.lhs, negated, rename);
          Dnf rhs = constraint_dnf(n.rhs, negated, rename);
          if (conjunctive) return cross(lhs, rhs);
          lhs.insert(lhs.end(), rhs.begin(), rhs.end());
          return lhs;
        }
      },
      c.node());
}

std::vector<std::string> numbered(const std::string& prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

// Structural induction over the label of r, collecting atoms of `target`.
class ParentBuilder {
 public:
  ParentBuilder(std::string target, std::vector<std::string> target_vars)
      : target_(std::move(target)), target_vars_(std::move(target_vars)) {}

  void bind(const std::string& user, const std::string& canonical) { env_.emplace_back(user, canonical); }

  Conjuncts visit(const Formula& f) {
    return std::visit([&](const auto& n) { return visit_node(n); }, f.node());
  }

 private:
  Term rename(const Term& t) const {
    if (!t.is_variable()) return t;
    for (auto it = env_.rbegin(); it != env_.rend(); ++it) {
      if (it->first == t.name) return Term::variable(it->second);
    }
    throw Error("variable '" + t.name + "' is not bound in the label");
  }

  Conjuncts visit_node(const Formula::Const&) { return {}; }

  Conjuncts visit_node(const Formula::Indicator& n) {
    if (n.relation != target_) return {};
    DepConjunct c;
    for (std::size_t j = 0; j < n.args.size() && j < target_vars_.size(); ++j) {
      c.literals.push_back(DepLiteral::equal(Term::variable(target_vars_[j]), rename(n.args[j])));
    }
    return simplify_all({c}, "_c");
  }

  Conjuncts visit_node(const Formula::Convex& n) {
    Conjuncts out = visit(n.weight);
    for (const Formula* sub : {&n.if_true, &n.if_false}) {
      Conjuncts more = visit(*sub);
      out.insert(out.end(), more.begin(), more.end());
    }
    return prune(std::move(out));
  }

  Conjuncts visit_node(const Formula::Comb& n) {
    std::vector<std::string> fresh;
    for (const std::string& z : n.bound) {
      fresh.push_back("_z" + std::to_string(++counter_));
      bind(z, fresh.back());
    }
    Conjuncts inner;
    for (const Formula& arg : n.args) {
      Conjuncts more = visit(arg);
      inner.insert(inner.end(), more.begin(), more.end());
    }
    Conjuncts out;
    if (!inner.empty()) {
      const auto guards = constraint_dnf(n.constraint, false, [&](const Term& t) { return rename(t); });
      for (const auto& guard : guards) {
        for (const DepConjunct& d : inner) {
          DepConjunct c = d;
          c.exists.insert(c.exists.end(), fresh.begin(), fresh.end());
          c.literals.insert(c.literals.end(), guard.begin(), guard.end());
          out.push_back(std::move(c));
        }
      }
    }
    env_.resize(env_.size() - n.bound.size());
    return simplify_all(out, "_c");
  }

  std::string target_;
  std::vector<std::string> target_vars_;
  std::vector<std::pair<std::string, std::string>> env_;
  std::size_t counter_ = 0;
};

DependencyFormula finish(std::vector<std::string> source, std::vector<std::string> target, const Conjuncts& ds) {
  return DependencyFormula{std::move(source), std::move(target), simplify_all(ds, "z")};
}

// exists w (a(x; w) & b(w; y))
DependencyFormula compose(const DependencyFormula& a, const DependencyFormula& b) {
  std::size_t counter = 0;
  std::vector<std::string> middle;
  Substitution to_middle_a, to_middle_b;
  for (std::size_t i = 0; i < a.target.size(); ++i) {
    middle.push_back("_w" + std::to_string(i + 1));
    to_middle_a[a.target[i]] = Term::variable(middle.back());
    to_middle_b[b.source[i]] = Term::variable(middle.back());
  }
  auto apart = [&](const DepConjunct& c, Substitution sub) {
    for (const std::string& z : c.exists) sub[z] = Term::variable("_e" + std::to_string(++counter));
    return substitute(c, sub);
  };
  Conjuncts out;
  for (const DepConjunct& ca : a.disjuncts) {
    const DepConjunct left = apart(ca, to_middle_a);
    for (const DepConjunct& cb : b.disjuncts) {
      const DepConjunct right = apart(cb, to_middle_b);
      DepConjunct c = left;
      c.exists.insert(c.exists.end(), right.exists.begin(), right.exists.end());
      c.exists.insert(c.exists.end(), middle.begin(), middle.end());
      c.literals.insert(c.literals.end(), right.literals.begin(), right.literals.end());
      out.push_back(std::move(c));
    }
  }
  return finish(a.source, b.target, out);
}

std::string term_text(const Term& t) { return t.name; }

std::string literal_text(const DepLiteral& l) {
  switch (l.kind) {
    case DepLiteral::Kind::Equal:
      return term_text(l.args[0]) + " = " + term_text(l.args[1]);
    case DepLiteral::Kind::NotEqual:
      return term_text(l.args[0]) + " != " + term_text(l.args[1]);
    case DepLiteral::Kind::Rigid:
    case DepLiteral::Kind::NotRigid: {
      std::string out = l.kind == DepLiteral::Kind::NotRigid ? "!" : "";
      out += l.relation + "(";
      for (std::size_t i = 0; i < l.args.size(); ++i) out += (i ? "," : "") + term_text(l.args[i]);
      return out + ")";
    }
  }
  return {};
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

// Restricted growth strings of length n (set partitions).
void partitions(std::size_t n, std::vector<int>& current, int max_used, const std::function<void(const std::vector<int>&)>& f) {
  if (current.size() == n) {
    f(current);
    return;
  }
  for (int c = 0; c <= max_used + 1; ++c) {
    current.push_back(c);
    partitions(n, current, std::max(max_used, c), f);
    current.pop_back();
  }
}

// Evaluates one conjunct by backtracking over its existential variables.
class ConjunctSolver {
 public:
  ConjunctSolver(const Structure& s, Binding& binding) : s_(s), binding_(binding) {}

  bool satisfiable(const DepConjunct& c) { return assign(c, 0); }

 private:
  bool literal_holds(const DepLiteral& l) {
    switch (l.kind) {
      case DepLiteral::Kind::Equal:
        return eval_term(l.args[0], s_, binding_) == eval_term(l.args[1], s_, binding_);
      case DepLiteral::Kind::NotEqual:
        return eval_term(l.args[0], s_, binding_) != eval_term(l.args[1], s_, binding_);
      case DepLiteral::Kind::Rigid:
      case DepLiteral::Kind::NotRigid: {
        Tuple t;
        for (const Term& a : l.args) t.push_back(eval_term(a, s_, binding_));
        return s_.holds(l.relation, t) == (l.kind == DepLiteral::Kind::Rigid);
      }
    }
    return false;
  }

  bool ready(const DepLiteral& l, const DepConjunct& c, std::size_t assigned) const {
    for (const Term& t : l.args) {
      if (!t.is_variable()) continue;
      auto it = std::find(c.exists.begin(), c.exists.end(), t.name);
      if (it != c.exists.end() && static_cast<std::size_t>(it - c.exists.begin()) >= assigned) return false;
    }
    return true;
  }

  bool assign(const DepConjunct& c, std::size_t j) {
    for (const DepLiteral& l : c.literals) {
      if (ready(l, c, j) && !literal_holds(l)) return false;
    }
    if (j == c.exists.size()) return true;
    for (Element e = 0; e < s_.size(); ++e) {
      binding_.bind(c.exists[j], e);
      const bool ok = assign(c, j + 1);
      binding_.pop();
      if (ok) return true;
    }
    return false;
  }

  const Structure& s_;
  Binding& binding_;
};

std::optional<CardinalityNormalForm> try_normalize(const DependencyFormula& d) {
  if (d.uses_rigid_symbols()) return std::nullopt;
  return normalize(d);
}

}  // namespace

// ------------------------------------------------------- DependencyFormula

bool DependencyFormula::uses_rigid_symbols() const {
  for (const DepConjunct& c : disjuncts) {
    for (const DepLiteral& l : c.literals) {
      if (l.kind == DepLiteral::Kind::Rigid || l.kind == DepLiteral::Kind::NotRigid) return true;
      for (const Term& t : l.args) {
        if (!t.is_variable()) return true;
      }
    }
  }
  return false;
}

std::string to_string(const DependencyFormula& d) {
  if (d.disjuncts.empty()) return "false";
  std::vector<std::string> parts;
  for (const DepConjunct& c : d.disjuncts) {
    std::vector<std::string> lits;
    for (const DepLiteral& l : c.literals) lits.push_back(literal_text(l));
    std::string body = lits.empty() ? "true" : join(lits, " & ");
    if (!c.exists.empty()) {
      body = "exists " + join(c.exists, ", ") + " (" + body + ")";
    } else if (lits.size() > 1 && d.disjuncts.size() > 1) {
      body = "(" + body + ")";
    }
    parts.push_back(body);
  }
  return join(parts, " | ");
}

// --------------------------------------------------- CardinalityNormalForm

CardinalityNormalForm::CardinalityNormalForm(std::vector<std::string> variables, std::vector<Type> types)
    : variables_(std::move(variables)), types_(std::move(types)) {
  for (const Type& t : types_) lookup_[t.classes] = t.min_domain;
}

bool CardinalityNormalForm::holds(std::span<const Element> values, std::size_t domain_size) const {
  std::vector<int> classes;
  std::vector<Element> seen;
  classes.reserve(values.size());
  for (Element v : values) {
    auto it = std::find(seen.begin(), seen.end(), v);
    if (it == seen.end()) {
      classes.push_back(static_cast<int>(seen.size()));
      seen.push_back(v);
    } else {
      classes.push_back(static_cast<int>(it - seen.begin()));
    }
  }
  auto it = lookup_.find(classes);
  return it != lookup_.end() && domain_size >= it->second;
}

std::string CardinalityNormalForm::to_string() const {
  if (types_.empty()) return "false";
  std::size_t total = 0;
  bool trivial_guards = true;
  {
    std::vector<int> current;
    partitions(variables_.size(), current, -1, [&](const std::vector<int>&) { ++total; });
  }
  for (const Type& t : types_) {
    const int k = t.classes.empty() ? 0 : *std::max_element(t.classes.begin(), t.classes.end()) + 1;
    if (t.min_domain > static_cast<std::size_t>(std::max(k, 1))) trivial_guards = false;
  }
  if (types_.size() == total && trivial_guards) return "true";

  std::vector<std::string> parts;
  for (const Type& t : types_) {
    const int k = t.classes.empty() ? 0 : *std::max_element(t.classes.begin(), t.classes.end()) + 1;
    std::vector<std::string> lits;
    std::vector<int> first(k, -1);
    for (std::size_t i = 0; i < t.classes.size(); ++i) {
      const int c = t.classes[i];
      if (first[c] < 0) {
        first[c] = static_cast<int>(i);
      } else {
        lits.push_back(variables_[first[c]] + " = " + variables_[i]);
      }
    }
    for (int a = 0; a < k; ++a) {
      for (int b = a + 1; b < k; ++b) lits.push_back(variables_[first[a]] + " != " + variables_[first[b]]);
    }
    if (t.min_domain > static_cast<std::size_t>(std::max(k, 1))) lits.push_back("exists>=" + std::to_string(t.min_domain));
    std::string body = lits.empty() ? "true" : join(lits, " & ");
    if (lits.size() > 1 && types_.size() > 1) body = "(" + body + ")";
    parts.push_back(body);
  }
  return join(parts, " | ");
}

// -------------------------------------------------------------- operations

DependencyFormula parent_formula(const RelationalNetwork& network, std::string_view relation,
                                 std::string_view parent) {
  const Vocabulary& vocabulary = network.vocabulary();
  if (!vocabulary.is_probabilistic(relation)) throw Error("unknown relation '" + std::string(relation) + "'");
  if (!vocabulary.is_probabilistic(parent)) throw Error("unknown relation '" + std::string(parent) + "'");
  const Label& label = network.label(relation);
  auto source = numbered("x", label.params.size());
  auto target = numbered("y", vocabulary.arity(parent));
  ParentBuilder builder{std::string(parent), target};
  for (std::size_t i = 0; i < label.params.size(); ++i) builder.bind(label.params[i], source[i]);
  const Conjuncts ds = builder.visit(label.body);
  return finish(std::move(source), std::move(target), ds);
}

CardinalityNormalForm normalize(const DependencyFormula& d) {
  if (d.uses_rigid_symbols()) {
    throw NotNormalizableError("formula mentions rigid symbols; evaluate it on a structure instead");
  }
  std::vector<std::string> variables = d.source;
  variables.insert(variables.end(), d.target.begin(), d.target.end());
  std::map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < variables.size(); ++i) position.emplace(variables[i], i);

  std::map<std::vector<int>, std::size_t> best;
  std::vector<int> current;
  partitions(variables.size(), current, -1, [&](const std::vector<int>& type) {
    const int k = type.empty() ? 0 : *std::max_element(type.begin(), type.end()) + 1;
    for (const DepConjunct& c : d.disjuncts) {
      // Existentials either join a class of the type or open fresh classes.
      std::vector<int> ext;
      std::function<void(int)> extend = [&](int max_class) {
        if (ext.size() == c.exists.size()) {
          auto class_of = [&](const Term& t) {
            auto it = std::find(c.exists.begin(), c.exists.end(), t.name);
            if (it != c.exists.end()) return ext[static_cast<std::size_t>(it - c.exists.begin())];
            return type[position.at(t.name)];
          };
          for (const DepLiteral& l : c.literals) {
            const bool same = class_of(l.args[0]) == class_of(l.args[1]);
            if (same != (l.kind == DepLiteral::Kind::Equal)) return;
          }
          const auto guard = static_cast<std::size_t>(std::max(max_class + 1, 0));
          auto [it, inserted] = best.emplace(type, guard);
          if (!inserted) it->second = std::min(it->second, guard);
          return;
        }
        for (int cls = 0; cls <= max_class + 1; ++cls) {
          ext.push_back(cls);
          extend(std::max(max_class, cls));
          ext.pop_back();
        }
      };
      extend(k - 1);
    }
  });

  std::vector<CardinalityNormalForm::Type> types;
  for (const auto& [classes, guard] : best) types.push_back({classes, guard});
  return CardinalityNormalForm(std::move(variables), std::move(types));
}

DependencyFormula ancestor_formula(const RelationalNetwork& network, std::string_view relation,
                                   std::string_view ancestor) {
  if (network.any_recursive()) {
    throw Error("ancestor formulas depend on the structure for recursive networks; use ancestor_closure_on_structure");
  }
  const Vocabulary& vocabulary = network.vocabulary();
  if (!vocabulary.is_probabilistic(relation)) throw Error("unknown relation '" + std::string(relation) + "'");
  if (!vocabulary.is_probabilistic(ancestor)) throw Error("unknown relation '" + std::string(ancestor) + "'");

  std::vector<std::vector<std::string>> paths;
  std::vector<std::string> path{std::string(relation)};
  std::function<void()> walk = [&]() {
    for (const std::string& p : network.parents(path.back())) {
      path.push_back(p);
      if (p == ancestor) {
        paths.push_back(path);
      } else {
        walk();
      }
      path.pop_back();
    }
  };
  walk();

  DependencyFormula result{numbered("x", vocabulary.arity(relation)), numbered("y", vocabulary.arity(ancestor)), {}};
  Conjuncts all;
  for (const auto& p : paths) {
    DependencyFormula composed = parent_formula(network, p[0], p[1]);
    for (std::size_t i = 1; i + 1 < p.size(); ++i) composed = compose(composed, parent_formula(network, p[i], p[i + 1]));
    all.insert(all.end(), composed.disjuncts.begin(), composed.disjuncts.end());
  }
  result.disjuncts = prune(std::move(all));
  return result;
}

bool eval_dependency(const DependencyFormula& d, const Structure& s, std::span<const Element> source,
                     std::span<const Element> target) {
  if (source.size() != d.source.size() || target.size() != d.target.size()) {
    throw EvaluationError("tuple length does not match the dependency formula");
  }
  Binding binding;
  for (std::size_t i = 0; i < source.size(); ++i) binding.bind(d.source[i], source[i]);
  for (std::size_t i = 0; i < target.size(); ++i) binding.bind(d.target[i], target[i]);
  ConjunctSolver solver(s, binding);
  return std::any_of(d.disjuncts.begin(), d.disjuncts.end(), [&](const DepConjunct& c) { return solver.satisfiable(c); });
}

std::vector<std::string> WellFoundedness::cycle_names(const Structure& s) const {
  std::vector<std::string> out;
  for (const GroundAtom& a : cycle) out.push_back(to_string(a, s));
  return out;
}

namespace {

// Finds a cycle in a graph given by successor lists; returns node ids.
std::vector<std::size_t> find_cycle(const std::vector<std::vector<std::size_t>>& successors) {
  std::vector<int> color(successors.size(), 0);
  std::vector<std::size_t> stack;
  std::vector<std::size_t> cycle;
  std::function<bool(std::size_t)> dfs = [&](std::size_t v) {
    color[v] = 1;
    stack.push_back(v);
    for (std::size_t w : successors[v]) {
      if (color[w] == 1) {
        auto start = std::find(stack.begin(), stack.end(), w);
        cycle.assign(start, stack.end());
        return true;
      }
      if (color[w] == 0 && dfs(w)) return true;
    }
    stack.pop_back();
    color[v] = 2;
    return false;
  };
  for (std::size_t v = 0; v < successors.size(); ++v) {
    if (color[v] == 0 && dfs(v)) break;
  }
  return cycle;
}

}  // namespace

WellFoundedness check_wellfounded(const RelationalNetwork& network, const Structure& s) {
  WellFoundedness result;
  if (!network.any_recursive()) return result;
  const DependencyAnalysis analysis(network);
  for (const auto& [relation, arity] : network.vocabulary().probabilistic()) {
    if (!network.is_recursive(relation)) continue;
    const std::vector<Tuple> tuples = all_tuples(s.size(), arity);
    std::vector<std::vector<std::size_t>> successors(tuples.size());
    for (std::size_t i = 0; i < tuples.size(); ++i) {
      for (std::size_t j = 0; j < tuples.size(); ++j) {
        if (analysis.parent_holds(relation, relation, s, tuples[i], tuples[j])) successors[i].push_back(j);
      }
    }
    const auto cycle = find_cycle(successors);
    if (!cycle.empty()) {
      result.ok = false;
      for (std::size_t v : cycle) result.cycle.push_back(GroundAtom{relation, tuples[v]});
      return result;
    }
  }
  return result;
}

std::set<GroundAtom> ancestor_closure_on_structure(const RelationalNetwork& network, const Structure& s,
                                                   const GroundAtom& g) {
  const DependencyAnalysis analysis(network);
  std::map<GroundAtom, std::size_t> ids;
  std::vector<GroundAtom> atoms;
  std::vector<std::vector<std::size_t>> successors;
  auto id_of = [&](const GroundAtom& a) {
    auto [it, inserted] = ids.emplace(a, atoms.size());
    if (inserted) {
      atoms.push_back(a);
      successors.emplace_back();
    }
    return it->second;
  };
  std::vector<std::size_t> frontier{id_of(g)};
  std::size_t expanded = 0;
  while (expanded < atoms.size()) {
    const GroundAtom current = atoms[expanded];
    std::vector<std::size_t> next;
    for (const GroundAtom& p : analysis.parents_of(current, s)) next.push_back(id_of(p));
    successors[expanded] = std::move(next);
    ++expanded;
  }
  const auto cycle = find_cycle(successors);
  if (!cycle.empty()) {
    std::vector<std::string> names;
    for (std::size_t v : cycle) names.push_back(to_string(atoms[v], s));
    throw WellFoundednessError("cyclic dependency among ground atoms: " + join(names, " -> "), names);
  }
  std::set<GroundAtom> out(atoms.begin() + 1, atoms.end());
  return out;
}

// ------------------------------------------------------ DependencyAnalysis

DependencyAnalysis::DependencyAnalysis(const RelationalNetwork& network) : network_(&network) {
  const Vocabulary& vocabulary = network.vocabulary();
  for (const auto& [relation, _] : vocabulary.probabilistic()) {
    std::vector<std::string> deps(network.parents(relation).begin(), network.parents(relation).end());
    if (network.is_recursive(relation)) deps.push_back(relation);
    for (const std::string& p : deps) {
      DependencyFormula f = parent_formula(network, relation, p);
      auto nf = try_normalize(f);
      parents_.emplace(std::pair(relation, p), Entry{std::move(f), std::move(nf)});
    }
    dependencies_.emplace(relation, std::move(deps));
  }
  if (network.any_recursive()) return;
  for (const auto& [relation, _] : vocabulary.probabilistic()) {
    std::set<std::string> seen;
    std::vector<std::string> stack(network.parents(relation).begin(), network.parents(relation).end());
    while (!stack.empty()) {
      std::string a = stack.back();
      stack.pop_back();
      if (!seen.insert(a).second) continue;
      for (const std::string& p : network.parents(a)) stack.push_back(p);
    }
    for (const std::string& a : seen) {
      if (!vocabulary.is_probabilistic(a)) continue;
      DependencyFormula f = ancestor_formula(network, relation, a);
      auto nf = try_normalize(f);
      ancestors_.emplace(std::pair(relation, a), Entry{std::move(f), std::move(nf)});
    }
  }
}

const std::vector<std::string>& DependencyAnalysis::dependencies(std::string_view relation) const {
  auto it = dependencies_.find(relation);
  if (it == dependencies_.end()) throw Error("unknown relation '" + std::string(relation) + "'");
  return it->second;
}

const DependencyFormula& DependencyAnalysis::parent(std::string_view relation, std::string_view parent) const {
  auto it = parents_.find(std::pair(std::string(relation), std::string(parent)));
  if (it == parents_.end()) {
    throw Error("'" + std::string(parent) + "' is not a dependency of '" + std::string(relation) + "'");
  }
  return it->second.formula;
}

const CardinalityNormalForm* DependencyAnalysis::parent_normal_form(std::string_view relation,
                                                                    std::string_view parent) const {
  auto it = parents_.find(std::pair(std::string(relation), std::string(parent)));
  return it == parents_.end() || !it->second.normal_form ? nullptr : &*it->second.normal_form;
}

namespace {

bool entry_holds(const DependencyFormula& f, const std::optional<CardinalityNormalForm>& nf, const Structure& s,
                 std::span<const Element> source, std::span<const Element> target) {
  if (nf) {
    Element buffer[32];
    std::vector<Element> heap;
    Element* values = buffer;
    const std::size_t n = source.size() + target.size();
    if (n > 32) {
      heap.resize(n);
      values = heap.data();
    }
    std::copy(source.begin(), source.end(), values);
    std::copy(target.begin(), target.end(), values + source.size());
    return nf->holds(std::span<const Element>(values, n), s.size());
  }
  return eval_dependency(f, s, source, target);
}

}  // namespace

bool DependencyAnalysis::parent_holds(std::string_view relation, std::string_view parent, const Structure& s,
                                      std::span<const Element> source, std::span<const Element> target) const {
  auto it = parents_.find(std::pair(std::string(relation), std::string(parent)));
  if (it == parents_.end()) return false;
  return entry_holds(it->second.formula, it->second.normal_form, s, source, target);
}

std::vector<GroundAtom> DependencyAnalysis::parents_of(const GroundAtom& atom, const Structure& s) const {
  std::vector<GroundAtom> out;
  for (const std::string& p : dependencies(atom.relation)) {
    auto it = parents_.find(std::pair(atom.relation, p));
    for (Tuple& t : all_tuples(s.size(), network_->vocabulary().arity(p))) {
      if (entry_holds(it->second.formula, it->second.normal_form, s, atom.args, t)) {
        out.push_back(GroundAtom{p, std::move(t)});
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

const DependencyFormula* DependencyAnalysis::ancestor(std::string_view relation, std::string_view ancestor) const {
  auto it = ancestors_.find(std::pair(std::string(relation), std::string(ancestor)));
  return it == ancestors_.end() ? nullptr : &it->second.formula;
}

bool DependencyAnalysis::is_ancestor(const GroundAtom& candidate, const GroundAtom& atom, const Structure& s) const {
  auto it = ancestors_.find(std::pair(atom.relation, candidate.relation));
  if (it == ancestors_.end()) return false;
  return entry_holds(it->second.formula, it->second.normal_form, s, atom.args, candidate.args);
}

}  // namespace rbn
