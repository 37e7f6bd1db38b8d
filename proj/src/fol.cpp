#include "rbn/fol.hpp"

#include "rbn/errors.hpp"

namespace rbn {

FOFormula::FOFormula() : node_(std::make_shared<const Node>(Truth{true})) {}

FOFormula FOFormula::truth(bool value) { return FOFormula(std::make_shared<const Node>(Truth{value})); }
FOFormula FOFormula::atom(std::string relation, std::vector<std::string> args) {
  return FOFormula(std::make_shared<const Node>(Atom{std::move(relation), std::move(args)}));
}
FOFormula FOFormula::equal(std::string lhs, std::string rhs) {
  return FOFormula(std::make_shared<const Node>(Equal{std::move(lhs), std::move(rhs)}));
}
FOFormula FOFormula::negate(FOFormula operand) { return FOFormula(std::make_shared<const Node>(Not{std::move(operand)})); }
FOFormula FOFormula::conj(FOFormula lhs, FOFormula rhs) {
  return FOFormula(std::make_shared<const Node>(And{std::move(lhs), std::move(rhs)}));
}
FOFormula FOFormula::disj(FOFormula lhs, FOFormula rhs) {
  return FOFormula(std::make_shared<const Node>(Or{std::move(lhs), std::move(rhs)}));
}
FOFormula FOFormula::exists(std::string variable, FOFormula body) {
  return FOFormula(std::make_shared<const Node>(Exists{std::move(variable), std::move(body)}));
}
FOFormula FOFormula::forall(std::string variable, FOFormula body) {
  return FOFormula(std::make_shared<const Node>(Forall{std::move(variable), std::move(body)}));
}

bool operator==(const FOFormula& a, const FOFormula& b) { return a.node_ == b.node_ || *a.node_ == *b.node_; }

namespace {

void collect_free(const FOFormula& f, std::multiset<std::string>& shadow, std::set<std::string>& out) {
  auto add = [&](const std::string& v) {
    if (!shadow.contains(v)) out.insert(v);
  };
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, FOFormula::Atom>) {
          for (const auto& v : n.args) add(v);
        } else if constexpr (std::is_same_v<T, FOFormula::Equal>) {
          add(n.lhs);
          add(n.rhs);
        } else if constexpr (std::is_same_v<T, FOFormula::Not>) {
          collect_free(n.operand, shadow, out);
        } else if constexpr (std::is_same_v<T, FOFormula::And> || std::is_same_v<T, FOFormula::Or>) {
          collect_free(n.lhs, shadow, out);
          collect_free(n.rhs, shadow, out);
        } else if constexpr (std::is_same_v<T, FOFormula::Exists> || std::is_same_v<T, FOFormula::Forall>) {
          auto it = shadow.insert(n.variable);
          collect_free(n.body, shadow, out);
          shadow.erase(it);
        }
      },
      f.node());
}

}  // namespace

std::set<std::string> free_vars(const FOFormula& f) {
  std::set<std::string> out;
  std::multiset<std::string> shadow;
  collect_free(f, shadow, out);
  return out;
}

std::set<std::string> mentioned_relations(const FOFormula& f) {
  std::set<std::string> out;
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, FOFormula::Atom>) {
          out.insert(n.relation);
        } else if constexpr (std::is_same_v<T, FOFormula::Not>) {
          out.merge(mentioned_relations(n.operand));
        } else if constexpr (std::is_same_v<T, FOFormula::And> || std::is_same_v<T, FOFormula::Or>) {
          out.merge(mentioned_relations(n.lhs));
          out.merge(mentioned_relations(n.rhs));
        } else if constexpr (std::is_same_v<T, FOFormula::Exists> || std::is_same_v<T, FOFormula::Forall>) {
          out.merge(mentioned_relations(n.body));
        }
      },
      f.node());
  return out;
}

namespace {

Formula invert(Formula f) { return Formula::complement(std::move(f)); }

Formula translate_node(const FOFormula& phi, const TranslateOptions& options) {
  return std::visit(
      [&](const auto& n) -> Formula {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, FOFormula::Truth>) {
          return Formula::constant(Rational(n.value ? 1 : 0));
        } else if constexpr (std::is_same_v<T, FOFormula::Atom>) {
          std::vector<Term> args;
          for (const auto& v : n.args) args.push_back(Term::variable(v));
          return Formula::indicator(n.relation, std::move(args));
        } else if constexpr (std::is_same_v<T, FOFormula::Equal>) {
          return Formula::comb("max", {Formula::constant(Rational(1))}, {},
                               Constraint::equal(Term::variable(n.lhs), Term::variable(n.rhs)));
        } else if constexpr (std::is_same_v<T, FOFormula::Not>) {
          return invert(translate_node(n.operand, options));
        } else if constexpr (std::is_same_v<T, FOFormula::And>) {
          return Formula::product(translate_node(n.lhs, options), translate_node(n.rhs, options));
        } else if constexpr (std::is_same_v<T, FOFormula::Or>) {
          Formula a = translate_node(n.lhs, options);
          Formula b = translate_node(n.rhs, options);
          if (options.max_for_or) return Formula::comb("max", {std::move(a), std::move(b)}, {}, Constraint::truth());
          return invert(Formula::product(invert(std::move(a)), invert(std::move(b))));
        } else if constexpr (std::is_same_v<T, FOFormula::Exists>) {
          return Formula::comb("max", {translate_node(n.body, options)}, {n.variable}, Constraint::truth());
        } else {
          const Formula body = invert(translate_node(n.body, options));
          return invert(Formula::comb("max", {body}, {n.variable}, Constraint::truth()));
        }
      },
      phi.node());
}

bool check(const FOFormula& phi, const Structure& s, Binding& b) {
  return std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, FOFormula::Truth>) {
          return n.value;
        } else if constexpr (std::is_same_v<T, FOFormula::Atom>) {
          Tuple t;
          for (const auto& v : n.args) t.push_back(b.at(v));
          return s.holds(n.relation, t);
        } else if constexpr (std::is_same_v<T, FOFormula::Equal>) {
          return b.at(n.lhs) == b.at(n.rhs);
        } else if constexpr (std::is_same_v<T, FOFormula::Not>) {
          return !check(n.operand, s, b);
        } else if constexpr (std::is_same_v<T, FOFormula::And>) {
          return check(n.lhs, s, b) && check(n.rhs, s, b);
        } else if constexpr (std::is_same_v<T, FOFormula::Or>) {
          return check(n.lhs, s, b) || check(n.rhs, s, b);
        } else {
          constexpr bool existential = std::is_same_v<T, FOFormula::Exists>;
          for (Element e = 0; e < s.size(); ++e) {
            b.bind(n.variable, e);
            const bool value = check(n.body, s, b);
            b.pop();
            if (value == existential) return existential;
          }
          return !existential;
        }
      },
      phi.node());
}

}  // namespace

Formula translate(const FOFormula& phi, const TranslateOptions& options) { return translate_node(phi, options); }

bool model_check(const FOFormula& phi, const Structure& s, const Binding& b) {
  Binding local = b;
  return check(phi, s, local);
}

}  // namespace rbn
