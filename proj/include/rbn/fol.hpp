#pragma once

#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "rbn/evaluator.hpp"
#include "rbn/model.hpp"
#include "rbn/structure.hpp"

namespace rbn {

// First-order formula over the probabilistic vocabulary: atoms, equality,
// connectives and quantifiers. Immutable, cheap to copy.
class FOFormula {
 public:
  struct Truth {
    bool value;
    friend bool operator==(const Truth&, const Truth&) = default;
  };
  struct Atom {
    std::string relation;
    std::vector<std::string> args;
    friend bool operator==(const Atom&, const Atom&) = default;
  };
  struct Equal {
    std::string lhs, rhs;
    friend bool operator==(const Equal&, const Equal&) = default;
  };
  struct Not;
  struct And;
  struct Or;
  struct Exists;
  struct Forall;
  using Node = std::variant<Truth, Atom, Equal, Not, And, Or, Exists, Forall>;

  FOFormula();  // true

  static FOFormula truth(bool value);
  static FOFormula atom(std::string relation, std::vector<std::string> args);
  static FOFormula equal(std::string lhs, std::string rhs);
  static FOFormula negate(FOFormula operand);
  static FOFormula conj(FOFormula lhs, FOFormula rhs);
  static FOFormula disj(FOFormula lhs, FOFormula rhs);
  static FOFormula exists(std::string variable, FOFormula body);
  static FOFormula forall(std::string variable, FOFormula body);

  const Node& node() const noexcept;

  friend bool operator==(const FOFormula& a, const FOFormula& b);

 private:
  explicit FOFormula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct FOFormula::Not {
  FOFormula operand;
  friend bool operator==(const Not&, const Not&) = default;
};
struct FOFormula::And {
  FOFormula lhs, rhs;
  friend bool operator==(const And&, const And&) = default;
};
struct FOFormula::Or {
  FOFormula lhs, rhs;
  friend bool operator==(const Or&, const Or&) = default;
};
struct FOFormula::Exists {
  std::string variable;
  FOFormula body;
  friend bool operator==(const Exists&, const Exists&) = default;
};
struct FOFormula::Forall {
  std::string variable;
  FOFormula body;
  friend bool operator==(const Forall&, const Forall&) = default;
};

inline const FOFormula::Node& FOFormula::node() const noexcept { return *node_; }

std::set<std::string> free_vars(const FOFormula& f);
std::set<std::string> mentioned_relations(const FOFormula& f);

struct TranslateOptions {
  // Print 1-(1-a)(1-b) as max{a, b | ; true}.
  bool max_for_or = false;
};

// Equivalent 0/1-valued probability formula using max as the only
// combination function.
Formula translate(const FOFormula& phi, const TranslateOptions& options = {});

// Tarskian satisfaction; quantifiers range over s's domain.
bool model_check(const FOFormula& phi, const Structure& s, const Binding& b);

}  // namespace rbn
