#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rbn/combinators.hpp"
#include "rbn/rational.hpp"

namespace rbn {

// A variable or a rigid constant symbol.
struct Term {
  enum class Kind : std::uint8_t { Variable, Constant };

  Kind kind = Kind::Variable;
  std::string name;

  static Term variable(std::string name) { return {Kind::Variable, std::move(name)}; }
  static Term constant(std::string name) { return {Kind::Constant, std::move(name)}; }
  bool is_variable() const noexcept { return kind == Kind::Variable; }

  friend auto operator<=>(const Term&, const Term&) = default;
  friend bool operator==(const Term&, const Term&) = default;
};

inline Term var(std::string name) { return Term::variable(std::move(name)); }

// Quantifier-free constraint over equality and rigid relations. Immutable,
// cheap to copy.
class Constraint {
 public:
  struct True;
  struct False;
  struct Equal;
  struct Rigid;
  struct Not;
  struct And;
  struct Or;
  using Node = std::variant<True, False, Equal, Rigid, Not, And, Or>;

  Constraint();  // True

  static Constraint truth();
  static Constraint falsity();
  static Constraint equal(Term lhs, Term rhs);
  static Constraint not_equal(Term lhs, Term rhs);
  static Constraint rigid(std::string relation, std::vector<Term> args);
  static Constraint negate(Constraint operand);
  static Constraint conj(Constraint lhs, Constraint rhs);
  static Constraint disj(Constraint lhs, Constraint rhs);

  const Node& node() const noexcept;
  template <class T>
  const T* as() const noexcept;

  friend bool operator==(const Constraint& a, const Constraint& b);

 private:
  explicit Constraint(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct Constraint::True {
  friend bool operator==(const True&, const True&) = default;
};
struct Constraint::False {
  friend bool operator==(const False&, const False&) = default;
};
struct Constraint::Equal {
  Term lhs, rhs;
  friend bool operator==(const Equal&, const Equal&) = default;
};
struct Constraint::Rigid {
  std::string relation;
  std::vector<Term> args;
  friend bool operator==(const Rigid&, const Rigid&) = default;
};
struct Constraint::Not {
  Constraint operand;
  friend bool operator==(const Not&, const Not&) = default;
};
struct Constraint::And {
  Constraint lhs, rhs;
  friend bool operator==(const And&, const And&) = default;
};
struct Constraint::Or {
  Constraint lhs, rhs;
  friend bool operator==(const Or&, const Or&) = default;
};

inline const Constraint::Node& Constraint::node() const noexcept { return *node_; }
template <class T>
const T* Constraint::as() const noexcept {
  return std::get_if<T>(node_.get());
}

// Probability formula: constants, indicators, convex combinations
// F1*F2 + (1-F1)*F3, and combination terms comb{F1..Fk | z; c}.
class Formula {
 public:
  struct Const;
  struct Indicator;
  struct Convex;
  struct Comb;
  using Node = std::variant<Const, Indicator, Convex, Comb>;

  Formula();  // constant 0

  static Formula constant(Rational value);
  static Formula indicator(std::string relation, std::vector<Term> args);
  static Formula convex(Formula weight, Formula if_true, Formula if_false);
  static Formula comb(std::string function, std::vector<Formula> args, std::vector<std::string> bound,
                      Constraint constraint = Constraint::truth());

  // Special cases of the convex node.
  static Formula product(Formula a, Formula b);
  static Formula complement(Formula a);

  const Node& node() const noexcept;
  template <class T>
  const T* as() const noexcept;

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct Formula::Const {
  Rational value;
  friend bool operator==(const Const&, const Const&) = default;
};
struct Formula::Indicator {
  std::string relation;
  std::vector<Term> args;
  friend bool operator==(const Indicator&, const Indicator&) = default;
};
struct Formula::Convex {
  Formula weight, if_true, if_false;
  friend bool operator==(const Convex&, const Convex&) = default;
};
struct Formula::Comb {
  std::string function;
  std::vector<Formula> args;
  std::vector<std::string> bound;
  Constraint constraint;
  friend bool operator==(const Comb&, const Comb&) = default;
};

inline const Formula::Node& Formula::node() const noexcept { return *node_; }
template <class T>
const T* Formula::as() const noexcept {
  return std::get_if<T>(node_.get());
}

std::set<std::string> free_vars(const Constraint& c);

// Free variables of the formula. For a combination term: variables of the
// argument formulas and of the constraint, minus the bound tuple.
std::set<std::string> free_vars(const Formula& f);

// Probabilistic relation symbols read by indicators in `f`.
std::set<std::string> mentioned_relations(const Formula& f);

// Probabilistic symbols S, rigid symbols R (relations and constants).
// Equality is built in and may not be declared.
class Vocabulary {
 public:
  void add_probabilistic(std::string name, std::size_t arity);
  void add_rigid(std::string name, std::size_t arity);
  void add_constant(std::string name);

  const std::map<std::string, std::size_t>& probabilistic() const noexcept { return probabilistic_; }
  const std::map<std::string, std::size_t>& rigid() const noexcept { return rigid_; }
  const std::set<std::string>& constants() const noexcept { return constants_; }

  bool is_probabilistic(std::string_view name) const;
  bool is_rigid(std::string_view name) const;
  bool is_constant(std::string_view name) const;
  std::size_t arity(std::string_view relation) const;  // throws Error if undeclared

 private:
  void check_fresh(const std::string& name) const;

  std::map<std::string, std::size_t> probabilistic_;
  std::map<std::string, std::size_t> rigid_;
  std::set<std::string> constants_;
};

struct Label {
  std::vector<std::string> params;
  Formula body;
};

// One node per probabilistic relation, labeled with a formula over its
// parents (and itself, for recursive relations).
class RelationalNetwork {
 public:
  explicit RelationalNetwork(Vocabulary vocabulary, CombinationRegistry registry = CombinationRegistry::builtin());

  // Parents are the relations the label mentions, excluding the relation itself.
  void set_label(const std::string& relation, std::vector<std::string> params, Formula body);
  // Explicit parent set; validate_network reports labels reading non-parents.
  void set_label(const std::string& relation, std::vector<std::string> params, Formula body,
                 std::set<std::string> parents);

  const Vocabulary& vocabulary() const noexcept { return vocabulary_; }
  const CombinationRegistry& registry() const noexcept { return registry_; }

  bool has_label(std::string_view relation) const;
  std::vector<std::string> labeled_relations() const;
  const Label& label(std::string_view relation) const;
  const std::set<std::string>& parents(std::string_view relation) const;
  std::set<std::string> children(std::string_view relation) const;
  bool is_recursive(std::string_view relation) const;
  bool any_recursive() const;

  // Relations in dependency order (parents first, ties by name). Throws
  // Error when the parent graph has a cycle.
  std::vector<std::string> topological_order() const;

 private:
  Vocabulary vocabulary_;
  CombinationRegistry registry_;
  std::map<std::string, Label, std::less<>> labels_;
  std::map<std::string, std::set<std::string>, std::less<>> parents_;
};

struct Violation {
  enum class Kind {
    Cycle,
    NonParentSymbol,
    ArityMismatch,
    StrayFreeVariable,
    UnknownCombination,
    ConstantOutOfRange,
    UnknownSymbol,
    MissingLabel,
    EmptyCombination,
    DuplicateParameter,
  };
  Kind kind;
  std::string relation;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
  bool has(Violation::Kind kind) const;
  std::string to_string() const;
};

ValidationReport validate_network(const RelationalNetwork& network);

}  // namespace rbn
