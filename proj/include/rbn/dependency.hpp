#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rbn/model.hpp"
#include "rbn/structure.hpp"

namespace rbn {

struct DepLiteral {
  enum class Kind : std::uint8_t { Equal, NotEqual, Rigid, NotRigid };

  Kind kind;
  std::string relation;    // Rigid, NotRigid
  std::vector<Term> args;  // two terms for Equal / NotEqual

  static DepLiteral equal(Term a, Term b) { return {Kind::Equal, {}, {std::move(a), std::move(b)}}; }
  static DepLiteral not_equal(Term a, Term b) { return {Kind::NotEqual, {}, {std::move(a), std::move(b)}}; }

  friend auto operator<=>(const DepLiteral&, const DepLiteral&) = default;
  friend bool operator==(const DepLiteral&, const DepLiteral&) = default;
};

// exists `exists` . conjunction of `literals`
struct DepConjunct {
  std::vector<std::string> exists;
  std::vector<DepLiteral> literals;

  friend auto operator<=>(const DepConjunct&, const DepConjunct&) = default;
  friend bool operator==(const DepConjunct&, const DepConjunct&) = default;
};

// Existential formula pa(source; target) kept as a disjunction of
// existentially quantified conjunctions of literals. No disjuncts means
// unsatisfiable.
struct DependencyFormula {
  std::vector<std::string> source;
  std::vector<std::string> target;
  std::vector<DepConjunct> disjuncts;

  bool is_false() const noexcept { return disjuncts.empty(); }
  // True when the formula mentions rigid relations or constants.
  bool uses_rigid_symbols() const;
};

// Constraint syntax; quantified disjuncts print as "exists z1 (...)".
std::string to_string(const DependencyFormula& d);

// Disjunction of complete equality types over source ++ target, each with a
// minimum domain size. Membership depends only on the equality pattern of
// the tuple and on |D|.
class CardinalityNormalForm {
 public:
  struct Type {
    std::vector<int> classes;  // restricted growth string over the variables
    std::size_t min_domain;

    friend bool operator==(const Type&, const Type&) = default;
  };

  CardinalityNormalForm(std::vector<std::string> variables, std::vector<Type> types);

  const std::vector<std::string>& variables() const noexcept { return variables_; }
  const std::vector<Type>& types() const noexcept { return types_; }

  bool holds(std::span<const Element> values, std::size_t domain_size) const;
  std::string to_string() const;

 private:
  std::vector<std::string> variables_;
  std::vector<Type> types_;
  std::map<std::vector<int>, std::size_t> lookup_;
};

// pa_{r,r'}(x1..xn; y1..ym): the atoms r'(y) that F_r(x) reads, by structural
// induction on the label of r. False when the label never reads r'. Throws
// Error when either relation is not a declared probabilistic relation.
DependencyFormula parent_formula(const RelationalNetwork& network, std::string_view relation,
                                 std::string_view parent);

// Equality-only formulas to cardinality normal form. Throws
// NotNormalizableError when rigid relations or constants occur.
CardinalityNormalForm normalize(const DependencyFormula& d);

// pa*_{r,r''}: disjunction over all parent-graph paths from r'' to r of the
// composed parent formulas. Non-recursive networks only.
DependencyFormula ancestor_formula(const RelationalNetwork& network, std::string_view relation,
                                   std::string_view ancestor);

// Satisfaction with quantifiers ranging over s's domain.
bool eval_dependency(const DependencyFormula& d, const Structure& s, std::span<const Element> source,
                     std::span<const Element> target);

struct WellFoundedness {
  bool ok = true;
  std::vector<GroundAtom> cycle;  // r(d1) depends on r(d2) ... depends on r(d1)

  std::vector<std::string> cycle_names(const Structure& s) const;
};

// Acyclicity of {(d, d') : pa_{r,r}(d, d')} on s, for every recursive r.
WellFoundedness check_wellfounded(const RelationalNetwork& network, const Structure& s);

// Strict ancestors of g in the ground dependency graph over s. Throws
// WellFoundednessError when a cycle is reachable.
std::set<GroundAtom> ancestor_closure_on_structure(const RelationalNetwork& network, const Structure& s,
                                                   const GroundAtom& g);

// Parent formulas (with normal forms where they exist) and, for
// non-recursive networks, ancestor formulas for every relation pair.
// Immutable after construction.
class DependencyAnalysis {
 public:
  explicit DependencyAnalysis(const RelationalNetwork& network);

  const RelationalNetwork& network() const noexcept { return *network_; }

  // Relations r' with a parent formula for r: Pa(r), plus r when recursive.
  const std::vector<std::string>& dependencies(std::string_view relation) const;
  const DependencyFormula& parent(std::string_view relation, std::string_view parent) const;
  const CardinalityNormalForm* parent_normal_form(std::string_view relation, std::string_view parent) const;
  bool parent_holds(std::string_view relation, std::string_view parent, const Structure& s,
                    std::span<const Element> source, std::span<const Element> target) const;

  // Ground parents of `atom`, sorted.
  std::vector<GroundAtom> parents_of(const GroundAtom& atom, const Structure& s) const;

  // Null for recursive networks or when `ancestor` is not a symbol ancestor.
  const DependencyFormula* ancestor(std::string_view relation, std::string_view ancestor) const;
  // Is `candidate` a strict ancestor of `atom` (via the ancestor formulas)?
  bool is_ancestor(const GroundAtom& candidate, const GroundAtom& atom, const Structure& s) const;

 private:
  struct Entry {
    DependencyFormula formula;
    std::optional<CardinalityNormalForm> normal_form;
  };

  const RelationalNetwork* network_;
  std::map<std::string, std::vector<std::string>, std::less<>> dependencies_;
  std::map<std::pair<std::string, std::string>, Entry> parents_;
  std::map<std::pair<std::string, std::string>, Entry> ancestors_;
};

}  // namespace rbn
