#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rbn/errors.hpp"
#include "rbn/fol.hpp"
#include "rbn/grounding.hpp"
#include "rbn/model.hpp"
#include "rbn/rational.hpp"
#include "rbn/structure.hpp"

namespace rbn {

// ------------------------------------------------------------------ models

struct RelationDecl {
  std::string name;
  std::size_t arity;
  friend bool operator==(const RelationDecl&, const RelationDecl&) = default;
};
struct RigidDecl {
  std::string name;
  std::size_t arity;
  friend bool operator==(const RigidDecl&, const RigidDecl&) = default;
};
struct ConstantDecl {
  std::string name;
  friend bool operator==(const ConstantDecl&, const ConstantDecl&) = default;
};
struct CombfunDecl {
  std::string name;
  std::vector<Rational> table;  // cumulative
  friend bool operator==(const CombfunDecl&, const CombfunDecl&) = default;
};
// `name = value;` Later formulas may use the name for the value.
struct ParameterDecl {
  std::string name;
  Rational value;
  friend bool operator==(const ParameterDecl&, const ParameterDecl&) = default;
};
struct LabelDecl {
  std::string relation;
  std::vector<std::string> params;
  Formula body;
  friend bool operator==(const LabelDecl&, const LabelDecl&) = default;
};

using ModelItem = std::variant<RelationDecl, RigidDecl, ConstantDecl, CombfunDecl, ParameterDecl, LabelDecl>;

struct ModelDocument {
  std::vector<ModelItem> items;
  friend bool operator==(const ModelDocument&, const ModelDocument&) = default;
};

struct ParsedModel {
  ModelDocument document;
  RelationalNetwork network;
  ValidationReport report;
};

// Thrown by parse_model when the network fails validation.
class ValidationError : public Error {
 public:
  explicit ValidationError(ValidationReport report) : Error(report.to_string()), report_(std::move(report)) {}
  const ValidationReport& report() const noexcept { return report_; }

 private:
  ValidationReport report_;
};

// Syntax errors throw ParseError; the network is built but not rejected
// when validation fails.
ParsedModel parse_model_unchecked(std::string_view text);
// As above, and throws ValidationError unless the network is valid.
ParsedModel parse_model(std::string_view text);

RelationalNetwork build_network(const ModelDocument& document);

// Single expressions. Identifiers in `constants` are read as constant terms;
// `parameters` supplies named numeric values.
Formula parse_formula(std::string_view text, const std::set<std::string>& constants = {},
                      const std::map<std::string, Rational>& parameters = {});
Constraint parse_constraint(std::string_view text, const std::set<std::string>& constants = {});
FOFormula parse_fol(std::string_view text);

// --------------------------------------------------------------- scenarios

struct AtomText {
  std::string relation;
  std::vector<std::string> args;
  friend bool operator==(const AtomText&, const AtomText&) = default;
};

struct LiteralText {
  AtomText atom;
  bool positive = true;
  friend bool operator==(const LiteralText&, const LiteralText&) = default;
};

struct RigidTable {
  std::string relation;
  std::vector<std::vector<std::string>> tuples;
  friend bool operator==(const RigidTable&, const RigidTable&) = default;
};

struct ScenarioDocument {
  std::vector<std::string> domain;
  std::vector<RigidTable> rigid;
  std::vector<std::pair<std::string, std::string>> bindings;  // constant, element
  std::vector<LiteralText> evidence;
  std::vector<AtomText> queries;
  friend bool operator==(const ScenarioDocument&, const ScenarioDocument&) = default;
};

ScenarioDocument parse_scenario(std::string_view text);

struct BoundScenario {
  Structure structure;  // domain, rigid relations, constants
  Evidence evidence;
  std::vector<GroundAtom> queries;
};

// Checks the scenario against the network's vocabulary. Throws Error.
BoundScenario bind_scenario(const RelationalNetwork& network, const ScenarioDocument& scenario);

// ---------------------------------------------------------------- printing

std::string to_string(const Term& t);
std::string to_string(const Constraint& c);
std::string to_string(const Formula& f);
std::string to_string(const FOFormula& f);
std::string pretty_print(const ModelDocument& document);
std::string pretty_print(const ScenarioDocument& scenario);

}  // namespace rbn
