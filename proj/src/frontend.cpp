#include "rbn/frontend.hpp"

#include <algorithm>
#include <stdexcept>

#include "lexer.hpp"

namespace rbn {

namespace {

using detail::Tok;
using detail::Token;

constexpr std::size_t kMaxDepth = 256;

const std::set<std::string, std::less<>> kReserved = {"relation", "rigid", "constant", "combfun", "cc",
                                                      "true",     "false", "exists",   "forall"};

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(detail::tokenize(text)) {}

  std::set<std::string> constants;
  std::map<std::string, Rational> parameters;

  // ------------------------------------------------------------- helpers

  const Token& peek(std::size_t ahead = 0) const { return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)]; }
  bool at(Tok kind) const { return peek().kind == kind; }
  bool at_keyword(std::string_view word) const { return at(Tok::Ident) && peek().text == word; }

  const Token& next() {
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }

  [[noreturn]] void fail(const std::string& message) const { throw ParseError(peek().span, message); }

  [[noreturn]] void unexpected(const std::string& expected) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(t.span, "expected " + expected + ", found " + found);
  }

  const Token& expect(Tok kind) {
    if (!at(kind)) unexpected(detail::describe(kind));
    return next();
  }

  bool accept(Tok kind) {
    if (!at(kind)) return false;
    next();
    return true;
  }

  void expect_keyword(std::string_view word) {
    if (!at_keyword(word)) unexpected("'" + std::string(word) + "'");
    next();
  }

  std::string identifier() { return expect(Tok::Ident).text; }

  std::string symbol_name() {
    if (at(Tok::Ident) && kReserved.contains(peek().text)) fail("'" + peek().text + "' is a reserved word");
    return identifier();
  }

  void expect_end() {
    if (!at(Tok::End)) unexpected("end of input");
  }

  struct DepthGuard {
    Parser& p;
    explicit DepthGuard(Parser& parser) : p(parser) {
      if (++p.depth_ > kMaxDepth) p.fail("expression nested too deeply");
    }
    ~DepthGuard() { --p.depth_; }
  };

  Rational rational() {
    const Token& first = expect(Tok::Number);
    std::string text = first.text;
    if (at(Tok::Slash) && peek(1).kind == Tok::Number) {
      next();
      text += "/" + next().text;
    }
    try {
      return Rational::parse(text);
    } catch (const std::invalid_argument& e) {
      throw ParseError(first.span, "bad number '" + text + "': " + e.what());
    }
  }

  std::size_t small_integer() {
    const Token& t = expect(Tok::Number);
    if (t.text.size() > 6 || t.text.find('.') != std::string::npos) throw ParseError(t.span, "bad arity '" + t.text + "'");
    return static_cast<std::size_t>(std::stoul(t.text));
  }

  Term term() {
    std::string name = identifier();
    return constants.contains(name) ? Term::constant(std::move(name)) : Term::variable(std::move(name));
  }

  std::vector<Term> terms_until(Tok close) {
    std::vector<Term> out;
    if (at(close)) return out;
    out.push_back(term());
    while (accept(Tok::Comma)) out.push_back(term());
    return out;
  }

  std::vector<std::string> names_until(Tok close) {
    std::vector<std::string> out;
    if (at(close)) return out;
    out.push_back(identifier());
    while (accept(Tok::Comma)) out.push_back(identifier());
    return out;
  }

  // --------------------------------------------------------- formulas

  Formula formula() {
    DepthGuard guard(*this);
    if (at(Tok::Number)) return Formula::constant(rational());
    const Token& name = expect(Tok::Ident);
    if (name.text == "cc") {
      expect(Tok::LParen);
      Formula w = formula();
      expect(Tok::Comma);
      Formula a = formula();
      expect(Tok::Comma);
      Formula b = formula();
      expect(Tok::RParen);
      return Formula::convex(std::move(w), std::move(a), std::move(b));
    }
    if (accept(Tok::LParen)) {
      std::vector<Term> args = terms_until(Tok::RParen);
      expect(Tok::RParen);
      return Formula::indicator(name.text, std::move(args));
    }
    if (accept(Tok::LBrace)) {
      std::vector<Formula> args{formula()};
      while (accept(Tok::Comma)) args.push_back(formula());
      expect(Tok::Pipe);
      std::vector<std::string> bound = names_until(Tok::Semi);
      expect(Tok::Semi);
      Constraint c = constraint();
      expect(Tok::RBrace);
      return Formula::comb(name.text, std::move(args), std::move(bound), std::move(c));
    }
    auto it = parameters.find(name.text);
    if (it == parameters.end()) throw ParseError(name.span, "unknown parameter '" + name.text + "'");
    return Formula::constant(it->second);
  }

  Constraint constraint() {
    DepthGuard guard(*this);
    Constraint out = constraint_and();
    while (accept(Tok::Pipe)) out = Constraint::disj(std::move(out), constraint_and());
    return out;
  }

  Constraint constraint_and() {
    Constraint out = constraint_unary();
    while (accept(Tok::Amp)) out = Constraint::conj(std::move(out), constraint_unary());
    return out;
  }

  Constraint constraint_unary() {
    DepthGuard guard(*this);
    if (accept(Tok::Bang)) return Constraint::negate(constraint_unary());
    if (accept(Tok::LParen)) {
      Constraint inner = constraint();
      expect(Tok::RParen);
      return inner;
    }
    if (at_keyword("true")) {
      next();
      return Constraint::truth();
    }
    if (at_keyword("false")) {
      next();
      return Constraint::falsity();
    }
    if (at(Tok::Ident) && peek(1).kind == Tok::LParen) {
      std::string relation = identifier();
      expect(Tok::LParen);
      std::vector<Term> args = terms_until(Tok::RParen);
      expect(Tok::RParen);
      return Constraint::rigid(std::move(relation), std::move(args));
    }
    if (!at(Tok::Ident)) unexpected("constraint");
    Term lhs = term();
    if (accept(Tok::Equal)) return Constraint::equal(std::move(lhs), term());
    if (accept(Tok::NotEqual)) return Constraint::not_equal(std::move(lhs), term());
    unexpected("'=' or '!='");
  }

  // -------------------------------------------------------- FO formulas

  FOFormula fol() {
    DepthGuard guard(*this);
    FOFormula out = fol_and();
    while (accept(Tok::Pipe)) out = FOFormula::disj(std::move(out), fol_and());
    return out;
  }

  FOFormula fol_and() {
    FOFormula out = fol_unary();
    while (accept(Tok::Amp)) out = FOFormula::conj(std::move(out), fol_unary());
    return out;
  }

  FOFormula fol_unary() {
    DepthGuard guard(*this);
    if (accept(Tok::Bang)) return FOFormula::negate(fol_unary());
    if (accept(Tok::LParen)) {
      FOFormula inner = fol();
      expect(Tok::RParen);
      return inner;
    }
    if (at_keyword("exists") || at_keyword("forall")) {
      const bool existential = next().text == "exists";
      std::vector<std::string> variables{symbol_name()};
      while (accept(Tok::Comma)) variables.push_back(symbol_name());
      FOFormula body = fol_unary();
      for (auto v = variables.rbegin(); v != variables.rend(); ++v) {
        body = existential ? FOFormula::exists(std::move(*v), std::move(body))
                           : FOFormula::forall(std::move(*v), std::move(body));
      }
      return body;
    }
    if (at_keyword("true") || at_keyword("false")) return FOFormula::truth(next().text == "true");
    if (at(Tok::Ident) && peek(1).kind == Tok::LParen) {
      std::string relation = identifier();
      expect(Tok::LParen);
      std::vector<std::string> args = names_until(Tok::RParen);
      expect(Tok::RParen);
      return FOFormula::atom(std::move(relation), std::move(args));
    }
    if (!at(Tok::Ident)) unexpected("formula");
    std::string lhs = symbol_name();
    if (accept(Tok::Equal)) return FOFormula::equal(std::move(lhs), symbol_name());
    if (accept(Tok::NotEqual)) return FOFormula::negate(FOFormula::equal(std::move(lhs), symbol_name()));
    unexpected("'=' or '!='");
  }

  // -------------------------------------------------------------- model

  void prescan_constants() {
    for (std::size_t i = 0; i + 1 < tokens_.size(); ++i) {
      const bool item_start = i == 0 || tokens_[i - 1].kind == Tok::Semi;
      if (item_start && tokens_[i].kind == Tok::Ident && tokens_[i].text == "constant" &&
          tokens_[i + 1].kind == Tok::Ident) {
        constants.insert(tokens_[i + 1].text);
      }
    }
  }

  ModelDocument model(std::vector<SourceSpan>& spans) {
    prescan_constants();
    ModelDocument doc;
    while (!at(Tok::End)) {
      spans.push_back(peek().span);
      doc.items.push_back(model_item());
    }
    return doc;
  }

  ModelItem model_item() {
    if (at_keyword("relation") || at_keyword("rigid")) {
      const bool rigid = next().text == "rigid";
      std::string name = symbol_name();
      expect(Tok::Slash);
      const std::size_t arity = small_integer();
      expect(Tok::Semi);
      if (rigid) return RigidDecl{std::move(name), arity};
      return RelationDecl{std::move(name), arity};
    }
    if (at_keyword("constant")) {
      next();
      std::string name = symbol_name();
      expect(Tok::Semi);
      return ConstantDecl{std::move(name)};
    }
    if (at_keyword("combfun")) {
      next();
      std::string name = symbol_name();
      expect_keyword("cumulative");
      expect(Tok::LBracket);
      std::vector<Rational> table{rational()};
      while (accept(Tok::Comma)) table.push_back(rational());
      expect(Tok::RBracket);
      expect(Tok::Semi);
      return CombfunDecl{std::move(name), std::move(table)};
    }
    const Token& head = peek();
    std::string name = symbol_name();
    if (accept(Tok::Equal)) {
      const Token& value_token = peek();
      Rational value = rational();
      expect(Tok::Semi);
      if (!value.in_unit_interval()) {
        throw ParseError(value_token.span, "parameter '" + name + "' = " + value.to_string() + " is outside [0,1]");
      }
      if (parameters.contains(name)) throw ParseError(head.span, "parameter '" + name + "' is defined twice");
      parameters.emplace(name, value);
      return ParameterDecl{std::move(name), value};
    }
    if (!at(Tok::LParen)) unexpected("'(' or '='");
    next();
    std::vector<std::string> params = names_until(Tok::RParen);
    expect(Tok::RParen);
    expect(Tok::Equal);
    Formula body = formula();
    expect(Tok::Semi);
    return LabelDecl{std::move(name), std::move(params), std::move(body)};
  }

  // ----------------------------------------------------------- scenario

  AtomText atom_text() {
    AtomText a;
    a.relation = identifier();
    expect(Tok::LParen);
    a.args = names_until(Tok::RParen);
    expect(Tok::RParen);
    return a;
  }

  ScenarioDocument scenario() {
    ScenarioDocument doc;
    std::set<std::string> elements;
    auto element = [&]() {
      const Token& t = expect(Tok::Ident);
      if (!elements.contains(t.text)) throw ParseError(t.span, "'" + t.text + "' is not a domain element");
      return t.text;
    };

    expect_keyword("domain");
    expect(Tok::LBrace);
    do {
      const Token& t = expect(Tok::Ident);
      if (!elements.insert(t.text).second) throw ParseError(t.span, "domain element '" + t.text + "' listed twice");
      doc.domain.push_back(t.text);
    } while (accept(Tok::Comma));
    expect(Tok::RBrace);

    std::set<std::string> rigid_seen;
    while (at_keyword("rigid")) {
      next();
      const Token& name = expect(Tok::Ident);
      if (!rigid_seen.insert(name.text).second) throw ParseError(name.span, "rigid relation '" + name.text + "' given twice");
      RigidTable table{name.text, {}};
      expect(Tok::Equal);
      expect(Tok::LBrace);
      do {
        const Token& open = expect(Tok::LParen);
        std::vector<std::string> tuple{element()};
        while (accept(Tok::Comma)) tuple.push_back(element());
        expect(Tok::RParen);
        if (!table.tuples.empty() && tuple.size() != table.tuples.front().size()) {
          throw ParseError(open.span, "tuple has " + std::to_string(tuple.size()) + " elements, expected " +
                                          std::to_string(table.tuples.front().size()));
        }
        table.tuples.push_back(std::move(tuple));
      } while (accept(Tok::Comma));
      expect(Tok::RBrace);
      doc.rigid.push_back(std::move(table));
    }

    std::set<std::string> bound;
    while (at_keyword("bind")) {
      next();
      const Token& name = expect(Tok::Ident);
      if (!bound.insert(name.text).second) throw ParseError(name.span, "constant '" + name.text + "' bound twice");
      expect(Tok::Equal);
      doc.bindings.emplace_back(name.text, element());
    }

    if (at_keyword("evidence")) {
      next();
      expect(Tok::LBrace);
      std::map<std::pair<std::string, std::vector<std::string>>, bool> seen;
      do {
        const Token& start = peek();
        LiteralText lit;
        lit.positive = !accept(Tok::Bang);
        lit.atom = atom_text();
        for (const auto& a : lit.atom.args) {
          if (!elements.contains(a)) throw ParseError(start.span, "'" + a + "' is not a domain element");
        }
        auto [it, inserted] = seen.emplace(std::pair(lit.atom.relation, lit.atom.args), lit.positive);
        if (!inserted && it->second != lit.positive) {
          throw ParseError(start.span, "contradictory evidence: " + lit.atom.relation + " atom given with both signs");
        }
        doc.evidence.push_back(std::move(lit));
      } while (accept(Tok::Comma));
      expect(Tok::RBrace);
    }

    expect_keyword("query");
    do {
      const Token& start = peek();
      AtomText a = atom_text();
      for (const auto& e : a.args) {
        if (!elements.contains(e)) throw ParseError(start.span, "'" + e + "' is not a domain element");
      }
      doc.queries.push_back(std::move(a));
    } while (accept(Tok::Comma));
    expect_end();
    return doc;
  }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::size_t depth_ = 0;
};

RelationalNetwork build_network_impl(const ModelDocument& document, const std::vector<SourceSpan>* spans) {
  auto located = [&](std::size_t i, auto&& action) {
    try {
      action();
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      if (spans) throw ParseError((*spans)[i], e.what());
      throw;
    }
  };
  Vocabulary vocabulary;
  CombinationRegistry registry;
  for (std::size_t i = 0; i < document.items.size(); ++i) {
    located(i, [&] {
      std::visit(
          [&](const auto& item) {
            using T = std::decay_t<decltype(item)>;
            if constexpr (std::is_same_v<T, RelationDecl>) {
              vocabulary.add_probabilistic(item.name, item.arity);
            } else if constexpr (std::is_same_v<T, RigidDecl>) {
              vocabulary.add_rigid(item.name, item.arity);
            } else if constexpr (std::is_same_v<T, ConstantDecl>) {
              vocabulary.add_constant(item.name);
            } else if constexpr (std::is_same_v<T, CombfunDecl>) {
              registry.register_function(CombinationFunction::cumulative(item.name, CumulativeTable(item.table)));
            }
          },
          document.items[i]);
    });
  }
  RelationalNetwork network(std::move(vocabulary), std::move(registry));
  std::set<std::string> labeled;
  for (std::size_t i = 0; i < document.items.size(); ++i) {
    const auto* label = std::get_if<LabelDecl>(&document.items[i]);
    if (!label) continue;
    located(i, [&] {
      if (!labeled.insert(label->relation).second) throw Error("relation '" + label->relation + "' is labeled twice");
      network.set_label(label->relation, label->params, label->body);
    });
  }
  return network;
}

// --------------------------------------------------------------- printing

int precedence(const Constraint& c) {
  if (c.as<Constraint::Or>()) return 0;
  if (c.as<Constraint::And>()) return 1;
  return 2;
}

std::string print(const Constraint& c, int context);

std::string wrap(const Constraint& c, int context) {
  std::string s = print(c, context);
  return precedence(c) < context ? "(" + s + ")" : s;
}

std::string join_terms(const std::vector<Term>& terms) {
  std::string out;
  for (std::size_t i = 0; i < terms.size(); ++i) out += (i ? ", " : "") + terms[i].name;
  return out;
}

std::string join_names(const std::vector<std::string>& names, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) out += (i ? sep : "") + names[i];
  return out;
}

std::string print(const Constraint& c, int) {
  return std::visit(
      [&](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Constraint::True>) {
          return "true";
        } else if constexpr (std::is_same_v<T, Constraint::False>) {
          return "false";
        } else if constexpr (std::is_same_v<T, Constraint::Equal>) {
          return n.lhs.name + " = " + n.rhs.name;
        } else if constexpr (std::is_same_v<T, Constraint::Rigid>) {
          return n.relation + "(" + join_terms(n.args) + ")";
        } else if constexpr (std::is_same_v<T, Constraint::Not>) {
          if (const auto* eq = n.operand.template as<Constraint::Equal>()) return eq->lhs.name + " != " + eq->rhs.name;
          return "!" + wrap(n.operand, 2);
        } else if constexpr (std::is_same_v<T, Constraint::And>) {
          return wrap(n.lhs, 1) + " & " + wrap(n.rhs, 2);
        } else {
          return wrap(n.lhs, 0) + " | " + wrap(n.rhs, 1);
        }
      },
      c.node());
}

int fo_precedence(const FOFormula& f) {
  if (std::holds_alternative<FOFormula::Or>(f.node())) return 0;
  if (std::holds_alternative<FOFormula::And>(f.node())) return 1;
  if (const auto* n = std::get_if<FOFormula::Not>(&f.node())) {
    if (std::holds_alternative<FOFormula::Equal>(n->operand.node())) return 1;  // prints infix
  }
  return 2;
}

std::string print_fo(const FOFormula& f);

std::string wrap_fo(const FOFormula& f, int context) {
  std::string s = print_fo(f);
  return fo_precedence(f) < context ? "(" + s + ")" : s;
}

std::string print_fo(const FOFormula& f) {
  return std::visit(
      [&](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, FOFormula::Truth>) {
          return n.value ? "true" : "false";
        } else if constexpr (std::is_same_v<T, FOFormula::Atom>) {
          return n.relation + "(" + join_names(n.args, ", ") + ")";
        } else if constexpr (std::is_same_v<T, FOFormula::Equal>) {
          return n.lhs + " = " + n.rhs;
        } else if constexpr (std::is_same_v<T, FOFormula::Not>) {
          if (const auto* eq = std::get_if<FOFormula::Equal>(&n.operand.node())) return eq->lhs + " != " + eq->rhs;
          return "!" + wrap_fo(n.operand, 2);
        } else if constexpr (std::is_same_v<T, FOFormula::And>) {
          return wrap_fo(n.lhs, 1) + " & " + wrap_fo(n.rhs, 2);
        } else if constexpr (std::is_same_v<T, FOFormula::Or>) {
          return wrap_fo(n.lhs, 0) + " | " + wrap_fo(n.rhs, 1);
        } else if constexpr (std::is_same_v<T, FOFormula::Exists>) {
          return "exists " + n.variable + " " + wrap_fo(n.body, 2);
        } else {
          return "forall " + n.variable + " " + wrap_fo(n.body, 2);
        }
      },
      f.node());
}

}  // namespace

// -------------------------------------------------------------- parse API

ParsedModel parse_model_unchecked(std::string_view text) {
  Parser parser(text);
  std::vector<SourceSpan> spans;
  ModelDocument document = parser.model(spans);
  RelationalNetwork network = build_network_impl(document, &spans);
  ValidationReport report = validate_network(network);
  return ParsedModel{std::move(document), std::move(network), std::move(report)};
}

ParsedModel parse_model(std::string_view text) {
  ParsedModel parsed = parse_model_unchecked(text);
  if (!parsed.report.ok()) throw ValidationError(parsed.report);
  return parsed;
}

RelationalNetwork build_network(const ModelDocument& document) { return build_network_impl(document, nullptr); }

Formula parse_formula(std::string_view text, const std::set<std::string>& constants,
                      const std::map<std::string, Rational>& parameters) {
  Parser parser(text);
  parser.constants = constants;
  parser.parameters = parameters;
  Formula f = parser.formula();
  parser.expect_end();
  return f;
}

Constraint parse_constraint(std::string_view text, const std::set<std::string>& constants) {
  Parser parser(text);
  parser.constants = constants;
  Constraint c = parser.constraint();
  parser.expect_end();
  return c;
}

FOFormula parse_fol(std::string_view text) {
  Parser parser(text);
  FOFormula f = parser.fol();
  parser.expect_end();
  return f;
}

ScenarioDocument parse_scenario(std::string_view text) {
  Parser parser(text);
  return parser.scenario();
}

BoundScenario bind_scenario(const RelationalNetwork& network, const ScenarioDocument& scenario) {
  const Vocabulary& vocabulary = network.vocabulary();
  Structure s(scenario.domain);
  for (const auto& [name, arity] : vocabulary.rigid()) s.add_relation(name, arity, Truth::False);
  for (const RigidTable& table : scenario.rigid) {
    if (!vocabulary.is_rigid(table.relation)) throw Error("'" + table.relation + "' is not a declared rigid relation");
    const std::size_t arity = vocabulary.arity(table.relation);
    for (const auto& names : table.tuples) {
      if (names.size() != arity) {
        throw Error("tuple of '" + table.relation + "' has " + std::to_string(names.size()) + " elements, expected " +
                    std::to_string(arity));
      }
      Tuple t;
      for (const auto& n : names) t.push_back(s.element(n));
      s.set(table.relation, t, true);
    }
  }
  for (const auto& [constant, element] : scenario.bindings) {
    if (!vocabulary.is_constant(constant)) throw Error("'" + constant + "' is not a declared constant");
    s.bind_constant(constant, s.element(element));
  }
  for (const std::string& c : vocabulary.constants()) {
    if (!s.has_constant(c)) throw Error("constant '" + c + "' is not bound by the scenario");
  }

  auto ground = [&](const AtomText& a) {
    GroundAtom g{a.relation, {}};
    for (const auto& n : a.args) g.args.push_back(s.element(n));
    check_atom(network, s, g);
    return g;
  };
  BoundScenario out{s, {}, {}};
  for (const LiteralText& lit : scenario.evidence) out.evidence.add(ground(lit.atom), lit.positive);
  for (const AtomText& q : scenario.queries) out.queries.push_back(ground(q));
  return out;
}

// ---------------------------------------------------------------- printing

std::string to_string(const Term& t) { return t.name; }

std::string to_string(const Constraint& c) { return print(c, 0); }

std::string to_string(const Formula& f) {
  return std::visit(
      [&](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Formula::Const>) {
          return n.value.to_string();
        } else if constexpr (std::is_same_v<T, Formula::Indicator>) {
          return n.relation + "(" + join_terms(n.args) + ")";
        } else if constexpr (std::is_same_v<T, Formula::Convex>) {
          return "cc(" + to_string(n.weight) + ", " + to_string(n.if_true) + ", " + to_string(n.if_false) + ")";
        } else {
          std::string out = n.function + "{ ";
          for (std::size_t i = 0; i < n.args.size(); ++i) out += (i ? ", " : "") + to_string(n.args[i]);
          out += " | " + join_names(n.bound, ", ");
          out += n.bound.empty() ? "; " : " ; ";
          return out + to_string(n.constraint) + " }";
        }
      },
      f.node());
}

std::string to_string(const FOFormula& f) { return print_fo(f); }

std::string pretty_print(const ModelDocument& document) {
  std::string out;
  for (const ModelItem& item : document.items) {
    out += std::visit(
        [](const auto& n) -> std::string {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, RelationDecl>) {
            return "relation " + n.name + "/" + std::to_string(n.arity) + ";";
          } else if constexpr (std::is_same_v<T, RigidDecl>) {
            return "rigid " + n.name + "/" + std::to_string(n.arity) + ";";
          } else if constexpr (std::is_same_v<T, ConstantDecl>) {
            return "constant " + n.name + ";";
          } else if constexpr (std::is_same_v<T, CombfunDecl>) {
            std::string s = "combfun " + n.name + " cumulative [";
            for (std::size_t i = 0; i < n.table.size(); ++i) s += (i ? ", " : "") + n.table[i].to_string();
            return s + "];";
          } else if constexpr (std::is_same_v<T, ParameterDecl>) {
            return n.name + " = " + n.value.to_string() + ";";
          } else {
            return n.relation + "(" + join_names(n.params, ", ") + ") = " + to_string(n.body) + ";";
          }
        },
        item);
    out += "\n";
  }
  return out;
}

std::string pretty_print(const ScenarioDocument& scenario) {
  std::string out = "domain {" + join_names(scenario.domain, ", ") + "}\n";
  for (const RigidTable& table : scenario.rigid) {
    out += "rigid " + table.relation + " = {";
    for (std::size_t i = 0; i < table.tuples.size(); ++i) {
      out += (i ? ", (" : "(") + join_names(table.tuples[i], ",") + ")";
    }
    out += "}\n";
  }
  for (const auto& [constant, element] : scenario.bindings) out += "bind " + constant + " = " + element + "\n";
  auto atom = [](const AtomText& a) { return a.relation + "(" + join_names(a.args, ",") + ")"; };
  if (!scenario.evidence.empty()) {
    out += "evidence {";
    for (std::size_t i = 0; i < scenario.evidence.size(); ++i) {
      out += (i ? ", " : "") + std::string(scenario.evidence[i].positive ? "" : "!") + atom(scenario.evidence[i].atom);
    }
    out += "}\n";
  }
  out += "query ";
  for (std::size_t i = 0; i < scenario.queries.size(); ++i) out += (i ? ", " : "") + atom(scenario.queries[i]);
  return out + "\n";
}

}  // namespace rbn
