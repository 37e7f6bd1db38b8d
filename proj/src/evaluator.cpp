#include "rbn/evaluator.hpp"

#include <cmath>

#include "rbn/dependency.hpp"
#include "rbn/errors.hpp"

namespace rbn {

Binding::Binding(std::initializer_list<std::pair<std::string, Element>> entries) : entries_(entries) {}

std::optional<Element> Binding::lookup(std::string_view variable) const {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
    if (it->first == variable) return it->second;
  }
  return std::nullopt;
}

Element Binding::at(std::string_view variable) const {
  if (auto e = lookup(variable)) return *e;
  throw EvaluationError("unbound variable '" + std::string(variable) + "'");
}

Element eval_term(const Term& term, const Structure& s, const Binding& b) {
  return term.is_variable() ? b.at(term.name) : s.constant(term.name);
}

bool eval_constraint(const Constraint& c, const Structure& s, const Binding& b) {
  return std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Constraint::True>) {
          return true;
        } else if constexpr (std::is_same_v<T, Constraint::False>) {
          return false;
        } else if constexpr (std::is_same_v<T, Constraint::Equal>) {
          return eval_term(n.lhs, s, b) == eval_term(n.rhs, s, b);
        } else if constexpr (std::is_same_v<T, Constraint::Rigid>) {
          Tuple t;
          t.reserve(n.args.size());
          for (const Term& arg : n.args) t.push_back(eval_term(arg, s, b));
          return s.holds(n.relation, t);
        } else if constexpr (std::is_same_v<T, Constraint::Not>) {
          return !eval_constraint(n.operand, s, b);
        } else if constexpr (std::is_same_v<T, Constraint::And>) {
          return eval_constraint(n.lhs, s, b) && eval_constraint(n.rhs, s, b);
        } else {
          return eval_constraint(n.lhs, s, b) || eval_constraint(n.rhs, s, b);
        }
      },
      c.node());
}

namespace {

void top_level_conjuncts(const Constraint& c, std::vector<const Constraint::Equal*>& out) {
  if (const auto* a = c.as<Constraint::And>()) {
    top_level_conjuncts(a->lhs, out);
    top_level_conjuncts(a->rhs, out);
  } else if (const auto* e = c.as<Constraint::Equal>()) {
    out.push_back(e);
  }
}

template <class Scalar>
class FormulaEvaluator {
 public:
  FormulaEvaluator(const Structure& s, const CombinationRegistry& registry, Binding binding)
      : s_(s), registry_(registry), binding_(std::move(binding)) {}

  Scalar eval(const Formula& f) {
    return std::visit([&](const auto& n) -> Scalar { return eval_node(n); }, f.node());
  }

  BasicMultiset<Scalar> multiset(const Formula::Comb& term) {
    BasicMultiset<Scalar> out;
    std::vector<const Constraint::Equal*> equalities;
    top_level_conjuncts(term.constraint, equalities);
    enumerate_bound(term, equalities, 0, out);
    return out;
  }

 private:
  Scalar eval_node(const Formula::Const& n) { return to_scalar<Scalar>(n.value); }

  Scalar eval_node(const Formula::Indicator& n) {
    Element buffer[16];
    std::vector<Element> heap;
    Element* tuple = buffer;
    if (n.args.size() > 16) {
      heap.resize(n.args.size());
      tuple = heap.data();
    }
    for (std::size_t i = 0; i < n.args.size(); ++i) tuple[i] = eval_term(n.args[i], s_, binding_);
    return s_.holds(n.relation, std::span<const Element>(tuple, n.args.size())) ? Scalar(1) : Scalar(0);
  }

  Scalar eval_node(const Formula::Convex& n) {
    const Scalar w = eval(n.weight);
    const Scalar a = eval(n.if_true);
    const Scalar b = eval(n.if_false);
    return w * a + (Scalar(1) - w) * b;
  }

  Scalar eval_node(const Formula::Comb& n) { return registry_.get(n.function).template apply<Scalar>(multiset(n).values()); }

  // A bound variable equated (at top level of the constraint) with an
  // already determined term takes only that value; the full constraint is
  // still checked once all bound variables are assigned.
  std::optional<Element> forced_value(const Formula::Comb& term, const std::vector<const Constraint::Equal*>& equalities,
                                      std::size_t j) {
    const std::string& z = term.bound[j];
    auto determined = [&](const Term& t) -> std::optional<Element> {
      if (!t.is_variable()) return s_.has_constant(t.name) ? std::optional<Element>(s_.constant(t.name)) : std::nullopt;
      for (std::size_t k = j; k < term.bound.size(); ++k) {
        if (term.bound[k] == t.name) return std::nullopt;
      }
      return binding_.lookup(t.name);
    };
    for (const Constraint::Equal* eq : equalities) {
      if (eq->lhs.is_variable() && eq->lhs.name == z) {
        if (auto v = determined(eq->rhs)) return v;
      }
      if (eq->rhs.is_variable() && eq->rhs.name == z) {
        if (auto v = determined(eq->lhs)) return v;
      }
    }
    return std::nullopt;
  }

  void enumerate_bound(const Formula::Comb& term, const std::vector<const Constraint::Equal*>& equalities, std::size_t j,
                       BasicMultiset<Scalar>& out) {
    if (j == term.bound.size()) {
      if (!eval_constraint(term.constraint, s_, binding_)) return;
      for (const Formula& arg : term.args) out.insert(eval(arg));
      return;
    }
    if (auto forced = forced_value(term, equalities, j)) {
      binding_.bind(term.bound[j], *forced);
      enumerate_bound(term, equalities, j + 1, out);
      binding_.pop();
      return;
    }
    for (Element e = 0; e < s_.size(); ++e) {
      binding_.bind(term.bound[j], e);
      enumerate_bound(term, equalities, j + 1, out);
      binding_.pop();
    }
  }

  const Structure& s_;
  const CombinationRegistry& registry_;
  Binding binding_;
};

// Running product that falls back to log space once a factor is tiny.
template <class Scalar>
class Product {
 public:
  void multiply(const Scalar& factor) {
    if constexpr (std::is_same_v<Scalar, double>) {
      if (factor == 0.0) {
        zero_ = true;
      } else if (log_mode_ || factor < 1e-300) {
        if (!log_mode_) {
          log_value_ = std::log(value_);
          log_mode_ = true;
        }
        log_value_ += std::log(factor);
      } else {
        value_ *= factor;
      }
    } else {
      value_ *= factor;
    }
  }

  Scalar result(EvalDiagnostics* diagnostics) const {
    if constexpr (std::is_same_v<Scalar, double>) {
      if (zero_) return 0.0;
      if (!log_mode_) return value_;
      const double out = std::exp(log_value_);
      if (out == 0.0 && diagnostics) diagnostics->underflow = true;
      return out;
    } else {
      return value_;
    }
  }

 private:
  Scalar value_ = 1;
  double log_value_ = 0.0;
  bool log_mode_ = false;
  bool zero_ = false;
};

template <class Scalar>
void multiply_interpretation(const RelationalNetwork& network, const Structure& s, std::string_view relation,
                             Product<Scalar>& product) {
  const Label& label = network.label(relation);
  const Interpretation& interp = s.relation(relation);
  for (std::size_t i = 0; i < interp.cell_count(); ++i) {
    const Tuple t = interp.tuple(i);
    Binding b;
    for (std::size_t k = 0; k < label.params.size(); ++k) b.bind(label.params[k], t[k]);
    const Scalar p = FormulaEvaluator<Scalar>(s, network.registry(), std::move(b)).eval(label.body);
    switch (interp.at(i)) {
      case Truth::True:
        product.multiply(p);
        break;
      case Truth::False:
        product.multiply(Scalar(1) - p);
        break;
      case Truth::Unknown:
        throw EvaluationError("interpretation of '" + std::string(relation) + "' is incomplete");
    }
  }
}

}  // namespace

template <class Scalar>
BasicMultiset<Scalar> build_multiset(const Formula::Comb& term, const Structure& s, const Binding& b,
                                     const CombinationRegistry& registry) {
  return FormulaEvaluator<Scalar>(s, registry, b).multiset(term);
}

template <class Scalar>
Scalar eval_formula(const Formula& f, const Structure& s, const Binding& b, const CombinationRegistry& registry) {
  return FormulaEvaluator<Scalar>(s, registry, b).eval(f);
}

template <class Scalar>
Scalar atom_probability(const RelationalNetwork& network, const Structure& s, const GroundAtom& g) {
  const Label& label = network.label(g.relation);
  if (label.params.size() != g.args.size()) throw EvaluationError("arity mismatch for atom of '" + g.relation + "'");
  Binding b;
  for (std::size_t k = 0; k < label.params.size(); ++k) b.bind(label.params[k], g.args[k]);
  return FormulaEvaluator<Scalar>(s, network.registry(), std::move(b)).eval(label.body);
}

template <class Scalar>
Scalar interpretation_probability(const RelationalNetwork& network, const Structure& s, std::string_view relation,
                                  EvalDiagnostics* diagnostics) {
  Product<Scalar> product;
  multiply_interpretation(network, s, relation, product);
  return product.result(diagnostics);
}

template <class Scalar>
Scalar joint_probability(const RelationalNetwork& network, const Structure& s, EvalDiagnostics* diagnostics,
                         bool check_wellfounded) {
  if (check_wellfounded && network.any_recursive()) {
    const WellFoundedness wf = rbn::check_wellfounded(network, s);
    if (!wf.ok) throw WellFoundednessError("structure does not give a well-founded recursion", wf.cycle_names(s));
  }
  Product<Scalar> product;
  for (const std::string& relation : network.topological_order()) {
    multiply_interpretation(network, s, relation, product);
  }
  return product.result(diagnostics);
}

#define RBN_INSTANTIATE(S)                                                                                          \
  template BasicMultiset<S> build_multiset<S>(const Formula::Comb&, const Structure&, const Binding&,               \
                                              const CombinationRegistry&);                                          \
  template S eval_formula<S>(const Formula&, const Structure&, const Binding&, const CombinationRegistry&);         \
  template S atom_probability<S>(const RelationalNetwork&, const Structure&, const GroundAtom&);                    \
  template S interpretation_probability<S>(const RelationalNetwork&, const Structure&, std::string_view,            \
                                           EvalDiagnostics*);                                                       \
  template S joint_probability<S>(const RelationalNetwork&, const Structure&, EvalDiagnostics*, bool);

RBN_INSTANTIATE(double)
RBN_INSTANTIATE(Exact)

#undef RBN_INSTANTIATE

}  // namespace rbn
