#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rbn/combinators.hpp"
#include "rbn/model.hpp"
#include "rbn/structure.hpp"

namespace rbn {

// Variable -> element. Later bindings shadow earlier ones with the same name.
class Binding {
 public:
  Binding() = default;
  Binding(std::initializer_list<std::pair<std::string, Element>> entries);

  void bind(std::string variable, Element e) { entries_.emplace_back(std::move(variable), e); }
  void pop(std::size_t n = 1) { entries_.resize(entries_.size() - n); }
  std::size_t size() const noexcept { return entries_.size(); }

  std::optional<Element> lookup(std::string_view variable) const;
  Element at(std::string_view variable) const;  // throws EvaluationError

 private:
  std::vector<std::pair<std::string, Element>> entries_;
};

struct EvalDiagnostics {
  bool underflow = false;
};

Element eval_term(const Term& term, const Structure& s, const Binding& b);

bool eval_constraint(const Constraint& c, const Structure& s, const Binding& b);

// The multiset {F_1(d,d'), ..., F_k(d,d') | d' in D^|z| with c(d,d')}: one
// entry per argument index and per satisfying d', whether or not d' occurs
// in the argument.
template <class Scalar = double>
BasicMultiset<Scalar> build_multiset(const Formula::Comb& term, const Structure& s, const Binding& b,
                                     const CombinationRegistry& registry = CombinationRegistry::builtin());

template <class Scalar = double>
Scalar eval_formula(const Formula& f, const Structure& s, const Binding& b,
                    const CombinationRegistry& registry = CombinationRegistry::builtin());

// F_r(d) for g = r(d).
template <class Scalar = double>
Scalar atom_probability(const RelationalNetwork& network, const Structure& s, const GroundAtom& g);

// prod_{d in I(r)} F_r(d) * prod_{d not in I(r)} (1 - F_r(d)), with I(r) read from `s`.
template <class Scalar = double>
Scalar interpretation_probability(const RelationalNetwork& network, const Structure& s, std::string_view relation,
                                  EvalDiagnostics* diagnostics = nullptr);

// Probability of the full structure `s` under the network. For recursive
// networks the well-foundedness of `s` is checked first unless the caller
// has already done so.
template <class Scalar = double>
Scalar joint_probability(const RelationalNetwork& network, const Structure& s, EvalDiagnostics* diagnostics = nullptr,
                         bool check_wellfounded = true);

}  // namespace rbn
