#include "rbn/structure.hpp"

#include "rbn/errors.hpp"

namespace rbn {

Interpretation::Interpretation(std::size_t arity, std::size_t domain_size, Truth fill)
    : arity_(arity), domain_size_(domain_size) {
  std::size_t cells = 1;
  for (std::size_t i = 0; i < arity; ++i) cells *= domain_size;
  cells_.assign(cells, fill);
}

std::size_t Interpretation::index(std::span<const Element> tuple) const {
  if (tuple.size() != arity_) throw EvaluationError("tuple length does not match arity");
  std::size_t idx = 0;
  for (Element e : tuple) {
    if (e >= domain_size_) throw EvaluationError("element outside the domain");
    idx = idx * domain_size_ + e;
  }
  return idx;
}

Tuple Interpretation::tuple(std::size_t index) const {
  Tuple out(arity_);
  for (std::size_t i = arity_; i-- > 0;) {
    out[i] = static_cast<Element>(index % domain_size_);
    index /= domain_size_;
  }
  return out;
}

void Interpretation::fill(Truth value) { std::fill(cells_.begin(), cells_.end(), value); }

Structure::Structure(std::vector<std::string> domain) : domain_(std::move(domain)) {
  for (std::size_t i = 0; i < domain_.size(); ++i) {
    if (!index_.emplace(domain_[i], static_cast<Element>(i)).second) {
      throw EvaluationError("domain element '" + domain_[i] + "' listed twice");
    }
  }
}

Element Structure::element(std::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw EvaluationError("unknown domain element '" + std::string(name) + "'");
  return it->second;
}

bool Structure::has_element(std::string_view name) const { return index_.find(name) != index_.end(); }

void Structure::add_relation(const std::string& relation, std::size_t arity, Truth fill) {
  relations_.insert_or_assign(relation, Interpretation(arity, domain_.size(), fill));
}

bool Structure::has_relation(std::string_view relation) const { return relations_.find(relation) != relations_.end(); }

Interpretation& Structure::relation(std::string_view relation) {
  auto it = relations_.find(relation);
  if (it == relations_.end()) throw EvaluationError("no interpretation for '" + std::string(relation) + "'");
  return it->second;
}

const Interpretation& Structure::relation(std::string_view relation) const {
  auto it = relations_.find(relation);
  if (it == relations_.end()) throw EvaluationError("no interpretation for '" + std::string(relation) + "'");
  return it->second;
}

std::vector<std::string> Structure::relation_names() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : relations_) out.push_back(name);
  return out;
}

Truth Structure::truth(std::string_view relation, std::span<const Element> tuple) const {
  return this->relation(relation).at(tuple);
}

bool Structure::holds(std::string_view relation, std::span<const Element> tuple) const {
  switch (truth(relation, tuple)) {
    case Truth::True:
      return true;
    case Truth::False:
      return false;
    case Truth::Unknown:
      break;
  }
  GroundAtom atom{std::string(relation), Tuple(tuple.begin(), tuple.end())};
  throw WellFoundednessError("atom " + to_string(atom, *this) + " is read before it is determined",
                             {to_string(atom, *this)});
}

void Structure::set(std::string_view relation, std::span<const Element> tuple, bool value) {
  this->relation(relation).set(tuple, value ? Truth::True : Truth::False);
}

void Structure::bind_constant(const std::string& constant, Element e) {
  if (e >= domain_.size()) throw EvaluationError("constant '" + constant + "' bound outside the domain");
  constants_.insert_or_assign(constant, e);
}

bool Structure::has_constant(std::string_view constant) const { return constants_.find(constant) != constants_.end(); }

Element Structure::constant(std::string_view constant) const {
  auto it = constants_.find(constant);
  if (it == constants_.end()) throw EvaluationError("constant '" + std::string(constant) + "' is not bound");
  return it->second;
}

std::string to_string(const GroundAtom& atom, const Structure& structure) {
  std::string out = atom.relation + "(";
  for (std::size_t i = 0; i < atom.args.size(); ++i) {
    if (i) out += ",";
    out += atom.args[i] < structure.size() ? structure.name(atom.args[i]) : "?" + std::to_string(atom.args[i]);
  }
  return out + ")";
}

std::vector<Tuple> all_tuples(std::size_t domain_size, std::size_t arity) {
  std::vector<Tuple> out;
  if (arity > 0 && domain_size == 0) return out;
  Tuple t(arity, 0);
  while (true) {
    out.push_back(t);
    std::size_t i = arity;
    while (i > 0) {
      --i;
      if (++t[i] < domain_size) break;
      t[i] = 0;
      if (i == 0) return out;
    }
    if (arity == 0) return out;
  }
}

}  // namespace rbn
