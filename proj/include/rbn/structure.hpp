#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rbn {

using Element = std::uint32_t;
using Tuple = std::vector<Element>;

// Unknown marks atoms whose truth value is not determined yet.
enum class Truth : std::uint8_t { False, True, Unknown };

// Dense interpretation of one relation over D^arity, tuples in
// lexicographic order.
class Interpretation {
 public:
  Interpretation() = default;
  Interpretation(std::size_t arity, std::size_t domain_size, Truth fill);

  std::size_t arity() const noexcept { return arity_; }
  std::size_t cell_count() const noexcept { return cells_.size(); }

  std::size_t index(std::span<const Element> tuple) const;
  Tuple tuple(std::size_t index) const;

  Truth at(std::size_t index) const { return cells_[index]; }
  void set(std::size_t index, Truth value) { cells_[index] = value; }
  Truth at(std::span<const Element> tuple) const { return cells_[index(tuple)]; }
  void set(std::span<const Element> tuple, Truth value) { cells_[index(tuple)] = value; }

  void fill(Truth value);

 private:
  std::size_t arity_ = 0;
  std::size_t domain_size_ = 0;
  std::vector<Truth> cells_;
};

// Finite domain with (possibly partial) interpretations of relation symbols
// and bindings of rigid constants.
class Structure {
 public:
  Structure() = default;
  explicit Structure(std::vector<std::string> domain);

  std::size_t size() const noexcept { return domain_.size(); }
  const std::vector<std::string>& domain() const noexcept { return domain_; }
  const std::string& name(Element e) const { return domain_.at(e); }
  Element element(std::string_view name) const;  // throws EvaluationError
  bool has_element(std::string_view name) const;

  void add_relation(const std::string& relation, std::size_t arity, Truth fill = Truth::False);
  bool has_relation(std::string_view relation) const;
  Interpretation& relation(std::string_view relation);
  const Interpretation& relation(std::string_view relation) const;
  std::vector<std::string> relation_names() const;

  Truth truth(std::string_view relation, std::span<const Element> tuple) const;
  // Throws EvaluationError when the relation is missing and
  // WellFoundednessError when the atom is Unknown.
  bool holds(std::string_view relation, std::span<const Element> tuple) const;
  void set(std::string_view relation, std::span<const Element> tuple, bool value);

  void bind_constant(const std::string& constant, Element e);
  bool has_constant(std::string_view constant) const;
  Element constant(std::string_view constant) const;
  const std::map<std::string, Element, std::less<>>& constants() const noexcept { return constants_; }

 private:
  std::vector<std::string> domain_;
  std::map<std::string, Element, std::less<>> index_;
  std::map<std::string, Interpretation, std::less<>> relations_;
  std::map<std::string, Element, std::less<>> constants_;
};

struct GroundAtom {
  std::string relation;
  Tuple args;

  friend auto operator<=>(const GroundAtom&, const GroundAtom&) = default;
  friend bool operator==(const GroundAtom&, const GroundAtom&) = default;
};

// "b(l1,l2)"
std::string to_string(const GroundAtom& atom, const Structure& structure);

// Every tuple of D^arity in lexicographic order.
std::vector<Tuple> all_tuples(std::size_t domain_size, std::size_t arity);

}  // namespace rbn
