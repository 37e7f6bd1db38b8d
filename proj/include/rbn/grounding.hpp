#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rbn/dependency.hpp"
#include "rbn/model.hpp"
#include "rbn/rational.hpp"
#include "rbn/structure.hpp"

namespace rbn {

// Signed ground literals. Adding an atom with both signs throws Error.
class Evidence {
 public:
  Evidence() = default;

  void add(GroundAtom atom, bool value);
  std::optional<bool> value(const GroundAtom& atom) const;
  bool contains(const GroundAtom& atom) const { return literals_.contains(atom); }
  const std::map<GroundAtom, bool>& literals() const noexcept { return literals_; }
  std::size_t size() const noexcept { return literals_.size(); }
  bool empty() const noexcept { return literals_.empty(); }

 private:
  std::map<GroundAtom, bool> literals_;
};

// Throws Error unless the atom names a probabilistic relation with matching
// arity over s's domain.
void check_atom(const RelationalNetwork& network, const Structure& s, const GroundAtom& atom);

// Boolean ground-atom nodes; parents of r(d) are the atoms r'(d') with
// pa_{r,r'}(d, d'). Conditional probabilities are computed on demand from
// the label of r. Evaluation mutates an internal scratch structure, so one
// instance must not be shared across threads.
class GroundNetwork {
 public:
  struct Node {
    GroundAtom atom;
    std::vector<std::size_t> parents;  // ascending
    std::vector<std::size_t> children;
  };

  GroundNetwork(const RelationalNetwork& network, const Structure& base, std::vector<GroundAtom> atoms,
                const DependencyAnalysis& analysis);

  const RelationalNetwork& network() const noexcept { return *network_; }
  const Structure& structure() const noexcept { return scratch_; }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edges_; }
  std::optional<std::size_t> find(const GroundAtom& atom) const;
  std::string name(std::size_t node) const;

  // P(node = true | parents = values), values in the order of Node::parents.
  template <class Scalar = double>
  Scalar node_probability(std::size_t node, std::span<const bool> parent_values) const;

 private:
  const RelationalNetwork* network_;
  mutable Structure scratch_;
  std::vector<Node> nodes_;
  std::map<GroundAtom, std::size_t> index_;
  std::size_t edges_ = 0;
};

// The query's ancestor closure plus, for every included uninstantiated node
// with an evidence atom below it, the nodes on paths from it to that
// evidence atom together with their ancestors. Throws WellFoundednessError
// for recursive networks that are not well founded on s.
GroundNetwork build_auxiliary_network(const RelationalNetwork& network, const Structure& s, const Evidence& evidence,
                                      const GroundAtom& query);

// Ancestor closure of a set of atoms.
GroundNetwork build_ancestral_network(const RelationalNetwork& network, const Structure& s,
                                      const std::vector<GroundAtom>& atoms);

template <class Scalar = double>
struct Factor {
  std::vector<std::size_t> scope;  // ascending node ids; bit i of an index is scope[i]
  std::vector<Scalar> table;

  std::size_t index_of(std::size_t var) const;
};

enum class EliminationHeuristic { MinFill, Lexicographic };

struct EliminationOptions {
  EliminationHeuristic heuristic = EliminationHeuristic::MinFill;
  // When nonempty, eliminate in this order; atoms absent from the network
  // are ignored and any remaining variables follow the heuristic.
  std::vector<GroundAtom> order;
  std::size_t max_scope = 24;  // BudgetExceededError beyond this many variables
};

template <class Scalar = double>
struct InferenceResult {
  Scalar probability{};
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t width = 0;
  bool nonnegative = true;  // every factor entry seen was >= 0
  std::vector<GroundAtom> elimination_order;
  std::size_t omitted_evidence = 0;  // evidence atoms outside the network
};

// P(query = true | evidence) on g. Throws InconsistentEvidenceError when
// P(evidence) = 0.
template <class Scalar = double>
InferenceResult<Scalar> variable_elimination(const GroundNetwork& g, const Evidence& evidence, const GroundAtom& query,
                                             const EliminationOptions& options = {});

// P(evidence) on g; evidence atoms must all be nodes of g.
template <class Scalar = double>
Scalar evidence_probability(const GroundNetwork& g, const Evidence& evidence, const EliminationOptions& options = {});

// Builds the auxiliary network and runs variable elimination. Evidence
// atoms left out of the auxiliary network do not affect the answer, but
// their joint consistency is still checked.
template <class Scalar = double>
InferenceResult<Scalar> infer(const RelationalNetwork& network, const Structure& s, const Evidence& evidence,
                              const GroundAtom& query, const EliminationOptions& options = {});

// Oracles: explicit enumeration of the probabilistic relations.
template <class Scalar = double>
void enumerate_joint(const RelationalNetwork& network, const Structure& s, std::size_t budget_bits,
                     const std::function<void(const Structure&, const Scalar&)>& visit);

template <class Scalar = double>
std::vector<std::pair<Structure, Scalar>> brute_force_joint(const RelationalNetwork& network, const Structure& s,
                                                            std::size_t budget_bits = 24);

// Enumerates every relation with children (and every recursive relation);
// atoms of the remaining sink relations are independent given the rest and
// are summed out per atom.
template <class Scalar = double>
Scalar brute_force_conditional(const RelationalNetwork& network, const Structure& s, const Evidence& evidence,
                               const GroundAtom& query, std::size_t budget_bits = 24);

// `s` with every probabilistic relation of the network added (all false).
Structure with_probabilistic_relations(const RelationalNetwork& network, const Structure& s, Truth fill = Truth::False);

}  // namespace rbn
