#include "rbn/grounding.hpp"

#include <algorithm>
#include <deque>
#include <memory>
#include <set>

#include "rbn/errors.hpp"
#include "rbn/evaluator.hpp"

namespace rbn {

// ---------------------------------------------------------------- Evidence

void Evidence::add(GroundAtom atom, bool value) {
  auto [it, inserted] = literals_.emplace(std::move(atom), value);
  if (!inserted && it->second != value) {
    throw Error("contradictory evidence: atom of '" + it->first.relation + "' given with both signs");
  }
}

std::optional<bool> Evidence::value(const GroundAtom& atom) const {
  auto it = literals_.find(atom);
  if (it == literals_.end()) return std::nullopt;
  return it->second;
}

void check_atom(const RelationalNetwork& network, const Structure& s, const GroundAtom& atom) {
  const Vocabulary& vocabulary = network.vocabulary();
  if (!vocabulary.is_probabilistic(atom.relation)) {
    throw Error("'" + atom.relation + "' is not a probabilistic relation");
  }
  if (vocabulary.arity(atom.relation) != atom.args.size()) {
    throw Error("atom of '" + atom.relation + "' has " + std::to_string(atom.args.size()) + " arguments, expected " +
                std::to_string(vocabulary.arity(atom.relation)));
  }
  for (Element e : atom.args) {
    if (e >= s.size()) throw Error("atom of '" + atom.relation + "' refers to an element outside the domain");
  }
}

Structure with_probabilistic_relations(const RelationalNetwork& network, const Structure& s, Truth fill) {
  Structure out = s;
  for (const auto& [relation, arity] : network.vocabulary().probabilistic()) out.add_relation(relation, arity, fill);
  return out;
}

// ----------------------------------------------------------- GroundNetwork

GroundNetwork::GroundNetwork(const RelationalNetwork& network, const Structure& base, std::vector<GroundAtom> atoms,
                             const DependencyAnalysis& analysis)
    : network_(&network), scratch_(with_probabilistic_relations(network, base, Truth::Unknown)) {
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  nodes_.reserve(atoms.size());
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    index_.emplace(atoms[i], i);
    nodes_.push_back(Node{atoms[i], {}, {}});
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    for (const GroundAtom& p : analysis.parents_of(nodes_[i].atom, base)) {
      auto it = index_.find(p);
      if (it == index_.end()) throw Error("ground network is not closed under parents at " + name(i));
      nodes_[i].parents.push_back(it->second);
      nodes_[it->second].children.push_back(i);
      ++edges_;
    }
    std::sort(nodes_[i].parents.begin(), nodes_[i].parents.end());
  }
}

std::optional<std::size_t> GroundNetwork::find(const GroundAtom& atom) const {
  auto it = index_.find(atom);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string GroundNetwork::name(std::size_t node) const { return to_string(nodes_.at(node).atom, scratch_); }

template <class Scalar>
Scalar GroundNetwork::node_probability(std::size_t node, std::span<const bool> parent_values) const {
  const Node& n = nodes_.at(node);
  if (parent_values.size() != n.parents.size()) throw Error("wrong number of parent values for " + name(node));
  for (std::size_t k = 0; k < n.parents.size(); ++k) {
    const GroundAtom& p = nodes_[n.parents[k]].atom;
    scratch_.set(p.relation, p.args, parent_values[k]);
  }
  auto reset = [&] {
    for (std::size_t parent : n.parents) {
      const GroundAtom& p = nodes_[parent].atom;
      scratch_.relation(p.relation).set(p.args, Truth::Unknown);
    }
  };
  try {
    const Scalar out = atom_probability<Scalar>(*network_, scratch_, n.atom);
    reset();
    return out;
  } catch (...) {
    reset();
    throw;
  }
}

template double GroundNetwork::node_probability<double>(std::size_t, std::span<const bool>) const;
template Exact GroundNetwork::node_probability<Exact>(std::size_t, std::span<const bool>) const;

namespace {

class Closure {
 public:
  Closure(const DependencyAnalysis& analysis, const Structure& s) : analysis_(analysis), s_(s) {}

  const std::vector<GroundAtom>& parents(const GroundAtom& atom) {
    auto it = parents_.find(atom);
    if (it == parents_.end()) it = parents_.emplace(atom, analysis_.parents_of(atom, s_)).first;
    return it->second;
  }

  // Adds `seeds` and all their ancestors to `set`.
  void close(std::set<GroundAtom>& set, const std::vector<GroundAtom>& seeds) {
    std::deque<GroundAtom> queue;
    for (const GroundAtom& a : seeds) {
      if (set.insert(a).second) queue.push_back(a);
    }
    while (!queue.empty()) {
      const GroundAtom a = queue.front();
      queue.pop_front();
      for (const GroundAtom& p : parents(a)) {
        if (set.insert(p).second) queue.push_back(p);
      }
    }
  }

  const std::set<GroundAtom>& ancestors(const GroundAtom& atom) {
    auto it = ancestors_.find(atom);
    if (it != ancestors_.end()) return it->second;
    std::set<GroundAtom> out;
    close(out, parents(atom));
    return ancestors_.emplace(atom, std::move(out)).first->second;
  }

 private:
  const DependencyAnalysis& analysis_;
  const Structure& s_;
  std::map<GroundAtom, std::vector<GroundAtom>> parents_;
  std::map<GroundAtom, std::set<GroundAtom>> ancestors_;
};

void require_wellfounded(const RelationalNetwork& network, const Structure& s) {
  if (!network.any_recursive()) return;
  const WellFoundedness wf = check_wellfounded(network, s);
  if (!wf.ok) {
    const auto names = wf.cycle_names(s);
    std::string path;
    for (const auto& n : names) path += n + " -> ";
    path += names.front();
    throw WellFoundednessError("recursion is not well founded on this structure: " + path, names);
  }
}

}  // namespace

GroundNetwork build_auxiliary_network(const RelationalNetwork& network, const Structure& s, const Evidence& evidence,
                                      const GroundAtom& query) {
  check_atom(network, s, query);
  for (const auto& [atom, _] : evidence.literals()) check_atom(network, s, atom);
  require_wellfounded(network, s);

  const DependencyAnalysis analysis(network);
  Closure closure(analysis, s);
  std::set<GroundAtom> included;
  closure.close(included, {query});

  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& [e, _] : evidence.literals()) {
      if (included.contains(e)) continue;
      const std::set<GroundAtom>& above = closure.ancestors(e);
      std::vector<GroundAtom> sources;
      for (const GroundAtom& u : above) {
        if (included.contains(u) && !evidence.contains(u)) sources.push_back(u);
      }
      if (sources.empty()) continue;
      // Successors of a source that lie on a path to e.
      std::vector<GroundAtom> on_path{e};
      for (const GroundAtom& v : above) {
        if (included.contains(v)) continue;
        const std::set<GroundAtom>& v_above = closure.ancestors(v);
        if (std::any_of(sources.begin(), sources.end(), [&](const GroundAtom& u) { return v_above.contains(u); })) {
          on_path.push_back(v);
        }
      }
      closure.close(included, on_path);
      changed = true;
    }
  }
  return GroundNetwork(network, s, std::vector<GroundAtom>(included.begin(), included.end()), analysis);
}

GroundNetwork build_ancestral_network(const RelationalNetwork& network, const Structure& s,
                                      const std::vector<GroundAtom>& atoms) {
  for (const GroundAtom& a : atoms) check_atom(network, s, a);
  require_wellfounded(network, s);
  const DependencyAnalysis analysis(network);
  Closure closure(analysis, s);
  std::set<GroundAtom> included;
  closure.close(included, atoms);
  return GroundNetwork(network, s, std::vector<GroundAtom>(included.begin(), included.end()), analysis);
}

// --------------------------------------------------- variable elimination

template <class Scalar>
std::size_t Factor<Scalar>::index_of(std::size_t var) const {
  auto it = std::lower_bound(scope.begin(), scope.end(), var);
  if (it == scope.end() || *it != var) throw Error("variable is not in the factor scope");
  return static_cast<std::size_t>(it - scope.begin());
}

namespace {

constexpr std::size_t kNoPosition = static_cast<std::size_t>(-1);

template <class Scalar>
struct Eliminator {
  const GroundNetwork& g;
  const EliminationOptions& options;
  std::vector<int> observed;  // -1 free, else 0 / 1
  std::size_t width = 0;
  bool nonnegative = true;
  std::vector<GroundAtom> order;

  Eliminator(const GroundNetwork& network, const Evidence& evidence, const EliminationOptions& opts)
      : g(network), options(opts), observed(network.size(), -1) {
    for (const auto& [atom, value] : evidence.literals()) {
      if (auto id = g.find(atom)) observed[*id] = value ? 1 : 0;
    }
  }

  void check_scope(std::size_t n) const {
    if (n > options.max_scope) {
      throw BudgetExceededError("factor over " + std::to_string(n) + " variables exceeds the limit of " +
                                std::to_string(options.max_scope));
    }
  }

  void track(const Factor<Scalar>& f) {
    for (const Scalar& v : f.table) {
      if (v < Scalar(0)) nonnegative = false;
    }
  }

  Factor<Scalar> node_factor(std::size_t v) {
    const auto& node = g.nodes()[v];
    Factor<Scalar> f;
    for (std::size_t p : node.parents) {
      if (observed[p] < 0) f.scope.push_back(p);
    }
    if (observed[v] < 0) f.scope.push_back(v);
    std::sort(f.scope.begin(), f.scope.end());
    check_scope(f.scope.size());
    std::vector<std::size_t> parent_pos;
    for (std::size_t p : node.parents) parent_pos.push_back(observed[p] < 0 ? f.index_of(p) : kNoPosition);
    const std::size_t v_pos = observed[v] < 0 ? f.index_of(v) : kNoPosition;

    f.table.assign(std::size_t{1} << f.scope.size(), Scalar(0));
    std::unique_ptr<bool[]> values(new bool[node.parents.size() + 1]);
    for (std::size_t idx = 0; idx < f.table.size(); ++idx) {
      if (v_pos != kNoPosition && ((idx >> v_pos) & 1U)) continue;
      for (std::size_t k = 0; k < node.parents.size(); ++k) {
        values[k] = parent_pos[k] == kNoPosition ? observed[node.parents[k]] == 1 : ((idx >> parent_pos[k]) & 1U);
      }
      const Scalar p = g.template node_probability<Scalar>(v, std::span<const bool>(values.get(), node.parents.size()));
      if (v_pos == kNoPosition) {
        f.table[idx] = observed[v] == 1 ? p : Scalar(1) - p;
      } else {
        f.table[idx] = Scalar(1) - p;
        f.table[idx | (std::size_t{1} << v_pos)] = p;
      }
    }
    track(f);
    return f;
  }

  Factor<Scalar> multiply(const Factor<Scalar>& a, const Factor<Scalar>& b) {
    Factor<Scalar> out;
    std::set_union(a.scope.begin(), a.scope.end(), b.scope.begin(), b.scope.end(), std::back_inserter(out.scope));
    check_scope(out.scope.size());
    std::vector<std::size_t> pa, pb;
    for (std::size_t v : a.scope) pa.push_back(out.index_of(v));
    for (std::size_t v : b.scope) pb.push_back(out.index_of(v));
    out.table.resize(std::size_t{1} << out.scope.size());
    for (std::size_t idx = 0; idx < out.table.size(); ++idx) {
      std::size_t ia = 0, ib = 0;
      for (std::size_t k = 0; k < pa.size(); ++k) ia |= ((idx >> pa[k]) & 1U) << k;
      for (std::size_t k = 0; k < pb.size(); ++k) ib |= ((idx >> pb[k]) & 1U) << k;
      out.table[idx] = a.table[ia] * b.table[ib];
    }
    track(out);
    return out;
  }

  Factor<Scalar> sum_out(const Factor<Scalar>& f, std::size_t var) {
    const std::size_t pos = f.index_of(var);
    Factor<Scalar> out;
    for (std::size_t v : f.scope) {
      if (v != var) out.scope.push_back(v);
    }
    out.table.resize(std::size_t{1} << out.scope.size());
    const std::size_t low = (std::size_t{1} << pos) - 1;
    for (std::size_t idx = 0; idx < out.table.size(); ++idx) {
      const std::size_t base = ((idx & ~low) << 1) | (idx & low);
      out.table[idx] = f.table[base] + f.table[base | (std::size_t{1} << pos)];
    }
    track(out);
    return out;
  }

  std::size_t fill_in(const std::vector<Factor<Scalar>>& factors, std::size_t var) const {
    std::set<std::size_t> neighbours;
    std::set<std::pair<std::size_t, std::size_t>> edges;
    for (const auto& f : factors) {
      const bool touches = std::binary_search(f.scope.begin(), f.scope.end(), var);
      for (std::size_t i = 0; i < f.scope.size(); ++i) {
        if (touches && f.scope[i] != var) neighbours.insert(f.scope[i]);
        for (std::size_t j = i + 1; j < f.scope.size(); ++j) edges.emplace(f.scope[i], f.scope[j]);
      }
    }
    std::size_t fill = 0;
    for (auto a = neighbours.begin(); a != neighbours.end(); ++a) {
      for (auto b = std::next(a); b != neighbours.end(); ++b) {
        if (!edges.contains({*a, *b})) ++fill;
      }
    }
    return fill;
  }

  // Eliminates every free variable except `keep` and returns the product of
  // what remains.
  Factor<Scalar> run(std::optional<std::size_t> keep) {
    std::vector<Factor<Scalar>> factors;
    for (std::size_t v = 0; v < g.size(); ++v) factors.push_back(node_factor(v));

    std::set<std::size_t> remaining;
    for (std::size_t v = 0; v < g.size(); ++v) {
      if (observed[v] < 0 && v != keep) remaining.insert(v);
    }
    std::vector<std::size_t> forced;
    for (const GroundAtom& a : options.order) {
      if (auto id = g.find(a); id && remaining.contains(*id) &&
                                std::find(forced.begin(), forced.end(), *id) == forced.end()) {
        forced.push_back(*id);
      }
    }
    std::size_t next_forced = 0;

    while (!remaining.empty()) {
      std::size_t var;
      if (next_forced < forced.size()) {
        var = forced[next_forced++];
      } else if (options.heuristic == EliminationHeuristic::Lexicographic) {
        var = *remaining.begin();
      } else {
        var = *remaining.begin();
        std::size_t best = fill_in(factors, var);
        for (std::size_t candidate : remaining) {
          const std::size_t fill = fill_in(factors, candidate);
          if (fill < best) {
            best = fill;
            var = candidate;
          }
        }
      }
      remaining.erase(var);
      order.push_back(g.nodes()[var].atom);

      std::vector<Factor<Scalar>> rest;
      std::optional<Factor<Scalar>> product;
      for (auto& f : factors) {
        if (std::binary_search(f.scope.begin(), f.scope.end(), var)) {
          product = product ? multiply(*product, f) : std::move(f);
        } else {
          rest.push_back(std::move(f));
        }
      }
      if (product) {
        width = std::max(width, product->scope.size() - 1);
        rest.push_back(sum_out(*product, var));
      }
      factors = std::move(rest);
    }

    Factor<Scalar> result{{}, {Scalar(1)}};
    for (const auto& f : factors) result = multiply(result, f);
    return result;
  }
};

}  // namespace

template <class Scalar>
InferenceResult<Scalar> variable_elimination(const GroundNetwork& g, const Evidence& evidence, const GroundAtom& query,
                                             const EliminationOptions& options) {
  InferenceResult<Scalar> result;
  result.nodes = g.size();
  result.edges = g.edge_count();
  const auto q = g.find(query);
  if (!q) throw Error("query atom " + to_string(query, g.structure()) + " is not in the ground network");
  if (auto v = evidence.value(query)) {
    result.probability = *v ? Scalar(1) : Scalar(0);
    return result;
  }
  Eliminator<Scalar> eliminator(g, evidence, options);
  const Factor<Scalar> final = eliminator.run(*q);
  const Scalar p_true = final.table[1];
  const Scalar p_evidence = final.table[0] + final.table[1];
  if (!(p_evidence > Scalar(0))) throw InconsistentEvidenceError("the evidence has probability zero");
  result.probability = p_true / p_evidence;
  result.width = eliminator.width;
  result.nonnegative = eliminator.nonnegative;
  result.elimination_order = std::move(eliminator.order);
  for (const auto& [atom, _] : evidence.literals()) {
    if (!g.find(atom)) ++result.omitted_evidence;
  }
  return result;
}

template <class Scalar>
Scalar evidence_probability(const GroundNetwork& g, const Evidence& evidence, const EliminationOptions& options) {
  for (const auto& [atom, _] : evidence.literals()) {
    if (!g.find(atom)) throw Error("evidence atom " + to_string(atom, g.structure()) + " is not in the ground network");
  }
  Eliminator<Scalar> eliminator(g, evidence, options);
  return eliminator.run(std::nullopt).table[0];
}

template <class Scalar>
InferenceResult<Scalar> infer(const RelationalNetwork& network, const Structure& s, const Evidence& evidence,
                              const GroundAtom& query, const EliminationOptions& options) {
  check_atom(network, s, query);
  for (const auto& [atom, _] : evidence.literals()) check_atom(network, s, atom);
  if (auto v = evidence.value(query)) {
    InferenceResult<Scalar> result;
    result.probability = *v ? Scalar(1) : Scalar(0);
    return result;
  }
  const GroundNetwork g = build_auxiliary_network(network, s, evidence, query);
  InferenceResult<Scalar> result = variable_elimination<Scalar>(g, evidence, query, options);
  if (result.omitted_evidence > 0) {
    std::vector<GroundAtom> atoms;
    for (const auto& [atom, _] : evidence.literals()) atoms.push_back(atom);
    const GroundNetwork all = build_ancestral_network(network, s, atoms);
    if (!(evidence_probability<Scalar>(all, evidence, options) > Scalar(0))) {
      throw InconsistentEvidenceError("the evidence has probability zero");
    }
  }
  return result;
}

// ------------------------------------------------------------------ oracles

namespace {

struct Cell {
  Interpretation* interpretation;
  std::size_t index;
};

void check_budget(std::size_t bits, std::size_t budget_bits) {
  if (bits > budget_bits || bits >= 63) {
    throw BudgetExceededError("enumeration needs " + std::to_string(bits) + " bits, budget is " +
                              std::to_string(budget_bits));
  }
}

// Binary counter over cells; calls `changed` with the index of every
// flipped cell.
template <class F>
bool advance(std::vector<Cell>& cells, std::vector<bool>& bits, F&& changed) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    bits[i] = !bits[i];
    cells[i].interpretation->set(cells[i].index, bits[i] ? Truth::True : Truth::False);
    changed(i);
    if (bits[i]) return true;
  }
  return false;
}

}  // namespace

template <class Scalar>
void enumerate_joint(const RelationalNetwork& network, const Structure& s, std::size_t budget_bits,
                     const std::function<void(const Structure&, const Scalar&)>& visit) {
  require_wellfounded(network, s);
  Structure w = with_probabilistic_relations(network, s, Truth::False);
  std::vector<Cell> cells;
  for (const auto& [relation, _] : network.vocabulary().probabilistic()) {
    Interpretation& interp = w.relation(relation);
    for (std::size_t i = 0; i < interp.cell_count(); ++i) cells.push_back({&interp, i});
  }
  check_budget(cells.size(), budget_bits);
  std::vector<bool> bits(cells.size(), false);
  do {
    visit(w, joint_probability<Scalar>(network, w, nullptr, false));
  } while (advance(cells, bits, [](std::size_t) {}));
}

template <class Scalar>
std::vector<std::pair<Structure, Scalar>> brute_force_joint(const RelationalNetwork& network, const Structure& s,
                                                            std::size_t budget_bits) {
  std::vector<std::pair<Structure, Scalar>> out;
  enumerate_joint<Scalar>(network, s, budget_bits, [&](const Structure& w, const Scalar& p) { out.emplace_back(w, p); });
  return out;
}

template <class Scalar>
Scalar brute_force_conditional(const RelationalNetwork& network, const Structure& s, const Evidence& evidence,
                               const GroundAtom& query, std::size_t budget_bits) {
  check_atom(network, s, query);
  for (const auto& [atom, _] : evidence.literals()) check_atom(network, s, atom);
  require_wellfounded(network, s);

  Structure w = with_probabilistic_relations(network, s, Truth::False);
  const std::vector<std::string> order = network.topological_order();
  std::vector<std::string> enumerated, sinks;
  for (const std::string& r : order) {
    (network.children(r).empty() && !network.is_recursive(r) ? sinks : enumerated).push_back(r);
  }
  auto is_sink = [&](const std::string& r) { return std::find(sinks.begin(), sinks.end(), r) != sinks.end(); };

  std::vector<Cell> cells;
  std::vector<std::size_t> cell_relation;
  for (std::size_t k = 0; k < enumerated.size(); ++k) {
    Interpretation& interp = w.relation(enumerated[k]);
    for (std::size_t i = 0; i < interp.cell_count(); ++i) {
      const Tuple t = interp.tuple(i);
      if (auto v = evidence.value(GroundAtom{enumerated[k], t})) {
        interp.set(i, *v ? Truth::True : Truth::False);
      } else {
        cells.push_back({&interp, i});
        cell_relation.push_back(k);
      }
    }
  }
  check_budget(cells.size(), budget_bits);

  // A relation's factor changes when its own cells or any ancestor's cells
  // change.
  std::vector<std::vector<std::size_t>> affected(enumerated.size());
  for (std::size_t k = 0; k < enumerated.size(); ++k) {
    for (std::size_t j = 0; j < enumerated.size(); ++j) {
      std::set<std::string> seen;
      std::vector<std::string> stack{enumerated[j]};
      bool reaches = false;
      while (!stack.empty() && !reaches) {
        const std::string r = stack.back();
        stack.pop_back();
        if (r == enumerated[k]) reaches = true;
        if (!seen.insert(r).second) continue;
        for (const std::string& p : network.parents(r)) stack.push_back(p);
      }
      if (reaches) affected[k].push_back(j);
    }
  }
  // Per relation: F_r of every atom, the matching factor F or 1-F, and
  // their product. A flipped cell of a non-recursive relation only changes
  // its own factor; descendants (and recursive relations) are re-evaluated.
  struct RelationState {
    std::vector<GroundAtom> atoms;
    std::vector<Scalar> value, factor;
    Scalar product{};
    bool stale_values = true;
    bool stale_product = true;
  };
  std::vector<RelationState> state(enumerated.size());
  std::vector<bool> recursive(enumerated.size());
  for (std::size_t k = 0; k < enumerated.size(); ++k) {
    const Interpretation& interp = w.relation(enumerated[k]);
    for (std::size_t i = 0; i < interp.cell_count(); ++i) state[k].atoms.push_back({enumerated[k], interp.tuple(i)});
    state[k].value.assign(interp.cell_count(), Scalar(0));
    state[k].factor.assign(interp.cell_count(), Scalar(0));
    recursive[k] = network.is_recursive(enumerated[k]);
  }

  std::vector<std::pair<GroundAtom, bool>> sink_evidence;
  for (const auto& [atom, value] : evidence.literals()) {
    if (is_sink(atom.relation)) sink_evidence.emplace_back(atom, value);
  }
  const bool query_in_sink = is_sink(query.relation);

  Scalar numerator(0), denominator(0);
  std::vector<bool> bits(cells.size(), false);
  do {
    Scalar weight(1);
    for (std::size_t k = 0; k < enumerated.size(); ++k) {
      RelationState& r = state[k];
      const Interpretation& interp = w.relation(enumerated[k]);
      if (r.stale_values) {
        for (std::size_t i = 0; i < r.atoms.size(); ++i) {
          r.value[i] = atom_probability<Scalar>(network, w, r.atoms[i]);
          r.factor[i] = interp.at(i) == Truth::True ? r.value[i] : Scalar(1) - r.value[i];
        }
        r.stale_values = false;
        r.stale_product = true;
      }
      if (r.stale_product) {
        r.product = Scalar(1);
        for (const Scalar& f : r.factor) r.product *= f;
        r.stale_product = false;
      }
      weight *= r.product;
      if (weight == Scalar(0)) break;
    }
    if (weight == Scalar(0)) continue;
    for (const auto& [atom, value] : sink_evidence) {
      const Scalar p = atom_probability<Scalar>(network, w, atom);
      weight *= value ? p : Scalar(1) - p;
    }
    denominator += weight;
    if (query_in_sink) {
      numerator += weight * atom_probability<Scalar>(network, w, query);
    } else if (w.holds(query.relation, query.args)) {
      numerator += weight;
    }
  } while (advance(cells, bits, [&](std::size_t i) {
    const std::size_t k = cell_relation[i];
    for (std::size_t j : affected[k]) {
      if (j != k || recursive[k]) state[j].stale_values = true;
    }
    RelationState& r = state[k];
    if (!r.stale_values) {
      const std::size_t idx = cells[i].index;
      r.factor[idx] = bits[i] ? r.value[idx] : Scalar(1) - r.value[idx];
      r.stale_product = true;
    }
  }));

  if (!(denominator > Scalar(0))) throw InconsistentEvidenceError("the evidence has probability zero");
  return numerator / denominator;
}

#define RBN_INSTANTIATE(S)                                                                                           \
  template struct Factor<S>;                                                                                         \
  template InferenceResult<S> variable_elimination<S>(const GroundNetwork&, const Evidence&, const GroundAtom&,      \
                                                      const EliminationOptions&);                                    \
  template S evidence_probability<S>(const GroundNetwork&, const Evidence&, const EliminationOptions&);              \
  template InferenceResult<S> infer<S>(const RelationalNetwork&, const Structure&, const Evidence&, const GroundAtom&, \
                                       const EliminationOptions&);                                                   \
  template void enumerate_joint<S>(const RelationalNetwork&, const Structure&, std::size_t,                          \
                                   const std::function<void(const Structure&, const S&)>&);                          \
  template std::vector<std::pair<Structure, S>> brute_force_joint<S>(const RelationalNetwork&, const Structure&,     \
                                                                     std::size_t);                                   \
  template S brute_force_conditional<S>(const RelationalNetwork&, const Structure&, const Evidence&,                 \
                                        const GroundAtom&, std::size_t);

RBN_INSTANTIATE(double)
RBN_INSTANTIATE(Exact)

#undef RBN_INSTANTIATE

}  // namespace rbn
