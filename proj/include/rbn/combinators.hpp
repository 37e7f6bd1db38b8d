#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rbn/rational.hpp"

namespace rbn {

// Finite multiset over [0,1]. Insertion order carries no meaning; equality
// compares element counts.
template <class Scalar>
class BasicMultiset {
 public:
  BasicMultiset() = default;
  explicit BasicMultiset(std::vector<Scalar> values) : values_(std::move(values)) {}

  void insert(Scalar value) { values_.push_back(std::move(value)); }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  std::span<const Scalar> values() const noexcept { return values_; }

  std::size_t count(const Scalar& value) const {
    return static_cast<std::size_t>(std::count(values_.begin(), values_.end(), value));
  }

  friend bool operator==(const BasicMultiset& a, const BasicMultiset& b) {
    if (a.size() != b.size()) return false;
    auto x = a.values_;
    auto y = b.values_;
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    return x == y;
  }

 private:
  std::vector<Scalar> values_;
};

using Multiset = BasicMultiset<double>;

// gamma(0..m) with partial sums Gamma(n); queries past m return Gamma(m).
class CumulativeTable {
 public:
  explicit CumulativeTable(std::vector<Rational> gamma);

  const std::vector<Rational>& gamma() const noexcept { return gamma_; }

  template <class Scalar>
  Scalar partial_sum(std::size_t n) const;

 private:
  std::vector<Rational> gamma_;
  std::vector<Exact> exact_sums_;
  std::vector<double> sums_;
};

class CombinationFunction {
 public:
  enum class Kind { NoisyOr, Max, Min, Mean, Cumulative, Custom };
  using Rule = std::function<double(std::span<const double>)>;

  static CombinationFunction noisy_or();
  static CombinationFunction max();
  static CombinationFunction min();
  static CombinationFunction mean();
  static CombinationFunction cumulative(std::string name, CumulativeTable table);
  // Only evaluable in double precision. Nonempty inputs go to `rule`.
  static CombinationFunction custom(std::string name, Rule rule, double empty_value);

  const std::string& name() const noexcept { return name_; }
  Kind kind() const noexcept { return kind_; }
  const CumulativeTable* table() const noexcept { return table_ ? &*table_ : nullptr; }
  double empty_value() const;

  template <class Scalar>
  Scalar apply(std::span<const Scalar> values) const;

 private:
  CombinationFunction(std::string name, Kind kind) : name_(std::move(name)), kind_(kind) {}

  std::string name_;
  Kind kind_;
  std::optional<CumulativeTable> table_;
  Rule rule_;
  double empty_value_ = 0.0;
};

// Name -> combination function. Preloaded with noisyor, max, min, mean.
class CombinationRegistry {
 public:
  CombinationRegistry();

  static const CombinationRegistry& builtin();

  void register_function(CombinationFunction f);
  bool contains(std::string_view name) const;
  const CombinationFunction& get(std::string_view name) const;
  std::vector<std::string> names() const;

  template <class Scalar>
  Scalar apply(std::string_view name, const BasicMultiset<Scalar>& values) const {
    return get(name).apply<Scalar>(values.values());
  }

 private:
  std::map<std::string, CombinationFunction, std::less<>> functions_;
};

}  // namespace rbn
