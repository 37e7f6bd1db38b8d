#include "rbn/combinators.hpp"

#include <cmath>

#include "rbn/errors.hpp"

namespace rbn {

CumulativeTable::CumulativeTable(std::vector<Rational> gamma) : gamma_(std::move(gamma)) {
  if (gamma_.empty()) throw RegistryError("cumulative table needs at least one entry");
  Exact running = 0;
  for (const Rational& g : gamma_) {
    if (g.num() < 0) throw RegistryError("cumulative table entry " + g.to_string() + " is negative");
    running += g.to_exact();
    exact_sums_.push_back(running);
    sums_.push_back(running.convert_to<double>());
  }
  if (running > 1) throw RegistryError("cumulative table sums to more than 1");
}

template <class Scalar>
Scalar CumulativeTable::partial_sum(std::size_t n) const {
  const std::size_t i = std::min(n, gamma_.size() - 1);
  if constexpr (std::is_same_v<Scalar, double>) {
    return sums_[i];
  } else {
    return exact_sums_[i];
  }
}

template double CumulativeTable::partial_sum<double>(std::size_t) const;
template Exact CumulativeTable::partial_sum<Exact>(std::size_t) const;

CombinationFunction CombinationFunction::noisy_or() { return {"noisyor", Kind::NoisyOr}; }
CombinationFunction CombinationFunction::max() { return {"max", Kind::Max}; }
CombinationFunction CombinationFunction::min() { return {"min", Kind::Min}; }
CombinationFunction CombinationFunction::mean() { return {"mean", Kind::Mean}; }

CombinationFunction CombinationFunction::cumulative(std::string name, CumulativeTable table) {
  CombinationFunction f(std::move(name), Kind::Cumulative);
  f.table_ = std::move(table);
  return f;
}

CombinationFunction CombinationFunction::custom(std::string name, Rule rule, double empty_value) {
  if (!(empty_value >= 0.0 && empty_value <= 1.0)) {
    throw RegistryError("empty-set value of '" + name + "' is outside [0,1]");
  }
  CombinationFunction f(std::move(name), Kind::Custom);
  f.rule_ = std::move(rule);
  f.empty_value_ = empty_value;
  return f;
}

double CombinationFunction::empty_value() const {
  switch (kind_) {
    case Kind::Min:
      return 1.0;
    case Kind::Cumulative:
      return table_->partial_sum<double>(0);
    case Kind::Custom:
      return empty_value_;
    default:
      return 0.0;
  }
}

namespace {

double noisy_or_double(std::span<const double> values) {
  bool near_one = false;
  double complement = 1.0;
  for (double v : values) {
    if (1.0 - v < 1e-12) near_one = true;
    complement *= 1.0 - v;
  }
  if (!near_one) return 1.0 - complement;
  // log1p keeps precision when some factor 1 - a_i is tiny.
  double log_complement = 0.0;
  for (double v : values) log_complement += std::log1p(-v);
  return -std::expm1(log_complement);
}

}  // namespace

template <class Scalar>
Scalar CombinationFunction::apply(std::span<const Scalar> values) const {
  switch (kind_) {
    case Kind::NoisyOr: {
      if constexpr (std::is_same_v<Scalar, double>) {
        return noisy_or_double(values);
      } else {
        Scalar complement = 1;
        for (const Scalar& v : values) complement *= 1 - v;
        return 1 - complement;
      }
    }
    case Kind::Max:
      return values.empty() ? Scalar(0) : *std::max_element(values.begin(), values.end());
    case Kind::Min:
      return values.empty() ? Scalar(1) : *std::min_element(values.begin(), values.end());
    case Kind::Mean: {
      if (values.empty()) return Scalar(0);
      Scalar sum = 0;
      for (const Scalar& v : values) sum += v;
      return sum / Scalar(static_cast<long long>(values.size()));
    }
    case Kind::Cumulative: {
      const auto nonzero = static_cast<std::size_t>(
          std::count_if(values.begin(), values.end(), [](const Scalar& v) { return v != 0; }));
      return table_->partial_sum<Scalar>(nonzero);
    }
    case Kind::Custom: {
      if constexpr (std::is_same_v<Scalar, double>) {
        if (values.empty()) return empty_value_;
        const double out = rule_(values);
        if (!(out >= 0.0 && out <= 1.0)) {
          throw RegistryError("combination function '" + name_ + "' returned a value outside [0,1]");
        }
        return out;
      } else {
        throw RegistryError("combination function '" + name_ + "' has no exact evaluation");
      }
    }
  }
  return Scalar(0);
}

template double CombinationFunction::apply<double>(std::span<const double>) const;
template Exact CombinationFunction::apply<Exact>(std::span<const Exact>) const;

CombinationRegistry::CombinationRegistry() {
  for (auto f : {CombinationFunction::noisy_or(), CombinationFunction::max(), CombinationFunction::min(),
                 CombinationFunction::mean()}) {
    functions_.emplace(f.name(), std::move(f));
  }
}

const CombinationRegistry& CombinationRegistry::builtin() {
  static const CombinationRegistry registry;
  return registry;
}

void CombinationRegistry::register_function(CombinationFunction f) {
  if (functions_.contains(f.name())) {
    throw RegistryError("combination function '" + f.name() + "' is already registered");
  }
  std::string name = f.name();
  functions_.emplace(std::move(name), std::move(f));
}

bool CombinationRegistry::contains(std::string_view name) const { return functions_.find(name) != functions_.end(); }

const CombinationFunction& CombinationRegistry::get(std::string_view name) const {
  auto it = functions_.find(name);
  if (it == functions_.end()) throw RegistryError("unknown combination function '" + std::string(name) + "'");
  return it->second;
}

std::vector<std::string> CombinationRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : functions_) out.push_back(name);
  return out;
}

}  // namespace rbn
