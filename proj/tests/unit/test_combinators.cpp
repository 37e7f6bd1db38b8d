#include <cmath>
#include <vector>

#include "doctest.h"
#include "rbn/combinators.hpp"
#include "rbn/errors.hpp"

using namespace rbn;

namespace {

double apply(const CombinationFunction& f, std::vector<double> values) { return f.apply<double>(values); }

Exact apply_exact(const CombinationFunction& f, std::vector<Exact> values) { return f.apply<Exact>(values); }

}  // namespace

TEST_CASE("noisy-or combines independent causes") {
  const auto f = CombinationFunction::noisy_or();
  CHECK(apply(f, {0.5, 0.5}) == doctest::Approx(0.75));
  CHECK(apply(f, {}) == 0.0);
  CHECK(apply(f, {1.0, 0.0}) == 1.0);
  CHECK(apply_exact(f, {Exact(1) / 3, Exact(1) / 2}) == Exact(2) / 3);
}

TEST_CASE("max, min and mean, including the empty multiset") {
  CHECK(apply(CombinationFunction::max(), {0.2, 0.7, 0.1}) == 0.7);
  CHECK(apply(CombinationFunction::max(), {}) == 0.0);
  CHECK(apply(CombinationFunction::min(), {0.2, 0.7, 0.1}) == 0.1);
  CHECK(apply(CombinationFunction::min(), {}) == 1.0);
  CHECK(apply(CombinationFunction::mean(), {0.2, 0.6}) == doctest::Approx(0.4));
  CHECK(apply(CombinationFunction::mean(), {}) == 0.0);
  CHECK(apply_exact(CombinationFunction::mean(), {Exact(1), Exact(0), Exact(0)}) == Exact(1) / 3);
}

TEST_CASE("cumulative tables count nonzero entries and saturate") {
  const auto f = CombinationFunction::cumulative("dose", CumulativeTable({Rational(1, 10), Rational(1, 5), Rational(3, 10)}));
  CHECK(apply_exact(f, {}) == Exact(1) / 10);
  CHECK(apply_exact(f, {Exact(1), Exact(0)}) == Exact(3) / 10);
  CHECK(apply_exact(f, {Exact(1), Exact(1)}) == Exact(6) / 10);
  CHECK(apply_exact(f, {Exact(1), Exact(1), Exact(1), Exact(1)}) == Exact(6) / 10);
  CHECK(apply(f, {1.0}) == doctest::Approx(0.3));
}

TEST_CASE("cumulative tables are validated") {
  CHECK_THROWS_AS(CumulativeTable({}), RegistryError);
  CHECK_THROWS_AS(CumulativeTable({Rational(-1, 10)}), RegistryError);
  CHECK_THROWS_AS(CumulativeTable({Rational(1, 2), Rational(2, 3)}), RegistryError);
}

TEST_CASE("combination results ignore multiset order") {
  const std::vector<double> a = {0.1, 0.4, 0.3}, b = {0.3, 0.1, 0.4};
  for (const auto& f : {CombinationFunction::noisy_or(), CombinationFunction::max(), CombinationFunction::min(),
                        CombinationFunction::mean()}) {
    CHECK(apply(f, a) == doctest::Approx(apply(f, b)));
  }
  CHECK(Multiset({0.1, 0.4, 0.4}) == Multiset({0.4, 0.1, 0.4}));
  CHECK_FALSE(Multiset({0.1, 0.4}) == Multiset({0.1, 0.4, 0.4}));
}

TEST_CASE("registry holds builtins and rejects duplicates") {
  CombinationRegistry registry;
  CHECK(registry.contains("noisyor"));
  CHECK(registry.contains("mean"));
  CHECK_FALSE(registry.contains("dose"));
  CHECK_THROWS_AS(registry.register_function(CombinationFunction::max()), RegistryError);
  CHECK_THROWS_AS(registry.get("nope"), RegistryError);
  registry.register_function(CombinationFunction::custom("second", [](std::span<const double> v) { return v[0]; }, 0.5));
  CHECK(registry.apply<double>("second", Multiset({0.25})) == 0.25);
  CHECK(registry.apply<double>("second", Multiset()) == 0.5);
  CHECK_THROWS_AS(registry.apply<Exact>("second", BasicMultiset<Exact>({Exact(1)})), RegistryError);
}

TEST_CASE("custom functions must stay in the unit interval") {
  CHECK_THROWS_AS(CombinationFunction::custom("bad", [](std::span<const double>) { return 0.0; }, 2.0), RegistryError);
  const auto f = CombinationFunction::custom("sum", [](std::span<const double> v) { return v[0] + v[1]; }, 0.0);
  CHECK_THROWS_AS(apply(f, {0.8, 0.8}), RegistryError);
}
