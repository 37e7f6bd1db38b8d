#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace rbn {

// Arbitrary-precision rational used by the exact evaluation path.
using Exact = boost::multiprecision::cpp_rational;

// Small exact rational as written in model files. Always normalized, den > 0.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  // Accepts "3", "0.8", "4/5", "2/10". Throws std::invalid_argument.
  static Rational parse(std::string_view text);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }

  double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
  Exact to_exact() const { return Exact(num_) / Exact(den_); }

  // "0", "1", "4/5".
  std::string to_string() const;

  bool in_unit_interval() const noexcept { return num_ >= 0 && num_ <= den_; }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend bool operator<(const Rational& a, const Rational& b) noexcept {
    return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
  }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

template <class Scalar>
Scalar to_scalar(const Rational& q) {
  if constexpr (std::is_same_v<Scalar, double>) {
    return q.to_double();
  } else {
    return q.to_exact();
  }
}

}  // namespace rbn
