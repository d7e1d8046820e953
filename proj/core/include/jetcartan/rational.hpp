#pragma once

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <optional>
#include <string>

namespace jetcartan {

/// Exact rational on int64 with overflow detection. Operations that would
/// overflow return nullopt; callers degrade to double (see Number).
class Rational {
 public:
  constexpr Rational() : num_(0), den_(1) {}
  constexpr Rational(std::int64_t n) : num_(n), den_(1) {}
  Rational(std::int64_t n, std::int64_t d);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_one() const { return num_ == 1 && den_ == 1; }
  bool is_integer() const { return den_ == 1; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  static std::optional<Rational> add(const Rational& a, const Rational& b);
  static std::optional<Rational> sub(const Rational& a, const Rational& b);
  static std::optional<Rational> mul(const Rational& a, const Rational& b);
  static std::optional<Rational> div(const Rational& a, const Rational& b);
  /// a^k for integer k (k < 0 requires a != 0).
  static std::optional<Rational> pow(const Rational& a, std::int64_t k);

  Rational neg() const { return Rational(-num_, den_); }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b);

  std::string str() const;

 private:
  std::int64_t num_;
  std::int64_t den_;  // > 0, gcd(num, den) == 1
};

/// A constant: exact rational when possible, IEEE double once exactness is lost.
struct Number {
  bool exact = true;
  Rational rat;
  double real = 0.0;

  Number() : rat(0) {}
  Number(Rational r) : exact(true), rat(r) {}
  explicit Number(double d) : exact(false), rat(0), real(d) {}

  double to_double() const { return exact ? rat.to_double() : real; }
  bool is_zero() const { return exact ? rat.is_zero() : real == 0.0; }
  bool is_one() const { return exact ? rat.is_one() : real == 1.0; }

  static Number add(const Number& a, const Number& b);
  static Number mul(const Number& a, const Number& b);
  static Number neg(const Number& a);
  /// a^k, integer k; exact when representable.
  static Number pow_int(const Number& a, std::int64_t k);

  friend bool operator==(const Number& a, const Number& b) {
    if (a.exact != b.exact) return false;
    return a.exact ? a.rat == b.rat : a.real == b.real;
  }

  std::uint64_t hash() const;
  std::string str() const;
};

}  // namespace jetcartan
