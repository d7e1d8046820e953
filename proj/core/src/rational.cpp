#include "jetcartan/rational.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <stdexcept>

namespace jetcartan {

namespace {

bool fits_i64(__int128 v) {
  return v >= static_cast<__int128>(INT64_MIN) && v <= static_cast<__int128>(INT64_MAX);
}

// gcd by hand: std::gcd is not defined for __int128
__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::optional<Rational> make_checked(__int128 n, __int128 d) {
  if (d == 0) return std::nullopt;
  if (d < 0) {
    n = -n;
    d = -d;
  }
  __int128 g = gcd128(n, d);
  if (g == 0) g = 1;
  n /= g;
  d /= g;
  if (!fits_i64(n) || !fits_i64(d)) return std::nullopt;
  return Rational(static_cast<std::int64_t>(n), static_cast<std::int64_t>(d));
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d == 0) throw std::invalid_argument("Rational: zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  std::int64_t g = std::gcd(n < 0 ? -n : n, d);
  if (g == 0) g = 1;
  num_ = n / g;
  den_ = d / g;
}

std::optional<Rational> Rational::add(const Rational& a, const Rational& b) {
  __int128 n = static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_;
  __int128 d = static_cast<__int128>(a.den_) * b.den_;
  return make_checked(n, d);
}

std::optional<Rational> Rational::sub(const Rational& a, const Rational& b) {
  return add(a, b.neg());
}

std::optional<Rational> Rational::mul(const Rational& a, const Rational& b) {
  __int128 n = static_cast<__int128>(a.num_) * b.num_;
  __int128 d = static_cast<__int128>(a.den_) * b.den_;
  return make_checked(n, d);
}

std::optional<Rational> Rational::div(const Rational& a, const Rational& b) {
  if (b.num_ == 0) return std::nullopt;
  __int128 n = static_cast<__int128>(a.num_) * b.den_;
  __int128 d = static_cast<__int128>(a.den_) * b.num_;
  return make_checked(n, d);
}

std::optional<Rational> Rational::pow(const Rational& a, std::int64_t k) {
  if (k == 0) return Rational(1);
  Rational base = a;
  if (k < 0) {
    auto inv = div(Rational(1), a);
    if (!inv) return std::nullopt;
    base = *inv;
    k = -k;
  }
  Rational acc(1);
  while (k > 0) {
    if (k & 1) {
      auto m = mul(acc, base);
      if (!m) return std::nullopt;
      acc = *m;
    }
    k >>= 1;
    if (k) {
      auto s = mul(base, base);
      if (!s) return std::nullopt;
      base = *s;
    }
  }
  return acc;
}

bool operator<(const Rational& a, const Rational& b) {
  return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Number Number::add(const Number& a, const Number& b) {
  if (a.exact && b.exact) {
    if (auto r = Rational::add(a.rat, b.rat)) return Number(*r);
  }
  return Number(a.to_double() + b.to_double());
}

Number Number::mul(const Number& a, const Number& b) {
  if (a.exact && b.exact) {
    if (auto r = Rational::mul(a.rat, b.rat)) return Number(*r);
  }
  return Number(a.to_double() * b.to_double());
}

Number Number::neg(const Number& a) {
  if (a.exact) return Number(a.rat.neg());
  return Number(-a.real);
}

Number Number::pow_int(const Number& a, std::int64_t k) {
  if (a.exact) {
    if (auto r = Rational::pow(a.rat, k)) return Number(*r);
  }
  return Number(std::pow(a.to_double(), static_cast<double>(k)));
}

std::uint64_t Number::hash() const {
  auto mix = [](std::uint64_t x) {
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    x *= 0xc4ceb9fe1a85ec53ULL;
    x ^= x >> 33;
    return x;
  };
  if (exact) {
    return mix(0x9e3779b97f4a7c15ULL ^ mix(static_cast<std::uint64_t>(rat.num())) ^
               (mix(static_cast<std::uint64_t>(rat.den())) << 1));
  }
  std::uint64_t bits;
  static_assert(sizeof(bits) == sizeof(real));
  std::memcpy(&bits, &real, sizeof(bits));
  return mix(0x2545f4914f6cdd1dULL ^ bits);
}

std::string Number::str() const {
  if (exact) return rat.str();
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", real);
  return buf;
}

}  // namespace jetcartan
