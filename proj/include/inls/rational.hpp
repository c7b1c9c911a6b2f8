#pragma once

#include <cstdint>
#include <compare>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace inls {

// Exact rational on 64-bit words. Intermediates go through __int128 and the
// normalized result must fit back into int64, otherwise we throw instead of
// silently wrapping.
class Rational {
public:
  constexpr Rational() : num_(0), den_(1) {}
  constexpr Rational(std::int64_t n) : num_(n), den_(1) {}
  Rational(std::int64_t n, std::int64_t d) { assign(n, d); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }
  int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }

  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  friend Rational operator-(const Rational& a) {
    Rational r;
    r.num_ = -a.num_;
    r.den_ = a.den_;
    return r;
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    __int128 n = i128(a.num_) * b.den_ + i128(b.num_) * a.den_;
    __int128 d = i128(a.den_) * b.den_;
    return from_i128(n, d);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return a + (-b);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return from_i128(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    return from_i128(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
  }

  Rational& operator+=(const Rational& b) { return *this = *this + b; }
  Rational& operator-=(const Rational& b) { return *this = *this - b; }
  Rational& operator*=(const Rational& b) { return *this = *this * b; }
  Rational& operator/=(const Rational& b) { return *this = *this / b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    __int128 lhs = i128(a.num_) * b.den_;
    __int128 rhs = i128(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  Rational reciprocal() const {
    if (num_ == 0) throw std::domain_error("reciprocal of zero");
    return Rational(den_, num_);
  }

  // "num/den" (or plain "num" when integral); parse accepts both forms.
  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  static Rational parse(const std::string& s) {
    auto slash = s.find('/');
    try {
      if (slash == std::string::npos) return Rational(std::stoll(s));
      return Rational(std::stoll(s.substr(0, slash)),
                      std::stoll(s.substr(slash + 1)));
    } catch (const std::exception&) {
      throw std::invalid_argument("cannot parse rational: '" + s + "'");
    }
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.str();
  }

private:
  static __int128 i128(std::int64_t v) { return static_cast<__int128>(v); }

  static Rational from_i128(__int128 n, __int128 d) {
    if (d == 0) throw std::domain_error("rational with zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 g = gcd128(n < 0 ? -n : n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    constexpr __int128 lo = INT64_MIN, hi = INT64_MAX;
    if (n < lo || n > hi || d > hi)
      throw std::overflow_error("rational overflow");
    Rational r;
    r.num_ = static_cast<std::int64_t>(n);
    r.den_ = static_cast<std::int64_t>(d);
    return r;
  }

  static __int128 gcd128(__int128 a, __int128 b) {
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    return a == 0 ? 1 : a;
  }

  void assign(std::int64_t n, std::int64_t d) {
    *this = from_i128(i128(n), i128(d));
  }

  std::int64_t num_;
  std::int64_t den_;
};

// Rational extended with a single point at +infinity. Exponents like q = inf
// show up as endpoints of admissible pairs; all arithmetic that matters is
// done on reciprocals, where infinity simply becomes 0.
class ExtRational {
public:
  ExtRational() : finite_(true), value_(0) {}
  ExtRational(const Rational& r) : finite_(true), value_(r) {}
  ExtRational(std::int64_t n) : finite_(true), value_(n) {}
  ExtRational(std::int64_t n, std::int64_t d) : finite_(true), value_(n, d) {}

  static ExtRational infinity() {
    ExtRational e;
    e.finite_ = false;
    return e;
  }

  bool is_infinite() const { return !finite_; }
  bool is_finite() const { return finite_; }

  const Rational& finite_value() const {
    if (!finite_) throw std::domain_error("exponent is infinite");
    return value_;
  }

  // 1/x, with 1/inf = 0 and 1/0 = inf.
  ExtRational reciprocal() const {
    if (!finite_) return ExtRational(Rational(0));
    if (value_.is_zero()) return infinity();
    return ExtRational(value_.reciprocal());
  }

  double to_double() const {
    return finite_ ? value_.to_double()
                   : std::numeric_limits<double>::infinity();
  }

  friend bool operator==(const ExtRational& a, const ExtRational& b) {
    if (a.finite_ != b.finite_) return false;
    return !a.finite_ || a.value_ == b.value_;
  }
  friend bool operator<(const ExtRational& a, const ExtRational& b) {
    if (!a.finite_) return false;
    if (!b.finite_) return true;
    return a.value_ < b.value_;
  }
  friend bool operator<=(const ExtRational& a, const ExtRational& b) {
    return a == b || a < b;
  }
  friend bool operator>(const ExtRational& a, const ExtRational& b) { return b < a; }
  friend bool operator>=(const ExtRational& a, const ExtRational& b) { return b <= a; }

  std::string str() const { return finite_ ? value_.str() : "inf"; }

  static ExtRational parse(const std::string& s) {
    if (s == "inf" || s == "infinity") return infinity();
    return ExtRational(Rational::parse(s));
  }

  friend std::ostream& operator<<(std::ostream& os, const ExtRational& e) {
    return os << e.str();
  }

private:
  bool finite_;
  Rational value_;
};

} // namespace inls
