#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>
#include <stdexcept>
#include <string_view>

#include "besov/error.hpp"

namespace besov {

/// Exact rational number with 64-bit numerator/denominator.
///
/// Table lookups compare parameters such as q = 4 or p = 4/3 against
/// breakpoints; doing that in floating point misclassifies the boundary
/// cells, so all comparisons here are exact. Arithmetic widens to 128 bits
/// and throws if the reduced result no longer fits.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT(implicit)
  Rational(std::int64_t n, std::int64_t d) { assign(n, d); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  /// Best rational approximation of x with denominator <= max_den
  /// (continued fractions). Decimal inputs like 1.2 come back as 6/5.
  static Rational approximate(double x, std::int64_t max_den = 1'000'000);

  /// Parses "3", "-2", "4/3", "1.25" exactly.
  static Rational parse(std::string_view s);

  friend Rational operator+(Rational a, Rational b) {
    return from_wide(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                     static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator-(Rational a, Rational b) {
    return from_wide(static_cast<__int128>(a.num_) * b.den_ - static_cast<__int128>(b.num_) * a.den_,
                     static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator*(Rational a, Rational b) {
    return from_wide(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator/(Rational a, Rational b) {
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    return from_wide(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
  }
  Rational operator-() const { return Rational(-num_, den_); }

  friend bool operator==(Rational a, Rational b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend bool operator!=(Rational a, Rational b) { return !(a == b); }
  friend bool operator<(Rational a, Rational b) {
    return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
  }
  friend bool operator>(Rational a, Rational b) { return b < a; }
  friend bool operator<=(Rational a, Rational b) { return !(b < a); }
  friend bool operator>=(Rational a, Rational b) { return !(a < b); }

  std::string str() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }
  friend std::ostream& operator<<(std::ostream& os, Rational r) { return os << r.str(); }

 private:
  void assign(std::int64_t n, std::int64_t d) {
    if (d == 0) throw std::domain_error("rational with zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    const std::int64_t g = std::gcd(n < 0 ? -n : n, d);
    num_ = g ? n / g : 0;
    den_ = g ? d / g : 1;
  }

  static Rational from_wide(__int128 n, __int128 d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 a = n < 0 ? -n : n;
    __int128 b = d;
    while (b != 0) {
      const __int128 t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) {
      n /= a;
      d /= a;
    }
    constexpr __int128 lim = std::numeric_limits<std::int64_t>::max();
    if (n > lim || n < -lim || d > lim) throw std::overflow_error("rational overflow");
    return Rational(static_cast<std::int64_t>(n), static_cast<std::int64_t>(d));
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

inline Rational Rational::approximate(double x, std::int64_t max_den) {
  if (!std::isfinite(x)) throw std::domain_error("cannot approximate non-finite value");
  const bool neg = x < 0;
  double r = std::fabs(x);
  // convergents h/k
  std::int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  for (int it = 0; it < 64; ++it) {
    const double a = std::floor(r);
    if (a > 9.0e15) break;
    const auto ai = static_cast<std::int64_t>(a);
    const std::int64_t k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    const std::int64_t h2 = ai * h1 + h0;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    const double frac = r - a;
    if (frac < 1e-15 || std::fabs(static_cast<double>(h1) / static_cast<double>(k1) - std::fabs(x)) <=
                            1e-15 * std::max(1.0, std::fabs(x)))
      break;
    r = 1.0 / frac;
  }
  if (k1 == 0) return Rational(neg ? -h0 : h0, k0);
  return Rational(neg ? -h1 : h1, k1);
}

inline Rational Rational::parse(std::string_view s) {
  auto trim = [](std::string_view v) {
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.front()))) v.remove_prefix(1);
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back()))) v.remove_suffix(1);
    return v;
  };
  s = trim(s);
  if (s.empty()) throw PreconditionError("empty number");
  auto to_int = [&](std::string_view v) -> std::int64_t {
    v = trim(v);
    if (v.empty()) throw PreconditionError("malformed number '" + std::string(s) + "'");
    std::size_t i = 0;
    bool neg = false;
    if (v[0] == '+' || v[0] == '-') {
      neg = v[0] == '-';
      i = 1;
    }
    if (i == v.size()) throw PreconditionError("malformed number '" + std::string(s) + "'");
    std::int64_t out = 0;
    for (; i < v.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(v[i])))
        throw PreconditionError("malformed number '" + std::string(s) + "'");
      out = out * 10 + (v[i] - '0');
      if (out > 100'000'000'000'000LL) throw PreconditionError("number too long '" + std::string(s) + "'");
    }
    return neg ? -out : out;
  };
  if (const auto slash = s.find('/'); slash != std::string_view::npos)
    return Rational(to_int(s.substr(0, slash)), to_int(s.substr(slash + 1)));
  if (s.find_first_of("eE") != std::string_view::npos)
    return approximate(std::stod(std::string(s)));
  if (const auto dot = s.find('.'); dot != std::string_view::npos) {
    const std::string_view ip = s.substr(0, dot);
    const std::string_view fp = s.substr(dot + 1);
    const bool neg = !ip.empty() && ip[0] == '-';
    std::int64_t den = 1;
    for (std::size_t i = 0; i < fp.size(); ++i) den *= 10;
    const std::int64_t whole = (ip.empty() || ip == "-" || ip == "+") ? 0 : to_int(ip);
    const std::int64_t frac = fp.empty() ? 0 : to_int(fp);
    const std::int64_t mag = (whole < 0 ? -whole : whole) * den + frac;
    return Rational(neg ? -mag : mag, den);
  }
  return Rational(to_int(s));
}

/// Integrability-type index that may be infinite (q = inf in the tables).
class Exponent {
 public:
  Exponent() = default;
  Exponent(Rational r) : value_(r) {}  // NOLINT(implicit)
  Exponent(std::int64_t n) : value_(n) {}  // NOLINT(implicit)

  static Exponent infinity() {
    Exponent e;
    e.infinite_ = true;
    return e;
  }
  /// Accepts "inf", "infinity", or anything Rational::parse understands.
  static Exponent parse(std::string_view s) {
    if (s == "inf" || s == "infinity" || s == "Inf" || s == "INF" || s == "oo") return infinity();
    return Exponent(Rational::parse(s));
  }
  static Exponent from_double(double x) {
    if (std::isinf(x) && x > 0) return infinity();
    return Exponent(Rational::approximate(x));
  }

  bool is_infinite() const { return infinite_; }
  Rational finite() const {
    if (infinite_) throw std::domain_error("exponent is infinite");
    return value_;
  }
  double to_double() const { return infinite_ ? std::numeric_limits<double>::infinity() : value_.to_double(); }
  /// 1/q with 1/inf = 0.
  Rational reciprocal() const { return infinite_ ? Rational(0) : Rational(1) / value_; }

  friend bool operator==(const Exponent& a, const Exponent& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }
  friend bool operator<(const Exponent& a, const Exponent& b) {
    if (a.infinite_) return false;
    if (b.infinite_) return true;
    return a.value_ < b.value_;
  }
  friend bool operator>(const Exponent& a, const Exponent& b) { return b < a; }
  friend bool operator<=(const Exponent& a, const Exponent& b) { return !(b < a); }
  friend bool operator>=(const Exponent& a, const Exponent& b) { return !(a < b); }

  std::string str() const { return infinite_ ? "inf" : value_.str(); }

 private:
  Rational value_{0};
  bool infinite_ = false;
};

}  // namespace besov
