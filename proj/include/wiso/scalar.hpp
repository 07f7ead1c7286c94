// Copyright 2026 The wiso Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file scalar.hpp
 *
 * @brief Scalar backends for the library.
 *
 * Every algorithm is a template over a scalar type `T`. Two backends exist:
 * `double` (float mode, comparisons carry a tolerance) and `Rational`
 * (exact mode, comparisons are exact and any irrational intermediate raises
 * `InexactError`). Exponents of metrics are kept as small exact fractions so
 * that exact mode can decide whether a power is rational.
 */

#ifndef WISO_SCALAR_HPP_
#define WISO_SCALAR_HPP_

#include <gmpxx.h>

#include <charconv>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>

#include "wiso/error.hpp"

namespace wiso {

using Rational = mpq_class;

/// Tolerance used for float comparisons when callers pass none.
inline constexpr double kDefaultTol = 1e-9;

/// Float-mode atoms lighter than this are rejected rather than dropped.
inline constexpr double kMassFloor = 1e-15;

/**
 * Parses `[+-]digits[.digits][(e|E)[+-]digits]` or `p/q` into an exact
 * rational. Decimals are converted exactly (0.1 becomes 1/10).
 */
inline std::optional<Rational> parse_rational(std::string_view text) {
  if (text.empty()) return std::nullopt;
  const auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    auto is_int = [](std::string_view s, bool allow_sign) {
      std::size_t i = 0;
      if (allow_sign && !s.empty() && (s[0] == '-' || s[0] == '+')) ++i;
      if (i == s.size()) return false;
      for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9') return false;
      }
      return true;
    };
    const auto num = text.substr(0, slash);
    const auto den = text.substr(slash + 1);
    if (!is_int(num, true) || !is_int(den, false)) return std::nullopt;
    std::string num_str(num);
    if (num_str[0] == '+') num_str.erase(0, 1);
    mpz_class n(num_str, 10);
    mpz_class d(std::string(den), 10);
    if (d == 0) return std::nullopt;
    Rational r(n, d);
    r.canonicalize();
    return r;
  }

  std::size_t i = 0;
  bool negative = false;
  if (text[i] == '+' || text[i] == '-') {
    negative = text[i] == '-';
    ++i;
  }
  std::string digits;
  long exponent = 0;
  bool any_digit = false;
  for (; i < text.size() && text[i] >= '0' && text[i] <= '9'; ++i) {
    digits.push_back(text[i]);
    any_digit = true;
  }
  if (i < text.size() && text[i] == '.') {
    ++i;
    for (; i < text.size() && text[i] >= '0' && text[i] <= '9'; ++i) {
      digits.push_back(text[i]);
      --exponent;
      any_digit = true;
    }
  }
  if (!any_digit) return std::nullopt;
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    long e = 0;
    const char* first = text.data() + i;
    const char* last = text.data() + text.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, e);
    if (ec != std::errc() || ptr != last || first == last) return std::nullopt;
    exponent += e;
    i = text.size();
  }
  if (i != text.size()) return std::nullopt;
  if (exponent > 4000 || exponent < -4000) return std::nullopt;

  mpz_class n(digits, 10);
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
  Rational r = exponent >= 0 ? Rational(n * scale) : Rational(n, scale);
  r.canonicalize();
  if (negative) r = -r;
  return r;
}

/// Formats a rational as `p` or `p/q`.
inline std::string format_rational(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

/// Shortest round-trip decimal representation of a double.
inline std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) return std::to_string(x);
  return std::string(buf, ptr);
}

/**
 * Positive exact fraction used for the metric exponents alpha, q and p.
 */
class Exponent {
 public:
  constexpr Exponent() = default;
  constexpr Exponent(std::int64_t num, std::int64_t den = 1) : num_(num), den_(den) {
    if (den_ <= 0 || num_ <= 0) {
      throw DomainError("exponent must be a positive fraction");
    }
    const auto g = std::gcd(num_, den_);
    num_ /= g;
    den_ /= g;
  }

  /// Accepts decimals or `p/q`; the result must be positive and fit 64 bits.
  static Exponent parse(std::string_view text) {
    auto r = parse_rational(text);
    if (!r || *r <= 0 || !r->get_num().fits_slong_p() ||
        !r->get_den().fits_slong_p()) {
      throw DomainError("invalid exponent '" + std::string(text) + "'");
    }
    return Exponent(r->get_num().get_si(), r->get_den().get_si());
  }

  constexpr std::int64_t num() const { return num_; }
  constexpr std::int64_t den() const { return den_; }
  constexpr double value() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }
  constexpr bool is_integer() const { return den_ == 1; }
  Rational exact() const { return Rational(num_, den_); }

  std::string str() const {
    return den_ == 1 ? std::to_string(num_)
                     : std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend constexpr Exponent operator*(Exponent a, Exponent b) {
    return Exponent(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend constexpr Exponent operator/(Exponent a, Exponent b) {
    return Exponent(a.num_ * b.den_, a.den_ * b.num_);
  }
  friend constexpr bool operator==(Exponent a, Exponent b) = default;
  friend constexpr bool operator<(Exponent a, Exponent b) {
    return a.num_ * b.den_ < b.num_ * a.den_;
  }
  friend constexpr bool operator<=(Exponent a, Exponent b) { return !(b < a); }

 private:
  std::int64_t num_ = 1;
  std::int64_t den_ = 1;
};

namespace detail {

inline mpz_class exact_root(const mpz_class& x, unsigned long k) {
  mpz_class r;
  if (mpz_root(r.get_mpz_t(), x.get_mpz_t(), k) == 0) {
    throw InexactError("value has no exact rational root of order " +
                       std::to_string(k));
  }
  return r;
}

/// Nearest double to `r`; `get_d` alone truncates toward zero.
inline double nearest_double(const Rational& r) {
  const double d = r.get_d();
  if (!std::isfinite(d)) return d;
  double best = d;
  Rational err = abs(Rational(Rational(d) - r));
  for (double c : {std::nextafter(d, -HUGE_VAL), std::nextafter(d, HUGE_VAL)}) {
    Rational e = abs(Rational(Rational(c) - r));
    if (e < err) {
      err = e;
      best = c;
    }
  }
  return best;
}

}  // namespace detail

template <typename T>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static constexpr const char* name = "float";

  static double from_ratio(std::int64_t num, std::int64_t den) {
    return static_cast<double>(num) / static_cast<double>(den);
  }
  static double from_rational(const Rational& r) { return detail::nearest_double(r); }
  static double to_double(double x) { return x; }
  static double abs(double x) { return std::fabs(x); }
  static std::string to_string(double x) { return format_double(x); }

  /// base^e for base >= 0.
  static double power(double base, Exponent e) {
    if (e == Exponent(1)) return base;
    if (e == Exponent(1, 2)) return std::sqrt(base);
    if (e == Exponent(2)) return base * base;
    return std::pow(base, e.value());
  }
};

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static constexpr const char* name = "rational";

  static Rational from_ratio(std::int64_t num, std::int64_t den) {
    Rational r(mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den)));
    r.canonicalize();
    return r;
  }
  static Rational from_rational(const Rational& r) { return r; }
  static double to_double(const Rational& x) { return detail::nearest_double(x); }
  static Rational abs(const Rational& x) { return x < 0 ? Rational(-x) : x; }
  static std::string to_string(const Rational& x) { return format_rational(x); }

  /// base^e for base >= 0; throws InexactError when the result is irrational.
  static Rational power(const Rational& base, Exponent e) {
    if (base < 0) throw DomainError("power of a negative base");
    if (e == Exponent(1)) return base;
    mpz_class num = base.get_num();
    mpz_class den = base.get_den();
    mpz_class pn, pd;
    mpz_pow_ui(pn.get_mpz_t(), num.get_mpz_t(), static_cast<unsigned long>(e.num()));
    mpz_pow_ui(pd.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(e.num()));
    if (e.den() != 1) {
      const auto k = static_cast<unsigned long>(e.den());
      pn = detail::exact_root(pn, k);
      pd = detail::exact_root(pd, k);
    }
    Rational r(pn, pd);
    r.canonicalize();
    return r;
  }
};

template <typename T>
concept Scalar = requires {
  { ScalarTraits<T>::exact } -> std::convertible_to<bool>;
};

namespace scalar {

template <Scalar T>
inline T abs(const T& x) {
  return ScalarTraits<T>::abs(x);
}

template <Scalar T>
inline T power(const T& base, Exponent e) {
  return ScalarTraits<T>::power(base, e);
}

template <Scalar T>
inline double to_double(const T& x) {
  return ScalarTraits<T>::to_double(x);
}

template <Scalar T>
inline std::string to_string(const T& x) {
  return ScalarTraits<T>::to_string(x);
}

template <Scalar T>
inline T from_ratio(std::int64_t num, std::int64_t den) {
  return ScalarTraits<T>::from_ratio(num, den);
}

template <Scalar T>
inline T positive_part(const T& x) {
  return x > T(0) ? x : T(0);
}

/// Exact mode ignores `tol`.
template <Scalar T>
inline bool is_zero(const T& x, double tol) {
  if constexpr (ScalarTraits<T>::exact) {
    return x == 0;
  } else {
    return std::fabs(x) <= tol;
  }
}

template <Scalar T>
inline bool approx_equal(const T& a, const T& b, double tol) {
  if constexpr (ScalarTraits<T>::exact) {
    return a == b;
  } else {
    return std::fabs(a - b) <= tol;
  }
}

/// a <= b, with slack `tol` in float mode.
template <Scalar T>
inline bool leq(const T& a, const T& b, double tol) {
  if constexpr (ScalarTraits<T>::exact) {
    return a <= b;
  } else {
    return a <= b + tol;
  }
}

/// Parses a decimal or `p/q` literal into `T`.
template <Scalar T>
inline std::optional<T> parse(std::string_view text) {
  auto r = parse_rational(text);
  if (!r) return std::nullopt;
  return ScalarTraits<T>::from_rational(*r);
}

}  // namespace scalar

}  // namespace wiso

#endif  // WISO_SCALAR_HPP_
