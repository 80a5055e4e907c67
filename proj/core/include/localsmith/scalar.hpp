// Copyright (c) the localsmith authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace localsmith {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational scalar, always kept in lowest terms.
using Rational = boost::multiprecision::cpp_rational;

/// Gaussian rational a + b*i with exact rational components.
struct GaussianRational {
  Rational re;
  Rational im;

  GaussianRational() = default;
  GaussianRational(Rational r) : re(std::move(r)) {}
  GaussianRational(int n) : re(n) {}
  GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a) { return {-a.re, -a.im}; }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
    Rational n = b.re * b.re + b.im * b.im;
    if (n == 0) throw std::domain_error("gaussian rational division by zero");
    return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
  }
  GaussianRational& operator+=(const GaussianRational& b) { return *this = *this + b; }
  GaussianRational& operator-=(const GaussianRational& b) { return *this = *this - b; }
  GaussianRational& operator*=(const GaussianRational& b) { return *this = *this * b; }
  GaussianRational& operator/=(const GaussianRational& b) { return *this = *this / b; }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }
};

/// Tolerance used by all rank decisions of the float backend. The float
/// backend is best-effort; acceptance-grade results use exact scalars.
inline double float_tolerance = 1e-9;

template <class K>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static Rational zero() { return Rational(0); }
  static Rational one() { return Rational(1); }
  static bool is_zero(const Rational& x) { return x == 0; }
  // scale is only meaningful for the float backend
  static bool negligible(const Rational& x, double /*scale*/) { return x == 0; }
  static double measure(const Rational& x) {
    return std::abs(static_cast<double>(x));
  }
  static std::string str(const Rational& x) {
    const BigInt& num = boost::multiprecision::numerator(x);
    const BigInt& den = boost::multiprecision::denominator(x);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
  }
};

template <>
struct ScalarTraits<GaussianRational> {
  static constexpr bool exact = true;
  static GaussianRational zero() { return GaussianRational(); }
  static GaussianRational one() { return GaussianRational(1); }
  static bool is_zero(const GaussianRational& x) { return x.re == 0 && x.im == 0; }
  static bool negligible(const GaussianRational& x, double) { return is_zero(x); }
  static double measure(const GaussianRational& x) {
    return std::abs(static_cast<double>(x.re)) + std::abs(static_cast<double>(x.im));
  }
  static std::string str(const GaussianRational& x) {
    if (x.im == 0) return ScalarTraits<Rational>::str(x.re);
    std::string im = ScalarTraits<Rational>::str(x.im);
    std::string tail = (im == "1") ? "i" : (im == "-1") ? "-i" : im + "i";
    if (x.re == 0) return tail;
    std::string head = ScalarTraits<Rational>::str(x.re);
    if (!tail.empty() && tail[0] != '-') return head + "+" + tail;
    return head + tail;
  }
};

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static double zero() { return 0.0; }
  static double one() { return 1.0; }
  static bool is_zero(double x) { return x == 0.0; }
  static bool negligible(double x, double scale) {
    return std::abs(x) <= float_tolerance * (scale > 0 ? scale : 1.0);
  }
  static double measure(double x) { return std::abs(x); }
  static std::string str(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
  }
};

template <class K>
concept Scalar = requires { ScalarTraits<K>::exact; };

// ---------------------------------------------------------------------------
// parsing

/// Parse "p", "-p" or "p/q" with arbitrary-precision integers.
inline std::optional<Rational> parse_rational(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  auto slash = s.find('/');
  try {
    if (slash == std::string_view::npos) return Rational(BigInt(std::string(s)));
    BigInt num(std::string(s.substr(0, slash)));
    BigInt den(std::string(s.substr(slash + 1)));
    if (den == 0) return std::nullopt;
    return Rational(num, den);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

/// Parse "a", "bi", "a+bi", "a-bi" with rational a, b; "i" and "-i" allowed.
inline std::optional<GaussianRational> parse_gaussian(std::string_view s) {
  if (s.empty()) return std::nullopt;
  if (s.back() != 'i') {
    auto r = parse_rational(s);
    if (!r) return std::nullopt;
    return GaussianRational(*r);
  }
  std::string_view body = s.substr(0, s.size() - 1);
  // split at the sign that separates the real part from the imaginary part;
  // scan from the right, skipping a sign that follows '/' or starts the string
  size_t split = std::string_view::npos;
  for (size_t pos = body.size(); pos-- > 1;) {
    char c = body[pos];
    if ((c == '+' || c == '-') && body[pos - 1] != '/') {
      split = pos;
      break;
    }
  }
  auto parse_im = [](std::string_view t) -> std::optional<Rational> {
    if (t.empty() || t == "+") return Rational(1);
    if (t == "-") return Rational(-1);
    return parse_rational(t);
  };
  if (split == std::string_view::npos) {
    auto im = parse_im(body);
    if (!im) return std::nullopt;
    return GaussianRational(Rational(0), *im);
  }
  auto re = parse_rational(body.substr(0, split));
  auto im = parse_im(body.substr(split));
  if (!re || !im) return std::nullopt;
  return GaussianRational(*re, *im);
}

template <class K>
std::optional<K> parse_scalar(std::string_view s);

template <>
inline std::optional<Rational> parse_scalar<Rational>(std::string_view s) {
  return parse_rational(s);
}
template <>
inline std::optional<GaussianRational> parse_scalar<GaussianRational>(std::string_view s) {
  return parse_gaussian(s);
}
template <>
inline std::optional<double> parse_scalar<double>(std::string_view s) {
  try {
    size_t used = 0;
    std::string t(s);
    // allow "p/q" for floats as well
    auto slash = t.find('/');
    if (slash != std::string::npos) {
      double num = std::stod(t.substr(0, slash));
      double den = std::stod(t.substr(slash + 1));
      if (den == 0) return std::nullopt;
      return num / den;
    }
    double v = std::stod(t, &used);
    if (used != t.size()) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

/// x^n for n >= 0.
template <Scalar K>
K scalar_pow(const K& x, int n) {
  K acc = ScalarTraits<K>::one();
  for (int i = 0; i < n; ++i) acc = acc * x;
  return acc;
}

}  // namespace localsmith
