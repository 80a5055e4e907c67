// Copyright (c) the localsmith authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "localsmith/scalar.hpp"

namespace localsmith {

/// Univariate polynomial over a field, dense coefficients, trailing zeros
/// trimmed. The zero polynomial has an empty coefficient list.
template <Scalar K>
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<K> c) : c_(std::move(c)) { trim(); }
  static Poly constant(K x) { return Poly(std::vector<K>{std::move(x)}); }
  static Poly monomial(int deg, K x = ScalarTraits<K>::one()) {
    std::vector<K> c(deg + 1, ScalarTraits<K>::zero());
    c[deg] = std::move(x);
    return Poly(std::move(c));
  }

  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  const K& operator[](int i) const {
    static const K zero = ScalarTraits<K>::zero();
    return (i >= 0 && i <= degree()) ? c_[i] : zero;
  }
  const std::vector<K>& coeffs() const { return c_; }

  const K& leading() const {
    if (is_zero()) throw std::domain_error("leading coefficient of zero polynomial");
    return c_.back();
  }

  /// Multiplicity of the root at zero; -1 for the zero polynomial.
  int order_at_zero() const {
    if (is_zero()) return -1;
    int i = 0;
    while (ScalarTraits<K>::is_zero(c_[i])) ++i;
    return i;
  }

  K eval(const K& x) const {
    K acc = ScalarTraits<K>::zero();
    for (int i = degree(); i >= 0; --i) acc = acc * x + c_[i];
    return acc;
  }

  Poly monic() const {
    if (is_zero()) return *this;
    K inv = ScalarTraits<K>::one() / leading();
    std::vector<K> c = c_;
    for (K& x : c) x = inv * x;
    return Poly(std::move(c));
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<K> c(std::max(a.c_.size(), b.c_.size()), ScalarTraits<K>::zero());
    for (size_t i = 0; i < c.size(); ++i) c[i] = a[static_cast<int>(i)] + b[static_cast<int>(i)];
    return Poly(std::move(c));
  }
  friend Poly operator-(const Poly& a, const Poly& b) {
    std::vector<K> c(std::max(a.c_.size(), b.c_.size()), ScalarTraits<K>::zero());
    for (size_t i = 0; i < c.size(); ++i) c[i] = a[static_cast<int>(i)] - b[static_cast<int>(i)];
    return Poly(std::move(c));
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    std::vector<K> c(a.c_.size() + b.c_.size() - 1, ScalarTraits<K>::zero());
    for (size_t i = 0; i < a.c_.size(); ++i)
      for (size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return Poly(std::move(c));
  }
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  /// Euclidean division a = q*b + r with deg r < deg b.
  friend std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    Poly r = a;
    std::vector<K> q(a.degree() >= b.degree() ? a.degree() - b.degree() + 1 : 0,
                     ScalarTraits<K>::zero());
    while (!r.is_zero() && r.degree() >= b.degree()) {
      int shift = r.degree() - b.degree();
      K f = r.leading() / b.leading();
      q[shift] = f;
      std::vector<K> rc = r.c_;
      for (int i = 0; i <= b.degree(); ++i) rc[i + shift] = rc[i + shift] - f * b.c_[i];
      r = Poly(std::move(rc));
    }
    return {Poly(std::move(q)), r};
  }

  friend Poly gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
      Poly r = divmod(a, b).second;
      a = std::move(b);
      b = std::move(r);
    }
    return a.monic();
  }

  std::string str(const std::string& var = "eps") const {
    if (is_zero()) return "0";
    std::string out;
    for (int i = degree(); i >= 0; --i) {
      if (ScalarTraits<K>::is_zero(c_[i])) continue;
      std::string coeff = ScalarTraits<K>::str(c_[i]);
      std::string term;
      if (i == 0) {
        term = coeff;
      } else {
        std::string power = (i == 1) ? var : var + "^" + std::to_string(i);
        term = (coeff == "1") ? power : (coeff == "-1") ? "-" + power : coeff + "*" + power;
      }
      if (out.empty()) {
        out = term;
      } else if (!term.empty() && term[0] == '-') {
        out += " - " + term.substr(1);
      } else {
        out += " + " + term;
      }
    }
    return out;
  }

 private:
  void trim() {
    while (!c_.empty() && ScalarTraits<K>::is_zero(c_.back())) c_.pop_back();
  }
  std::vector<K> c_;
};

}  // namespace localsmith
