// Copyright (c) the localsmith authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "localsmith/linalg.hpp"
#include "localsmith/matrix.hpp"

namespace localsmith {

/// Sentinel validity of polynomial-exact series: every coefficient is known.
inline constexpr int kExactOrder = std::numeric_limits<int>::max() / 2;

enum class SeriesKind { Polynomial, Jet };

/// Matrix-valued power series in one parameter, either polynomial-exact
/// (all higher coefficients are exactly zero) or a truncated jet.
template <Scalar K>
class MatSeries {
 public:
  MatSeries() = default;

  static MatSeries polynomial(std::vector<Mat<K>> coeffs) {
    MatSeries s(SeriesKind::Polynomial, std::move(coeffs));
    s.trim();
    return s;
  }
  static MatSeries jet(std::vector<Mat<K>> coeffs) {
    if (coeffs.empty()) throw std::invalid_argument("jet needs at least the constant term");
    return MatSeries(SeriesKind::Jet, std::move(coeffs));
  }
  static MatSeries constant(Mat<K> m) { return polynomial({std::move(m)}); }
  static MatSeries zero(int rows, int cols) {
    return polynomial({Mat<K>(rows, cols)});
  }

  SeriesKind kind() const { return kind_; }
  bool is_polynomial() const { return kind_ == SeriesKind::Polynomial; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

  /// Highest stored index: exact degree for polynomials, T for jets.
  int order() const { return static_cast<int>(coeffs_.size()) - 1; }
  int degree() const { return order(); }

  /// Highest index whose coefficient is trustworthy.
  int valid_order() const { return is_polynomial() ? kExactOrder : order(); }

  const Mat<K>& at(int i) const {
    if (i < 0) throw std::out_of_range("negative series index");
    if (i <= order()) return coeffs_[i];
    if (is_polynomial()) return zero_;
    throw std::out_of_range("coefficient " + std::to_string(i) + " beyond jet order " +
                            std::to_string(order()));
  }

  bool is_zero() const {
    for (const Mat<K>& c : coeffs_)
      if (!c.is_zero()) return false;
    return true;
  }

  Mat<K> eval(const K& eps) const {
    // Horner form; for a jet this is evaluation of the stored window
    Mat<K> acc = coeffs_.empty() ? Mat<K>(rows_, cols_) : coeffs_.back();
    for (int i = order() - 1; i >= 0; --i) acc = coeffs_[i] + eps * acc;
    return acc;
  }

  /// Jet window through min(new_order, valid order). Polynomials may pad
  /// with exact zeros; jets never claim more than they store.
  MatSeries truncated(int new_order) const {
    int top = std::min(new_order, valid_order());
    std::vector<Mat<K>> c;
    for (int i = 0; i <= std::min(top, order()); ++i) c.push_back(coeffs_[i]);
    while (static_cast<int>(c.size()) <= top) c.push_back(Mat<K>(rows_, cols_));
    return MatSeries(SeriesKind::Jet, std::move(c));
  }

  friend bool operator==(const MatSeries& a, const MatSeries& b) {
    if (a.kind_ != b.kind_ || a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
    if (a.coeffs_.size() != b.coeffs_.size()) return false;
    return a.coeffs_ == b.coeffs_;
  }
  friend bool operator!=(const MatSeries& a, const MatSeries& b) { return !(a == b); }

  friend MatSeries operator+(const MatSeries& a, const MatSeries& b) {
    int valid = std::min(a.valid_order(), b.valid_order());
    if (valid == kExactOrder) {
      std::vector<Mat<K>> c;
      int top = std::max(a.order(), b.order());
      for (int i = 0; i <= top; ++i) c.push_back(a.at(i) + b.at(i));
      return polynomial(std::move(c));
    }
    std::vector<Mat<K>> c;
    for (int i = 0; i <= valid; ++i) c.push_back(a.at(i) + b.at(i));
    return jet(std::move(c));
  }
  friend MatSeries operator-(const MatSeries& a, const MatSeries& b) {
    return a + (ScalarTraits<K>::zero() - ScalarTraits<K>::one()) * b;
  }
  friend MatSeries operator*(const K& s, const MatSeries& a) {
    std::vector<Mat<K>> c;
    for (const Mat<K>& m : a.coeffs_) c.push_back(s * m);
    return MatSeries(a.kind_, std::move(c));
  }

 private:
  MatSeries(SeriesKind kind, std::vector<Mat<K>> coeffs)
      : kind_(kind), coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) coeffs_.push_back(Mat<K>(0, 0));
    rows_ = coeffs_.front().rows();
    cols_ = coeffs_.front().cols();
    for (const Mat<K>& c : coeffs_)
      if (c.rows() != rows_ || c.cols() != cols_)
        throw std::invalid_argument("series coefficients must share one shape");
    zero_ = Mat<K>(rows_, cols_);
  }
  void trim() {
    while (coeffs_.size() > 1 && coeffs_.back().is_zero()) coeffs_.pop_back();
  }

  SeriesKind kind_ = SeriesKind::Polynomial;
  std::vector<Mat<K>> coeffs_{Mat<K>(0, 0)};
  int rows_ = 0, cols_ = 0;
  Mat<K> zero_;
};

/// Cauchy product. Polynomial inputs give the exact product polynomial;
/// jets clamp to the common trustworthy order.
template <Scalar K>
MatSeries<K> series_mul(const MatSeries<K>& a, const MatSeries<K>& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("series_mul: shape mismatch");
  int valid = std::min(a.valid_order(), b.valid_order());
  int top = (valid == kExactOrder) ? a.order() + b.order() : valid;
  std::vector<Mat<K>> c;
  c.reserve(top + 1);
  for (int l = 0; l <= top; ++l) {
    Mat<K> acc(a.rows(), b.cols());
    for (int i = std::max(0, l - b.order()); i <= std::min(l, a.order()); ++i)
      acc += a.at(i) * b.at(l - i);
    c.push_back(std::move(acc));
  }
  if (valid == kExactOrder) return MatSeries<K>::polynomial(std::move(c));
  return MatSeries<K>::jet(std::move(c));
}

/// Inverse of a series with invertible constant term, computed through
/// `order` (defaults to the input's stored order): r_0 = u_0^{-1} and
/// r_l = -u_0^{-1} * sum_{j=1..l} u_j r_{l-j}.
template <Scalar K>
MatSeries<K> series_inverse_near_identity(const MatSeries<K>& u,
                                          std::optional<int> order = std::nullopt) {
  if (u.rows() != u.cols()) throw std::invalid_argument("series inverse: not square");
  auto u0inv = inverse(u.at(0));
  if (!u0inv) throw std::invalid_argument("series inverse: constant coefficient is singular");
  int top = order.value_or(u.order());
  if (!u.is_polynomial()) top = std::min(top, u.valid_order());
  std::vector<Mat<K>> r;
  r.reserve(top + 1);
  r.push_back(*u0inv);
  for (int l = 1; l <= top; ++l) {
    Mat<K> acc(u.rows(), u.cols());
    for (int j = 1; j <= std::min(l, u.order()); ++j) acc += u.at(j) * r[l - j];
    r.push_back(-(*u0inv * acc));
  }
  return MatSeries<K>::jet(std::move(r));
}

/// Taylor shift L(shift + eps), exact for polynomial input. A truncated jet
/// carries too little information for a nonzero shift and is rejected.
template <Scalar K>
MatSeries<K> recenter(const MatSeries<K>& l, const K& shift, int new_order = -1) {
  if (ScalarTraits<K>::is_zero(shift)) {
    if (l.is_polynomial() || new_order < 0) return l;
    return l.truncated(std::min(new_order, l.order()));
  }
  if (!l.is_polynomial())
    throw std::invalid_argument("recenter: nonzero shift requires polynomial-exact input");
  int d = l.degree();
  std::vector<Mat<K>> out(d + 1, Mat<K>(l.rows(), l.cols()));
  for (int i = 0; i <= d; ++i) {
    K binom = ScalarTraits<K>::one();  // C(j, i) * shift^(j-i), built incrementally
    K power = ScalarTraits<K>::one();
    for (int j = i; j <= d; ++j) {
      if (j > i) {
        // C(j,i) = C(j-1,i) * j / (j-i)
        binom = binom * K(j) / K(j - i);
        power = power * shift;
      }
      out[i] += (binom * power) * l.at(j);
    }
  }
  return MatSeries<K>::polynomial(std::move(out));
}

}  // namespace localsmith
