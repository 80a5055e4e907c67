// Copyright (c) the localsmith authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <vector>

#include "localsmith/series.hpp"

namespace localsmith {

/// Matrix Laurent expansion with a finite principal part: coefficients are
/// stored from exponent -pole_order upwards. Normalized so that a positive
/// pole order always has a nonzero leading coefficient.
template <Scalar K>
class LaurentSeries {
 public:
  LaurentSeries() = default;

  /// Interpret s as eps^{-pole} * s(eps).
  static LaurentSeries shifted(const MatSeries<K>& s, int pole) {
    LaurentSeries l;
    l.pole_ = pole;
    l.exact_ = s.is_polynomial();
    for (int i = 0; i <= s.order(); ++i) l.coeffs_.push_back(s.at(i));
    l.rows_ = s.rows();
    l.cols_ = s.cols();
    l.normalize();
    return l;
  }

  int pole_order() const { return pole_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  /// Highest stored exponent.
  int order() const { return static_cast<int>(coeffs_.size()) - 1 - pole_; }
  bool exact() const { return exact_; }

  /// Coefficient of eps^e.
  const Mat<K>& at(int e) const {
    int idx = e + pole_;
    if (idx < 0) return zero_;
    if (idx >= static_cast<int>(coeffs_.size())) {
      if (exact_) return zero_;
      throw std::out_of_range("Laurent coefficient beyond stored order");
    }
    return coeffs_[static_cast<size_t>(idx)];
  }

  /// Evaluate the stored window at a nonzero point.
  Mat<K> eval(const K& eps) const {
    if (ScalarTraits<K>::is_zero(eps) && pole_ > 0)
      throw std::domain_error("Laurent evaluation at the pole");
    Mat<K> acc(rows_, cols_);
    K p = ScalarTraits<K>::one();
    for (int i = 0; i < pole_; ++i) p = p / eps;
    for (const Mat<K>& c : coeffs_) {
      acc += p * c;
      p = p * eps;
    }
    return acc;
  }

  /// The coefficients eps^{-pole..order} repackaged as a series in eps.
  MatSeries<K> regular_part() const {
    std::vector<Mat<K>> c = coeffs_;
    if (c.empty()) c.push_back(Mat<K>(rows_, cols_));
    if (exact_) return MatSeries<K>::polynomial(std::move(c));
    return MatSeries<K>::jet(std::move(c));
  }

 private:
  void normalize() {
    while (pole_ > 0 && !coeffs_.empty() && coeffs_.front().is_zero()) {
      coeffs_.erase(coeffs_.begin());
      --pole_;
    }
    if (coeffs_.empty()) {
      coeffs_.push_back(Mat<K>(rows_, cols_));
      pole_ = 0;
    }
    zero_ = Mat<K>(rows_, cols_);
  }

  int pole_ = 0;
  bool exact_ = false;
  std::vector<Mat<K>> coeffs_;
  int rows_ = 0, cols_ = 0;
  Mat<K> zero_;
};

/// Product of a Laurent expansion with a power series (either side).
template <Scalar K>
LaurentSeries<K> laurent_mul(const LaurentSeries<K>& l, const MatSeries<K>& s) {
  return LaurentSeries<K>::shifted(series_mul(l.regular_part(), s), l.pole_order());
}
template <Scalar K>
LaurentSeries<K> laurent_mul(const MatSeries<K>& s, const LaurentSeries<K>& l) {
  return LaurentSeries<K>::shifted(series_mul(s, l.regular_part()), l.pole_order());
}
template <Scalar K>
LaurentSeries<K> laurent_mul(const LaurentSeries<K>& a, const LaurentSeries<K>& b) {
  return LaurentSeries<K>::shifted(series_mul(a.regular_part(), b.regular_part()),
                                   a.pole_order() + b.pole_order());
}

}  // namespace localsmith
