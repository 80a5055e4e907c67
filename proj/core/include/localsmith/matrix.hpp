// Copyright (c) the localsmith authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include "localsmith/scalar.hpp"

namespace localsmith {

/// Dense row-major matrix over an exact or floating scalar field.
/// Zero rows or columns are legal; a 0x0 matrix is the empty operator.
template <Scalar K>
class Mat {
 public:
  Mat() : rows_(0), cols_(0) {}
  Mat(int rows, int cols)
      : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, ScalarTraits<K>::zero()) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix dimension");
  }
  Mat(std::initializer_list<std::initializer_list<K>> rows) {
    rows_ = static_cast<int>(rows.size());
    cols_ = rows_ == 0 ? 0 : static_cast<int>(rows.begin()->size());
    a_.reserve(static_cast<size_t>(rows_) * cols_);
    for (const auto& r : rows) {
      if (static_cast<int>(r.size()) != cols_) throw std::invalid_argument("ragged initializer");
      for (const auto& x : r) a_.push_back(x);
    }
  }

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = ScalarTraits<K>::one();
    return m;
  }
  static Mat zero(int rows, int cols) { return Mat(rows, cols); }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  K& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
  const K& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

  bool is_zero() const {
    for (const K& x : a_)
      if (!ScalarTraits<K>::is_zero(x)) return false;
    return true;
  }
  bool is_identity() const {
    if (rows_ != cols_) return false;
    return *this == identity(rows_);
  }

  friend bool operator==(const Mat& a, const Mat& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
  }
  friend bool operator!=(const Mat& a, const Mat& b) { return !(a == b); }

  friend Mat operator+(const Mat& a, const Mat& b) {
    a.require_same_shape(b);
    Mat r(a.rows_, a.cols_);
    for (size_t i = 0; i < a.a_.size(); ++i) r.a_[i] = a.a_[i] + b.a_[i];
    return r;
  }
  friend Mat operator-(const Mat& a, const Mat& b) {
    a.require_same_shape(b);
    Mat r(a.rows_, a.cols_);
    for (size_t i = 0; i < a.a_.size(); ++i) r.a_[i] = a.a_[i] - b.a_[i];
    return r;
  }
  friend Mat operator-(const Mat& a) {
    Mat r(a.rows_, a.cols_);
    for (size_t i = 0; i < a.a_.size(); ++i) r.a_[i] = -a.a_[i];
    return r;
  }
  friend Mat operator*(const Mat& a, const Mat& b) {
    if (a.cols_ != b.rows_)
      throw std::invalid_argument("matrix product shape mismatch: " + a.shape_str() + " * " +
                                  b.shape_str());
    Mat r(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int l = 0; l < a.cols_; ++l) {
        const K& ail = a(i, l);
        if (ScalarTraits<K>::is_zero(ail)) continue;
        for (int j = 0; j < b.cols_; ++j) r(i, j) += ail * b(l, j);
      }
    return r;
  }
  friend Mat operator*(const K& s, const Mat& a) {
    Mat r(a.rows_, a.cols_);
    for (size_t i = 0; i < a.a_.size(); ++i) r.a_[i] = s * a.a_[i];
    return r;
  }
  Mat& operator+=(const Mat& b) { return *this = *this + b; }
  Mat& operator-=(const Mat& b) { return *this = *this - b; }

  Mat transposed() const {
    Mat r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
  }

  Mat col(int j) const { return block(0, j, rows_, 1); }
  Mat block(int i0, int j0, int nrows, int ncols) const {
    if (i0 < 0 || j0 < 0 || i0 + nrows > rows_ || j0 + ncols > cols_)
      throw std::out_of_range("matrix block out of range");
    Mat r(nrows, ncols);
    for (int i = 0; i < nrows; ++i)
      for (int j = 0; j < ncols; ++j) r(i, j) = (*this)(i0 + i, j0 + j);
    return r;
  }
  void set_block(int i0, int j0, const Mat& m) {
    if (i0 < 0 || j0 < 0 || i0 + m.rows_ > rows_ || j0 + m.cols_ > cols_)
      throw std::out_of_range("matrix block out of range");
    for (int i = 0; i < m.rows_; ++i)
      for (int j = 0; j < m.cols_; ++j) (*this)(i0 + i, j0 + j) = m(i, j);
  }

  /// Columns of a glued right of columns of b... no-op when either is empty.
  static Mat hcat(const Mat& a, const Mat& b) {
    if (a.cols_ == 0 && a.rows_ == 0) return b;
    if (b.cols_ == 0 && b.rows_ == 0) return a;
    if (a.rows_ != b.rows_) throw std::invalid_argument("hcat row mismatch");
    Mat r(a.rows_, a.cols_ + b.cols_);
    r.set_block(0, 0, a);
    r.set_block(0, a.cols_, b);
    return r;
  }
  static Mat vcat(const Mat& a, const Mat& b) {
    if (a.rows_ == 0 && a.cols_ == 0) return b;
    if (b.rows_ == 0 && b.cols_ == 0) return a;
    if (a.cols_ != b.cols_) throw std::invalid_argument("vcat column mismatch");
    Mat r(a.rows_ + b.rows_, a.cols_);
    r.set_block(0, 0, a);
    r.set_block(a.rows_, 0, b);
    return r;
  }

  double max_measure() const {
    double m = 0;
    for (const K& x : a_) m = std::max(m, ScalarTraits<K>::measure(x));
    return m;
  }

  std::string shape_str() const {
    return std::to_string(rows_) + "x" + std::to_string(cols_);
  }

 private:
  void require_same_shape(const Mat& b) const {
    if (rows_ != b.rows_ || cols_ != b.cols_)
      throw std::invalid_argument("matrix shape mismatch: " + shape_str() + " vs " + b.shape_str());
  }

  int rows_;
  int cols_;
  std::vector<K> a_;
};

/// Column vector helper.
template <Scalar K>
Mat<K> col_vector(std::initializer_list<K> xs) {
  Mat<K> v(static_cast<int>(xs.size()), 1);
  int i = 0;
  for (const K& x : xs) v(i++, 0) = x;
  return v;
}

}  // namespace localsmith
