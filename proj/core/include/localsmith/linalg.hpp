// Copyright (c) the localsmith authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "localsmith/matrix.hpp"

namespace localsmith {

// Every rank decision in the library funnels through rref() below, with a
// deterministic pivot rule: columns left to right, lowest-index eligible row.
// Exact scalars pick any nonzero entry; the float backend compares against
// float_tolerance * max|entry| of the input matrix.

template <Scalar K>
struct RrefResult {
  Mat<K> r;                    // reduced row echelon form
  std::vector<int> pivot_cols; // one per pivot row, increasing
  int rank = 0;
};

template <Scalar K>
RrefResult<K> rref(Mat<K> m) {
  const double scale = ScalarTraits<K>::exact ? 0.0 : m.max_measure();
  RrefResult<K> out;
  int row = 0;
  for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
    int piv = -1;
    for (int i = row; i < m.rows(); ++i) {
      if (!ScalarTraits<K>::negligible(m(i, col), scale)) {
        piv = i;
        break;
      }
    }
    if (piv < 0) continue;
    if (piv != row)
      for (int j = 0; j < m.cols(); ++j) std::swap(m(piv, j), m(row, j));
    K inv = ScalarTraits<K>::one() / m(row, col);
    for (int j = col; j < m.cols(); ++j) m(row, j) = inv * m(row, j);
    m(row, col) = ScalarTraits<K>::one();
    for (int i = 0; i < m.rows(); ++i) {
      if (i == row) continue;
      K f = m(i, col);
      if (ScalarTraits<K>::is_zero(f)) continue;
      for (int j = col; j < m.cols(); ++j) m(i, j) = m(i, j) - f * m(row, j);
      m(i, col) = ScalarTraits<K>::zero();
    }
    out.pivot_cols.push_back(col);
    ++row;
  }
  out.rank = row;
  out.r = std::move(m);
  return out;
}

template <Scalar K>
int rank(const Mat<K>& m) {
  return rref(m).rank;
}

/// Null space basis, one column per free variable, free columns in index
/// order. The basis column for free column f has a one in slot f.
template <Scalar K>
Mat<K> kernel_basis(const Mat<K>& m) {
  RrefResult<K> e = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (int c : e.pivot_cols) is_pivot[c] = true;
  Mat<K> basis(m.cols(), m.cols() - e.rank);
  int out = 0;
  for (int f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    basis(f, out) = ScalarTraits<K>::one();
    for (int p = 0; p < e.rank; ++p) basis(e.pivot_cols[p], out) = -e.r(p, f);
    ++out;
  }
  return basis;
}

/// Column space basis: the pivot columns of m, in index order.
template <Scalar K>
Mat<K> range_basis(const Mat<K>& m) {
  RrefResult<K> e = rref(m);
  Mat<K> basis(m.rows(), e.rank);
  for (int p = 0; p < e.rank; ++p) basis.set_block(0, p, m.col(e.pivot_cols[p]));
  return basis;
}

/// Particular solution of A X = B with free variables set to zero, or
/// nullopt when the system is inconsistent.
template <Scalar K>
std::optional<Mat<K>> solve(const Mat<K>& a, const Mat<K>& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("solve: row mismatch");
  RrefResult<K> e = rref(Mat<K>::hcat(a, b));
  for (int c : e.pivot_cols)
    if (c >= a.cols()) return std::nullopt;
  Mat<K> x(a.cols(), b.cols());
  for (int p = 0; p < e.rank; ++p)
    x.set_block(e.pivot_cols[p], 0, e.r.block(p, a.cols(), 1, b.cols()));
  return x;
}

template <Scalar K>
std::optional<Mat<K>> inverse(const Mat<K>& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("inverse: not square");
  RrefResult<K> e = rref(Mat<K>::hcat(a, Mat<K>::identity(a.rows())));
  // a is invertible iff every one of its columns carries a pivot
  for (int i = 0; i < a.cols(); ++i)
    if (i >= static_cast<int>(e.pivot_cols.size()) || e.pivot_cols[i] != i) return std::nullopt;
  return e.r.block(0, a.cols(), a.rows(), a.cols());
}

// ---------------------------------------------------------------------------

/// Column space of a full-column-rank basis matrix.
template <Scalar K>
struct Subspace {
  int ambient = 0;
  Mat<K> basis;  // ambient x dim, full column rank

  Subspace() = default;
  explicit Subspace(Mat<K> b) : ambient(b.rows()), basis(std::move(b)) {}
  static Subspace full(int n) { return Subspace(Mat<K>::identity(n)); }
  static Subspace zero(int n) { return Subspace(Mat<K>(n, 0)); }

  int dim() const { return basis.cols(); }
  bool is_zero() const { return dim() == 0; }

  bool contains(const Mat<K>& vecs) const { return solve(basis, vecs).has_value(); }
  bool contains(const Subspace& s) const { return contains(s.basis); }
  bool equals(const Subspace& s) const {
    return dim() == s.dim() && contains(s) && s.contains(*this);
  }
};

/// Subspace spanned by the columns of m (basis deselected to pivot columns).
template <Scalar K>
Subspace<K> span_of(const Mat<K>& m) {
  return Subspace<K>(range_basis(m));
}

template <Scalar K>
Subspace<K> kernel_of(const Mat<K>& m) {
  return Subspace<K>(kernel_basis(m));
}

/// Deterministic complement C with inner ⊕ C = outer: extend inner's basis
/// by outer basis columns, greedily in index order.
template <Scalar K>
Subspace<K> complement_in(const Subspace<K>& inner, const Subspace<K>& outer) {
  if (inner.ambient != outer.ambient)
    throw std::invalid_argument("complement_in: ambient mismatch");
  if (!outer.contains(inner))
    throw std::invalid_argument("complement_in: inner is not contained in outer");
  RrefResult<K> e = rref(Mat<K>::hcat(inner.basis, outer.basis));
  Mat<K> c(outer.ambient, 0);
  for (int p : e.pivot_cols) {
    if (p < inner.dim()) continue;
    c = Mat<K>::hcat(c, outer.basis.col(p - inner.dim()));
  }
  if (c.rows() == 0) c = Mat<K>(outer.ambient, 0);
  return Subspace<K>(c);
}

/// Direct sum decomposition of the ambient space with one projector per part.
template <Scalar K>
struct Decomposition {
  int ambient = 0;
  std::vector<Subspace<K>> parts;
  std::vector<Mat<K>> projectors;  // idempotent, summing to the identity
};

template <Scalar K>
Decomposition<K> build_decomposition(std::vector<Subspace<K>> parts, int ambient) {
  int total = 0;
  Mat<K> stacked(ambient, 0);
  for (const Subspace<K>& p : parts) {
    if (p.ambient != ambient) throw std::invalid_argument("decomposition: ambient mismatch");
    total += p.dim();
    stacked = Mat<K>::hcat(stacked, p.basis);
  }
  if (total != ambient)
    throw std::invalid_argument("decomposition: dimensions sum to " + std::to_string(total) +
                                ", ambient is " + std::to_string(ambient));
  if (stacked.rows() == 0) stacked = Mat<K>(ambient, 0);
  auto inv = inverse(stacked);
  if (!inv) throw std::invalid_argument("decomposition: parts are not in direct sum");
  Decomposition<K> d;
  d.ambient = ambient;
  d.parts = std::move(parts);
  int offset = 0;
  for (const Subspace<K>& p : d.parts) {
    // basis block times the matching coordinate rows of the stacked inverse
    Mat<K> coord = inv->block(offset, 0, p.dim(), ambient);
    d.projectors.push_back(p.basis * coord);
    offset += p.dim();
  }
  return d;
}

/// Projector onto `part` along the rest of an ambient decomposition given by
/// the complementary subspace.
template <Scalar K>
Mat<K> projector_onto(const Subspace<K>& part, const Subspace<K>& complement) {
  auto d = build_decomposition<K>({part, complement}, part.ambient);
  return d.projectors[0];
}

}  // namespace localsmith
