// Copyright (c) the localsmith authors
// SPDX-License-Identifier: Apache-2.0
//
// Shared fixtures and brute-force oracles for the test suites. Everything
// here is independent of the chain recursion it cross-checks.
#pragma once

#include <random>
#include <vector>

#include "localsmith/linalg.hpp"
#include "localsmith/series.hpp"

namespace localsmith::testing {

using Q = Rational;
using M = Mat<Q>;
using Series = MatSeries<Q>;

// --- fixtures -------------------------------------------------------------

/// [1 + eps], scalar with a simple zero nowhere: k = 0, invertible limit.
inline Series f1() { return Series::polynomial({M{{Q(1)}}, M{{Q(1)}}}); }

/// [[eps, -1], [0, eps]]: k = 2 with exponents {0, 2}.
inline Series f2() {
  return Series::polynomial({M{{Q(0), Q(-1)}, {Q(0), Q(0)}}, M::identity(2)});
}

/// diag(1, eps^2): interleaved vanishing leading space before k = 2.
inline Series f3() {
  return Series::polynomial(
      {M{{Q(1), Q(0)}, {Q(0), Q(0)}}, M(2, 2), M{{Q(0), Q(0)}, {Q(0), Q(1)}}});
}

/// [1, eps]: wide, kernel curve (-eps, 1)^T survives to all orders.
inline Series f4() {
  return Series::polynomial({M{{Q(1), Q(0)}}, M{{Q(0), Q(1)}}});
}

/// [[1], [eps]]: tall, range curve (1, eps)^T.
inline Series f5() {
  return Series::polynomial({M{{Q(1)}, {Q(0)}}, M{{Q(0)}, {Q(1)}}});
}

/// eps*I - J with J one nilpotent block of size n: k = n.
inline Series jordan_block_family(int n) {
  M j(n, n);
  for (int i = 0; i + 1 < n; ++i) j(i, i + 1) = Q(1);
  return Series::polynomial({-j, M::identity(n)});
}

/// diag(eps^{a_0}, ..., eps^{a_{n-1}}).
inline Series diag_powers(const std::vector<int>& a) {
  int n = static_cast<int>(a.size());
  int top = 0;
  for (int x : a) top = std::max(top, x);
  std::vector<M> c(top + 1, M(n, n));
  for (int i = 0; i < n; ++i) c[a[i]](i, i) = Q(1);
  return Series::polynomial(std::move(c));
}

// --- brute-force oracles ----------------------------------------------------

/// The order-`length` block-triangular system assembled directly from the
/// family coefficients; its kernel consists of the stacked coefficient
/// tuples (b_{length-1}; ...; b_0) of approximate solution curves.
inline M toeplitz_system(const Series& l, int length) {
  M out(length * l.rows(), length * l.cols());
  for (int r = 1; r <= length; ++r)
    for (int c = r; c <= length; ++c)
      out.set_block((r - 1) * l.rows(), (c - 1) * l.cols(), l.at(c - r));
  return out;
}

inline bool span_equal(const M& a, const M& b) {
  Subspace<Q> sa = span_of(a);
  Subspace<Q> sb = span_of(b);
  return sa.equals(sb);
}

// --- seeded random generation ----------------------------------------------

inline Q random_rational(std::mt19937_64& rng, int num_range = 4, int den_range = 3) {
  std::uniform_int_distribution<int> num(-num_range, num_range);
  std::uniform_int_distribution<int> den(1, den_range);
  return Q(num(rng), den(rng));
}

inline M random_mat(std::mt19937_64& rng, int rows, int cols) {
  M m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = random_rational(rng);
  return m;
}

inline Series random_poly_family(std::mt19937_64& rng, int rows, int cols, int degree) {
  std::vector<M> c;
  for (int d = 0; d <= degree; ++d) c.push_back(random_mat(rng, rows, cols));
  return Series::polynomial(std::move(c));
}

/// The acceptance battery: fixtures plus seeded random families. Random
/// entries mix three flavours so singular constant terms and known
/// exponent tuples actually occur.
inline std::vector<Series> battery(int random_count, uint64_t seed) {
  std::vector<Series> out = {f1(), f2(), f3(), f4(), f5()};
  for (int n = 2; n <= 6; ++n) out.push_back(jordan_block_family(n));
  std::mt19937_64 rng(seed);
  {
    std::uniform_int_distribution<int> size(2, 4), expo(0, 4);
    for (int t = 0; t < 3; ++t) {
      std::vector<int> a(size(rng));
      for (int& x : a) x = expo(rng);
      out.push_back(diag_powers(a));
    }
  }
  std::uniform_int_distribution<int> dim(1, 5), deg(0, 3), flavour(0, 9);
  for (int t = 0; t < random_count; ++t) {
    int rows = dim(rng), cols = dim(rng), d = deg(rng);
    int f = flavour(rng);
    if (f < 4) {
      out.push_back(random_poly_family(rng, rows, cols, d));
    } else if (f < 7) {
      // force a singular constant term: L_0 = A*B with an inner rank cut
      int r0 = std::uniform_int_distribution<int>(0, std::min(rows, cols) - 1)(rng);
      std::vector<M> c;
      c.push_back(random_mat(rng, rows, r0) * random_mat(rng, r0, cols));
      for (int i = 1; i <= std::max(d, 1); ++i) c.push_back(random_mat(rng, rows, cols));
      out.push_back(Series::polynomial(std::move(c)));
    } else {
      // known local data: unimodular-at-zero sandwich of a power diagonal
      int n = std::uniform_int_distribution<int>(1, 4)(rng);
      std::vector<int> a(n);
      for (int& x : a) x = std::uniform_int_distribution<int>(0, 3)(rng);
      Series mid = diag_powers(a);
      Series left = Series::polynomial({M::identity(n), random_mat(rng, n, n)});
      Series right = Series::polynomial({M::identity(n), random_mat(rng, n, n)});
      out.push_back(series_mul(series_mul(left, mid), right));
    }
  }
  return out;
}

}  // namespace localsmith::testing
