// Copyright (c) the localsmith authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "localsmith/laurent.hpp"
#include "localsmith/series.hpp"

using namespace localsmith;
using Q = Rational;
using M = Mat<Q>;
using Series = MatSeries<Q>;

namespace {

Series random_series(std::mt19937_64& rng, int rows, int cols, int degree) {
  std::uniform_int_distribution<int> num(-3, 3);
  std::vector<M> c;
  for (int d = 0; d <= degree; ++d) {
    M m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m(i, j) = Q(num(rng));
    c.push_back(m);
  }
  return Series::polynomial(std::move(c));
}

}  // namespace

TEST_CASE("series_mul telescoping identity") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 10; ++trial) {
    int n = 1 + static_cast<int>(rng() % 4);
    Series a = random_series(rng, n, n, 0);
    M a0 = a.at(0);
    Series plus = Series::polynomial({M::identity(n), a0});
    Series minus = Series::polynomial({M::identity(n), -a0});
    Series prod = series_mul(plus, minus);
    CHECK(prod.at(0) == M::identity(n));
    CHECK(prod.at(1).is_zero());
    CHECK(prod.at(2) == -(a0 * a0));
  }
}

TEST_CASE("series_mul kernel curve of a 1x2 family") {
  // [1, eps] times (-eps, 1)^T is exactly zero
  Series l = Series::polynomial({M{{Q(1), Q(0)}}, M{{Q(0), Q(1)}}});
  Series curve = Series::polynomial({M{{Q(0)}, {Q(1)}}, M{{Q(-1)}, {Q(0)}}});
  Series prod = series_mul(l, curve);
  CHECK(prod.is_zero());
  CHECK(prod.is_polynomial());
}

TEST_CASE("series_mul identity and validity bookkeeping") {
  std::mt19937_64 rng(43);
  Series l = random_series(rng, 2, 2, 3);
  CHECK(series_mul(l, Series::constant(M::identity(2))) == l);

  Series jet = l.truncated(2);
  CHECK(jet.valid_order() == 2);
  Series prod = series_mul(jet, l);
  CHECK(prod.valid_order() == 2);  // clamped by the jet factor
  Series exact = series_mul(l, l);
  CHECK(exact.is_polynomial());
  CHECK(exact.degree() == 6);
}

TEST_CASE("series_mul associativity and distributivity on random instances") {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 1 + static_cast<int>(rng() % 3);
    Series a = random_series(rng, n, n, 1 + rng() % 3);
    Series b = random_series(rng, n, n, 1 + rng() % 3);
    Series c = random_series(rng, n, n, 1 + rng() % 3);
    CHECK(series_mul(series_mul(a, b), c) == series_mul(a, series_mul(b, c)));
    CHECK(series_mul(a, b + c) == series_mul(a, b) + series_mul(a, c));
  }
}

TEST_CASE("series inverse: geometric series") {
  Series u = Series::polynomial({M{{Q(1)}}, M{{Q(1)}}});  // 1 + eps
  Series r = series_inverse_near_identity(u, 6);
  for (int i = 0; i <= 6; ++i) CHECK(r.at(i)(0, 0) == Q((i % 2 == 0) ? 1 : -1));
  Series check = series_mul(u, r);
  CHECK(check.at(0) == M::identity(1));
  for (int i = 1; i <= 6; ++i) CHECK(check.at(i).is_zero());
}

TEST_CASE("series inverse: constants and nilpotent terminator") {
  Series id = Series::constant(M::identity(3));
  CHECK(series_inverse_near_identity(id, 4).at(0) == M::identity(3));

  M n{{Q(0), Q(0)}, {Q(1), Q(0)}};
  Series u = Series::polynomial({M::identity(2), n});
  Series r = series_inverse_near_identity(u, 5);
  CHECK(r.at(1) == -n);
  for (int i = 2; i <= 5; ++i) CHECK(r.at(i).is_zero());
}

TEST_CASE("series inverse roundtrip property") {
  std::mt19937_64 rng(45);
  for (int trial = 0; trial < 15; ++trial) {
    int n = 1 + static_cast<int>(rng() % 3);
    Series u = random_series(rng, n, n, 2);
    if (!inverse(u.at(0)).has_value()) continue;
    Series r = series_inverse_near_identity(u, 8);
    Series left = series_mul(u, r);
    Series right = series_mul(r, u);
    for (int i = 0; i <= 8; ++i) {
      CHECK(left.at(i) == (i == 0 ? M::identity(n) : M(n, n)));
      CHECK(right.at(i) == (i == 0 ? M::identity(n) : M(n, n)));
    }
  }
  Series sing = Series::constant(M(2, 2));
  CHECK_THROWS(series_inverse_near_identity(sing));
}

TEST_CASE("recenter Taylor shifts") {
  Series eps = Series::polynomial({M{{Q(0)}}, M{{Q(1)}}});
  Series shifted = recenter(eps, Q(1));
  CHECK(shifted.at(0)(0, 0) == Q(1));
  CHECK(shifted.at(1)(0, 0) == Q(1));

  Series eps2 = Series::polynomial({M{{Q(0)}}, M{{Q(0)}}, M{{Q(1)}}});
  Series s2 = recenter(eps2, Q(1));
  CHECK(s2.at(0)(0, 0) == Q(1));
  CHECK(s2.at(1)(0, 0) == Q(2));
  CHECK(s2.at(2)(0, 0) == Q(1));

  std::mt19937_64 rng(46);
  Series l = random_series(rng, 2, 3, 4);
  CHECK(recenter(l, Q(0)) == l);
  CHECK(recenter(recenter(l, Q(5, 7)), Q(-5, 7)) == l);

  CHECK_THROWS(recenter(l.truncated(2), Q(1)));
}

TEST_CASE("laurent normalization and evaluation") {
  // eps^{-2} * (0 + eps*A + ...) normalizes to pole order 1
  M a{{Q(1)}};
  Series s = Series::polynomial({M(1, 1), a, M{{Q(3)}}});
  auto l = LaurentSeries<Q>::shifted(s, 2);
  CHECK(l.pole_order() == 1);
  CHECK(l.at(-1) == a);
  CHECK(l.at(0)(0, 0) == Q(3));
  CHECK(l.at(5).is_zero());  // exact: beyond stored is exactly zero

  Q v = l.eval(Q(1, 2))(0, 0);
  CHECK(v == Q(2) + Q(3));

  auto zero = LaurentSeries<Q>::shifted(Series::zero(2, 2), 3);
  CHECK(zero.pole_order() == 0);
}
