// Copyright (c) the localsmith authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "localsmith/polynomial.hpp"
#include "localsmith/series.hpp"

namespace localsmith {

/// Smith normal form data of a polynomial matrix over K[eps]: the nonzero
/// invariant factors (monic, each dividing the next) and the multiplicity
/// of the root eps = 0 in each. Serves as the independent cross-check for
/// the chain recursion; it shares no code path with it.
template <Scalar K>
struct SmithNormalForm {
  std::vector<Poly<K>> invariant_factors;
  std::vector<int> local_exponents;  // one per invariant factor, sorted ascending
};

template <Scalar K>
std::vector<std::vector<Poly<K>>> to_poly_matrix(const MatSeries<K>& l) {
  if (!l.is_polynomial())
    throw std::invalid_argument("polynomial matrix expected (truncated jets have no Smith form)");
  std::vector<std::vector<Poly<K>>> a(l.rows(), std::vector<Poly<K>>(l.cols()));
  for (int i = 0; i < l.rows(); ++i)
    for (int j = 0; j < l.cols(); ++j) {
      std::vector<K> c;
      for (int d = 0; d <= l.degree(); ++d) c.push_back(l.at(d)(i, j));
      a[i][j] = Poly<K>(std::move(c));
    }
  return a;
}

namespace detail {

/// Multiply a row by a positive unit so rational coefficients stay small:
/// clear denominators, strip the numerator content. A no-op shape-wise,
/// it only fights coefficient growth.
inline void strip_row_content(std::vector<Poly<Rational>>& row, int from) {
  BigInt den_lcm = 1, num_gcd = 0;
  for (size_t j = static_cast<size_t>(from); j < row.size(); ++j)
    for (const Rational& c : row[j].coeffs()) {
      if (c == 0) continue;
      den_lcm = boost::multiprecision::lcm(den_lcm, boost::multiprecision::denominator(c));
      num_gcd = boost::multiprecision::gcd(
          num_gcd, boost::multiprecision::abs(boost::multiprecision::numerator(c)));
    }
  if (num_gcd == 0 || (den_lcm == 1 && num_gcd == 1)) return;
  Rational f(den_lcm, num_gcd);
  for (size_t j = static_cast<size_t>(from); j < row.size(); ++j) {
    std::vector<Rational> c = row[j].coeffs();
    for (Rational& x : c) x *= f;
    row[j] = Poly<Rational>(std::move(c));
  }
}

template <Scalar K>
void strip_row_content(std::vector<Poly<K>>&, int) {}  // other fields: nothing to strip

}  // namespace detail

/// Textbook diagonalization over the principal ideal domain K[eps] by
/// elementary row/column operations. Deterministic pivot rule: the nonzero
/// entry of lowest degree in the working submatrix, ties broken row-major.
template <Scalar K>
SmithNormalForm<K> smith_normal_form(const MatSeries<K>& input) {
  static_assert(ScalarTraits<K>::exact, "Smith oracle requires an exact scalar backend");
  auto a = to_poly_matrix(input);
  const int rows = static_cast<int>(a.size());
  const int cols = rows == 0 ? 0 : static_cast<int>(a[0].size());

  SmithNormalForm<K> out;
  int pos = 0;
  while (pos < rows && pos < cols) {
    // locate the minimal-degree nonzero entry at or below/right of pos
    int pi = -1, pj = -1, best = -1;
    for (int i = pos; i < rows; ++i)
      for (int j = pos; j < cols; ++j) {
        if (a[i][j].is_zero()) continue;
        if (best < 0 || a[i][j].degree() < best) {
          best = a[i][j].degree();
          pi = i;
          pj = j;
        }
      }
    if (best < 0) break;  // submatrix is zero
    std::swap(a[pos], a[pi]);
    for (int i = pos; i < rows; ++i) std::swap(a[i][pos], a[i][pj]);

    bool clean = true;
    for (int i = pos + 1; i < rows; ++i) {
      if (a[i][pos].is_zero()) continue;
      auto [q, r] = divmod(a[i][pos], a[pos][pos]);
      for (int j = pos; j < cols; ++j) a[i][j] = a[i][j] - q * a[pos][j];
      detail::strip_row_content(a[i], pos);
      if (!r.is_zero()) clean = false;
    }
    for (int j = pos + 1; j < cols; ++j) {
      if (a[pos][j].is_zero()) continue;
      auto [q, r] = divmod(a[pos][j], a[pos][pos]);
      for (int i = pos; i < rows; ++i) a[i][j] = a[i][j] - a[i][pos] * q;
      if (!r.is_zero()) clean = false;
    }
    detail::strip_row_content(a[pos], pos);
    if (!clean) continue;  // smaller-degree remainders exist; re-pick the pivot

    // pivot must divide every remaining entry for the divisibility chain;
    // if not, fold the offending row into the pivot row and restart
    bool divides_all = true;
    for (int i = pos + 1; i < rows && divides_all; ++i)
      for (int j = pos + 1; j < cols && divides_all; ++j) {
        if (!divmod(a[i][j], a[pos][pos]).second.is_zero()) {
          for (int jj = pos; jj < cols; ++jj) a[pos][jj] = a[pos][jj] + a[i][jj];
          divides_all = false;
        }
      }
    if (!divides_all) continue;

    out.invariant_factors.push_back(a[pos][pos].monic());
    ++pos;
  }
  for (const Poly<K>& d : out.invariant_factors)
    out.local_exponents.push_back(d.order_at_zero());
  return out;
}

/// Rank of a polynomial matrix over the rational-function field, via exact
/// evaluation: some maximal nonzero minor has degree at most min(m,n)*deg,
/// so evaluating at min(m,n)*deg + 1 distinct rational points and taking
/// the maximal rank is rigorous.
template <Scalar K>
int generic_rank(const MatSeries<K>& l) {
  if (l.rows() == 0 || l.cols() == 0) return 0;
  int bound = std::min(l.rows(), l.cols()) * std::max(l.degree(), 0);
  int best = 0;
  for (int t = 1; t <= bound + 1; ++t) {
    best = std::max(best, rank(l.eval(K(t))));
    if (best == std::min(l.rows(), l.cols())) break;
  }
  return best;
}

}  // namespace localsmith
