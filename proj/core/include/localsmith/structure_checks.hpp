// Copyright (c) the localsmith authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "localsmith/recursion.hpp"

namespace localsmith {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;  // first failure location, empty when passing
};

/// Product identity tying the family, the chain matrix, the opening
/// operators and the projected operators together, one column at a time:
/// sum_r L_{r-1} M_{r,c} and sum_r sbar_r E_{r,c} both reproduce S_c.
template <Scalar K>
CheckResult check_chain_product(const RecursionState<K>& state) {
  CheckResult res{"chain-product", true, ""};
  for (int c = 1; c <= state.step_count(); ++c) {
    if (c - 1 > state.family().valid_order()) break;
    Mat<K> via_l(state.target_dim(), state.domain_dim());
    Mat<K> via_e(state.target_dim(), state.domain_dim());
    for (int r = 1; r <= c; ++r) {
      via_l += state.family().at(r - 1) * state.m_entry(r, c);
      via_e += state.step(r).sbar * state.e_entry(r, c);
    }
    if (via_l != state.step(c).s || via_e != state.step(c).s) {
      res.pass = false;
      res.detail = "column " + std::to_string(c);
      return res;
    }
  }
  return res;
}

/// Row sums of the split-off back-substitution products: the opening
/// operators against column c's products give minus the sum of the first
/// c-1 leading-space projectors.
template <Scalar K>
CheckResult check_backsubstitution_rowsums(const RecursionState<K>& state) {
  CheckResult res{"backsubstitution-rowsums", true, ""};
  for (int c = 2; c <= state.step_count(); ++c) {
    Mat<K> acc(state.target_dim(), state.target_dim());
    for (int r = 1; r <= c - 1; ++r)
      acc += state.step(r).sbar * state.step(c).e_prod[static_cast<size_t>(r) - 1];
    Mat<K> expect(state.target_dim(), state.target_dim());
    for (int r = 1; r <= c - 1; ++r) expect += state.step(r).p_bbar;
    if (acc != -expect) {
      res.pass = false;
      res.detail = "column " + std::to_string(c);
      return res;
    }
  }
  return res;
}

namespace detail {

/// Trailing l x l block of the triangular chain matrix with columns
/// 1..c: entries M_{c-l+r, c-l+s}.
template <Scalar K>
std::vector<std::vector<Mat<K>>> trailing_m_block(const RecursionState<K>& state, int l, int c) {
  std::vector<std::vector<Mat<K>>> out(l);
  for (int r = 1; r <= l; ++r)
    for (int s = 1; s <= l; ++s) {
      int rr = c - l + r, cc = c - l + s;
      out[r - 1].push_back(rr <= cc ? state.m_entry(rr, cc)
                                    : Mat<K>(state.domain_dim(), state.domain_dim()));
    }
  return out;
}

template <Scalar K>
std::vector<std::vector<Mat<K>>> trailing_e_block(const RecursionState<K>& state, int l, int c) {
  std::vector<std::vector<Mat<K>>> out(l);
  for (int r = 1; r <= l; ++r)
    for (int s = 1; s <= l; ++s) {
      int rr = c - l + r, cc = c - l + s;
      out[r - 1].push_back(rr <= cc ? state.e_entry(rr, cc)
                                    : Mat<K>(state.domain_dim(), state.domain_dim()));
    }
  return out;
}

template <Scalar K>
std::vector<std::vector<Mat<K>>> block_mul(const std::vector<std::vector<Mat<K>>>& a,
                                           const std::vector<std::vector<Mat<K>>>& b) {
  size_t n = a.size();
  std::vector<std::vector<Mat<K>>> c(n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      Mat<K> acc(a[i][0].rows(), b[0][j].cols());
      for (size_t l = 0; l < n; ++l) acc += a[i][l] * b[l][j];
      c[i].push_back(std::move(acc));
    }
  return c;
}

}  // namespace detail

/// The trailing l x l sub-block of the chain matrix with c columns factors
/// into the step-l block times the trailing blocks of the later
/// back-substitution matrices.
template <Scalar K>
CheckResult check_trailing_factorization(const RecursionState<K>& state, int c) {
  CheckResult res{"trailing-factorization", true, ""};
  if (c > state.step_count()) c = state.step_count();
  for (int l = 1; l < c; ++l) {
    auto prod = detail::trailing_m_block(state, l, l);
    for (int j = l + 1; j <= c; ++j) prod = detail::block_mul(prod, detail::trailing_e_block(state, l, j));
    auto expect = detail::trailing_m_block(state, l, c);
    for (int r = 0; r < l; ++r)
      for (int s = 0; s < l; ++s)
        if (prod[r][s] != expect[r][s]) {
          res.pass = false;
          res.detail = "l=" + std::to_string(l) + " entry (" + std::to_string(r + 1) + "," +
                       std::to_string(s + 1) + ")";
          return res;
        }
  }
  return res;
}

/// After stabilization at k, every row below k+1 of the chain matrix copies
/// row k+1 shifted along the diagonal.
template <Scalar K>
CheckResult check_toeplitz_rows(const RecursionState<K>& state) {
  const StabilizationReport& st = state.require_stabilization();
  CheckResult res{"toeplitz-rows", true, ""};
  int k = st.k;
  for (int i = k + 2; i <= state.step_count(); ++i)
    for (int j = 0; i + j <= state.step_count(); ++j) {
      if (k + 1 + j > state.step_count()) break;
      if (state.m_entry(i, i + j) != state.m_entry(k + 1, k + 1 + j)) {
        res.pass = false;
        res.detail = "entry (" + std::to_string(i) + "," + std::to_string(i + j) + ")";
        return res;
      }
    }
  return res;
}

/// After stabilization at k, back-substitution entries in rows k+2 and
/// below vanish off the diagonal.
template <Scalar K>
CheckResult check_trailing_zero_pattern(const RecursionState<K>& state) {
  const StabilizationReport& st = state.require_stabilization();
  CheckResult res{"trailing-zero-pattern", true, ""};
  for (int c = st.k + 3; c <= state.step_count(); ++c)
    for (int r = st.k + 2; r < c; ++r)
      if (!state.e_entry(r, c).is_zero()) {
        res.pass = false;
        res.detail = "entry (" + std::to_string(r) + "," + std::to_string(c) + ")";
        return res;
      }
  return res;
}

template <Scalar K>
std::vector<CheckResult> run_structure_checks(const RecursionState<K>& state) {
  std::vector<CheckResult> out;
  out.push_back(check_chain_product(state));
  out.push_back(check_backsubstitution_rowsums(state));
  out.push_back(check_trailing_factorization(state, state.require_stabilization().k + 1));
  out.push_back(check_toeplitz_rows(state));
  out.push_back(check_trailing_zero_pattern(state));
  return out;
}

}  // namespace localsmith
