// Copyright (c) the localsmith authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "localsmith/transform.hpp"

namespace localsmith {

/// A candidate solution curve of the family equation, stored as a
/// column-vector series with explicit residual accounting.
template <Scalar K>
struct SolutionCurve {
  MatSeries<K> series;  // domain_dim x 1

  int order() const { return series.order(); }
};

/// Smallest index with a nonzero coefficient of l * b over the common
/// trustworthy window, or nullopt when all computed coefficients vanish.
template <Scalar K>
std::optional<int> residual_order(const MatSeries<K>& l, const SolutionCurve<K>& b) {
  MatSeries<K> image = series_mul(l, b.series);
  for (int t = 0; t <= image.valid_order() && t <= image.order(); ++t)
    if (!image.at(t).is_zero()) return t;
  return std::nullopt;
}

/// Unique coefficients n^i in the limit kernel with b = phi * sum eps^i n^i:
/// n^0 = b_0 and n^i = b_i - sum_{j=1..i} phi_j n^{i-j}. Membership in the
/// limit kernel is certain only k orders below the verified residual; the
/// returned `trusted_through` records that bound.
template <Scalar K>
struct KernelParametrization {
  std::vector<Mat<K>> coeffs;
  int trusted_through = -1;
};

template <Scalar K>
KernelParametrization<K> parametrize_solution(const SolutionCurve<K>& b, const Transform<K>& phi,
                                              const RecursionState<K>& state) {
  const StabilizationReport& st = state.require_stabilization();
  auto res = residual_order(state.family(), b);
  if (res.has_value())
    throw Error("parametrize_solution: input is not a solution through its order (residual at " +
                std::to_string(*res) + ")");
  const Subspace<K>& limit = state.step(st.k + 1).n;
  KernelParametrization<K> out;
  int top = std::min(b.order(), phi.valid_order);
  for (int i = 0; i <= top; ++i) {
    Mat<K> n = b.series.at(i);
    for (int j = 1; j <= i; ++j) n -= phi.series.at(j) * out.coeffs[static_cast<size_t>(i - j)];
    out.coeffs.push_back(std::move(n));
  }
  out.trusted_through = std::min(top, b.order() - st.k);
  for (int i = 0; i <= out.trusted_through; ++i)
    if (!limit.contains(out.coeffs[static_cast<size_t>(i)]))
      throw InternalError("parametrize_solution: coefficient " + std::to_string(i) +
                          " left the limit kernel");
  return out;
}

/// Analytic basis of the solution set: one curve per basis vector of the
/// limit kernel. Every power-series solution is a series combination of
/// these generators.
template <Scalar K>
struct FlatBasis {
  std::vector<SolutionCurve<K>> generators;
};

template <Scalar K>
FlatBasis<K> flat_basis(const RecursionState<K>& state, const Transform<K>& phi) {
  const StabilizationReport& st = state.require_stabilization();
  const Subspace<K>& limit = state.step(st.k + 1).n;
  FlatBasis<K> out;
  for (int c = 0; c < limit.dim(); ++c) {
    MatSeries<K> curve =
        series_mul(phi.series, MatSeries<K>::constant(limit.basis.col(c)));
    out.generators.push_back(SolutionCurve<K>{std::move(curve)});
  }
  return out;
}

/// Greenberg bound: approximations of order k + l yield exact solutions
/// agreeing in the first l coefficients.
template <Scalar K>
int greenberg(const RecursionState<K>& state, int l) {
  if (l < 1) throw Error("greenberg: l must be >= 1");
  return state.require_stabilization().k + l;
}

/// From an order-(k+l) approximation, build an exact solution agreeing in
/// coefficients 0..l-1: back-solve the unit-diagonal window system for the
/// limit-kernel coefficients and push them through phi.
template <Scalar K>
SolutionCurve<K> artin_approximate(const SolutionCurve<K>& b, const RecursionState<K>& state,
                                   const Transform<K>& phi, int l) {
  const StabilizationReport& st = state.require_stabilization();
  const int k = st.k;
  if (l < 1) throw Error("artin_approximate: l must be >= 1");
  // verify the residual vanishes through order k+l-1
  if (b.order() < k + l - 1)
    throw Error("artin_approximate: curve stores too few coefficients for order " +
                std::to_string(k + l));
  MatSeries<K> image = series_mul(state.family(), b.series);
  for (int t = 0; t <= std::min(k + l - 1, image.valid_order()); ++t)
    if (!image.at(t).is_zero())
      throw Error("artin_approximate: residual appears at order " + std::to_string(t) +
                  ", expected at least " + std::to_string(k + l));

  const Subspace<K>& limit = state.step(k + 1).n;
  // n[t] is the coefficient attached to eps^{l-1-t}; extraction is the
  // same triangular recursion as the solution parametrization
  std::vector<Mat<K>> n;
  for (int i = 0; i <= l - 1; ++i) {
    Mat<K> v = b.series.at(i);
    for (int j = 1; j <= i; ++j) v -= phi.series.at(j) * n[static_cast<size_t>(i - j)];
    if (!limit.contains(v))
      throw InternalError("artin_approximate: extracted coefficient " + std::to_string(i) +
                          " is not in the limit kernel");
    n.push_back(std::move(v));
  }
  MatSeries<K> poly = MatSeries<K>::polynomial(std::move(n));
  return SolutionCurve<K>{series_mul(phi.series, poly)};
}

/// Split an order-(k+l) approximation as b = bhat + eps^l * b0 with bhat an
/// exact solution; then l * b = eps^l * (l * b0).
template <Scalar K>
struct ArtinReesSplit {
  SolutionCurve<K> exact;      // bhat
  SolutionCurve<K> remainder;  // b0 = eps^{-l} (b - bhat)
  int l = 0;
};

template <Scalar K>
ArtinReesSplit<K> artin_rees_decompose(const SolutionCurve<K>& b, const RecursionState<K>& state,
                                       const Transform<K>& phi, int l) {
  SolutionCurve<K> bhat = artin_approximate(b, state, phi, l);
  int top = std::min(b.order(), bhat.series.valid_order());
  std::vector<Mat<K>> rem;
  for (int t = l; t <= top; ++t) rem.push_back(b.series.at(t) - bhat.series.at(t));
  if (rem.empty()) rem.push_back(Mat<K>(state.domain_dim(), 1));
  // agreement through l-1 makes the shift well defined
  for (int t = 0; t < l && t <= top; ++t)
    if (b.series.at(t) != bhat.series.at(t))
      throw InternalError("artin_rees_decompose: agreement window is violated");
  ArtinReesSplit<K> out{std::move(bhat), SolutionCurve<K>{MatSeries<K>::jet(std::move(rem))}, l};
  // re-verify the image identity by Cauchy product
  MatSeries<K> lhs = series_mul(state.family(), b.series);
  MatSeries<K> rhs = series_mul(state.family(), out.remainder.series);
  int check = std::min(lhs.valid_order(), rhs.valid_order() + l);
  for (int t = 0; t <= check; ++t) {
    Mat<K> want = t >= l ? rhs.at(t - l) : Mat<K>(state.target_dim(), 1);
    if (lhs.at(t) != want)
      throw InternalError("artin_rees_decompose: image identity fails at order " +
                          std::to_string(t));
  }
  return out;
}

/// Exact solution from truncating a limit-kernel coefficient series at
/// order c; agrees with the untruncated curve through order c.
template <Scalar K>
SolutionCurve<K> truncation_solution(const MatSeries<K>& n_series, int c,
                                     const Transform<K>& phi) {
  std::vector<Mat<K>> coeffs;
  for (int t = 0; t <= std::min(c, n_series.order()); ++t) coeffs.push_back(n_series.at(t));
  MatSeries<K> poly = MatSeries<K>::polynomial(std::move(coeffs));
  return SolutionCurve<K>{series_mul(phi.series, poly)};
}

}  // namespace localsmith
