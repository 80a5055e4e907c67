// Copyright (c) the localsmith authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "localsmith/recursion.hpp"
#include "localsmith/structure_checks.hpp"

namespace localsmith {

enum class TransformProvenance { ToeplitzRow, DefiningEquation, LeftFactorization };

/// Near-identity transformation series (constant coefficient is I).
template <Scalar K>
struct Transform {
  MatSeries<K> series;
  int valid_order = 0;
  TransformProvenance provenance = TransformProvenance::ToeplitzRow;
};

/// Degree-k polynomial read off the last chain column before stabilization;
/// transforms the family into a partially triangular one.
template <Scalar K>
struct PreTransform {
  int k = 0;
  MatSeries<K> poly;
};

template <Scalar K>
PreTransform<K> pre_transform(RecursionState<K>& state) {
  const int k = state.require_stabilization().k;
  state.ensure_steps(k + 1);
  std::vector<Mat<K>> c;
  c.push_back(Mat<K>::identity(state.domain_dim()));
  for (int t = 1; t <= k; ++t) c.push_back(state.m_entry(k + 1 - t, k + 1));
  return PreTransform<K>{k, MatSeries<K>::polynomial(std::move(c))};
}

/// The diagonal family: one bijective block per exponent, plus projectors
/// onto the limit kernel and the unreachable part of the target.
template <Scalar K>
struct DiagonalForm {
  struct Part {
    Mat<K> s;       // block operator, bijective from n_c onto r
    Mat<K> p;       // projector onto n_c in the domain
    Mat<K> p_bbar;  // projector onto r in the target
    Mat<K> s_inv;   // inverse on r, zero off it
    int exponent;
  };
  int k = 0;
  int domain_dim = 0, target_dim = 0;
  std::vector<Part> parts;  // parts[i] carries exponent i
  Mat<K> p_kernel;          // projector onto the limit kernel
  Mat<K> pi_cokernel;       // projector onto the leftover target complement
  Subspace<K> kernel_limit;
  Subspace<K> range_limit;  // accumulated leading spaces

  MatSeries<K> series() const {
    std::vector<Mat<K>> c(static_cast<size_t>(k) + 1, Mat<K>(target_dim, domain_dim));
    for (const Part& p : parts) c[static_cast<size_t>(p.exponent)] = p.s * p.p;
    return MatSeries<K>::polynomial(std::move(c));
  }
};

template <Scalar K>
DiagonalForm<K> build_diagonal_form(RecursionState<K>& state) {
  const StabilizationReport& st = state.require_stabilization();
  DiagonalForm<K> d;
  d.k = st.k;
  d.domain_dim = state.domain_dim();
  d.target_dim = state.target_dim();
  state.ensure_steps(st.k + 1);
  Mat<K> psum(d.domain_dim, d.domain_dim);
  Mat<K> qsum(d.target_dim, d.target_dim);
  for (int i = 1; i <= st.k + 1; ++i) {
    const StepRecord<K>& rec = state.step(i);
    d.parts.push_back({rec.s, rec.p_b, rec.p_bbar, rec.s_inv, i - 1});
    psum += rec.p_b;
    qsum += rec.p_bbar;
  }
  d.p_kernel = Mat<K>::identity(d.domain_dim) - psum;
  d.pi_cokernel = Mat<K>::identity(d.target_dim) - qsum;
  d.kernel_limit = state.step(st.k + 1).n;
  d.range_limit = state.accumulated_range(st.k + 1);
  return d;
}

// ---------------------------------------------------------------------------
// phi, route one: the repeated row of the chain matrix

/// phi_j = M_{k+1, k+1+j}; coefficient j consumes family coefficients
/// through index k+j, so jets clamp the order.
template <Scalar K>
Transform<K> phi_from_toeplitz(RecursionState<K>& state, int order) {
  const int k = state.require_stabilization().k;
  if (!state.family().is_polynomial()) order = std::min(order, state.family().order() - k);
  if (order < 0) order = 0;
  state.ensure_steps(k + 1 + order);
  std::vector<Mat<K>> c;
  c.push_back(Mat<K>::identity(state.domain_dim()));
  for (int j = 1; j <= order; ++j) c.push_back(state.m_entry(k + 1, k + 1 + j));
  return Transform<K>{MatSeries<K>::jet(std::move(c)), order, TransformProvenance::ToeplitzRow};
}

// ---------------------------------------------------------------------------
// phi, route two: the defining equation

/// Data of the fixed-point system (I - eps*Q(eps)) * dbar(eps) = qbar(eps)
/// over block columns with k+1 components; the solution's last component
/// continues phi past order k. Fields keep the assembled pieces so the
/// exact point evaluator can reuse them.
template <Scalar K>
struct DefiningEquation {
  int k = 0;
  int m = 0, mbar = 0;
  std::vector<Mat<K>> hbar;      // H_1..H_{k+1}
  std::vector<Mat<K>> phi_low;   // I, phi_1..phi_k from the repeated row
  Mat<K> w;                      // constant part of the regular series
  // series coefficients, index = power of eps
  std::vector<std::vector<std::vector<Mat<K>>>> q_op;  // (k+1)x(k+1) blocks
  std::vector<std::vector<Mat<K>>> q_rhs;              // k+1 block column
  std::vector<std::vector<Mat<K>>> d_sol;              // k+1 block column
  int coeff_count = 0;

  /// Coefficient c of [I - eps*Q] * dbar - qbar; exactly zero when the
  /// stored solution is consistent.
  std::vector<Mat<K>> residual(int c) const {
    std::vector<Mat<K>> acc;
    for (int i = 0; i <= k; ++i)
      acc.push_back(d_sol[static_cast<size_t>(c)][static_cast<size_t>(i)] -
                    q_rhs[static_cast<size_t>(c)][static_cast<size_t>(i)]);
    for (int a = 0; a + 1 <= c; ++a) {
      const auto& qa = q_op[static_cast<size_t>(a)];
      const auto& db = d_sol[static_cast<size_t>(c - 1 - a)];
      for (int i = 0; i <= k; ++i)
        for (int j = 0; j <= k; ++j)
          acc[static_cast<size_t>(i)] -=
              qa[static_cast<size_t>(i)][static_cast<size_t>(j)] * db[static_cast<size_t>(j)];
    }
    return acc;
  }
};

template <Scalar K>
std::pair<Transform<K>, DefiningEquation<K>> phi_from_defining_eq(RecursionState<K>& state,
                                                                  int order) {
  const StabilizationReport& st = state.require_stabilization();
  const int k = st.k;
  const int m = state.domain_dim();
  const int mbar = state.target_dim();
  const MatSeries<K>& l = state.family();

  if (!l.is_polynomial()) order = std::min(order, l.order() - k);
  if (order < 0) order = 0;
  state.ensure_steps(std::max(k + 2, 2 * k + 1));

  DefiningEquation<K> eq;
  eq.k = k;
  eq.m = m;
  eq.mbar = mbar;

  // hbar: top product of the first stabilized column, then the k-step
  // chain matrix applied to the remaining split-off products
  const std::vector<Mat<K>>& eprod = state.step(k + 2).e_prod;  // entries 1..k+1
  eq.hbar.push_back(eprod[0]);
  for (int r = 1; r <= k; ++r) {
    Mat<K> acc(m, mbar);
    for (int b = r; b <= k; ++b) acc += state.m_entry(r, b) * eprod[static_cast<size_t>(b)];
    eq.hbar.push_back(std::move(acc));
  }

  // low-order coefficients come from the repeated row
  eq.phi_low.push_back(Mat<K>::identity(m));
  for (int t = 1; t <= k; ++t) eq.phi_low.push_back(state.m_entry(k + 1, k + 1 + t));

  // w: the family rows against the last pre-stabilization chain column
  eq.w = Mat<K>(mbar, m);
  for (int j = 1; j <= k + 1 && j <= l.valid_order(); ++j)
    eq.w += l.at(j) * state.m_entry(j, 2 * k + 1);

  // coefficient t of the i-th component of H * (1; eps; ...; eps^k)
  auto he = [&](int i, int t) -> const Mat<K>* {
    if (t >= 0 && t <= i - 1) return &eq.hbar[static_cast<size_t>(i - t - 1)];
    return nullptr;
  };
  // tail sums of opening operators in the rhs split, component j
  auto v_coeff = [&](int j, int t) -> std::optional<Mat<K>> {
    if (j >= 2 && t >= 0 && t <= j - 2) return state.step(2 * k + 3 - j + t).sbar;
    return std::nullopt;
  };
  // window series: later family coefficients against the reversed
  // low-order phi window
  auto g_coeff = [&](int t) -> Mat<K> {
    Mat<K> acc(mbar, m);
    for (int c = (t == 0 ? 2 : 1); c <= k + 1; ++c) {
      int idx = k + t + c;
      if (idx > l.valid_order()) continue;
      acc += l.at(idx) * eq.phi_low[static_cast<size_t>(k + 1 - c)];
    }
    return acc;
  };
  // the full regular series: w at order zero plus the window series
  auto x_coeff = [&](int t) -> Mat<K> {
    Mat<K> acc = g_coeff(t);
    if (t == 0) acc += eq.w;
    return acc;
  };
  // row entries of the operator matrix: constant family coefficients in
  // the first k slots, the shifted remainder series in the last one
  auto w_coeff = [&](int j, int t) -> Mat<K> {
    if (j <= k) return (t == 0 && j <= l.valid_order()) ? l.at(j) : Mat<K>(mbar, m);
    int idx = k + 1 + t;
    return idx <= l.valid_order() ? l.at(idx) : Mat<K>(mbar, m);
  };

  const int dcount = std::max(order - k, 0);

  for (int c = 0; c < dcount; ++c) {
    std::vector<Mat<K>> rhs;
    for (int i = 1; i <= k + 1; ++i) {
      Mat<K> acc(m, m);
      for (int j = 1; j <= i; ++j) {
        // pbar component: H_{i-j+1} * v_j, coefficient c
        if (auto v = v_coeff(j, c)) acc += eq.hbar[static_cast<size_t>(i - j)] * *v;
      }
      for (int t = 0; t <= std::min(c, i - 1); ++t)
        if (const Mat<K>* h = he(i, t)) acc += *h * x_coeff(c - t);
      rhs.push_back(std::move(acc));
    }
    eq.q_rhs.push_back(std::move(rhs));
  }

  const int qcount = dcount;  // Q_a needed for a <= dcount-2; keep one spare
  for (int c = 0; c < qcount; ++c) {
    std::vector<std::vector<Mat<K>>> qc(static_cast<size_t>(k) + 1);
    for (int i = 1; i <= k + 1; ++i)
      for (int j = 1; j <= k + 1; ++j) {
        Mat<K> acc(m, m);
        for (int t = 0; t <= std::min(c, i - 1); ++t)
          if (const Mat<K>* h = he(i, t)) acc += *h * w_coeff(j, c - t);
        qc[static_cast<size_t>(i - 1)].push_back(std::move(acc));
      }
    eq.q_op.push_back(std::move(qc));
  }

  // forward substitution: d_c = q_c + sum_{a+b=c-1} Q_a d_b
  for (int c = 0; c < dcount; ++c) {
    std::vector<Mat<K>> d = eq.q_rhs[static_cast<size_t>(c)];
    for (int a = 0; a + 1 <= c; ++a) {
      const auto& qa = eq.q_op[static_cast<size_t>(a)];
      const auto& db = eq.d_sol[static_cast<size_t>(c - 1 - a)];
      for (int i = 0; i <= k; ++i)
        for (int j = 0; j <= k; ++j)
          d[static_cast<size_t>(i)] +=
              qa[static_cast<size_t>(i)][static_cast<size_t>(j)] * db[static_cast<size_t>(j)];
    }
    eq.d_sol.push_back(std::move(d));
  }
  eq.coeff_count = dcount;

  std::vector<Mat<K>> phi_coeffs = eq.phi_low;
  for (int c = 0; c < dcount; ++c)
    phi_coeffs.push_back(eq.d_sol[static_cast<size_t>(c)][static_cast<size_t>(k)]);
  while (static_cast<int>(phi_coeffs.size()) - 1 > order) phi_coeffs.pop_back();
  while (static_cast<int>(phi_coeffs.size()) - 1 < order)
    phi_coeffs.push_back(Mat<K>(m, m));  // only reachable for order <= k

  Transform<K> t{MatSeries<K>::jet(std::move(phi_coeffs)), order,
                 TransformProvenance::DefiningEquation};
  return {std::move(t), std::move(eq)};
}

// ---------------------------------------------------------------------------
// psi: split the diagonal off the triangular family

/// Build the chain-side series S = sum eps^t S_{t+1} from the records.
template <Scalar K>
MatSeries<K> chain_s_series(RecursionState<K>& state, int order) {
  state.ensure_steps(order + 1);
  std::vector<Mat<K>> c;
  for (int t = 0; t <= order; ++t) c.push_back(state.step(t + 1).s);
  return MatSeries<K>::jet(std::move(c));
}

/// psi_i = sum_j S_{i+j} * s_inv_j over the k+1 diagonal blocks; consumes
/// S coefficients through index k+order.
template <Scalar K>
Transform<K> psi_build(RecursionState<K>& state, const MatSeries<K>& s, int order) {
  const int k = state.require_stabilization().k;
  const int mbar = state.target_dim();
  if (s.valid_order() < k) throw Error("psi_build: S series too short");
  order = std::min(order, s.valid_order() - k);
  if (order < 0) order = 0;
  std::vector<Mat<K>> c;
  c.push_back(Mat<K>::identity(mbar));
  for (int i = 1; i <= order; ++i) {
    Mat<K> acc(mbar, mbar);
    for (int j = 1; j <= k + 1; ++j) acc += s.at(i + j - 1) * state.step(j).s_inv;
    c.push_back(std::move(acc));
  }
  return Transform<K>{MatSeries<K>::jet(std::move(c)), order,
                      TransformProvenance::LeftFactorization};
}

// ---------------------------------------------------------------------------
// triangularization report for the pre-transform

struct TriangularReport {
  bool ok = true;
  std::vector<std::string> failures;
};

/// Verify that L * p is triangular through the first k+1 coefficients:
/// coefficient i-1 maps earlier complements into the running target
/// complement, maps n_c_i onto r_i, kills n_i, and the block system built
/// from the coefficients has the simplified product kernel.
template <Scalar K>
TriangularReport triangular_check(const MatSeries<K>& l, const PreTransform<K>& p,
                                  RecursionState<K>& state) {
  TriangularReport rep;
  auto fail = [&](const std::string& msg) {
    rep.ok = false;
    rep.failures.push_back(msg);
  };
  MatSeries<K> s = series_mul(l, p.poly);
  const int k = p.k;
  state.ensure_steps(k + 1);
  for (int i = 1; i <= k + 1; ++i) {
    if (i - 1 > s.valid_order()) break;
    const Mat<K>& si = s.at(i - 1);
    const StepRecord<K>& rec = state.step(i);
    if (si != rec.s) fail("coefficient " + std::to_string(i - 1) + " differs from the chain");
    // earlier complements land in the accumulated target complement
    Subspace<K> rc_prev = i == 1 ? Subspace<K>::full(state.target_dim()) : state.step(i - 1).r_c;
    for (int j = 1; j < i; ++j) {
      if (!rc_prev.contains(si * state.step(j).n_c.basis))
        fail("coefficient " + std::to_string(i - 1) + " leaks out of the target complement");
    }
    if (!span_of(si * rec.n_c.basis).equals(rec.r))
      fail("coefficient " + std::to_string(i - 1) + " does not map its complement onto r");
    if (!(si * rec.n.basis).is_zero())
      fail("coefficient " + std::to_string(i - 1) + " does not kill its kernel");
  }
  // simplified chains: the kernel of the block system assembled from
  // S_1..S_i is the product of the nested kernels
  const int m = state.domain_dim();
  for (int i = 1; i <= k + 1 && i - 1 <= s.valid_order(); ++i) {
    Mat<K> block(i * state.target_dim(), i * m);
    for (int r = 1; r <= i; ++r)
      for (int c = r; c <= i; ++c)
        block.set_block((r - 1) * state.target_dim(), (c - 1) * m, s.at(c - r));
    Mat<K> ker = kernel_basis(block);
    Mat<K> expect(i * m, 0);
    for (int slot = 1; slot <= i; ++slot) {
      const Mat<K>& b = state.step(slot).n.basis;
      Mat<K> lifted(i * m, b.cols());
      lifted.set_block((slot - 1) * m, 0, b);
      expect = Mat<K>::hcat(expect, lifted);
    }
    if (expect.rows() == 0) expect = Mat<K>(i * m, 0);
    Subspace<K> ks = span_of(ker);
    Subspace<K> es = span_of(expect);
    if (!ks.equals(es)) fail("simplified chain kernel mismatch at length " + std::to_string(i));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// end-to-end driver

struct DiagonalizeOptions {
  int order = -1;  // requested expansion order; -1 means 2k+6
  int k_max = 64;
  bool dual_path = true;  // build phi both ways and insist on agreement
};

template <Scalar K>
struct Diagonalization {
  RecursionState<K> state;
  Transform<K> phi;
  Transform<K> psi;
  MatSeries<K> s;  // L*phi, Cauchy product, through phi's validity
  DiagonalForm<K> delta;
  DefiningEquation<K> defeq;
  bool dual_path_checked = false;
  bool degenerate = false;
  int identity_order = -1;  // coefficients of psi^{-1} L phi - Delta verified zero
};

/// Run the full construction: stabilize, build phi along both routes,
/// multiply out the triangular family, split psi off, assemble the
/// diagonal form, and verify the equivalence identity coefficientwise.
template <Scalar K>
Diagonalization<K> diagonalize(const MatSeries<K>& l, DiagonalizeOptions opts = {}) {
  RecursionState<K> state = run_until_stabilized(l, opts.k_max);
  const int k = state.require_stabilization().k;
  const bool degenerate = state.require_stabilization().degenerate;
  int order = opts.order >= 0 ? opts.order : 2 * k + 6;

  Diagonalization<K> out{std::move(state),
                         Transform<K>{},
                         Transform<K>{},
                         MatSeries<K>::zero(l.rows(), l.cols()),
                         DiagonalForm<K>{},
                         DefiningEquation<K>{},
                         false,
                         degenerate,
                         -1};
  RecursionState<K>& stt = out.state;

  if (out.degenerate) {
    // the zero family: identity transforms and a vanishing diagonal
    out.phi = Transform<K>{MatSeries<K>::constant(Mat<K>::identity(l.cols())).truncated(order),
                           order, TransformProvenance::ToeplitzRow};
    out.psi = Transform<K>{MatSeries<K>::constant(Mat<K>::identity(l.rows())).truncated(order),
                           order, TransformProvenance::LeftFactorization};
    out.delta = build_diagonal_form(stt);
    out.s = series_mul(l, out.phi.series);
    out.identity_order = std::min(order, l.valid_order());
    return out;
  }

  // phi needs k extra coefficients so psi reaches the requested order
  int phi_ext_order = order + k;
  out.phi = phi_from_toeplitz(stt, phi_ext_order);

  bool defeq_possible =
      l.is_polynomial() || (l.order() >= std::max(2 * k, k + 1));
  if (opts.dual_path && defeq_possible) {
    auto [phi2, eq] = phi_from_defining_eq(stt, phi_ext_order);
    out.defeq = std::move(eq);
    int common = std::min(out.phi.valid_order, phi2.valid_order);
    for (int j = 0; j <= common; ++j) {
      if (out.phi.series.at(j) != phi2.series.at(j))
        throw InternalError("phi routes disagree first at coefficient " + std::to_string(j));
    }
    out.dual_path_checked = true;
  }

  out.s = series_mul(l, out.phi.series);
  out.psi = psi_build(stt, out.s, order);
  out.delta = build_diagonal_form(stt);

  // verify psi^{-1} L phi = Delta coefficientwise as far as both sides go
  int check_order = std::min({order, out.phi.valid_order, out.psi.valid_order});
  MatSeries<K> psi_inv = series_inverse_near_identity(out.psi.series, check_order);
  MatSeries<K> lhs = series_mul(psi_inv, out.s.truncated(check_order));
  MatSeries<K> delta_series = out.delta.series();
  out.identity_order = -1;
  for (int j = 0; j <= check_order; ++j) {
    if (lhs.at(j) != delta_series.at(j))
      throw InternalError("diagonal identity fails first at coefficient " + std::to_string(j));
    out.identity_order = j;
  }
  return out;
}

}  // namespace localsmith
