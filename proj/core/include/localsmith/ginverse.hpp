// Copyright (c) the localsmith authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "localsmith/evaluate.hpp"
#include "localsmith/laurent.hpp"
#include "localsmith/smith_form.hpp"
#include "localsmith/transform.hpp"

namespace localsmith {

/// Generalized inverse of the diagonal family: block inverses weighted by
/// negative parameter powers. Pole order is k away from the degenerate case.
template <Scalar K>
LaurentSeries<K> delta_pinv(const DiagonalForm<K>& d) {
  std::vector<Mat<K>> c(static_cast<size_t>(d.k) + 1, Mat<K>(d.domain_dim, d.target_dim));
  for (const auto& part : d.parts) c[static_cast<size_t>(d.k - part.exponent)] = part.s_inv;
  return LaurentSeries<K>::shifted(MatSeries<K>::polynomial(std::move(c)), d.k);
}

/// Laurent expansion of the generalized inverse phi * delta^+ * psi^{-1}.
/// `order` is the highest requested exponent; jets clamp it.
template <Scalar K>
LaurentSeries<K> l_pinv_laurent(const Transform<K>& phi, const DiagonalForm<K>& delta,
                                const Transform<K>& psi, int order) {
  LaurentSeries<K> dp = delta_pinv(delta);
  int inner_top = std::min({phi.valid_order, psi.valid_order, order + delta.k});
  if (inner_top < 0) inner_top = 0;
  MatSeries<K> psi_inv = series_inverse_near_identity(psi.series, inner_top);
  MatSeries<K> inner = series_mul(series_mul(phi.series.truncated(inner_top), dp.regular_part()),
                                  psi_inv);
  return LaurentSeries<K>::shifted(inner, dp.pole_order());
}

/// Projection families onto the moving complement-part and range of the
/// family, conjugated through the transforms: phi (sum P_i) phi^{-1} and
/// psi (sum of leading projectors) psi^{-1}.
template <Scalar K>
struct ProjectionFamilies {
  MatSeries<K> onto_domain_part;   // value at 0: sum of the domain projectors
  MatSeries<K> onto_range;         // value at 0: sum of the target projectors
  bool idempotent = false;         // coefficientwise check of P(eps)^2 = P(eps)
};

template <Scalar K>
ProjectionFamilies<K> projection_families(const Transform<K>& phi, const Transform<K>& psi,
                                          const DiagonalForm<K>& delta, int order) {
  int t_left = std::min(order, phi.valid_order);
  int t_right = std::min(order, psi.valid_order);
  Mat<K> p_sum = Mat<K>::identity(delta.domain_dim) - delta.p_kernel;
  Mat<K> q_sum = Mat<K>::identity(delta.target_dim) - delta.pi_cokernel;

  MatSeries<K> phi_inv = series_inverse_near_identity(phi.series, t_left);
  MatSeries<K> psi_inv = series_inverse_near_identity(psi.series, t_right);
  ProjectionFamilies<K> out;
  out.onto_domain_part = series_mul(series_mul(phi.series.truncated(t_left),
                                               MatSeries<K>::constant(p_sum)),
                                    phi_inv);
  out.onto_range = series_mul(series_mul(psi.series.truncated(t_right),
                                         MatSeries<K>::constant(q_sum)),
                              psi_inv);
  auto idem = [](const MatSeries<K>& p) {
    MatSeries<K> sq = series_mul(p, p);
    for (int t = 0; t <= sq.valid_order(); ++t)
      if (sq.at(t) != p.at(t)) return false;
    return true;
  };
  out.idempotent = idem(out.onto_domain_part) && idem(out.onto_range);
  return out;
}

/// Smooth kernel and range families: the limit spaces pushed through the
/// transforms, as series of basis matrices.
template <Scalar K>
struct KernelRangeFamilies {
  MatSeries<K> kernel_family;  // columns: basis of phi(eps) * kernel limit
  MatSeries<K> range_family;   // columns: basis of psi(eps) * accumulated leading spaces
};

template <Scalar K>
KernelRangeFamilies<K> kernel_range_families(const Transform<K>& phi, const Transform<K>& psi,
                                             const DiagonalForm<K>& delta) {
  KernelRangeFamilies<K> out;
  out.kernel_family =
      series_mul(phi.series, MatSeries<K>::constant(delta.kernel_limit.basis));
  out.range_family = series_mul(psi.series, MatSeries<K>::constant(delta.range_limit.basis));
  return out;
}

// ---------------------------------------------------------------------------
// local Smith report

template <Scalar K>
struct SmithLocalReport {
  int k = 0;
  std::vector<int> exponents;  // multiset, ascending
  int rank_limit = 0;
  int kernel_limit_dim = 0;
  bool full_smith = false;  // no limit kernel and no leftover target part
  bool degenerate = false;
  // factorization data, populated when full_smith holds
  std::optional<Mat<K>> constant_factor;        // sum of the block operators
  std::optional<MatSeries<K>> right_factor;     // sum eps^i P_{i+1}
  std::optional<MatSeries<K>> left_factor;      // psi * constant_factor, when psi given
};

template <Scalar K>
SmithLocalReport<K> smith_report(const RecursionState<K>& state, const DiagonalForm<K>& delta,
                                 const Transform<K>* psi = nullptr) {
  const StabilizationReport& st = state.require_stabilization();
  SmithLocalReport<K> rep;
  rep.k = st.k;
  rep.exponents = chain_exponents(state);
  rep.rank_limit = st.dim_range_limit;
  rep.kernel_limit_dim = st.dim_kernel_limit;
  rep.degenerate = st.degenerate;
  rep.full_smith = !st.degenerate && rep.kernel_limit_dim == 0 &&
                   delta.pi_cokernel.is_zero();
  if (rep.full_smith) {
    Mat<K> sp(delta.target_dim, delta.domain_dim);
    for (const auto& part : delta.parts) sp += part.s * part.p;
    rep.constant_factor = sp;
    std::vector<Mat<K>> pc(static_cast<size_t>(delta.k) + 1,
                           Mat<K>(delta.domain_dim, delta.domain_dim));
    for (const auto& part : delta.parts) pc[static_cast<size_t>(part.exponent)] = part.p;
    rep.right_factor = MatSeries<K>::polynomial(std::move(pc));
    if (psi)
      rep.left_factor = series_mul(psi->series, MatSeries<K>::constant(sp));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// generalized-inverse axioms

struct AxiomReport {
  bool checked = false;  // false when every sample point was skipped
  bool pass = false;
  std::vector<std::string> notes;  // skipped points and failures
};

/// Exact check of l * x * l = l and x * l * x = x at sample points
/// (polynomial families), or coefficientwise through the stored window
/// (jets).
template <Scalar K>
AxiomReport verify_ginverse_axioms(const Diagonalization<K>& diag,
                                   const std::vector<K>& samples) {
  AxiomReport rep;
  const MatSeries<K>& l = diag.state.family();
  if (l.is_polynomial()) {
    bool all = true;
    for (const K& eps : samples) {
      PointEvaluation<K> pe = evaluate_at(diag, eps);
      if (!pe.valid) {
        rep.notes.push_back("skipped " + ScalarTraits<K>::str(eps) + ": " + pe.note);
        continue;
      }
      rep.checked = true;
      bool ok = (pe.l * pe.l_pinv * pe.l == pe.l) && (pe.l_pinv * pe.l * pe.l_pinv == pe.l_pinv);
      if (!ok) {
        all = false;
        rep.notes.push_back("axioms fail at " + ScalarTraits<K>::str(eps));
      }
    }
    rep.pass = rep.checked && all;
    return rep;
  }
  // jet: compare Laurent coefficient windows
  int order = std::min(diag.phi.valid_order, diag.psi.valid_order);
  LaurentSeries<K> x = l_pinv_laurent(diag.phi, diag.delta, diag.psi, order - diag.delta.k);
  LaurentSeries<K> lxl = laurent_mul(laurent_mul(l.truncated(order), x), l.truncated(order));
  LaurentSeries<K> xlx = laurent_mul(laurent_mul(x, l.truncated(order)), x);
  rep.checked = true;
  rep.pass = true;
  for (int e = -lxl.pole_order(); e <= std::min(lxl.order(), order - 2 * diag.delta.k); ++e)
    if (lxl.at(e) != (e >= 0 && e <= l.order() ? l.at(e) : Mat<K>(l.rows(), l.cols())))
      rep.pass = false;
  for (int e = -xlx.pole_order(); e <= std::min({xlx.order(), x.order(), order - 2 * diag.delta.k});
       ++e)
    if (xlx.at(e) != x.at(e)) rep.pass = false;
  return rep;
}

/// Exact kernel/range comparison at one point: the transported limit
/// spaces versus elimination on the evaluated family.
template <Scalar K>
bool kernel_range_match_at(const Diagonalization<K>& diag, const PointEvaluation<K>& pe) {
  if (!pe.valid) return false;
  Subspace<K> moved_kernel = span_of(pe.phi * diag.delta.kernel_limit.basis);
  Subspace<K> true_kernel = kernel_of(pe.l);
  if (!moved_kernel.equals(true_kernel)) return false;
  Subspace<K> moved_range = span_of(pe.psi * diag.delta.range_limit.basis);
  Subspace<K> true_range = span_of(pe.l);
  return moved_range.equals(true_range);
}

}  // namespace localsmith
