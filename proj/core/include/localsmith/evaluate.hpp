// Copyright (c) the localsmith authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "localsmith/transform.hpp"

namespace localsmith {

/// Exact values of every constructed object at one nonzero parameter
/// value. Only meaningful for polynomial-exact families: there the
/// transforms are rational in the parameter, so the defining equation can
/// be solved at the point instead of truncating series. Points where an
/// auxiliary denominator vanishes are reported invalid with a note.
template <Scalar K>
struct PointEvaluation {
  K eps{};
  bool valid = false;
  std::string note;
  Mat<K> l;           // the family itself
  Mat<K> phi, psi;    // transform values, both invertible when valid
  Mat<K> phi_inv, psi_inv;
  Mat<K> s;           // l * phi
  Mat<K> delta, delta_pinv;
  Mat<K> l_pinv;      // phi * delta_pinv * psi^{-1}
};

/// Tail evaluation sum_{t >= 0} eps^t * L_{idx0 + t} of a polynomial family.
template <Scalar K>
Mat<K> tail_eval(const MatSeries<K>& l, int idx0, const K& eps) {
  Mat<K> acc(l.rows(), l.cols());
  for (int t = l.degree() - idx0; t >= 0; --t) acc = l.at(idx0 + t) + eps * acc;
  return acc;
}

template <Scalar K>
PointEvaluation<K> evaluate_at(const Diagonalization<K>& diag, const K& eps) {
  PointEvaluation<K> pe;
  pe.eps = eps;
  const MatSeries<K>& l = diag.state.family();
  if (!l.is_polynomial()) {
    pe.note = "exact point evaluation needs a polynomial-exact family";
    return pe;
  }
  if (ScalarTraits<K>::is_zero(eps)) {
    pe.note = "sample point must be nonzero";
    return pe;
  }
  const int m = l.cols();
  const int mbar = l.rows();
  pe.l = l.eval(eps);

  if (diag.degenerate) {
    pe.phi = Mat<K>::identity(m);
    pe.psi = Mat<K>::identity(mbar);
    pe.phi_inv = pe.phi;
    pe.psi_inv = pe.psi;
    pe.s = Mat<K>(mbar, m);
    pe.delta = Mat<K>(mbar, m);
    pe.delta_pinv = Mat<K>(m, mbar);
    pe.l_pinv = Mat<K>(m, mbar);
    pe.valid = true;
    return pe;
  }

  const DefiningEquation<K>& eq = diag.defeq;
  const RecursionState<K>& st = diag.state;
  const int k = eq.k;
  if (eq.hbar.empty()) {
    pe.note = "defining-equation data missing (dual-path construction disabled?)";
    return pe;
  }

  // window polynomials of the fixed-point system, evaluated at the point
  auto he_at = [&](int i) {
    Mat<K> acc(m, mbar);
    K p = ScalarTraits<K>::one();
    for (int t = 0; t <= i - 1; ++t) {
      acc += p * eq.hbar[static_cast<size_t>(i - t - 1)];
      p = p * eps;
    }
    return acc;
  };
  auto v_at = [&](int j) {
    Mat<K> acc(mbar, m);
    K p = ScalarTraits<K>::one();
    for (int t = 0; t <= j - 2; ++t) {
      acc += p * st.step(2 * k + 3 - j + t).sbar;
      p = p * eps;
    }
    return acc;
  };
  Mat<K> g(mbar, m);
  for (int c = 2; c <= k + 1; ++c)
    g += tail_eval(l, k + c, eps) * eq.phi_low[static_cast<size_t>(k + 1 - c)];
  g += eps * (tail_eval(l, k + 2, eps) * eq.phi_low[static_cast<size_t>(k)]);
  Mat<K> x = eq.w + g;

  // assemble I - eps*Q and the right-hand side as one block system
  Mat<K> a = Mat<K>::identity((k + 1) * m);
  Mat<K> rhs((k + 1) * m, m);
  for (int i = 1; i <= k + 1; ++i) {
    Mat<K> hei = he_at(i);
    for (int j = 1; j <= k + 1; ++j) {
      Mat<K> w_j = (j <= k) ? l.at(j) : tail_eval(l, k + 1, eps);
      a.set_block((i - 1) * m, (j - 1) * m,
                  a.block((i - 1) * m, (j - 1) * m, m, m) - eps * (hei * w_j));
    }
    Mat<K> q_i(m, m);
    for (int j = 1; j <= i; ++j) q_i += eq.hbar[static_cast<size_t>(i - j)] * v_at(j);
    q_i += hei * x;
    rhs.set_block((i - 1) * m, 0, q_i);
  }
  auto ainv = inverse(a);
  if (!ainv) {
    pe.note = "fixed-point system is singular at this point";
    return pe;
  }
  Mat<K> dbar_mat = *ainv * rhs;
  auto dbar = std::optional<Mat<K>>(std::move(dbar_mat));

  // phi, s, psi, delta at the point
  pe.phi = Mat<K>(m, m);
  {
    K p = ScalarTraits<K>::one();
    for (int t = 0; t <= k; ++t) {
      pe.phi += p * eq.phi_low[static_cast<size_t>(t)];
      p = p * eps;
    }
    pe.phi += p * dbar->block(k * m, 0, m, m);
  }
  pe.s = pe.l * pe.phi;

  pe.psi = Mat<K>::identity(mbar);
  {
    Mat<K> partial(mbar, m);  // sum of eps^{t-1} S_t as t grows
    K denom = ScalarTraits<K>::one();
    for (int j = 1; j <= k + 1; ++j) {
      K p = scalar_pow(eps, j - 1);
      partial += p * st.step(j).s;
      denom = denom * eps;
      Mat<K> r_j = pe.s - partial;  // divisible by eps^j as a series
      pe.psi += (eps / denom) * (r_j * st.step(j).s_inv);
    }
  }

  pe.delta = Mat<K>(mbar, m);
  pe.delta_pinv = Mat<K>(m, mbar);
  for (int i = 1; i <= k + 1; ++i) {
    const StepRecord<K>& rec = st.step(i);
    pe.delta += scalar_pow(eps, i - 1) * (rec.s * rec.p_b);
    pe.delta_pinv += (ScalarTraits<K>::one() / scalar_pow(eps, i - 1)) * rec.s_inv;
  }

  auto phi_inv = inverse(pe.phi);
  auto psi_inv = inverse(pe.psi);
  if (!phi_inv || !psi_inv) {
    pe.note = "a transform is singular at this point";
    return pe;
  }
  pe.phi_inv = *phi_inv;
  pe.psi_inv = *psi_inv;
  pe.l_pinv = pe.phi * pe.delta_pinv * pe.psi_inv;

  if (pe.psi_inv * pe.l * pe.phi != pe.delta) {
    pe.note = "point value of the equivalence identity failed";
    return pe;
  }
  pe.valid = true;
  return pe;
}

}  // namespace localsmith
