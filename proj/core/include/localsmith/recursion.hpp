// Copyright (c) the localsmith authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "localsmith/laurent.hpp"
#include "localsmith/linalg.hpp"
#include "localsmith/series.hpp"
#include "localsmith/smith_form.hpp"

namespace localsmith {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
/// Input data ran out (a truncated jet has no further coefficients).
struct InsufficientDataError : Error {
  using Error::Error;
};
/// The chain did not certify stabilization within the allowed step budget.
struct NonStabilizedError : Error {
  using Error::Error;
};
/// A structural identity failed; indicates a bug, not bad input.
struct InternalError : Error {
  using Error::Error;
};

enum class Certification { ExhaustedDegreeBound, OracleSmith, ThroughOrderOnly };

inline const char* certification_name(Certification c) {
  switch (c) {
    case Certification::ExhaustedDegreeBound: return "exhausted-degree-bound";
    case Certification::OracleSmith: return "oracle-smith";
    case Certification::ThroughOrderOnly: return "through-order-only";
  }
  return "?";
}

struct StabilizationReport {
  int k = 0;
  std::vector<int> exponent_multiplicities;  // entry j: dim N_{j+1}^c, j = 0..k
  int dim_kernel_limit = 0;                  // dim N_{k+1}
  int dim_range_limit = 0;                   // sum of dim R_j
  bool certified = false;
  Certification method = Certification::ThroughOrderOnly;
  bool degenerate = false;  // family vanishes through everything examined
  int horizon = 0;          // steps examined for the stopping rule
};

/// One step of the chain iteration. Index i >= 1; column vectors e_col and
/// m_col hold the operators of column i, entries 1..i.
template <Scalar K>
struct StepRecord {
  Mat<K> sbar;            // opening operator: rows of L glued to the previous chain column
  Mat<K> s;               // sbar projected onto the running complement in the target
  Subspace<K> n;          // nested kernel
  Subspace<K> n_c;        // complement of n inside the previous kernel
  Subspace<K> r;          // new leading-coefficient space
  Subspace<K> r_c;        // complement of r inside the previous target complement
  Mat<K> p_b;             // projector onto n_c in the domain split
  Mat<K> p_bbar;          // projector onto r in the target split
  Mat<K> pi_rc;           // projector onto r_c's accumulated complement (identity - sum p_bbar)
  Mat<K> s_inv;           // inverse of the bijection n_c -> r, extended by zero off r
  std::vector<Mat<K>> e_col;     // back-substitution column
  std::vector<Mat<K>> e_prod;    // the same entries with the trailing sbar factor split off
  std::vector<Mat<K>> m_col;     // chain-matrix column
};

/// Replay-deterministic chain state for a family L. Step i consumes
/// L_0..L_{i-1}; queries about ranks, leading coefficients and Jordan
/// chains read the finished records.
template <Scalar K>
class RecursionState {
 public:
  explicit RecursionState(MatSeries<K> l)
      : l_(std::move(l)),
        full_domain_(Subspace<K>::full(l_.cols())),
        full_target_(Subspace<K>::full(l_.rows())) {}

  const MatSeries<K>& family() const { return l_; }
  int domain_dim() const { return l_.cols(); }
  int target_dim() const { return l_.rows(); }
  int step_count() const { return static_cast<int>(steps_.size()); }

  const StepRecord<K>& step(int i) const {
    if (i < 1 || i > step_count())
      throw Error("step " + std::to_string(i) + " not computed (have " +
                  std::to_string(step_count()) + ")");
    return steps_[static_cast<size_t>(i) - 1];
  }

  /// Chain-matrix entry M_{r,c} for 1 <= r <= c <= step_count().
  const Mat<K>& m_entry(int r, int c) const { return step(c).m_col[static_cast<size_t>(r) - 1]; }
  const Mat<K>& e_entry(int r, int c) const { return step(c).e_col[static_cast<size_t>(r) - 1]; }

  const Subspace<K>& kernel_at(int i) const { return i == 0 ? full_domain_ : step(i).n; }

  /// Accumulated leading-coefficient space R_1 + ... + R_j.
  Subspace<K> accumulated_range(int j) const {
    Mat<K> b(target_dim(), 0);
    for (int i = 1; i <= j; ++i) b = Mat<K>::hcat(b, step(i).r.basis);
    if (b.rows() == 0) b = Mat<K>(target_dim(), 0);
    return Subspace<K>(b);
  }

  void ensure_steps(int n) {
    while (step_count() < n) advance();
  }

  void advance() {
    const int i = step_count() + 1;
    const int m = domain_dim();
    const int mbar = target_dim();
    StepRecord<K> rec;

    if (i - 1 > l_.valid_order())
      throw InsufficientDataError("chain step " + std::to_string(i) +
                                  " needs the coefficient of order " + std::to_string(i - 1) +
                                  ", input is a jet of order " + std::to_string(l_.order()));

    if (i == 1) {
      rec.sbar = l_.at(0);
      rec.s = rec.sbar;
    } else {
      Mat<K> acc(mbar, m);
      for (int j = 1; j <= i - 1; ++j) acc += l_.at(j) * m_entry(j, i - 1);
      rec.sbar = std::move(acc);
      rec.s = steps_.back().pi_rc * rec.sbar;
    }

    const Subspace<K>& prev_n = (i == 1) ? full_domain_ : steps_.back().n;
    const Subspace<K>& prev_rc = (i == 1) ? full_target_ : steps_.back().r_c;

    Mat<K> s_on_prev = rec.s * prev_n.basis;
    rec.n = Subspace<K>(prev_n.basis * kernel_basis(s_on_prev));
    rec.n_c = complement_in(rec.n, prev_n);
    rec.r = span_of(s_on_prev);
    rec.r_c = complement_in(rec.r, prev_rc);

    // projector onto r within the accumulated target split, and onto n_c
    // within the accumulated domain split; both splits refine consistently
    {
      Mat<K> others(mbar, 0);
      for (const StepRecord<K>& s : steps_) others = Mat<K>::hcat(others, s.r.basis);
      others = Mat<K>::hcat(others, rec.r_c.basis);
      if (others.rows() == 0) others = Mat<K>(mbar, 0);
      rec.p_bbar = projector_onto(rec.r, Subspace<K>(others));
      rec.pi_rc = (i == 1 ? Mat<K>::identity(mbar) : steps_.back().pi_rc) - rec.p_bbar;
    }
    {
      Mat<K> others(m, 0);
      for (const StepRecord<K>& s : steps_) others = Mat<K>::hcat(others, s.n_c.basis);
      others = Mat<K>::hcat(others, rec.n.basis);
      if (others.rows() == 0) others = Mat<K>(m, 0);
      rec.p_b = projector_onto(rec.n_c, Subspace<K>(others));
    }

    // s restricted to n_c is a bijection onto r; s_inv is its inverse glued
    // with the projector onto r, so s_inv == s_inv * p_bbar as operators
    {
      Mat<K> a = rec.s * rec.n_c.basis;
      auto sol = solve(a, rec.p_bbar);
      if (!sol) throw InternalError("chain step: bijection onto the leading space failed");
      rec.s_inv = rec.n_c.basis * *sol;
    }

    // back-substitution column: recursive bottom-up form, cross-checked
    // against the explicit product form before the record is committed
    auto sbar_of = [&](int v) -> const Mat<K>& { return v == i ? rec.sbar : step(v).sbar; };
    rec.e_col.assign(static_cast<size_t>(i), Mat<K>(m, m));
    rec.e_col[static_cast<size_t>(i) - 1] = Mat<K>::identity(m);
    for (int rr = i - 1; rr >= 1; --rr) {
      Mat<K> acc(mbar, m);
      for (int v = rr + 1; v <= i; ++v)
        acc += sbar_of(v) * rec.e_col[static_cast<size_t>(v) - 1];
      rec.e_col[static_cast<size_t>(rr) - 1] = -(step(rr).s_inv * acc);
    }
    if (i >= 2) {
      rec.e_prod.assign(static_cast<size_t>(i) - 1, Mat<K>(m, mbar));
      Mat<K> tail = Mat<K>::identity(mbar);
      for (int rr = i - 1; rr >= 1; --rr) {
        rec.e_prod[static_cast<size_t>(rr) - 1] = -(step(rr).s_inv * tail);
        if (rr >= 2) {
          const StepRecord<K>& prev = steps_[static_cast<size_t>(rr) - 1];
          tail = (Mat<K>::identity(mbar) - prev.sbar * prev.s_inv) * tail;
        }
      }
      for (int rr = 1; rr <= i - 1; ++rr) {
        if (rec.e_prod[static_cast<size_t>(rr) - 1] * rec.sbar !=
            rec.e_col[static_cast<size_t>(rr) - 1])
          throw InternalError("chain step: the two back-substitution forms disagree");
      }
    }

    // chain column: identity block on top of the previous triangular matrix
    rec.m_col.assign(static_cast<size_t>(i), Mat<K>(m, m));
    rec.m_col[0] = rec.e_col[0];
    for (int rr = 2; rr <= i; ++rr) {
      Mat<K> acc(m, m);
      for (int c = rr; c <= i; ++c)
        acc += m_entry(rr - 1, c - 1) * rec.e_col[static_cast<size_t>(c) - 1];
      rec.m_col[static_cast<size_t>(rr) - 1] = std::move(acc);
    }

    steps_.push_back(std::move(rec));
  }

  const std::optional<StabilizationReport>& stabilization() const { return stab_; }
  void set_stabilization(StabilizationReport r) { stab_ = std::move(r); }

  const StabilizationReport& require_stabilization() const {
    if (!stab_) throw Error("stabilization has not been declared for this state");
    return *stab_;
  }

  /// Largest i with b in N_i; nullopt encodes infinite rank.
  std::optional<int> rank_of(const Mat<K>& b) const {
    const StabilizationReport& st = require_stabilization();
    if (b.is_zero()) return std::nullopt;
    if (!step(1).n.contains(b)) return 0;
    for (int i = 2; i <= st.k + 1; ++i)
      if (!step(i).n.contains(b)) return i - 1;
    return std::nullopt;  // inside the limit kernel
  }

  /// Smallest order j at which bbar appears as a leading coefficient, or
  /// nullopt when bbar is not one at all.
  std::optional<int> lc_of(const Mat<K>& bbar) const {
    const StabilizationReport& st = require_stabilization();
    Mat<K> acc(target_dim(), 0);
    for (int j = 0; j <= st.k; ++j) {
      acc = Mat<K>::hcat(acc, step(j + 1).r.basis);
      if (Subspace<K>(acc).contains(bbar)) return j;
    }
    return std::nullopt;
  }

  /// Stacked basis of the kernel of the order-`length` block-triangular
  /// system, one column per chain; component r of a column is the
  /// coefficient b_{length-r}.
  Mat<K> jordan_chain_basis(int length) const {
    if (length < 1) throw Error("chain length must be >= 1");
    if (step_count() < length)
      throw Error("jordan_chain_basis needs " + std::to_string(length) + " steps");
    const int m = domain_dim();
    int total = 0;
    for (int j = 1; j <= length; ++j) total += step(j).n.dim();
    Mat<K> out(length * m, total);
    int col = 0;
    for (int j = 1; j <= length; ++j) {
      const Mat<K>& basis = step(j).n.basis;
      for (int v = 0; v < basis.cols(); ++v) {
        for (int r = 1; r <= j; ++r)
          out.set_block((r - 1) * m, col, m_entry(r, j) * basis.col(v));
        ++col;
      }
    }
    return out;
  }

 private:
  MatSeries<K> l_;
  std::vector<StepRecord<K>> steps_;
  std::optional<StabilizationReport> stab_;
  Subspace<K> full_domain_;
  Subspace<K> full_target_;
};

/// Run the iteration until the stopping rule certifies: the last index i
/// with a nonzero leading space R_i determines k = i - 1 once every later
/// examined R vanishes.
///
/// For polynomial-exact input the examination horizon is generic-rank *
/// degree + 1 steps: the local exponent sum is bounded by the vanishing
/// order of a maximal nonzero minor, so no leading space can reappear
/// beyond it. Truncated jets are examined through their stored order and
/// reported uncertified.
template <Scalar K>
RecursionState<K> run_until_stabilized(const MatSeries<K>& l, int k_max = 64) {
  if (k_max < 1) throw Error("k_max must be >= 1");
  RecursionState<K> state(l);
  StabilizationReport rep;

  int horizon;
  if (l.is_polynomial()) {
    int r = generic_rank(l);
    horizon = r * std::max(l.degree(), 0) + 1;
    rep.certified = true;
    rep.method = Certification::ExhaustedDegreeBound;
  } else {
    horizon = std::min(l.order() + 1, k_max + 1);
    rep.certified = false;
    rep.method = Certification::ThroughOrderOnly;
  }

  if (horizon > k_max + 1) {
    state.ensure_steps(k_max + 1);
    int last = 0;
    for (int i = 1; i <= state.step_count(); ++i)
      if (!state.step(i).r.is_zero()) last = i;
    throw NonStabilizedError(
        "certification horizon " + std::to_string(horizon) + " exceeds k_max " +
        std::to_string(k_max) + "; last nonzero leading space at step " + std::to_string(last));
  }
  state.ensure_steps(horizon);

  int last_nonzero = 0;
  for (int i = 1; i <= horizon; ++i)
    if (!state.step(i).r.is_zero()) last_nonzero = i;

  rep.horizon = horizon;
  if (last_nonzero == 0) {
    // the family vanishes through everything examined: no leading
    // coefficients at all, the strict-growth stopping rule is vacuous
    rep.k = 0;
    rep.degenerate = true;
  } else {
    rep.k = last_nonzero - 1;
  }
  state.ensure_steps(rep.k + 1);

  for (int j = 0; j <= rep.k; ++j)
    rep.exponent_multiplicities.push_back(state.step(j + 1).n_c.dim());
  rep.dim_kernel_limit = state.step(rep.k + 1).n.dim();
  rep.dim_range_limit = 0;
  for (int j = 1; j <= rep.k + 1; ++j) rep.dim_range_limit += state.step(j).r.dim();

  // direct-sum accounting; failures indicate an implementation bug
  int used = rep.dim_kernel_limit;
  for (int mult : rep.exponent_multiplicities) used += mult;
  if (used != l.cols()) throw InternalError("domain dimensions do not add up");
  if (rep.dim_range_limit + state.step(rep.k + 1).r_c.dim() != l.rows())
    throw InternalError("target dimensions do not add up");

  state.set_stabilization(std::move(rep));
  return state;
}

/// Exponent multiset from the chain: exponent j appears dim N_{j+1}^c times.
template <Scalar K>
std::vector<int> chain_exponents(const RecursionState<K>& state) {
  const StabilizationReport& st = state.require_stabilization();
  std::vector<int> out;
  for (int j = 0; j <= st.k; ++j)
    for (int c = 0; c < st.exponent_multiplicities[static_cast<size_t>(j)]; ++c) out.push_back(j);
  return out;
}

}  // namespace localsmith
