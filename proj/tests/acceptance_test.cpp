// Copyright (c) the localsmith authors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: every criterion runs on exact rationals over the full
// battery (fixtures plus one hundred seeded random polynomial families)
// and prints one pass/fail line. Everything asserted here is an exact
// identity; there are no numeric tolerances.

#include <cstdio>
#include <random>
#include <vector>

#include "localsmith/artin.hpp"
#include "localsmith/ginverse.hpp"
#include "localsmith/smith_form.hpp"
#include "localsmith/structure_checks.hpp"
#include "support.hpp"

using namespace localsmith;
using namespace localsmith::testing;

namespace {

constexpr uint64_t kBatterySeed = 73001;
constexpr int kRandomCount = 100;
const std::vector<Q> kSamples = {Q(1, 7), Q(-1, 5), Q(2)};

int failures = 0;

void report(int criterion, bool pass, const std::string& what, const std::string& detail = "") {
  std::printf("criterion %d %s %s%s%s\n", criterion, pass ? "PASS" : "FAIL", what.c_str(),
              detail.empty() ? "" : ": ", detail.c_str());
  if (!pass) ++failures;
}

struct BatteryEntry {
  Series family;
  Diagonalization<Q> diag;
};

}  // namespace

int main() {
  std::vector<Series> families = battery(kRandomCount, kBatterySeed);
  std::vector<BatteryEntry> entries;
  entries.reserve(families.size());
  for (const Series& l : families) entries.push_back({l, diagonalize(l)});
  std::printf("battery: %zu families (%d random, %zu fixtures)\n", families.size(), kRandomCount,
              families.size() - kRandomCount);

  // 1. chain exponents match the independent Smith oracle on every input
  {
    int agree = 0, total = 0;
    std::string detail;
    for (const BatteryEntry& e : entries) {
      ++total;
      auto oracle = smith_normal_form(e.family);
      std::vector<int> expect = oracle.local_exponents;
      std::sort(expect.begin(), expect.end());
      bool ok = chain_exponents(e.diag.state) == expect &&
                e.diag.state.require_stabilization().dim_kernel_limit ==
                    e.family.cols() - static_cast<int>(oracle.invariant_factors.size());
      if (ok)
        ++agree;
      else if (detail.empty())
        detail = "first disagreement on a " + std::to_string(e.family.rows()) + "x" +
                 std::to_string(e.family.cols()) + " family of degree " +
                 std::to_string(e.family.degree());
    }
    report(1, agree == total, "oracle smith agreement",
           std::to_string(agree) + "/" + std::to_string(total) + " inputs" +
               (detail.empty() ? "" : "; " + detail));
  }

  // 2. all computed coefficients of psi^{-1} L phi - Delta vanish through 2k+6
  {
    bool ok = true;
    std::string detail;
    for (const BatteryEntry& e : entries) {
      int want = 2 * e.diag.delta.k + 6;
      if (e.diag.identity_order < want) {
        ok = false;
        detail = "verified only through " + std::to_string(e.diag.identity_order) +
                 " instead of " + std::to_string(want);
        break;
      }
    }
    report(2, ok, "diagonal identity through order 2k+6", detail);
  }

  // 3. the two phi routes agree and the defining-equation residual vanishes
  {
    bool ok = true;
    std::string detail;
    for (BatteryEntry& e : entries) {
      if (e.diag.degenerate) continue;
      if (!e.diag.dual_path_checked) {
        ok = false;
        detail = "dual path skipped on a polynomial input";
        break;
      }
      for (int c = 0; c < e.diag.defeq.coeff_count && ok; ++c)
        for (const auto& r : e.diag.defeq.residual(c))
          if (!r.is_zero()) {
            ok = false;
            detail = "residual nonzero at coefficient " + std::to_string(c);
            break;
          }
      if (!ok) break;
    }
    report(3, ok, "dual-path phi agreement and defining-equation residual", detail);
  }

  // 4. structural identities at every step on every input
  {
    bool ok = true;
    std::string detail;
    for (BatteryEntry& e : entries) {
      if (e.diag.degenerate) continue;
      for (const CheckResult& c : run_structure_checks(e.diag.state))
        if (!c.pass) {
          ok = false;
          detail = c.name + " " + c.detail;
          break;
        }
      if (!ok) break;
    }
    report(4, ok, "chain, back-substitution, window and zero-pattern identities", detail);
  }

  // 5. generalized inverse: pole order k and exact axioms at sample points
  {
    bool ok = true;
    std::string detail;
    int evaluated = 0;
    for (BatteryEntry& e : entries) {
      auto lp = l_pinv_laurent(e.diag.phi, e.diag.delta, e.diag.psi, 3);
      int want = e.diag.degenerate ? 0 : e.diag.delta.k;
      if (lp.pole_order() != want) {
        ok = false;
        detail = "pole order " + std::to_string(lp.pole_order()) + " instead of " +
                 std::to_string(want);
        break;
      }
      AxiomReport rep = verify_ginverse_axioms(e.diag, kSamples);
      if (rep.checked) ++evaluated;
      if (rep.checked && !rep.pass) {
        ok = false;
        detail = rep.notes.empty() ? "axioms fail" : rep.notes.front();
        break;
      }
    }
    report(5, ok && evaluated > 0, "generalized-inverse pole order and axioms",
           detail.empty() ? std::to_string(evaluated) + " inputs evaluated at sample points"
                          : detail);
  }

  // 6. transported limit spaces equal the true kernels and ranges at the
  //    sample points
  {
    bool ok = true;
    std::string detail;
    int evaluated = 0;
    for (BatteryEntry& e : entries) {
      if (e.diag.degenerate) continue;
      for (const Q& eps : kSamples) {
        PointEvaluation<Q> pe = evaluate_at(e.diag, eps);
        if (!pe.valid) continue;  // documented skip: auxiliary denominator vanished
        ++evaluated;
        if (!kernel_range_match_at(e.diag, pe)) {
          ok = false;
          detail = "mismatch at " + ScalarTraits<Q>::str(eps);
          break;
        }
      }
      if (!ok) break;
    }
    report(6, ok && evaluated > 0, "kernel and range families at sample points",
           detail.empty() ? std::to_string(evaluated) + " point evaluations" : detail);
  }

  // 7. chain bases span the kernels of the directly assembled block systems
  {
    bool ok = true;
    std::string detail;
    for (BatteryEntry& e : entries) {
      int k = e.diag.delta.k;
      e.diag.state.ensure_steps(k + 3);
      for (int length = 1; length <= k + 3 && ok; ++length) {
        M chains = e.diag.state.jordan_chain_basis(length);
        M direct = kernel_basis(toeplitz_system(e.family, length));
        if (rank(chains) != chains.cols() || !span_equal(chains, direct)) {
          ok = false;
          detail = "length " + std::to_string(length);
        }
      }
      if (!ok) break;
    }
    report(7, ok, "jordan chains match the block-system kernels", detail);
  }

  // 8. strong approximation, flatness roundtrip and the Greenberg bound
  {
    bool ok = true;
    std::string detail;
    int inputs_with_kernel = 0, approximations = 0, roundtrips = 0;
    std::mt19937_64 rng(kBatterySeed ^ 0xa5a5a5a5ull);
    std::uniform_int_distribution<int> small(-2, 2);
    for (BatteryEntry& e : entries) {
      if (e.diag.degenerate) continue;
      int k = e.diag.delta.k;
      const Subspace<Q>& limit = e.diag.state.step(k + 1).n;
      if (limit.dim() == 0) continue;
      ++inputs_with_kernel;
      if (greenberg(e.diag.state, 2) != k + 2) {
        ok = false;
        detail = "greenberg bound";
        break;
      }
      int m = e.family.cols();
      for (int ell = 1; ell <= 3 && ok; ++ell) {
        M ker = kernel_basis(toeplitz_system(e.family, k + ell));
        if (ker.cols() == 0) continue;
        for (int trial = 0; trial < 20 && ok; ++trial) {
          M combo(ker.cols(), 1);
          for (int i = 0; i < ker.cols(); ++i) combo(i, 0) = Q(small(rng), 1 + (trial % 2));
          M tuple = ker * combo;
          std::vector<M> coeffs(static_cast<size_t>(k + ell), M(m, 1));
          for (int r = 1; r <= k + ell; ++r)
            coeffs[static_cast<size_t>(k + ell - r)] = tuple.block((r - 1) * m, 0, m, 1);
          coeffs.push_back(random_mat(rng, m, 1));  // junk tail beyond the approximation
          SolutionCurve<Q> b{MatSeries<Q>::jet(std::move(coeffs))};
          SolutionCurve<Q> bhat = artin_approximate(b, e.diag.state, e.diag.phi, ell);
          ++approximations;
          for (int t = 0; t < ell; ++t)
            if (bhat.series.at(t) != b.series.at(t)) {
              ok = false;
              detail = "agreement window violated";
            }
          // exact through the computed window with a margin of four orders
          MatSeries<Q> image = series_mul(e.family, bhat.series);
          int margin = std::min(image.valid_order(), ell + 4);
          for (int t = 0; t <= margin; ++t)
            if (!image.at(t).is_zero()) {
              ok = false;
              detail = "approximant is not an exact solution";
            }
        }
      }
      for (int trial = 0; trial < 20 && ok; ++trial) {
        std::vector<M> nc;
        for (int t = 0; t <= 4; ++t) {
          M combo(limit.dim(), 1);
          for (int i = 0; i < limit.dim(); ++i) combo(i, 0) = Q(small(rng));
          nc.push_back(limit.basis * combo);
        }
        Series nseries = Series::jet(std::move(nc));
        SolutionCurve<Q> b{series_mul(e.diag.phi.series, nseries)};
        auto par = parametrize_solution(b, e.diag.phi, e.diag.state);
        ++roundtrips;
        for (int t = 0; t <= 4; ++t)
          if (par.coeffs[static_cast<size_t>(t)] != nseries.at(t)) {
            ok = false;
            detail = "flatness roundtrip broke";
          }
      }
      if (!ok) break;
    }
    report(8, ok && inputs_with_kernel > 0, "artin approximation suite",
           detail.empty() ? std::to_string(inputs_with_kernel) + " kernel-carrying inputs, " +
                                std::to_string(approximations) + " approximations, " +
                                std::to_string(roundtrips) + " roundtrips"
                          : detail);
  }

  // 9. edge cases complete with correct reports
  {
    bool ok = true;
    std::string detail;
    auto expect = [&](bool cond, const std::string& what) {
      if (!cond && ok) {
        ok = false;
        detail = what;
      }
    };
    {
      auto d = diagonalize(Series::zero(2, 2));
      expect(d.degenerate && d.delta.series().is_zero() &&
                 d.state.require_stabilization().dim_kernel_limit == 2,
             "zero family");
      expect(l_pinv_laurent(d.phi, d.delta, d.psi, 2).pole_order() == 0, "zero family pole");
    }
    {
      std::mt19937_64 rng(4242);
      M a = random_mat(rng, 3, 3);
      auto d = diagonalize(Series::polynomial({M::identity(3), a}));
      expect(d.delta.k == 0 && d.delta.series() == Series::constant(M::identity(3)),
             "invertible constant term");
    }
    {
      Series row = Series::polynomial({M{{Q(1), Q(2), Q(0)}}, M{{Q(0), Q(0), Q(1)}}});
      auto d = diagonalize(row);
      expect(d.delta.k == 0 && d.state.require_stabilization().dim_kernel_limit == 2,
             "1xn shape");
      auto rep = verify_ginverse_axioms(d, kSamples);
      expect(rep.checked && rep.pass, "1xn axioms");
    }
    {
      Series col = Series::polynomial({M{{Q(1)}, {Q(0)}, {Q(2)}}, M{{Q(0)}, {Q(1)}, {Q(0)}}});
      auto d = diagonalize(col);
      expect(d.delta.k == 0 && d.state.step(1).r_c.dim() == 2, "nx1 shape");
    }
    {
      auto d = diagonalize(f3());
      expect(d.delta.k == 2 && d.state.step(2).r.is_zero() && !d.state.step(3).r.is_zero(),
             "interleaved diagonal");
      expect(chain_exponents(d.state) == std::vector<int>{0, 2}, "interleaved exponents");
    }
    report(9, ok, "edge cases complete with correct reports", detail);
  }

  std::printf("%s\n", failures == 0 ? "acceptance: ALL CRITERIA PASS"
                                    : "acceptance: FAILURES PRESENT");
  return failures == 0 ? 0 : 1;
}
