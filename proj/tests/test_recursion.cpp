// Copyright (c) the localsmith authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "localsmith/recursion.hpp"
#include "localsmith/structure_checks.hpp"
#include "support.hpp"

using namespace localsmith;
using namespace localsmith::testing;

TEST_CASE("chain steps on the shear fixture") {
  RecursionState<Q> st(f2());
  st.ensure_steps(3);

  // step 1: kernel and leading space are both the first axis
  const auto& s1 = st.step(1);
  CHECK(s1.s == M{{Q(0), Q(-1)}, {Q(0), Q(0)}});
  CHECK(s1.n.basis == M{{Q(1)}, {Q(0)}});
  CHECK(span_equal(s1.r.basis, M{{Q(1)}, {Q(0)}}));
  CHECK(span_equal(s1.n_c.basis, M{{Q(0)}, {Q(1)}}));

  // step 2: nothing new; kernel repeats, leading space vanishes
  const auto& s2 = st.step(2);
  CHECK(s2.sbar == M::identity(2));
  CHECK(s2.s == M{{Q(0), Q(0)}, {Q(0), Q(1)}});
  CHECK(s2.n.equals(s1.n));
  CHECK(s2.r.is_zero());
  CHECK(st.e_entry(1, 2) * M{{Q(1)}, {Q(0)}} == M{{Q(0)}, {Q(1)}});

  // step 3: the chain terminates with the second axis appearing at order 2
  const auto& s3 = st.step(3);
  CHECK(s3.s * M{{Q(1)}, {Q(0)}} == M{{Q(0)}, {Q(1)}});
  CHECK(s3.n.is_zero());
  CHECK(span_equal(s3.r.basis, M{{Q(0)}, {Q(1)}}));
  CHECK(st.m_entry(2, 3) * M{{Q(1)}, {Q(0)}} == M{{Q(0)}, {Q(1)}});
  CHECK(st.m_entry(1, 3).is_zero());
}

TEST_CASE("stabilization on the fixtures") {
  SUBCASE("shear fixture stabilizes at 2") {
    auto st = run_until_stabilized(f2());
    const auto& rep = st.require_stabilization();
    CHECK(rep.k == 2);
    CHECK(chain_exponents(st) == std::vector<int>{0, 2});
    CHECK(rep.dim_kernel_limit == 0);
    CHECK(rep.dim_range_limit == 2);
    CHECK(rep.certified);
    CHECK(rep.method == Certification::ExhaustedDegreeBound);
  }
  SUBCASE("interleaved diagonal: a vanishing middle leading space") {
    auto st = run_until_stabilized(f3());
    CHECK(st.require_stabilization().k == 2);
    CHECK(chain_exponents(st) == std::vector<int>{0, 2});
    CHECK(st.step(2).r.is_zero());
    CHECK(!st.step(3).r.is_zero());
  }
  SUBCASE("invertible constant term means k = 0") {
    auto st = run_until_stabilized(Series::constant(M::identity(3)));
    CHECK(st.require_stabilization().k == 0);
    CHECK(st.require_stabilization().dim_kernel_limit == 0);
    CHECK(st.step(1).r.dim() == 3);
  }
  SUBCASE("single nilpotent block") {
    for (int n = 2; n <= 5; ++n) {
      auto st = run_until_stabilized(jordan_block_family(n));
      CHECK(st.require_stabilization().k == n);
      std::vector<int> expect(n - 1, 0);
      expect.push_back(n);
      CHECK(chain_exponents(st) == expect);
    }
  }
  SUBCASE("identically zero family is degenerate") {
    auto st = run_until_stabilized(Series::zero(2, 2));
    const auto& rep = st.require_stabilization();
    CHECK(rep.k == 0);
    CHECK(rep.degenerate);
    CHECK(rep.dim_kernel_limit == 2);
    CHECK(chain_exponents(st).empty());
    CHECK(st.step(1).n.dim() == 2);
  }
  SUBCASE("k_max too small raises the non-stabilized error") {
    CHECK_THROWS_AS(run_until_stabilized(jordan_block_family(5), 3), NonStabilizedError);
  }
  SUBCASE("wide and tall fixtures") {
    auto wide = run_until_stabilized(f4());
    CHECK(wide.require_stabilization().k == 0);
    CHECK(wide.require_stabilization().dim_kernel_limit == 1);
    auto tall = run_until_stabilized(f5());
    CHECK(tall.require_stabilization().k == 0);
    CHECK(tall.step(1).r_c.dim() == 1);
  }
}

TEST_CASE("jet input stabilizes through-order-only") {
  Series jet = f2().truncated(4);
  auto st = run_until_stabilized(jet);
  CHECK(st.require_stabilization().k == 2);
  CHECK(!st.require_stabilization().certified);
  CHECK(st.require_stabilization().method == Certification::ThroughOrderOnly);

  // the step beyond the stored order must refuse
  RecursionState<Q> manual(f2().truncated(2));
  manual.ensure_steps(3);
  CHECK_THROWS_AS(manual.ensure_steps(4), InsufficientDataError);
}

TEST_CASE("jordan chains match the directly assembled system") {
  for (const Series& l : {f1(), f2(), f3(), f4(), f5(), jordan_block_family(3)}) {
    auto st = run_until_stabilized(l);
    int k = st.require_stabilization().k;
    st.ensure_steps(k + 3);
    for (int length = 1; length <= k + 3; ++length) {
      M chains = st.jordan_chain_basis(length);
      M direct = kernel_basis(toeplitz_system(l, length));
      CHECK(rank(chains) == chains.cols());  // independent columns
      CHECK(span_equal(chains, direct));
    }
  }
}

TEST_CASE("chain basis of the wide fixture solves the curve equation") {
  auto st = run_until_stabilized(f4());
  st.ensure_steps(2);
  M chains = st.jordan_chain_basis(2);
  // (b_1; b_0) with b_0 = e2, b_1 = -e1 is a chain: check both coefficients
  M candidate(4, 1);
  candidate.set_block(0, 0, M{{Q(-1)}, {Q(0)}});  // b_1
  candidate.set_block(2, 0, M{{Q(0)}, {Q(1)}});   // b_0
  CHECK(span_of(chains).contains(candidate));
}

TEST_CASE("rank and leading-coefficient queries") {
  auto st2 = run_until_stabilized(f2());
  CHECK(st2.rank_of(M{{Q(1)}, {Q(0)}}) == 2);            // falls out at step 3
  CHECK(st2.rank_of(M{{Q(0)}, {Q(1)}}) == 0);            // not in the first kernel
  CHECK(!st2.rank_of(M(2, 1)).has_value());              // zero vector: infinite
  CHECK(st2.lc_of(M{{Q(1)}, {Q(0)}}) == 0);
  CHECK(st2.lc_of(M{{Q(0)}, {Q(1)}}) == 2);
  CHECK(st2.lc_of(M(2, 1)) == 0);

  auto st4 = run_until_stabilized(f4());
  CHECK(!st4.rank_of(M{{Q(0)}, {Q(1)}}).has_value());    // infinite rank

  auto st5 = run_until_stabilized(f5());
  CHECK(!st5.lc_of(M{{Q(0)}, {Q(1)}}).has_value());      // never a leading coefficient
}

TEST_CASE("structural identities hold on fixtures and random families") {
  std::mt19937_64 rng(987654);
  std::vector<Series> families = {f1(), f2(), f3(), f4(), f5(), jordan_block_family(4)};
  for (int t = 0; t < 10; ++t)
    families.push_back(random_poly_family(rng, 1 + rng() % 4, 1 + rng() % 4, 1 + rng() % 2));
  for (const Series& l : families) {
    auto st = run_until_stabilized(l);
    st.ensure_steps(st.require_stabilization().k + 4);
    for (const CheckResult& c : run_structure_checks(st)) {
      INFO(c.name << " " << c.detail);
      CHECK(c.pass);
    }
  }
}

TEST_CASE("chain nesting and dimension bookkeeping") {
  std::mt19937_64 rng(13579);
  for (int t = 0; t < 12; ++t) {
    Series l = random_poly_family(rng, 1 + rng() % 4, 1 + rng() % 4, 1 + rng() % 3);
    auto st = run_until_stabilized(l);
    int k = st.require_stabilization().k;
    for (int i = 1; i <= k + 1; ++i) {
      const auto& prev_n = st.kernel_at(i - 1);
      CHECK(prev_n.contains(st.step(i).n));
      CHECK(prev_n.dim() - st.step(i).n.dim() == st.step(i).r.dim());
    }
  }
}
