// Copyright (c) the localsmith authors
// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <random>

#include "localsmith/ginverse.hpp"
#include "localsmith/smith_form.hpp"
#include "localsmith/transform.hpp"

namespace {

using localsmith::Mat;
using localsmith::MatSeries;
using localsmith::Rational;
using Series = MatSeries<Rational>;
using M = Mat<Rational>;

Series nilpotent_shift(int n) {
  M j(n, n);
  for (int i = 0; i + 1 < n; ++i) j(i, i + 1) = Rational(1);
  return Series::polynomial({-j, M::identity(n)});
}

Series random_family(int n, int degree, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> num(-4, 4);
  std::uniform_int_distribution<int> den(1, 3);
  std::vector<M> c;
  for (int d = 0; d <= degree; ++d) {
    M m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = Rational(num(rng), den(rng));
    c.push_back(std::move(m));
  }
  return Series::polynomial(std::move(c));
}

void BM_Stabilize(benchmark::State& state) {
  Series l = nilpotent_shift(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto st = localsmith::run_until_stabilized(l);
    benchmark::DoNotOptimize(st.step_count());
  }
}
BENCHMARK(BM_Stabilize)->Arg(3)->Arg(5)->Arg(8);

void BM_Diagonalize(benchmark::State& state) {
  Series l = nilpotent_shift(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto d = localsmith::diagonalize(l);
    benchmark::DoNotOptimize(d.identity_order);
  }
}
BENCHMARK(BM_Diagonalize)->Arg(3)->Arg(5);

void BM_DiagonalizeRandom(benchmark::State& state) {
  Series l = random_family(static_cast<int>(state.range(0)), 3, 99);
  for (auto _ : state) {
    auto d = localsmith::diagonalize(l);
    benchmark::DoNotOptimize(d.identity_order);
  }
}
BENCHMARK(BM_DiagonalizeRandom)->Arg(3)->Arg(5);

void BM_SmithOracle(benchmark::State& state) {
  Series l = random_family(static_cast<int>(state.range(0)), 3, 7);
  for (auto _ : state) {
    auto f = localsmith::smith_normal_form(l);
    benchmark::DoNotOptimize(f.invariant_factors.size());
  }
}
BENCHMARK(BM_SmithOracle)->Arg(3)->Arg(5);

void BM_GinverseLaurent(benchmark::State& state) {
  Series l = nilpotent_shift(static_cast<int>(state.range(0)));
  auto d = localsmith::diagonalize(l);
  for (auto _ : state) {
    auto lp = localsmith::l_pinv_laurent(d.phi, d.delta, d.psi, 6);
    benchmark::DoNotOptimize(lp.pole_order());
  }
}
BENCHMARK(BM_GinverseLaurent)->Arg(3)->Arg(5);

}  // namespace

BENCHMARK_MAIN();
