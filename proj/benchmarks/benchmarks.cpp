// Copyright 2026 The ckforms Authors
// SPDX-License-Identifier: Apache-2.0

#include <random>

#include <benchmark/benchmark.h>

#include "ckforms/chart.hpp"
#include "ckforms/curvature.hpp"
#include "ckforms/jets.hpp"
#include "ckforms/kaehler.hpp"

namespace {

void BM_wedge(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  const ckforms::AlternatingForm a = ckforms::random_form(n, 2, rng);
  const ckforms::AlternatingForm b = ckforms::random_form(n, 2, rng);
  for (auto _ : state) benchmark::DoNotOptimize(ckforms::wedge(a, b));
}
BENCHMARK(BM_wedge)->Arg(6)->Arg(8)->Arg(12);

void BM_lefschetz_decompose(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  std::mt19937_64 rng(2);
  const ckforms::KaehlerFrame f(m);
  const ckforms::AlternatingForm a = ckforms::random_form(2 * m, m, rng);
  for (auto _ : state) benchmark::DoNotOptimize(ckforms::lefschetz_decompose(f, a));
}
BENCHMARK(BM_lefschetz_decompose)->Arg(2)->Arg(3)->Arg(4);

void BM_curvature_apply(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  std::mt19937_64 rng(3);
  const ckforms::CurvatureOperator r = ckforms::CurvatureOperator::complex_projective(m);
  const ckforms::AlternatingForm a = ckforms::random_form(2 * m, 2, rng);
  for (auto _ : state) benchmark::DoNotOptimize(r.apply(a));
}
BENCHMARK(BM_curvature_apply)->Arg(2)->Arg(3)->Arg(4);

void BM_twistor_residual(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  std::mt19937_64 rng(4);
  const ckforms::CovariantJet j = ckforms::random_jet(2 * m, 2, rng);
  for (auto _ : state) benchmark::DoNotOptimize(ckforms::twistor_residual(j));
}
BENCHMARK(BM_twistor_residual)->Arg(2)->Arg(3)->Arg(4);

void BM_covariant_jet(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const ckforms::ChartGeometry g = ckforms::fubini_study(m);
  const ckforms::FormField f = ckforms::polynomial_test_field(2 * m, 2, 1);
  const ckforms::SamplePlan plan = ckforms::make_sample_plan(2 * m, 1, 1.0);
  const Eigen::VectorXd x = plan.points.front();
  for (auto _ : state)
    benchmark::DoNotOptimize(ckforms::covariant_jet(g, f, x, plan, true));
}
BENCHMARK(BM_covariant_jet)->Arg(2)->Arg(3);

void BM_numeric_delta(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const ckforms::ChartGeometry g = ckforms::fubini_study(m);
  const ckforms::FormField f = ckforms::polynomial_test_field(2 * m, 2, 2);
  const ckforms::SamplePlan plan = ckforms::make_sample_plan(2 * m, 1, 1.0);
  const ckforms::FormField df =
      ckforms::numeric_operator(g, f, plan, ckforms::FirstOrderOp::delta);
  const Eigen::VectorXd x = plan.points.front();
  for (auto _ : state) benchmark::DoNotOptimize(df(x));
}
BENCHMARK(BM_numeric_delta)->Arg(2)->Arg(3);

}  // namespace

BENCHMARK_MAIN();
