// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <random>

#include "anwt/an_design.hpp"
#include "anwt/matops.hpp"
#include "anwt/montecarlo.hpp"
#include "anwt/rates.hpp"

namespace {

using namespace anwt;

ComplexMatrix random_matrix(Eigen::Index rows, Eigen::Index cols) {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = Complex(g(rng), g(rng));
  }
  return m;
}

SystemConfig reference(int na) {
  SystemConfig c;
  c.n_alice = na;
  c.n_bob = 2;
  c.n_streams = 2;
  c.n_eve = 2;
  return c;
}

void BM_Svd(benchmark::State& state) {
  const auto cols = state.range(0);
  const ComplexMatrix m = random_matrix(128, cols);
  for (auto _ : state) benchmark::DoNotOptimize(svd(m, SvdVectors::thin));
}
BENCHMARK(BM_Svd)->Arg(320)->Arg(800)->Unit(benchmark::kMillisecond);

void BM_NullSpace(benchmark::State& state) {
  const ComplexMatrix m = random_matrix(128, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(null_space_basis(m));
}
BENCHMARK(BM_NullSpace)->Arg(320)->Arg(800)->Unit(benchmark::kMillisecond);

void BM_Design(benchmark::State& state) {
  const SystemConfig c = reference(static_cast<int>(state.range(1)));
  const ChannelRealization r = draw_channel(c, 1);
  const TimeDomainOps ops = build_time_ops(r, c);
  DesignOptions o;
  o.route = static_cast<TemporalRoute>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(design_precoders(r, ops, c, o));
}
BENCHMARK(BM_Design)
    ->ArgsProduct({{static_cast<long>(TemporalRoute::generic), static_cast<long>(TemporalRoute::toeplitz),
                    static_cast<long>(TemporalRoute::complement)},
                   {4, 10}})
    ->ArgNames({"route", "n_a"})
    ->Unit(benchmark::kMillisecond);

void BM_SecrecyReport(benchmark::State& state) {
  const SystemConfig c = reference(static_cast<int>(state.range(0)));
  const ChannelRealization r = draw_channel(c, 2);
  const TimeDomainOps ops = build_time_ops(r, c);
  DesignOptions o;
  o.route = TemporalRoute::complement;
  const LinkGeometry g = link_geometry(r, design_precoders(r, ops, c, o), c);
  for (auto _ : state) benchmark::DoNotOptimize(secrecy_report(g, c));
}
BENCHMARK(BM_SecrecyReport)->Arg(4)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_Trial(benchmark::State& state) {
  const SystemConfig c = reference(static_cast<int>(state.range(0)));
  std::uint64_t t = 0;
  for (auto _ : state) benchmark::DoNotOptimize(trial_reports({c}, trial_seed(1, t++), EveStrategy::worst));
}
BENCHMARK(BM_Trial)->Arg(4)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
