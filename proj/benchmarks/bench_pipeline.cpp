#include <benchmark/benchmark.h>

#include "nhk/suites.hpp"

using namespace nhk;

namespace {

Vec point(std::initializer_list<double> xs) {
  Vec out(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) out[i++] = x;
  return out;
}

void BM_XiMatrix(benchmark::State& state) {
  const auto b = build("snakeboard");
  const Vec qb = point({0.1, 1.2, 0.0}), pb = point({0.4, -0.2, 0.3});
  for (auto _ : state) benchmark::DoNotOptimize(b.reduced.xi_matrix(qb, pb));
}
BENCHMARK(BM_XiMatrix);

void BM_ReducedField(benchmark::State& state) {
  const auto b = build("knife-edge");
  const Vec qb = point({0.6, 1.0}), pb = point({0.1, 0.4});
  for (auto _ : state) benchmark::DoNotOptimize(reduced_vector_field(b.reduced, qb, pb));
}
BENCHMARK(BM_ReducedField);

void BM_FullFieldKkt(benchmark::State& state) {
  const auto b = build("snakeboard");
  const PhasePoint x = default_initial_state(b);
  for (auto _ : state) benchmark::DoNotOptimize(full_vector_field(b.system, x));
}
BENCHMARK(BM_FullFieldKkt);

void BM_FullIntegrate(benchmark::State& state) {
  const auto b = build("vrd");
  const PhasePoint x = default_initial_state(b);
  const IntegratorConfig cfg{Scheme::RK4, 1e-3, static_cast<double>(state.range(0)) / 10.0};
  for (auto _ : state) benchmark::DoNotOptimize(integrate(b.system, x, cfg));
}
BENCHMARK(BM_FullIntegrate)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_TildeField(benchmark::State& state) {
  const auto b = build("snakeboard");
  const Vec qt = point({0.1, 1.2}), pt = point({0.4, -0.2});
  for (auto _ : state) benchmark::DoNotOptimize(tilde_vector_field(*b.tilde, qt, pt));
}
BENCHMARK(BM_TildeField);

void BM_VerifySuite(benchmark::State& state) {
  const auto b = build("knife-edge");
  const SuiteConfig cfg{1, static_cast<int>(state.range(0)), 3};
  for (auto _ : state) benchmark::DoNotOptimize(verify_suite(b, cfg));
}
BENCHMARK(BM_VerifySuite)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
