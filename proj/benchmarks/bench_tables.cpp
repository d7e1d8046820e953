#include <benchmark/benchmark.h>

#include "jetcartan/identities.hpp"
#include "jetcartan/random_inputs.hpp"

using namespace jetcartan;

namespace {

void BM_torsion_table(benchmark::State& state) {
  GammaConnection conn = random_cartan_connection(3, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(torsion_table(conn));
}
BENCHMARK(BM_torsion_table)->Arg(2)->Arg(3);

void BM_curvature_table(benchmark::State& state) {
  GammaConnection conn = random_cartan_connection(3, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(curvature_table(conn));
}
BENCHMARK(BM_curvature_table)->Arg(2)->Arg(3);

void BM_curvature_oracle(benchmark::State& state) {
  GammaConnection conn = random_cartan_connection(3, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(curvature_frame(conn));
}
BENCHMARK(BM_curvature_oracle)->Arg(2);

void BM_bianchi_residuals(benchmark::State& state) {
  GammaConnection conn = random_cartan_connection(3, 2);
  for (auto _ : state) benchmark::DoNotOptimize(bianchi_residuals(conn));
}
BENCHMARK(BM_bianchi_residuals);

void BM_general_bianchi(benchmark::State& state) {
  GammaConnection conn = random_cartan_connection(3, 2);
  for (auto _ : state) benchmark::DoNotOptimize(general_bianchi_residuals(conn));
}
BENCHMARK(BM_general_bianchi);

}  // namespace

BENCHMARK_MAIN();
