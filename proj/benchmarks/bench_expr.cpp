#include <benchmark/benchmark.h>

#include "jetcartan/parser.hpp"
#include "jetcartan/random_inputs.hpp"

using namespace jetcartan;

namespace {

Expr curvature_sized_expr() {
  // representative of a curvature component: nested products of degree-2 polys
  Rng rng(12);
  Expr acc = Expr::rational(0);
  for (int i = 0; i < 12; ++i) {
    Expr a = random_polynomial(rng, 2, 2, 4);
    Expr b = random_polynomial(rng, 2, 2, 4);
    acc = acc + a * b;
  }
  return acc;
}

void BM_parse(benchmark::State& state) {
  std::string src = "sin(x1)^2*cos(x2) + exp(2*t)*y1 - (x1 + x2)^3/4 + 1/2*y2^2";
  for (auto _ : state) benchmark::DoNotOptimize(parse_expr(src, 2));
}
BENCHMARK(BM_parse);

// steady-state cost: rewrites hit the process-wide memo caches after the
// first iteration, which is also how the table builders see them
void BM_simplify(benchmark::State& state) {
  Expr e = curvature_sized_expr();
  for (auto _ : state) benchmark::DoNotOptimize(simplify(e * e));
}
BENCHMARK(BM_simplify);

void BM_simplify_cold(benchmark::State& state) {
  Rng rng(1);
  for (auto _ : state) {
    state.PauseTiming();
    Expr a = random_polynomial(rng, 2, 2, 6);
    Expr b = random_polynomial(rng, 2, 2, 6);
    state.ResumeTiming();
    benchmark::DoNotOptimize(simplify(a * b + b * a));
  }
}
BENCHMARK(BM_simplify_cold);

void BM_diff(benchmark::State& state) {
  Expr e = simplify(curvature_sized_expr());
  for (auto _ : state) benchmark::DoNotOptimize(diff(e, Coordinate::fiber(1)));
}
BENCHMARK(BM_diff);

void BM_eval(benchmark::State& state) {
  Expr e = simplify(curvature_sized_expr());
  Point p{0.7, {0.3, -0.2}, {0.5, 0.1}};
  for (auto _ : state) {
    EvalScratch scratch;
    benchmark::DoNotOptimize(scratch.eval(e, p));
  }
}
BENCHMARK(BM_eval);

}  // namespace

BENCHMARK_MAIN();
