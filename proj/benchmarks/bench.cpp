#include <benchmark/benchmark.h>

#include <ribcat/category.hpp>
#include <ribcat/diagram.hpp>
#include <ribcat/evaluate.hpp>
#include <ribcat/surgery.hpp>
#include <ribcat/tqft.hpp>
#include <ribcat/types.hpp>

using namespace ribcat;

namespace {

const ModularCategoryData& fib() {
  static ModularCategoryData cat =
      load_category_file(RIBCAT_DATA_DIR "/fibonacci.mtc");
  return cat;
}

RibbonDiagram hopf() {
  return parse_diagram(
      "bottom:\n"
      "slice cup[?A] @1\n"
      "slice cup[?B] @2\n"
      "slice braid+ @3\n"
      "slice braid+ @3\n"
      "slice cap[?B] @2\n"
      "slice cap[?A] @1\n"
      "top:\n");
}

void BM_bracket_hopf(benchmark::State& state) {
  const auto& cat = fib();
  RibbonDiagram d = hopf();
  for (auto _ : state) {
    Scalar v = bracket(cat, d);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_bracket_hopf);

void BM_tau_blocks_omega(benchmark::State& state) {
  const auto& cat = fib();
  const int n = static_cast<int>(state.range(0));
  RibbonDiagram d = build_omega(n);
  std::string sig = "(0,0;" + std::to_string(n) + ")";
  DecoratedType t = parse_type(sig);
  for (auto _ : state) {
    BlockTable b = tau_blocks(cat, d, t, t);
    benchmark::DoNotOptimize(b);
  }
}
BENCHMARK(BM_tau_blocks_omega)->Arg(1)->Arg(2);

void BM_functor_cylinder(benchmark::State& state) {
  const auto& cat = fib();
  RibbonDiagram d = parse_diagram(
      "bottom: $l- $r+\n"
      "slice twist+ @2\n"
      "top: $l- $r+\n");
  DecoratedType t = parse_type("(1,1;)");
  for (auto _ : state) {
    TwoHom f = X_two_morphism(cat, d, t, t);
    benchmark::DoNotOptimize(f);
  }
}
BENCHMARK(BM_functor_cylinder);

void BM_structural_iso(benchmark::State& state) {
  const auto& cat = fib();
  DecoratedType t1 = parse_type("(1,2;)");
  DecoratedType t2 = parse_type("(2,1;)");
  for (auto _ : state) {
    TwoHom u = structural_iso_u(cat, t1, t2);
    benchmark::DoNotOptimize(u);
  }
}
BENCHMARK(BM_structural_iso);

}  // namespace

BENCHMARK_MAIN();
