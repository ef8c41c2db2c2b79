#include <benchmark/benchmark.h>

#include "xcsp/engine.hpp"
#include "xcsp/generators.hpp"
#include "xcsp/io.hpp"
#include "xcsp/search.hpp"

using namespace xcsp;

namespace {

Instance gen(Problem pr, int n) {
  ProblemParams p;
  p.problem = pr;
  p.n = n;
  return generate(p);
}

void BM_AllDifferentPigeonhole(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Instance inst;
  std::vector<Expr> xs;
  for (int i = 0; i < n; ++i) {
    inst.add_variable("x" + std::to_string(i), Domain::range(0, n - 2));
    xs.push_back(ex::var(i));
  }
  inst.post(AllDifferent{xs, {}});
  for (auto _ : state) {
    DomainStore s(inst);
    benchmark::DoNotOptimize(propagate(inst.constraints[0], s));
  }
}
BENCHMARK(BM_AllDifferentPigeonhole)->Arg(8)->Arg(32)->Arg(128);

void BM_RootFixpoint(benchmark::State& state) {
  const Instance inst = gen(Problem::Costas, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    DomainStore s(inst);
    benchmark::DoNotOptimize(fixpoint(s, inst.constraints));
  }
}
BENCHMARK(BM_RootFixpoint)->Arg(8)->Arg(16);

void BM_CostasEnumerate(benchmark::State& state) {
  const Instance inst = gen(Problem::Costas, static_cast<int>(state.range(0)));
  SearchConfig cfg;
  cfg.mode = SearchMode::Enumerate;
  for (auto _ : state) benchmark::DoNotOptimize(solve_csp(inst, cfg).solutions);
}
BENCHMARK(BM_CostasEnumerate)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_ClockTriplets(benchmark::State& state) {
  ProblemParams p;
  p.problem = Problem::ClockTriplets;
  p.r = 3;
  p.n = 12;
  const Instance inst = generate(p);
  for (auto _ : state) benchmark::DoNotOptimize(solve_cop(inst).objective);
}
BENCHMARK(BM_ClockTriplets)->Unit(benchmark::kMillisecond);

void BM_SampleSuite(benchmark::State& state) {
  std::vector<Instance> insts;
  for (const auto& p : sample_params()) insts.push_back(generate(p));
  for (auto _ : state) {
    for (const auto& inst : insts) benchmark::DoNotOptimize(solve(inst).status);
  }
}
BENCHMARK(BM_SampleSuite)->Unit(benchmark::kMillisecond);

void BM_WriteParse(benchmark::State& state) {
  const std::string text = write_instance(gen(Problem::Costas, static_cast<int>(state.range(0))));
  for (auto _ : state) {
    auto r = parse_instance(text);
    benchmark::DoNotOptimize(write_instance(*r.instance));
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_WriteParse)->Arg(10)->Arg(40);

}  // namespace

BENCHMARK_MAIN();
