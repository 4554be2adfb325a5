#include <random>

#include <benchmark/benchmark.h>

#include "lgpkit/bounds.hpp"
#include "lgpkit/evolution.hpp"
#include "lgpkit/introns.hpp"
#include "lgpkit/oracle.hpp"
#include "lgpkit/semantics.hpp"

using namespace lgpkit;

namespace {

struct Setup {
  RegisterConfig config = RegisterConfig::with_defaults(1);
  InstructionSet iset = build_default(config);
  Problem problem = make_problem("Nguyen4", 1);
};

const Setup& setup() {
  static const Setup s;
  return s;
}

Program program_of(std::size_t m) {
  std::mt19937_64 rng(m);
  return random_program(m, setup().iset, rng);
}

void BM_Execute(benchmark::State& state) {
  const auto& s = setup();
  const auto program = program_of(static_cast<std::size_t>(state.range(0)));
  const auto input = init_registers(s.config, s.problem.train.features, s.problem.train.num_cases());
  for (auto _ : state) benchmark::DoNotOptimize(execute(program, input, s.config));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Execute)->Arg(10)->Arg(50)->Arg(100);

void BM_DetectIntrons(benchmark::State& state) {
  const auto program = program_of(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(detect_introns(program, setup().config));
}
BENCHMARK(BM_DetectIntrons)->Arg(10)->Arg(100);

void BM_Rse(benchmark::State& state) {
  const auto& s = setup();
  const Fitness fitness(s.problem.train, s.config);
  const auto program = program_of(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fitness.rse(program));
}
BENCHMARK(BM_Rse)->Arg(10)->Arg(100);

void BM_ConstructiveRate(benchmark::State& state) {
  const auto p = SpaceParams::nguyen4();
  const auto u = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(constructive_rate_ub(10, 50, u, p));
}
BENCHMARK(BM_ConstructiveRate)->Arg(1)->Arg(10)->Arg(35);

void BM_EnumerateDeltaStar(benchmark::State& state) {
  const auto space = bundled_tiny_space("g1-arith4");
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_delta_star(space));
}
BENCHMARK(BM_EnumerateDeltaStar)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
