#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "lgpkit/errors.hpp"
#include "lgpkit/evolution.hpp"
#include "lgpkit/stats.hpp"

using namespace lgpkit;

namespace {

RegisterConfig small_config() {
  RegisterConfig c;
  c.gamma = 4;
  c.num_features = 1;
  return c;
}

// Instructions tagged by destination so positions can be recovered after insertion.
Program tagged_program(std::size_t m) {
  std::vector<Instruction> list;
  for (std::size_t i = 0; i < m; ++i) {
    list.push_back({0, Func::Add, Operand::reg(0), Operand::feature(0),
                    {1.0, static_cast<double>(i + 1)}});
  }
  return Program(std::move(list));
}

} // namespace

TEST_CASE("evolution config validation") {
  EvolutionConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.reproduction_rate = 0.2;
  CHECK_THROWS_AS(cfg.validate(), InputError);
  cfg = {};
  cfg.elitism = cfg.pop_size;
  CHECK_THROWS_AS(cfg.validate(), InputError);
  cfg = {};
  cfg.step_size = 0;
  CHECK_THROWS_AS(cfg.validate(), InputError);
  cfg.step_size = cfg.max_len + 1;
  CHECK_THROWS_AS(cfg.validate(), InputError);
}

TEST_CASE("init_population lengths and determinism") {
  const auto iset = build_default(small_config());
  EvolutionConfig cfg;
  std::mt19937_64 a(7), b(7);
  const auto p1 = init_population(cfg, iset, a);
  const auto p2 = init_population(cfg, iset, b);
  REQUIRE(p1.size() == cfg.pop_size);
  CHECK(p1 == p2);
  for (const auto& p : p1) {
    CHECK(p.size() >= 5);
    CHECK(p.size() <= 20);
  }

  cfg.pop_size = 10000;
  std::mt19937_64 rng(11);
  const auto big = init_population(cfg, iset, rng);
  double total = 0;
  for (const auto& p : big) total += static_cast<double>(p.size());
  const double mean = total / static_cast<double>(big.size());
  CHECK(mean >= 11.5);
  CHECK(mean <= 13.5);
}

TEST_CASE("freemut_add sizes and cap") {
  const auto iset = build_default(small_config());
  std::mt19937_64 rng(3);
  const auto parent = tagged_program(5);
  CHECK(freemut_add(parent, 0, iset, rng) == parent);
  CHECK(freemut_add(parent, 3, iset, rng).size() == 8);

  std::vector<Instruction> near_cap(98, iset[0]);
  const Program full(near_cap, 100);
  CHECK(freemut_add(full, 5, iset, rng).size() == 100);
  const Program capped(std::vector<Instruction>(100, iset[0]), 100);
  CHECK(freemut_add(capped, 1, iset, rng).size() == 100);
}

TEST_CASE("freemut_add keeps the parent as a subsequence") {
  const auto iset = build_default(small_config());
  std::mt19937_64 rng(5);
  const auto parent = tagged_program(6);
  for (int t = 0; t < 200; ++t) {
    const auto child = freemut_add(parent, 4, iset, rng);
    std::size_t k = 0;
    for (const auto& ins : child.instructions()) {
      if (k < parent.size() && ins == parent[k]) ++k;
    }
    CHECK(k == parent.size());
  }
}

TEST_CASE("freemut_add insertion positions are uniform") {
  // A one-element set lets the inserted instruction be located exactly.
  const auto c = small_config();
  const InstructionSet marker({{1, Func::Mul, Operand::reg(1), Operand::reg(2), {}}}, c);
  const auto parent = tagged_program(5);
  std::mt19937_64 rng(17);
  std::vector<double> counts(parent.size() + 1, 0.0);
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) {
    const auto child = freemut_add(parent, 1, marker, rng);
    for (std::size_t p = 0; p < child.size(); ++p) {
      if (child[p] == marker[0]) {
        counts[p] += 1;
        break;
      }
    }
  }
  std::vector<double> expected(counts.size(), trials / static_cast<double>(counts.size()));
  const auto gof = chi_square_gof(counts, expected);
  CHECK(gof.p_value > 0.01);
}

TEST_CASE("freemut_remove sizes and guard") {
  std::mt19937_64 rng(9);
  const auto parent = tagged_program(10);
  CHECK(freemut_remove(parent, 0, rng) == parent);
  CHECK(freemut_remove(parent, 2, rng).size() == 8);
  CHECK(freemut_remove(tagged_program(3), 3, rng).size() == 1);
  CHECK(freemut_remove(tagged_program(2), 5, rng).size() == 1);
  CHECK(freemut_remove(Program{}, 1, rng).size() == 0);
}

TEST_CASE("freemut_remove subsets are uniform over C(10,2)") {
  std::mt19937_64 rng(23);
  const auto parent = tagged_program(10);
  std::map<std::pair<int, int>, double> counts;
  for (int a = 1; a <= 10; ++a) {
    for (int b = a + 1; b <= 10; ++b) counts[{a, b}] = 0;
  }
  REQUIRE(counts.size() == 45);
  const int trials = 45000;
  for (int t = 0; t < trials; ++t) {
    const auto child = freemut_remove(parent, 2, rng);
    std::set<int> kept;
    for (const auto& ins : child.instructions()) kept.insert(static_cast<int>(ins.transform.offset));
    std::vector<int> gone;
    for (int i = 1; i <= 10; ++i) {
      if (!kept.count(i)) gone.push_back(i);
    }
    REQUIRE(gone.size() == 2);
    counts[{gone[0], gone[1]}] += 1;
  }
  std::vector<double> observed, expected;
  for (const auto& [k, v] : counts) {
    observed.push_back(v);
    expected.push_back(trials / 45.0);
  }
  CHECK(chi_square_gof(observed, expected).p_value > 0.01);
}

TEST_CASE("tournament picks the lowest fitness, earliest on ties") {
  std::vector<Individual> pop(4);
  pop[0].fitness = 3;
  pop[1].fitness = 1;
  pop[2].fitness = 1;
  pop[3].fitness = 2;
  std::mt19937_64 rng(1);
  // Size large enough that every index is sampled with overwhelming probability.
  for (int t = 0; t < 20; ++t) CHECK(tournament(pop, 200, rng) == 1);
  std::map<std::size_t, int> seen;
  for (int t = 0; t < 4000; ++t) ++seen[tournament(pop, 1, rng)];
  CHECK(seen.size() == 4);
}

TEST_CASE("evolve: determinism, trace shape and elitism") {
  const auto cfgr = RegisterConfig::with_defaults(1);
  const auto iset = build_default(cfgr);
  std::mt19937_64 data_rng(4);
  const Fitness fit(gen_synthetic("Nguyen4", data_rng), cfgr);

  EvolutionConfig cfg;
  cfg.pop_size = 40;
  cfg.generations = 15;
  cfg.rng_seed = 99;
  const auto r1 = evolve(cfg, iset, fit);
  const auto r2 = evolve(cfg, iset, fit);
  CHECK(trace_to_csv(r1.trace) == trace_to_csv(r2.trace));
  CHECK(r1.best == r2.best);
  REQUIRE(r1.trace.size() == cfg.generations + 1);
  for (std::size_t g = 1; g < r1.trace.size(); ++g) {
    CHECK(r1.trace[g].best_fitness <= r1.trace[g - 1].best_fitness);
    CHECK(r1.trace[g].generation == g);
  }
  CHECK(r1.best_fitness == fit.rse(r1.best));
  CHECK(r1.best_fitness == r1.trace.back().best_fitness);
  CHECK(r1.best.size() <= cfg.max_len);

  cfg.rng_seed = 100;
  CHECK(trace_to_csv(evolve(cfg, iset, fit).trace) != trace_to_csv(r1.trace));
}

TEST_CASE("evolve with zero generations returns the best initial program") {
  const auto cfgr = RegisterConfig::with_defaults(1);
  const auto iset = build_default(cfgr);
  std::mt19937_64 data_rng(2);
  const Fitness fit(gen_synthetic("Nguyen4", data_rng), cfgr);
  EvolutionConfig cfg;
  cfg.pop_size = 30;
  cfg.generations = 0;
  cfg.rng_seed = 5;
  const auto r = evolve(cfg, iset, fit);
  REQUIRE(r.trace.size() == 1);

  std::mt19937_64 rng(cfg.rng_seed);
  const auto pop = init_population(cfg, iset, rng);
  double best = 1e300;
  for (const auto& p : pop) best = std::min(best, fit.rse(p));
  CHECK(r.best_fitness == best);
}

TEST_CASE("program lengths stay within L under pressure to grow") {
  const auto cfgr = RegisterConfig::with_defaults(1);
  const auto iset = build_default(cfgr);
  std::mt19937_64 data_rng(8);
  const Fitness fit(gen_synthetic("Nguyen4", data_rng), cfgr);
  EvolutionConfig cfg;
  cfg.pop_size = 20;
  cfg.generations = 30;
  cfg.max_len = 12;
  cfg.init_len_min = 10;
  cfg.init_len_max = 12;
  cfg.step_size = 5;
  cfg.add_rate = 0.9;
  cfg.remove_rate = 0.0;
  const auto r = evolve(cfg, iset, fit);
  for (const auto& g : r.trace) CHECK(g.mean_size <= 12.0);
  CHECK(r.best.size() <= 12);
}

TEST_CASE("trace CSV header") {
  RunTrace t(1);
  t[0].best_fitness = 0.5;
  CHECK(trace_to_csv(t).rfind("generation,best_fitness,mean_fitness,mean_size,mean_exons\n0,0.5,", 0) == 0);
}
