#include "lgpkit/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lgpkit/errors.hpp"
#include "lgpkit/introns.hpp"
#include "lgpkit/text.hpp"

namespace lgpkit {

void EvolutionConfig::validate() const {
  if (add_rate < 0 || remove_rate < 0 || reproduction_rate < 0 ||
      std::fabs(add_rate + remove_rate + reproduction_rate - 1.0) > 1e-12) {
    throw InputError("variation rates must be non-negative and sum to 1");
  }
  if (pop_size < 1) throw InputError("pop_size must be positive");
  if (elitism >= pop_size) throw InputError("elitism must be smaller than pop_size");
  if (tournament_size < 1) throw InputError("tournament_size must be positive");
  if (max_len < 1) throw InputError("max_len must be positive");
  if (step_size < 1 || step_size > max_len) throw InputError("step size u must be in [1, L]");
  if (init_len_min > init_len_max || init_len_max > max_len) {
    throw InputError("initial length range must satisfy min <= max <= L");
  }
}

Program random_program(std::size_t length, const InstructionSet& iset, std::mt19937_64& rng,
                       std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> pick(0, iset.size() - 1);
  std::vector<Instruction> list(length);
  for (auto& ins : list) ins = iset[pick(rng)];
  return Program(std::move(list), max_len);
}

std::vector<Program> init_population(const EvolutionConfig& cfg, const InstructionSet& iset,
                                     std::mt19937_64& rng) {
  cfg.validate();
  std::uniform_int_distribution<std::size_t> len(cfg.init_len_min, cfg.init_len_max);
  std::vector<Program> pop;
  pop.reserve(cfg.pop_size);
  for (std::size_t i = 0; i < cfg.pop_size; ++i) {
    pop.push_back(random_program(len(rng), iset, rng, cfg.max_len));
  }
  return pop;
}

Program freemut_add(const Program& parent, std::size_t u, const InstructionSet& iset,
                    std::mt19937_64& rng) {
  std::vector<Instruction> list(parent.instructions().begin(), parent.instructions().end());
  const std::size_t k = std::min(u, parent.max_length() - std::min(parent.max_length(), list.size()));
  std::uniform_int_distribution<std::size_t> pick(0, iset.size() - 1);
  for (std::size_t t = 0; t < k; ++t) {
    std::uniform_int_distribution<std::size_t> pos(0, list.size());
    const auto p = pos(rng);
    list.insert(list.begin() + static_cast<std::ptrdiff_t>(p), iset[pick(rng)]);
  }
  return Program(std::move(list), parent.max_length());
}

Program freemut_remove(const Program& parent, std::size_t u, std::mt19937_64& rng) {
  const std::size_t m = parent.size();
  if (u == 0 || m == 0) return parent;
  const std::size_t k = m > u ? u : m - 1;
  std::vector<std::size_t> idx(m);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::vector<std::size_t> drop;
  drop.reserve(k);
  std::sample(idx.begin(), idx.end(), std::back_inserter(drop), k, rng);
  std::sort(drop.begin(), drop.end());

  std::vector<Instruction> list;
  list.reserve(m - k);
  std::size_t next = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (next < drop.size() && drop[next] == i) {
      ++next;
      continue;
    }
    list.push_back(parent[i]);
  }
  return Program(std::move(list), parent.max_length());
}

std::size_t tournament(const std::vector<Individual>& pop, std::size_t size,
                       std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, pop.size() - 1);
  std::size_t best = pick(rng);
  for (std::size_t t = 1; t < size; ++t) {
    const std::size_t c = pick(rng);
    if (pop[c].fitness < pop[best].fitness ||
        (pop[c].fitness == pop[best].fitness && c < best)) {
      best = c;
    }
  }
  return best;
}

namespace {

Individual evaluate(Program p, const Fitness& fitness) {
  Individual ind;
  ind.fitness = fitness.rse(p);
  ind.exons = count_exons(p.instructions(), fitness.config());
  ind.program = std::move(p);
  return ind;
}

GenerationRecord record(std::size_t gen, const std::vector<Individual>& pop) {
  GenerationRecord r;
  r.generation = gen;
  r.best_fitness = pop.front().fitness;
  double f = 0, s = 0, e = 0;
  for (const auto& ind : pop) {
    r.best_fitness = std::min(r.best_fitness, ind.fitness);
    f += ind.fitness;
    s += static_cast<double>(ind.program.size());
    e += static_cast<double>(ind.exons);
  }
  const auto n = static_cast<double>(pop.size());
  r.mean_fitness = f / n;
  r.mean_size = s / n;
  r.mean_exons = e / n;
  return r;
}

} // namespace

EvolutionResult evolve(const EvolutionConfig& cfg, const InstructionSet& iset,
                       const Fitness& fitness) {
  cfg.validate();
  std::mt19937_64 rng(cfg.rng_seed);
  std::vector<Individual> pop;
  pop.reserve(cfg.pop_size);
  for (auto& p : init_population(cfg, iset, rng)) pop.push_back(evaluate(std::move(p), fitness));

  auto by_fitness = [](const Individual& a, const Individual& b) {
    return a.fitness < b.fitness;
  };

  EvolutionResult result;
  result.trace.push_back(record(0, pop));
  {
    const auto it = std::min_element(pop.begin(), pop.end(), by_fitness);
    result.best = it->program;
    result.best_fitness = it->fitness;
  }

  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (std::size_t gen = 1; gen <= cfg.generations; ++gen) {
    std::vector<std::size_t> order(pop.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return pop[a].fitness < pop[b].fitness;
    });

    std::vector<Individual> next;
    next.reserve(cfg.pop_size);
    for (std::size_t e = 0; e < cfg.elitism; ++e) next.push_back(pop[order[e]]);

    while (next.size() < cfg.pop_size) {
      const Individual& parent = pop[tournament(pop, cfg.tournament_size, rng)];
      const double r = coin(rng);
      if (r < cfg.add_rate) {
        next.push_back(evaluate(freemut_add(parent.program, cfg.step_size, iset, rng), fitness));
      } else if (r < cfg.add_rate + cfg.remove_rate) {
        next.push_back(evaluate(freemut_remove(parent.program, cfg.step_size, rng), fitness));
      } else {
        next.push_back(parent);
      }
    }
    pop = std::move(next);
    result.trace.push_back(record(gen, pop));

    const auto it = std::min_element(pop.begin(), pop.end(), by_fitness);
    if (it->fitness < result.best_fitness) {
      result.best = it->program;
      result.best_fitness = it->fitness;
    }
  }
  return result;
}

std::string trace_to_csv(const RunTrace& trace) {
  std::string out = "generation,best_fitness,mean_fitness,mean_size,mean_exons\n";
  for (const auto& r : trace) {
    out += std::to_string(r.generation) + "," + detail::format_double(r.best_fitness) + "," +
           detail::format_double(r.mean_fitness) + "," + detail::format_double(r.mean_size) +
           "," + detail::format_double(r.mean_exons) + "\n";
  }
  return out;
}

} // namespace lgpkit
