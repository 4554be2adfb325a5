#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "lgpkit/instruction_set.hpp"
#include "lgpkit/problems.hpp"
#include "lgpkit/program.hpp"

namespace lgpkit {

struct EvolutionConfig {
  std::size_t pop_size = 256;
  std::size_t generations = 200;
  double add_rate = 0.45;
  double remove_rate = 0.45;
  double reproduction_rate = 0.10;
  std::size_t tournament_size = 7;
  std::size_t elitism = 3;
  std::size_t init_len_min = 5;
  std::size_t init_len_max = 20;
  std::size_t max_len = 100;
  std::size_t step_size = 1; // u
  std::uint64_t rng_seed = 1;

  /// Throws InputError when the rates do not sum to one or a size is out of range.
  void validate() const;
};

struct Individual {
  Program program;
  double fitness = 0.0;
  std::size_t exons = 0;
};

struct GenerationRecord {
  std::size_t generation = 0;
  double best_fitness = 0.0;
  double mean_fitness = 0.0;
  double mean_size = 0.0;
  double mean_exons = 0.0;
};

using RunTrace = std::vector<GenerationRecord>;

struct EvolutionResult {
  Program best;
  double best_fitness = 0.0;
  RunTrace trace;
};

std::vector<Program> init_population(const EvolutionConfig& cfg, const InstructionSet& iset,
                                     std::mt19937_64& rng);

Program random_program(std::size_t length, const InstructionSet& iset, std::mt19937_64& rng,
                       std::size_t max_len = kDefaultMaxLength);

/// Inserts min(u, L - |parent|) instructions, each uniform over `iset`, at
/// independently uniform positions.
Program freemut_add(const Program& parent, std::size_t u, const InstructionSet& iset,
                    std::mt19937_64& rng);

/// Removes u distinct uniformly chosen instructions. When |parent| <= u a
/// single uniformly chosen instruction is kept.
Program freemut_remove(const Program& parent, std::size_t u, std::mt19937_64& rng);

/// Index of the tournament winner (lowest fitness, earliest on ties), with
/// contestants drawn with replacement.
std::size_t tournament(const std::vector<Individual>& pop, std::size_t size,
                       std::mt19937_64& rng);

/// Generational loop minimising fitness.rse on its dataset. The generator is
/// seeded from cfg.rng_seed.
EvolutionResult evolve(const EvolutionConfig& cfg, const InstructionSet& iset,
                       const Fitness& fitness);

std::string trace_to_csv(const RunTrace& trace);

} // namespace lgpkit
