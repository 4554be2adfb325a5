#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "lgpkit/bounds.hpp"
#include "lgpkit/instruction.hpp"
#include "lgpkit/semantics.hpp"

namespace lgpkit {

/// Fitness of a semantics (the fitness of the program that produced it).
using SemanticFitness = std::function<double(const Semantics&)>;

/// Finite sets over which the distance constants are taken.
struct DeltaInputs {
  std::vector<Semantics> psi;            // semantic space
  std::vector<Semantics> psi_star;       // semantics along optimal programs (subset of psi)
  std::vector<Semantics> targets;        // final semantics of optimal programs
  std::vector<Instruction> instructions; // I
  std::vector<Instruction> optimal_instructions; // I*
};

/// Suprema of the defining expressions over exactly the given sets. Pairs
/// with zero semantic distance are skipped in the fitness ratio.
DeltaConstants compute_delta_constants(const DeltaInputs& in, const SemanticFitness& fitness);

/// Removes exact duplicates (bitwise-equal value vectors), keeping first occurrences.
std::vector<Semantics> unique_semantics(std::vector<Semantics> sems);

struct DeltaEstimate {
  DeltaConstants constants;
  /// Always true: a finite sample can only under-estimate a supremum.
  bool lower_estimate = true;
};

/// Sampled estimate. `sample_budget` random programs of length up to
/// `max_len` over `iset_members` supply the semantic sample, and
/// `sample_budget` random (s1, s2, sigma1, sigma2) draws supply the
/// instruction terms. The optimal programs supply the optimal semantics and I*.
DeltaEstimate estimate_delta_constants(std::span<const Instruction> iset_members,
                                       const std::vector<std::vector<Instruction>>& optimal,
                                       const Semantics& input, const RegisterConfig& config,
                                       const SemanticFitness& fitness, std::size_t max_len,
                                       std::size_t sample_budget, std::mt19937_64& rng);

} // namespace lgpkit
