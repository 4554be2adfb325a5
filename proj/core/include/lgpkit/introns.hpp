#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lgpkit/instruction.hpp"
#include "lgpkit/program.hpp"

namespace lgpkit {

/// Structural intron mask (true = intron) from a backward pass over the
/// effective register set, seeded with the output registers.
std::vector<bool> detect_introns(std::span<const Instruction> instructions,
                                 const RegisterConfig& config);
std::vector<bool> detect_introns(const Program& program, const RegisterConfig& config);

/// Exon subsequence, in program order.
std::vector<Instruction> effective_instructions(std::span<const Instruction> instructions,
                                                const RegisterConfig& config);

std::size_t count_exons(std::span<const Instruction> instructions, const RegisterConfig& config);

/// Number of members of a full combinatorial instruction set of size n whose
/// destination lies outside `effective_dest_count` effective registers:
/// (gamma - k) * n / gamma.
std::uint64_t count_possible_introns(std::size_t effective_dest_count,
                                     const RegisterConfig& config, std::uint64_t n);

} // namespace lgpkit
