#include "lgpkit/introns.hpp"

#include "lgpkit/errors.hpp"

namespace lgpkit {

std::vector<bool> detect_introns(std::span<const Instruction> instructions,
                                 const RegisterConfig& config) {
  std::vector<bool> effective(config.gamma, false);
  for (auto r : config.output_registers) effective[r] = true;

  std::vector<bool> intron(instructions.size(), true);
  for (std::size_t k = instructions.size(); k-- > 0;) {
    const auto& ins = instructions[k];
    if (!effective[ins.dest]) continue;
    intron[k] = false;
    effective[ins.dest] = false;
    if (ins.src1.is_register()) effective[ins.src1.index] = true;
    if (ins.reads_src2() && ins.src2.is_register()) effective[ins.src2.index] = true;
  }
  return intron;
}

std::vector<bool> detect_introns(const Program& program, const RegisterConfig& config) {
  return detect_introns(program.instructions(), config);
}

std::vector<Instruction> effective_instructions(std::span<const Instruction> instructions,
                                                const RegisterConfig& config) {
  const auto mask = detect_introns(instructions, config);
  std::vector<Instruction> out;
  out.reserve(instructions.size());
  for (std::size_t k = 0; k < instructions.size(); ++k) {
    if (!mask[k]) out.push_back(instructions[k]);
  }
  return out;
}

std::size_t count_exons(std::span<const Instruction> instructions, const RegisterConfig& config) {
  std::size_t n = 0;
  for (bool intron : detect_introns(instructions, config)) n += intron ? 0 : 1;
  return n;
}

std::uint64_t count_possible_introns(std::size_t effective_dest_count,
                                     const RegisterConfig& config, std::uint64_t n) {
  if (effective_dest_count > config.gamma) {
    throw InputError("effective register count exceeds gamma");
  }
  return (config.gamma - effective_dest_count) * n / config.gamma;
}

} // namespace lgpkit
