#pragma once

#include <random>
#include <vector>

#include "lgpkit/instruction_set.hpp"
#include "lgpkit/semantics.hpp"

namespace lgpkit::testing {

inline std::vector<Instruction> random_instructions(const InstructionSet& iset, std::size_t len,
                                                    std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, iset.size() - 1);
  std::vector<Instruction> out(len);
  for (auto& ins : out) ins = iset[pick(rng)];
  return out;
}

inline Semantics random_input(const RegisterConfig& cfg, std::size_t cases, std::mt19937_64& rng,
                              double lo = -3.0, double hi = 3.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> flat(cases * cfg.num_features);
  for (auto& v : flat) v = u(rng);
  return init_registers(cfg, flat, cases);
}

inline std::vector<double> outputs(const Semantics& s, const RegisterConfig& cfg) {
  std::vector<double> out;
  for (std::size_t c = 0; c < s.num_cases(); ++c) {
    for (auto r : cfg.output_registers) out.push_back(s.reg(c, r));
  }
  return out;
}

} // namespace lgpkit::testing
