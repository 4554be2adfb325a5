#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "lgpkit/instruction.hpp"

namespace lgpkit {

inline constexpr std::size_t kTinyMaxInstructions = 12;
inline constexpr std::size_t kTinyMaxSize = 5;
/// Cap on sum_{m <= m_max} n^m.
inline constexpr double kLayerGuard = 1e7;
/// Cap on the number of programs in the search universe (all sizes up to
/// 2 m_max + m*).
inline constexpr double kUniverseGuard = 3e7;

/// A small instruction set whose every program up to m_max instructions is
/// enumerated. Optimal programs are those whose output registers match the
/// reference program on every probe case.
struct TinySpace {
  std::string name;
  RegisterConfig config;
  std::vector<Instruction> instructions;
  std::size_t m_max = 3;
  std::vector<std::vector<double>> probes;
  std::vector<Instruction> reference;

  std::size_t n() const noexcept { return instructions.size(); }
  /// Throws InputError on malformed fields and GuardViolation when the
  /// layers up to m_max exceed kLayerGuard.
  void validate() const;
};

/// The spaces exercised by the oracle command and the acceptance suite.
std::vector<TinySpace> bundled_tiny_spaces();
TinySpace bundled_tiny_space(std::string_view name);

/// An instruction set and size pair used to compare exact bloating factors
/// against their closed-form bounds.
struct BloatCase {
  std::string name;
  RegisterConfig config;
  std::vector<Instruction> instructions;
  std::size_t m1 = 0;
  std::size_t m2 = 0;
};

/// Register-sourced "add" sets for gamma in {2, 3, 4}, crossed with
/// gamma_out in {1, 2} and m2 - m1 in {1, 2}, all from m1 = 2.
std::vector<BloatCase> bloat_cases();

} // namespace lgpkit
