#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lgpkit/instruction.hpp"

namespace lgpkit {

/// The enumerable instruction set I. Members are distinct and kept in a
/// deterministic order.
class InstructionSet {
public:
  InstructionSet() = default;
  /// Throws InputError on duplicates or members invalid under `config`.
  InstructionSet(std::vector<Instruction> members, const RegisterConfig& config);

  std::size_t size() const noexcept { return members_.size(); }
  std::span<const Instruction> members() const noexcept { return members_; }
  const Instruction& operator[](std::size_t i) const { return members_[i]; }
  const RegisterConfig& config() const noexcept { return config_; }

private:
  std::vector<Instruction> members_;
  RegisterConfig config_;
};

/// Every (dest, func, src1, src2) combination; n = gamma * |funcs| * (gamma + B)^2.
InstructionSet build_default(const RegisterConfig& config, std::span<const Func> funcs);
InstructionSet build_default(const RegisterConfig& config);

/// Recognised names: default, fx1.1, fx2, fx4, exp, add+100, add+1000.
const std::vector<std::string>& variant_names();

/// Extends `base` with the members of the named manipulated set. The base
/// members come first, in their original order.
InstructionSet build_variant(std::string_view name, const InstructionSet& base);

} // namespace lgpkit
