#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lgpkit/instruction.hpp"

namespace lgpkit {

inline constexpr std::size_t kDefaultMaxLength = 100;

/// Ordered instruction sequence with a length cap L. Instructions execute
/// first to last.
class Program {
public:
  Program() = default;
  explicit Program(std::vector<Instruction> instructions,
                   std::size_t max_length = kDefaultMaxLength);

  std::span<const Instruction> instructions() const noexcept { return instructions_; }
  const Instruction& operator[](std::size_t i) const { return instructions_[i]; }
  std::size_t size() const noexcept { return instructions_.size(); }
  bool empty() const noexcept { return instructions_.empty(); }
  std::size_t max_length() const noexcept { return max_length_; }

  /// Insert before position `pos` (pos == size() appends). Throws when the
  /// program is already at max_length().
  void insert(std::size_t pos, const Instruction& ins);
  void erase(std::size_t pos);

  friend bool operator==(const Program& a, const Program& b) {
    return a.instructions_ == b.instructions_;
  }

private:
  std::vector<Instruction> instructions_;
  std::size_t max_length_ = kDefaultMaxLength;
};

/// One instruction per line; blank lines and lines starting with '#' are
/// skipped when parsing.
std::string to_text(const Program& program);
Program parse_program(std::string_view text, std::size_t max_length = kDefaultMaxLength);

} // namespace lgpkit
