#include "lgpkit/program.hpp"

#include <string>

#include "lgpkit/errors.hpp"
#include "lgpkit/text.hpp"

namespace lgpkit {

Program::Program(std::vector<Instruction> instructions, std::size_t max_length)
    : instructions_(std::move(instructions)), max_length_(max_length) {
  if (instructions_.size() > max_length_) {
    throw InputError("program length " + std::to_string(instructions_.size()) +
                     " exceeds maximum " + std::to_string(max_length_));
  }
}

void Program::insert(std::size_t pos, const Instruction& ins) {
  if (instructions_.size() >= max_length_) throw InputError("program is at maximum length");
  if (pos > instructions_.size()) throw InputError("insert position out of range");
  instructions_.insert(instructions_.begin() + static_cast<std::ptrdiff_t>(pos), ins);
}

void Program::erase(std::size_t pos) {
  if (pos >= instructions_.size()) throw InputError("erase position out of range");
  instructions_.erase(instructions_.begin() + static_cast<std::ptrdiff_t>(pos));
}

std::string to_text(const Program& program) {
  std::string out;
  for (const auto& ins : program.instructions()) {
    out += to_string(ins);
    out += '\n';
  }
  return out;
}

Program parse_program(std::string_view text, std::size_t max_length) {
  std::vector<Instruction> list;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const auto line = detail::trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (line.empty() || line.front() == '#') continue;
    list.push_back(parse_instruction(line));
  }
  return Program(std::move(list), max_length);
}

} // namespace lgpkit
